//! Defining words, relabeled word lengths and types, word length patterns,
//! resolution and aberration orderings.

use std::cmp::Ordering;
use std::fmt;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::gf2;

/// A defining-relation element as a mask over the design's factor letters
/// (`a1, a2` per four-level factor, then the two-level letters).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub letters: u64,
}

/// Letter masks needed to relabel words of a given design shape.
#[derive(Debug, Clone, Copy)]
struct LetterLayout {
    two_level: u64,
    a1: u64,
}

impl LetterLayout {
    fn of(d: &Design) -> Self {
        LetterLayout { two_level: d.two_level_letter_mask(), a1: d.pseudo_a1_mask() }
    }

    #[inline]
    fn length_type(self, letters: u64) -> (u32, u32) {
        let present = (letters | (letters >> 1)) & self.a1;
        let t = present.count_ones();
        ((letters & self.two_level).count_ones() + t, t)
    }
}

/// All `2^p − 1` words of the defining relation (the nonzero elements of the
/// null space of the factor columns), in Gray-code order.
pub fn defining_words(d: &Design) -> Vec<Word> {
    let mut out = Vec::new();
    for_each_word(d, |w| out.push(Word { letters: w }));
    out
}

fn for_each_word(d: &Design, mut f: impl FnMut(u64)) {
    let basis = gf2::kernel_basis(&d.letter_columns());
    let dim = basis.len();
    assert!(dim < 64, "defining relation too large to enumerate");
    let mut w = 0u64;
    for i in 1u64..(1u64 << dim) {
        w ^= basis[i.trailing_zeros() as usize];
        f(w);
    }
}

/// Length and type of a word after pseudo-factor relabeling for a design
/// with `m` four-level factors. Letters are laid out as in [`Word`];
/// `two_level_letters` is the number of two-level letters.
pub fn word_length_type(w: Word, m: u32) -> (u32, u32) {
    let a1 = 0x5555_5555_5555_5555u64 & if 2 * m >= 64 { u64::MAX } else { (1u64 << (2 * m)) - 1 };
    let two_level = !if 2 * m >= 64 { u64::MAX } else { (1u64 << (2 * m)) - 1 };
    LetterLayout { two_level, a1 }.length_type(w.letters)
}

/// Counts `A_{i,t}` of words by relabeled length `i = 1..=m+n` and type
/// `t = 0..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WlpMatrix {
    m: u32,
    n: u32,
    counts: Vec<u64>,
}

impl WlpMatrix {
    pub fn zeros(m: u32, n: u32) -> Self {
        WlpMatrix { m, n, counts: vec![0; ((m + n) * (m + 1)) as usize] }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn max_length(&self) -> u32 {
        self.m + self.n
    }

    /// `A_{length, t}`; zero for lengths outside `1..=m+n`.
    pub fn get(&self, length: u32, t: u32) -> u64 {
        if length == 0 || length > self.max_length() || t > self.m {
            return 0;
        }
        self.counts[((length - 1) * (self.m + 1) + t) as usize]
    }

    /// Sets `A_{length, t}`.
    ///
    /// # Panics
    /// If `length` is outside `1..=m+n` or `t > m`.
    pub fn set(&mut self, length: u32, t: u32, count: u64) {
        assert!((1..=self.max_length()).contains(&length) && t <= self.m, "entry ({length}, {t}) out of range");
        self.counts[((length - 1) * (self.m + 1) + t) as usize] = count;
    }

    fn bump(&mut self, length: u32, t: u32) {
        self.counts[((length - 1) * (self.m + 1) + t) as usize] += 1;
    }

    /// `(A_{i,0}, …, A_{i,m})`.
    pub fn by_type(&self, length: u32) -> Vec<u64> {
        (0..=self.m).map(|t| self.get(length, t)).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// Shortest word length, or `Infinite` when there are no words.
    pub fn resolution(&self) -> Resolution {
        (1..=self.max_length())
            .find(|&i| (0..=self.m).any(|t| self.get(i, t) > 0))
            .map_or(Resolution::Infinite, Resolution::Finite)
    }

    /// Type-ordered word length pattern from length 3 upwards.
    pub fn flatten(&self, ordering: AberrationOrdering) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.max_length().saturating_sub(2) as usize * (self.m + 1) as usize);
        for i in 3..=self.max_length() {
            match ordering {
                AberrationOrdering::Type0 => out.extend((0..=self.m).map(|t| self.get(i, t))),
                AberrationOrdering::TypeM => out.extend((0..=self.m).rev().map(|t| self.get(i, t))),
            }
        }
        out
    }

    /// `(A_{3,m}, …, A_{3,0})`, the key maximized by [`worst_a3`].
    pub fn a3_descending(&self) -> Vec<u64> {
        (0..=self.m).rev().map(|t| self.get(3, t)).collect()
    }
}

/// Computes the WLP matrix of `d` by enumerating its defining relation.
pub fn wlp(d: &Design) -> WlpMatrix {
    let layout = LetterLayout::of(d);
    let mut out = WlpMatrix::zeros(d.m(), d.n());
    for_each_word(d, |w| {
        let (len, t) = layout.length_type(w);
        out.bump(len, t);
    });
    out
}

/// For each factor (four-level first, then two-level), the number of
/// words containing it, by length and type. Isomorphic designs have equal
/// profiles for corresponding factors.
pub(crate) fn factor_word_counts(d: &Design) -> Vec<Vec<u32>> {
    let layout = LetterLayout::of(d);
    let (m, n) = (d.m() as usize, d.n() as usize);
    let width = (d.m() + d.n()) as usize * (m + 1);
    let mut out = vec![vec![0u32; width]; m + n];
    for_each_word(d, |w| {
        let (len, t) = layout.length_type(w);
        let slot = (len as usize - 1) * (m + 1) + t as usize;
        for (j, row) in out.iter_mut().enumerate().take(m) {
            if w >> (2 * j) & 3 != 0 {
                row[slot] += 1;
            }
        }
        let mut rest = w >> (2 * m);
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            out[m + i][slot] += 1;
            rest &= rest - 1;
        }
    });
    out
}

/// Length of the shortest word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resolution {
    Finite(u32),
    Infinite,
}

impl Resolution {
    pub fn at_least(self, r: u32) -> bool {
        match self {
            Resolution::Finite(x) => x >= r,
            Resolution::Infinite => true,
        }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Resolution::Finite(r) => write!(f, "{r}"),
            Resolution::Infinite => write!(f, "inf"),
        }
    }
}

pub fn resolution(d: &Design) -> Resolution {
    wlp(d).resolution()
}

/// Which word length pattern orders designs: type 0 (types ascending within
/// each length) or type `m` (types descending).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AberrationOrdering {
    Type0,
    TypeM,
}

pub fn flatten(w: &WlpMatrix, ordering: AberrationOrdering) -> Vec<u64> {
    w.flatten(ordering)
}

fn check_shape<'a>(designs: impl IntoIterator<Item = &'a Design>) -> Result<(u32, u32)> {
    let mut shape = None;
    for d in designs {
        let s = (d.m(), d.n());
        match shape {
            None => shape = Some(s),
            Some(prev) if prev != s => {
                return Err(Error::Dimension(format!(
                    "designs with (m, n) = {prev:?} and {s:?} are not comparable"
                )))
            }
            _ => {}
        }
    }
    shape.ok_or_else(|| Error::Domain("empty design list".into()))
}

/// Lexicographic comparison of the flattened patterns; `Less` means `d1`
/// has less aberration.
pub fn compare_aberration(d1: &Design, d2: &Design, ordering: AberrationOrdering) -> Result<Ordering> {
    check_shape([d1, d2])?;
    Ok(wlp(d1).flatten(ordering).cmp(&wlp(d2).flatten(ordering)))
}

/// All designs attaining the minimum flattened pattern.
pub fn select_min_aberration(designs: &[Design], ordering: AberrationOrdering) -> Result<Vec<&Design>> {
    check_shape(designs)?;
    let keys: Vec<Vec<u64>> = designs.iter().map(|d| wlp(d).flatten(ordering)).collect();
    let best = keys.iter().min().expect("nonempty").clone();
    Ok(designs.iter().zip(&keys).filter(|(_, k)| **k == best).map(|(d, _)| d).collect())
}

/// All designs attaining the lexicographic maximum of
/// `(A_{3,m}, …, A_{3,0})`.
pub fn worst_a3(designs: &[Design]) -> Result<Vec<&Design>> {
    check_shape(designs)?;
    let keys: Vec<Vec<u64>> = designs.iter().map(|d| wlp(d).a3_descending()).collect();
    let worst = keys.iter().max().expect("nonempty").clone();
    Ok(designs.iter().zip(&keys).filter(|(_, k)| **k == worst).map(|(d, _)| d).collect())
}
