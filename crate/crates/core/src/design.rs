//! Regular mixed-level designs over GF(2).
//!
//! A design in `2^k` runs is described by the GF(2) columns of its factors.
//! Four-level factor `j` is always built from the basic-factor pair
//! `(2j, 2j + 1)`, so its three pseudo-factor contrasts are the columns
//! `2^(2j)`, `2^(2j+1)` and their sum. Only the two-level columns vary
//! between designs.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2;

/// Largest supported run-size exponent.
pub const MAX_K: u32 = 16;

/// Letters (pseudo basics plus two-level factors) are packed in a `u64`.
pub const MAX_LETTERS: u32 = 64;

/// A nonzero element of GF(2)^k naming a product of basic factors.
///
/// Bit `i` of the index is set when basic factor `i` participates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Column(u32);

impl Column {
    pub fn new(index: u32) -> Result<Self> {
        if index == 0 {
            return Err(Error::Domain("column index 0 is the identity column".into()));
        }
        Ok(Column(index))
    }

    /// The single-basic-factor column for basic factor `i`.
    pub fn basic(i: u32) -> Self {
        Column(1 << i)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Number of basic factors in the product.
    pub fn order(self) -> u32 {
        self.0.count_ones()
    }

    pub fn fits(self, k: u32) -> bool {
        k >= 32 || self.0 < (1u32 << k)
    }

    /// Value of this column in run `r`: `+1` for even parity of `r & index`.
    #[inline]
    pub fn value_at(self, run: u32) -> i8 {
        if (run & self.0).count_ones().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Order and type after relabeling basics `(2j, 2j+1)` as pseudo-factors
    /// of four-level factor `j`, for `m` four-level factors.
    pub fn relabeled_order_type(self, m: u32) -> (u32, u32) {
        let pseudo_mask = (1u32 << (2 * m)) - 1;
        let pseudo = self.0 & pseudo_mask;
        let factors = ((pseudo | (pseudo >> 1)) & EVEN_BITS & pseudo_mask).count_ones();
        let two = (self.0 >> (2 * m)).count_ones();
        (two + factors, factors)
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const EVEN_BITS: u32 = 0x5555_5555;
const EVEN_BITS_64: u64 = 0x5555_5555_5555_5555;

/// `±1` evaluation of column `c` over the `2^k` runs in natural binary order
/// (digit 0 ↦ +1, digit 1 ↦ −1).
pub fn column_values(c: Column, k: u32) -> Result<Vec<i8>> {
    if k == 0 || k > MAX_K {
        return Err(Error::Domain(format!("run-size exponent {k} outside 1..={MAX_K}")));
    }
    if !c.fits(k) {
        return Err(Error::Domain(format!("column {c} outside 1..{}", 1u32 << k)));
    }
    Ok((0..1u32 << k).map(|r| c.value_at(r)).collect())
}

/// A regular `4^m 2^(n-p)` design in `2^k` runs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Design {
    k: u32,
    m: u32,
    two_level: Vec<Column>,
}

impl Design {
    /// Builds and validates a design. All factor columns together must span
    /// GF(2)^k so that every run is distinct.
    pub fn new(k: u32, m: u32, two_level_columns: &[u32]) -> Result<Self> {
        let columns = two_level_columns
            .iter()
            .map(|&c| Column::new(c))
            .collect::<Result<Vec<_>>>()?;
        Self::from_columns(k, m, columns)
    }

    pub fn from_columns(k: u32, m: u32, two_level: Vec<Column>) -> Result<Self> {
        let d = Self::unchecked_shape(k, m, two_level)?;
        if d.rank() != k {
            return Err(Error::Validation(format!(
                "columns span a space of dimension {} < k = {k}; runs would be replicated",
                d.rank()
            )));
        }
        Ok(d)
    }

    /// Validates everything except the spanning requirement.
    fn unchecked_shape(k: u32, m: u32, two_level: Vec<Column>) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::Validation(format!("k = {k} outside 1..={MAX_K}")));
        }
        if 2 * m > k {
            return Err(Error::Validation(format!("2m = {} exceeds k = {k}", 2 * m)));
        }
        if 2 * m + two_level.len() as u32 > MAX_LETTERS {
            return Err(Error::Validation(format!(
                "at most {MAX_LETTERS} factor letters are supported"
            )));
        }
        for (i, c) in two_level.iter().enumerate() {
            if !c.fits(k) {
                return Err(Error::Validation(format!("column {c} does not fit in k = {k}")));
            }
            if two_level[..i].contains(c) {
                return Err(Error::Validation(format!("duplicate two-level column {c}")));
            }
        }
        Ok(Design { k, m, two_level })
    }

    /// The full factorial seed: `m` four-level factors plus the remaining
    /// `k - 2m` basic factors as two-level columns.
    pub fn seed(k: u32, m: u32) -> Result<Self> {
        Self::from_columns(k, m, (2 * m..k).map(Column::basic).collect())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.two_level.len() as u32
    }

    pub fn runs(&self) -> usize {
        1 << self.k
    }

    /// Number of added factors, `2m + n - k`. Negative only for a
    /// non-spanning projection.
    pub fn p(&self) -> i32 {
        (2 * self.m + self.n()) as i32 - self.k as i32
    }

    pub fn two_level_columns(&self) -> &[Column] {
        &self.two_level
    }

    pub fn column_indices(&self) -> Vec<u32> {
        self.two_level.iter().map(|c| c.index()).collect()
    }

    pub fn contains(&self, c: Column) -> bool {
        self.two_level.contains(&c)
    }

    /// Pseudo-factor columns `(a1, a2, a3)` of four-level factor `j`.
    pub fn pseudo_columns(&self, j: u32) -> [Column; 3] {
        assert!(j < self.m, "four-level factor {j} out of range");
        let a1 = 1u32 << (2 * j);
        let a2 = 1u32 << (2 * j + 1);
        [Column(a1), Column(a2), Column(a1 | a2)]
    }

    /// Factor letters in canonical order: `a1, a2` per four-level factor,
    /// then the two-level columns.
    pub fn letter_columns(&self) -> Vec<u32> {
        (0..2 * self.m)
            .map(|i| 1u32 << i)
            .chain(self.two_level.iter().map(|c| c.index()))
            .collect()
    }

    /// Letter mask selecting the two-level letters.
    pub fn two_level_letter_mask(&self) -> u64 {
        letter_range_mask(2 * self.m, 2 * self.m + self.n())
    }

    /// Letter mask selecting the `a1` letter of every four-level factor.
    pub fn pseudo_a1_mask(&self) -> u64 {
        EVEN_BITS_64 & letter_range_mask(0, 2 * self.m)
    }

    /// Dimension of the space spanned by all factor columns.
    pub fn rank(&self) -> u32 {
        gf2::rank(self.letter_columns())
    }

    pub fn spans(&self) -> bool {
        self.rank() == self.k
    }

    /// Design with one more two-level column, without the spanning check
    /// (adding a column never breaks spanning of a spanning parent).
    pub fn with_column(&self, c: Column) -> Result<Design> {
        let mut cols = self.two_level.clone();
        cols.push(c);
        Self::unchecked_shape(self.k, self.m, cols)
    }

    /// Delete-one-factor projection: drops two-level column `i`. The result
    /// may fail to span GF(2)^k.
    pub fn dop(&self, i: usize) -> Result<Design> {
        if i >= self.two_level.len() {
            return Err(Error::Domain(format!(
                "two-level factor {i} out of range for n = {}",
                self.n()
            )));
        }
        let mut cols = self.two_level.clone();
        cols.remove(i);
        Ok(Design { k: self.k, m: self.m, two_level: cols })
    }

    /// All delete-one-factor projections, in column order.
    pub fn dops(&self) -> Vec<Design> {
        (0..self.two_level.len()).map(|i| self.dop(i).expect("index in range")).collect()
    }
}

/// Free-function form of [`Design::new`].
pub fn make_design(k: u32, m: u32, two_level_columns: &[u32]) -> Result<Design> {
    Design::new(k, m, two_level_columns)
}

/// Free-function form of [`Design::dop`].
pub fn dop(d: &Design, i: usize) -> Result<Design> {
    d.dop(i)
}

fn letter_range_mask(lo: u32, hi: u32) -> u64 {
    let upto = |x: u32| if x >= 64 { u64::MAX } else { (1u64 << x) - 1 };
    upto(hi) & !upto(lo)
}
