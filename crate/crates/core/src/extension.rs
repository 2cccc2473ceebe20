//! Candidate generation: search-table (ST), delete-one-factor projection
//! (DOP) and naive full extension.

use std::cmp::Ordering;

use crate::design::{Column, Design};
use crate::error::{Error, Result};
use crate::wlp::{wlp, AberrationOrdering, WlpMatrix};

/// One generator of the search table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchRow {
    pub generator: Column,
    /// Order after pseudo-factor relabeling.
    pub order: u32,
    /// Number of four-level factors involved.
    pub type_: u32,
}

/// Ordered table of candidate generators for `(k, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchTable {
    k: u32,
    m: u32,
    rows: Vec<SearchRow>,
    /// Row index by column index; `u32::MAX` for single basic factors.
    row_of: Vec<u32>,
}

impl SearchTable {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn rows(&self) -> &[SearchRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Row holding generator `c`, if any.
    pub fn row_of(&self, c: Column) -> Option<usize> {
        match self.row_of.get(c.index() as usize) {
            Some(&r) if r != u32::MAX => Some(r as usize),
            _ => None,
        }
    }

    /// Indices of rows usable as generators (relabeled order at least 2).
    pub fn generator_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().enumerate().filter(|(_, r)| r.order >= 2).map(|(i, _)| i)
    }
}

/// Sort key within equal (order, type): the two-level letters as a sorted
/// letter list, then the pseudo letters as (factor, a1 = 1 | a2 = 2 | a3 = 3).
type TieKey = (Vec<u32>, Vec<(u32, u32)>);

fn tie_key(c: Column, m: u32) -> TieKey {
    let idx = c.index();
    let two: Vec<u32> = (2 * m..32).filter(|&b| idx >> b & 1 == 1).map(|b| b - 2 * m).collect();
    let pseudo = (0..m)
        .filter_map(|j| {
            let code = idx >> (2 * j) & 3;
            (code != 0).then_some((j, code))
        })
        .collect();
    (two, pseudo)
}

/// Builds the search table: every column except the single basic factors,
/// sorted by relabeled order, type, two-level letters and pseudo letters.
pub fn build_search_table(k: u32, m: u32) -> Result<SearchTable> {
    if k == 0 || k > crate::design::MAX_K {
        return Err(Error::Domain(format!("k = {k} outside 1..={}", crate::design::MAX_K)));
    }
    if 2 * m > k {
        return Err(Error::Domain(format!("2m = {} exceeds k = {k}", 2 * m)));
    }
    let mut rows: Vec<(SearchRow, TieKey)> = (1u32..1 << k)
        .filter(|c| c.count_ones() >= 2)
        .map(|c| {
            let col = Column::new(c).expect("nonzero");
            let (order, type_) = col.relabeled_order_type(m);
            (SearchRow { generator: col, order, type_ }, tie_key(col, m))
        })
        .collect();
    rows.sort_by(|(a, ka), (b, kb)| (a.order, a.type_).cmp(&(b.order, b.type_)).then_with(|| ka.cmp(kb)));
    let rows: Vec<SearchRow> = rows.into_iter().map(|(r, _)| r).collect();
    let mut row_of = vec![u32::MAX; 1 << k];
    for (i, r) in rows.iter().enumerate() {
        row_of[r.generator.index() as usize] = i as u32;
    }
    Ok(SearchTable { k, m, rows, row_of })
}

/// Expresses vectors in a basis of GF(2)^k given as `k` images of the
/// standard basis vectors.
struct BasisChange {
    pivots: [(u32, u32); 32],
}

impl BasisChange {
    fn new(images: &[u32]) -> Option<Self> {
        let mut pivots = [(0u32, 0u32); 32];
        for (i, &v) in images.iter().enumerate() {
            let (mut v, mut combo) = (v, 1u32 << i);
            loop {
                if v == 0 {
                    return None;
                }
                let bit = (31 - v.leading_zeros()) as usize;
                if pivots[bit].0 == 0 {
                    pivots[bit] = (v, combo);
                    break;
                }
                v ^= pivots[bit].0;
                combo ^= pivots[bit].1;
            }
        }
        Some(BasisChange { pivots })
    }

    /// Coordinates of `v` in the basis, as a column index.
    fn coordinates(&self, mut v: u32) -> u32 {
        let mut combo = 0;
        while v != 0 {
            let bit = (31 - v.leading_zeros()) as usize;
            v ^= self.pivots[bit].0;
            combo ^= self.pivots[bit].1;
        }
        combo
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

struct FormSearch<'a> {
    table: &'a SearchTable,
    columns: Vec<u32>,
    images: Vec<u32>,
    used: Vec<bool>,
    best: Option<Vec<usize>>,
}

impl FormSearch<'_> {
    /// `echelon[b]` holds the span vector with leading bit `b`, or 0.
    fn choose_basics(&mut self, echelon: [u32; 32]) {
        if self.images.len() == self.table.k as usize {
            self.evaluate();
            return;
        }
        for i in 0..self.columns.len() {
            if self.used[i] {
                continue;
            }
            let mut v = self.columns[i];
            while v != 0 && echelon[(31 - v.leading_zeros()) as usize] != 0 {
                v ^= echelon[(31 - v.leading_zeros()) as usize];
            }
            if v == 0 {
                continue;
            }
            let mut next = echelon;
            next[(31 - v.leading_zeros()) as usize] = v;
            self.used[i] = true;
            self.images.push(self.columns[i]);
            self.choose_basics(next);
            self.images.pop();
            self.used[i] = false;
        }
    }

    fn evaluate(&mut self) {
        let change = BasisChange::new(&self.images).expect("independent images");
        let mut rows: Vec<usize> = Vec::with_capacity(self.columns.len());
        for (i, &c) in self.columns.iter().enumerate() {
            if !self.used[i] {
                let image = Column::new(change.coordinates(c)).expect("nonzero column");
                rows.push(self.table.row_of(image).expect("added column is a generator"));
            }
        }
        rows.sort_unstable();
        if self.best.as_ref().is_none_or(|b| rows < *b) {
            self.best = Some(rows);
        }
    }
}

/// The member of `d`'s isomorphism class written in search-table form
/// (basic two-level factors first, then added factors by ascending row)
/// whose sorted generator rows are lexicographically smallest, with those
/// rows.
///
/// Dropping the last generator of such a form yields the form of the
/// parent class, so extending these forms by lower rows reaches every
/// class.
pub fn st_canonical_form(d: &Design, table: &SearchTable) -> Result<(Design, Vec<usize>)> {
    if (table.k, table.m) != (d.k(), d.m()) {
        return Err(Error::Dimension("search table does not match the design".into()));
    }
    if !d.spans() {
        return Err(Error::Validation("search-table forms need a spanning design".into()));
    }
    let m = d.m() as usize;
    let pairs: Vec<(usize, usize)> =
        (0..3).flat_map(|a| (0..3).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut search = FormSearch {
        table,
        columns: d.column_indices(),
        images: Vec::new(),
        used: vec![false; d.n() as usize],
        best: None,
    };
    let mut pseudo_span = [0u32; 32];
    for (b, slot) in pseudo_span.iter_mut().enumerate().take(2 * m) {
        *slot = 1 << b;
    }
    for perm in permutations(m) {
        for choice in 0..pairs.len().pow(m as u32) {
            search.images.clear();
            let mut rest = choice;
            for &j in &perm {
                let (a, b) = pairs[rest % pairs.len()];
                rest /= pairs.len();
                let triple = d.pseudo_columns(j as u32);
                search.images.push(triple[a].index());
                search.images.push(triple[b].index());
            }
            search.choose_basics(pseudo_span);
        }
    }
    let rows = search.best.expect("a spanning design has a search-table form");
    let m = d.m();
    let columns: Vec<u32> = (2 * m..d.k())
        .map(|b| 1u32 << b)
        .chain(rows.iter().map(|&r| table.rows[r].generator.index()))
        .collect();
    Ok((Design::new(d.k(), m, &columns)?, rows))
}

/// A design proposed at the next level, with its pattern and provenance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub design: Design,
    pub wlp: WlpMatrix,
    /// Search-table row of the newest generator; `None` for seeds and for
    /// candidates from the other methods.
    pub last_row: Option<usize>,
    /// Position of the parent in its level.
    pub parent: Option<usize>,
}

impl Candidate {
    /// Wraps a design with no provenance (seeds, imported designs).
    pub fn root(design: Design) -> Self {
        let wlp = wlp(&design);
        Candidate { design, wlp, last_row: None, parent: None }
    }
}

fn extend_with(parent: &Design, c: Column, min_resolution: u32) -> Option<(Design, WlpMatrix)> {
    let d = parent.with_column(c).ok()?;
    let w = wlp(&d);
    w.resolution().at_least(min_resolution).then_some((d, w))
}

/// Search-table extension: one candidate per generator row strictly below
/// `parent.last_row` whose column is not already in the parent.
pub fn st_extend(parent: &Candidate, table: &SearchTable, min_resolution: u32) -> Result<Vec<Candidate>> {
    let d = &parent.design;
    if (table.k, table.m) != (d.k(), d.m()) {
        return Err(Error::Dimension(format!(
            "search table for (k, m) = ({}, {}) used with a design in 2^{} runs with m = {}",
            table.k,
            table.m,
            d.k(),
            d.m()
        )));
    }
    let start = parent.last_row.map_or(0, |r| r + 1);
    let mut out = Vec::new();
    for (i, row) in table.rows.iter().enumerate().skip(start) {
        if row.order < 2 || d.contains(row.generator) {
            continue;
        }
        if let Some((design, wlp)) = extend_with(d, row.generator, min_resolution) {
            out.push(Candidate { design, wlp, last_row: Some(i), parent: None });
        }
    }
    Ok(out)
}

/// Columns of relabeled order at least 2 not yet used by `d`, ascending.
fn free_columns(d: &Design) -> impl Iterator<Item = Column> + '_ {
    (1u32..1 << d.k())
        .map(|c| Column::new(c).expect("nonzero"))
        .filter(move |c| c.relabeled_order_type(d.m()).0 >= 2 && !d.contains(*c))
}

/// DOP extension: keeps `parent + c` when its resolution is at least
/// `min_resolution` and the parent's TYPE_M pattern is minimal among all
/// delete-one-factor projections of the candidate.
pub fn dop_extend(parent: &Design, min_resolution: u32) -> Vec<Candidate> {
    let parent_key = wlp(parent).flatten(AberrationOrdering::TypeM);
    let n = parent.n() as usize + 1;
    free_columns(parent)
        .filter_map(|c| extend_with(parent, c, min_resolution))
        .filter(|(d, _)| {
            // the parent is the projection dropping the last column
            (0..n - 1).all(|i| {
                let proj = d.dop(i).expect("index in range");
                wlp(&proj).flatten(AberrationOrdering::TypeM).cmp(&parent_key) != Ordering::Less
            })
        })
        .map(|(design, wlp)| Candidate { design, wlp, last_row: None, parent: None })
        .collect()
}

/// Full extension: every unused admissible column meeting the resolution.
pub fn full_extend(parent: &Design, min_resolution: u32) -> Vec<Candidate> {
    free_columns(parent)
        .filter_map(|c| extend_with(parent, c, min_resolution))
        .map(|(design, wlp)| Candidate { design, wlp, last_row: None, parent: None })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isomorphism::reduce;

    fn labels(table: &SearchTable) -> Vec<String> {
        table
            .rows()
            .iter()
            .map(|r| {
                let idx = r.generator.index();
                let mut s = String::new();
                for j in 0..table.m() {
                    match idx >> (2 * j) & 3 {
                        1 => s.push_str("a1"),
                        2 => s.push_str("a2"),
                        3 => s.push_str("a3"),
                        _ => {}
                    }
                }
                for b in 2 * table.m()..table.k() {
                    if idx >> b & 1 == 1 {
                        s.push((b'a' + b as u8) as char);
                    }
                }
                s
            })
            .collect()
    }

    #[test]
    fn table_layouts() {
        let t = build_search_table(4, 1).unwrap();
        assert_eq!(
            labels(&t),
            ["a3", "cd", "a1c", "a2c", "a3c", "a1d", "a2d", "a3d", "a1cd", "a2cd", "a3cd"]
        );
        assert_eq!((t.rows()[0].order, t.rows()[0].type_), (1, 1));
        let t0 = build_search_table(4, 0).unwrap();
        assert_eq!(
            labels(&t0),
            ["ab", "ac", "ad", "bc", "bd", "cd", "abc", "abd", "acd", "bcd", "abcd"]
        );
        assert_eq!(build_search_table(5, 2).unwrap().len(), 26);
        assert!(build_search_table(3, 2).is_err());
    }

    #[test]
    fn st_examples() {
        let t0 = build_search_table(4, 0).unwrap();
        let abc = t0.rows().iter().position(|r| r.generator.index() == 7).unwrap();
        let parent = Candidate {
            last_row: Some(abc),
            ..Candidate::root(Design::new(4, 0, &[1, 2, 4, 8, 7]).unwrap())
        };
        assert_eq!(st_extend(&parent, &t0, 3).unwrap().len(), 4);

        let t1 = build_search_table(4, 1).unwrap();
        let a1c = t1.rows().iter().position(|r| r.generator.index() == 5).unwrap();
        let parent = Candidate {
            last_row: Some(a1c),
            ..Candidate::root(Design::new(4, 1, &[4, 8, 5]).unwrap())
        };
        assert_eq!(st_extend(&parent, &t1, 3).unwrap().len(), 8);
        assert!(st_extend(&parent, &t0, 3).is_err());
    }

    #[test]
    fn canonical_forms_of_known_classes() {
        let t0 = build_search_table(4, 0).unwrap();
        // abd as generator is the same class as abe (row 0)
        let (form, rows) = st_canonical_form(&Design::new(4, 0, &[1, 2, 4, 8, 11]).unwrap(), &t0).unwrap();
        assert_eq!(rows, [6]);
        assert_eq!(form.column_indices(), [1, 2, 4, 8, 7]);
        let t1 = build_search_table(4, 1).unwrap();
        let first = |cols: &[u32]| st_canonical_form(&Design::new(4, 1, cols).unwrap(), &t1).unwrap().1;
        assert_eq!(first(&[4, 8, 12]), [1]);
        assert_eq!(first(&[4, 8, 7]), [2]);
        assert_eq!(first(&[4, 8, 10]), [2]);
        assert_eq!(first(&[4, 8, 13]), [8]);
        assert_eq!(first(&[4, 8, 15]), [8]);
    }

    #[test]
    fn canonical_form_is_class_invariant() {
        use crate::isomap::{apply_isomap, random_isomap};
        use crate::matrix::{design_matrix, recover_design};
        let d = Design::new(5, 1, &[4, 8, 16, 7, 29, 14]).unwrap();
        let t = build_search_table(5, 1).unwrap();
        let (form, rows) = st_canonical_form(&d, &t).unwrap();
        assert_eq!(crate::isomorphism::certificate_of(&form), crate::isomorphism::certificate_of(&d));
        for seed in 0..10 {
            let y = recover_design(&apply_isomap(&design_matrix(&d), &random_isomap(&d, seed)).unwrap()).unwrap();
            let (f2, r2) = st_canonical_form(&y, &t).unwrap();
            assert_eq!((f2, r2), (form.clone(), rows.clone()));
        }
    }

    #[test]
    fn seed_extensions_agree() {
        let seed = Design::seed(4, 1).unwrap();
        let table = build_search_table(4, 1).unwrap();
        let st = st_extend(&Candidate::root(seed.clone()), &table, 3).unwrap();
        let dop = dop_extend(&seed, 3);
        let full = full_extend(&seed, 3);
        assert_eq!(st.len(), 10);
        assert_eq!(dop.len(), 10);
        assert_eq!(full.len(), 10);
        let designs = |v: &[Candidate]| v.iter().map(|c| c.design.clone()).collect::<Vec<_>>();
        assert_eq!(reduce(&designs(&st)).len(), 3);
        assert_eq!(reduce(&designs(&dop)).len(), 3);
    }

    #[test]
    fn dop_rejects_candidate_with_better_projection() {
        // parent with a length-3 word whose extension has a word-free DOP
        let parent = Design::new(4, 1, &[4, 8, 12]).unwrap();
        let kept = dop_extend(&parent, 3);
        let all = full_extend(&parent, 3);
        assert!(kept.len() < all.len());
        for c in &all {
            let parent_key = wlp(&parent).flatten(AberrationOrdering::TypeM);
            let min = c
                .design
                .dops()
                .iter()
                .map(|d| wlp(d).flatten(AberrationOrdering::TypeM))
                .min()
                .unwrap();
            assert_eq!(kept.iter().any(|k| k.design == c.design), min == parent_key);
        }
    }
}
