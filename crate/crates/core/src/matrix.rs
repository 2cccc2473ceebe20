//! Run matrices: materialization through the grouping scheme, the
//! regularity check, and recovery of a column-set design from a matrix.

use crate::design::{Column, Design};
use crate::error::{Error, Result};
use crate::gf2::WideEchelon;

/// Levels of a four-level factor from its pseudo pair `(a, b)`:
/// `(+,+) → 0`, `(+,−) → 1`, `(−,+) → 2`, `(−,−) → 3`.
#[inline]
pub fn group_levels(a: i8, b: i8) -> u8 {
    (u8::from(a < 0) << 1) | u8::from(b < 0)
}

/// Inverse of [`group_levels`].
#[inline]
pub fn ungroup_level(level: u8) -> (i8, i8) {
    let sign = |bit: u8| if bit == 0 { 1 } else { -1 };
    (sign(level >> 1 & 1), sign(level & 1))
}

/// An `N`-run design matrix stored by column: four-level factors with
/// levels `0..=3`, two-level factors with levels `±1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunMatrix {
    runs: usize,
    four_level: Vec<Vec<u8>>,
    two_level: Vec<Vec<i8>>,
}

impl RunMatrix {
    pub fn new(four_level: Vec<Vec<u8>>, two_level: Vec<Vec<i8>>) -> Result<Self> {
        let runs = four_level
            .first()
            .map(|c| c.len())
            .or_else(|| two_level.first().map(|c| c.len()))
            .unwrap_or(0);
        if four_level.iter().any(|c| c.len() != runs) || two_level.iter().any(|c| c.len() != runs) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        if four_level.iter().flatten().any(|&l| l > 3) {
            return Err(Error::Validation("four-level entries must lie in 0..=3".into()));
        }
        if two_level.iter().flatten().any(|&l| l != 1 && l != -1) {
            return Err(Error::Validation("two-level entries must be ±1".into()));
        }
        Ok(RunMatrix { runs, four_level, two_level })
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn m(&self) -> usize {
        self.four_level.len()
    }

    pub fn n(&self) -> usize {
        self.two_level.len()
    }

    pub fn four_level(&self) -> &[Vec<u8>] {
        &self.four_level
    }

    pub fn two_level(&self) -> &[Vec<i8>] {
        &self.two_level
    }

    pub fn four_level_mut(&mut self) -> &mut [Vec<u8>] {
        &mut self.four_level
    }

    pub fn two_level_mut(&mut self) -> &mut [Vec<i8>] {
        &mut self.two_level
    }

    /// Row `r` as integers: four-level levels first, then two-level signs.
    pub fn row(&self, r: usize) -> Vec<i32> {
        self.four_level
            .iter()
            .map(|c| c[r] as i32)
            .chain(self.two_level.iter().map(|c| c[r] as i32))
            .collect()
    }

    /// The `±1` contrasts of every factor: `a1, a2, a3` per four-level
    /// factor, then the two-level columns.
    pub fn contrasts(&self) -> Vec<Vec<i8>> {
        let mut out = Vec::with_capacity(3 * self.m() + self.n());
        for col in &self.four_level {
            let (a2, a1): (Vec<i8>, Vec<i8>) = col.iter().map(|&l| ungroup_level(l)).unzip();
            let a3 = a1.iter().zip(&a2).map(|(x, y)| x * y).collect();
            out.push(a1);
            out.push(a2);
            out.push(a3);
        }
        out.extend(self.two_level.iter().cloned());
        out
    }
}

/// Materializes the design in natural run order.
pub fn design_matrix(d: &Design) -> RunMatrix {
    let runs = d.runs() as u32;
    let four_level = (0..d.m())
        .map(|j| {
            // Table-2 pair (a, b) is (a2, a1), so levels follow natural run order
            let [a1, a2, _] = d.pseudo_columns(j);
            (0..runs).map(|r| group_levels(a2.value_at(r), a1.value_at(r))).collect()
        })
        .collect();
    let two_level = d
        .two_level_columns()
        .iter()
        .map(|c| (0..runs).map(|r| c.value_at(r)).collect())
        .collect();
    RunMatrix { runs: runs as usize, four_level, two_level }
}

/// In-place fast Walsh–Hadamard transform: `out[c] = Σ_r (−1)^{|c∧r|} x[r]`.
fn walsh_hadamard(x: &mut [i64]) {
    let mut h = 1;
    while h < x.len() {
        for block in x.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, t) = (*a + *b, *a - *b);
                *a = s;
                *b = t;
            }
        }
        h *= 2;
    }
}

/// True iff every entry of `N⁻¹ X′D` has absolute value 0 or 1, where `X`
/// holds all `2^k − 1` basic-factor interaction contrasts and `D` the `±1`
/// contrasts of the matrix (three per four-level factor).
pub fn regularity_check(matrix: &RunMatrix, k: u32) -> Result<bool> {
    let n = matrix.runs();
    if !n.is_power_of_two() {
        return Err(Error::Dimension(format!("run count {n} is not a power of two")));
    }
    if n != 1usize << k {
        return Err(Error::Dimension(format!("run count {n} differs from 2^{k}")));
    }
    for contrast in matrix.contrasts() {
        let mut w: Vec<i64> = contrast.iter().map(|&x| x as i64).collect();
        walsh_hadamard(&mut w);
        if w[1..].iter().any(|&v| v != 0 && v.abs() != n as i64) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reconstructs a column-set design isomorphic to a regular run matrix
/// (possibly row-permuted, with permuted levels).
///
/// Contrasts are shifted so the first run is the origin, which absorbs sign
/// switches and affine level permutations; the pseudo pairs of the
/// four-level factors then become the leading basic factors.
pub fn recover_design(matrix: &RunMatrix) -> Result<Design> {
    let n = matrix.runs();
    if !n.is_power_of_two() || n < 2 {
        return Err(Error::Dimension(format!("run count {n} is not a power of two")));
    }
    let k = n.trailing_zeros();
    let words = n.div_ceil(64);
    let to_bits = |col: &[i8]| -> Vec<u64> {
        let mut v = vec![0u64; words];
        let origin = col[0];
        for (r, &x) in col.iter().enumerate() {
            if x != origin {
                v[r / 64] |= 1 << (r % 64);
            }
        }
        v
    };
    let contrasts = matrix.contrasts();
    let m = matrix.m();
    let mut basis = WideEchelon::new();
    for j in 0..m {
        for c in &contrasts[3 * j..3 * j + 2] {
            let bits = to_bits(c);
            if !basis.try_insert(&bits) {
                return Err(Error::Validation(
                    "four-level factors do not form a full factorial".into(),
                ));
            }
        }
    }
    let two: Vec<Vec<u64>> = contrasts[3 * m..].iter().map(|c| to_bits(c)).collect();
    for bits in &two {
        basis.try_insert(bits);
    }
    if basis.len() != k {
        return Err(Error::Validation(format!(
            "factor columns span dimension {} instead of {k}",
            basis.len()
        )));
    }
    // Basis members were inserted pseudo pairs first, so the pair of factor
    // j sits at bits (2j, 2j+1); two-level columns used as basis members
    // occupy the following bits in order of insertion.
    let mut cols = Vec::with_capacity(two.len());
    for bits in &two {
        let combo = basis
            .express(bits)
            .ok_or_else(|| Error::Validation("two-level column outside the run space".into()))?;
        cols.push(Column::new(combo).map_err(|_| {
            Error::Validation("two-level column is constant".into())
        })?);
    }
    Design::from_columns(k, m as u32, cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouping_scheme_table() {
        assert_eq!(group_levels(1, 1), 0);
        assert_eq!(group_levels(1, -1), 1);
        assert_eq!(group_levels(-1, 1), 2);
        assert_eq!(group_levels(-1, -1), 3);
        for l in 0..4 {
            let (a, b) = ungroup_level(l);
            assert_eq!(group_levels(a, b), l);
        }
    }

    #[test]
    fn full_factorial_four_level_column() {
        let d = Design::new(2, 1, &[]).unwrap();
        let x = design_matrix(&d);
        assert_eq!(x.four_level()[0], vec![0, 1, 2, 3]);
        assert_eq!(x.runs(), 4);
    }

    #[test]
    fn matrix_columns_are_balanced_and_orthogonal() {
        let d = Design::new(4, 1, &[4, 8, 7, 13]).unwrap();
        let x = design_matrix(&d);
        let factors: Vec<Vec<i32>> = x
            .four_level()
            .iter()
            .map(|c| c.iter().map(|&l| l as i32).collect())
            .chain(x.two_level().iter().map(|c| c.iter().map(|&l| l as i32).collect()))
            .collect();
        for (i, a) in factors.iter().enumerate() {
            for b in &factors[i + 1..] {
                let mut counts = std::collections::HashMap::new();
                for r in 0..x.runs() {
                    *counts.entry((a[r], b[r])).or_insert(0) += 1;
                }
                let first = *counts.values().next().unwrap();
                assert!(counts.values().all(|&c| c == first));
            }
        }
    }

    #[test]
    fn regularity_examples() {
        let d = Design::new(4, 1, &[4, 8, 7]).unwrap();
        let mut x = design_matrix(&d);
        assert!(regularity_check(&x, 4).unwrap());
        x.two_level_mut()[0][0] *= -1;
        assert!(!regularity_check(&x, 4).unwrap());
        let pb = RunMatrix::new(vec![], vec![vec![1; 12]]).unwrap();
        assert!(matches!(regularity_check(&pb, 4), Err(Error::Dimension(_))));
    }

    #[test]
    fn recover_from_natural_matrix() {
        let d = Design::new(5, 2, &[16, 7, 29]).unwrap();
        let back = recover_design(&design_matrix(&d)).unwrap();
        assert_eq!(back, d);
    }
}
