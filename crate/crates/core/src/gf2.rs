//! Small GF(2) linear-algebra kernels over bit-packed vectors.

/// Rank of a set of vectors in GF(2)^32.
pub fn rank(vectors: impl IntoIterator<Item = u32>) -> u32 {
    let mut pivots = [0u32; 32];
    let mut rank = 0;
    for v in vectors {
        if reduce_into(&mut pivots, v).is_some() {
            rank += 1;
        }
    }
    rank
}

/// Reduces `v` against the pivot table and inserts it if independent.
/// Returns the pivot bit of the inserted vector.
fn reduce_into(pivots: &mut [u32; 32], mut v: u32) -> Option<u32> {
    while v != 0 {
        let bit = 31 - v.leading_zeros();
        if pivots[bit as usize] == 0 {
            pivots[bit as usize] = v;
            return Some(bit);
        }
        v ^= pivots[bit as usize];
    }
    None
}

/// Basis of the null space of the matrix whose columns are `columns`.
///
/// Each returned mask selects a subset of column indices (bit `i` set means
/// column `i` participates) whose XOR is zero. The basis has
/// `columns.len() - rank` elements. At most 64 columns are supported.
pub fn kernel_basis(columns: &[u32]) -> Vec<u64> {
    assert!(columns.len() <= 64, "kernel_basis supports at most 64 columns");
    // pivot vector plus the combination of input columns that produced it
    let mut pivots: [(u32, u64); 32] = [(0, 0); 32];
    let mut basis = Vec::new();
    for (i, &c) in columns.iter().enumerate() {
        let mut v = c;
        let mut combo = 1u64 << i;
        loop {
            if v == 0 {
                basis.push(combo);
                break;
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
    basis
}

/// Echelon basis for expressing vectors of arbitrary bit length (stored as
/// `u64` words) as combinations of previously inserted vectors.
#[derive(Debug, Clone)]
pub struct WideEchelon {
    rows: Vec<(Vec<u64>, usize, u32)>, // (vector, pivot bit, combination mask over inserted basis)
    inserted: u32,
}

impl WideEchelon {
    pub fn new() -> Self {
        WideEchelon { rows: Vec::new(), inserted: 0 }
    }

    pub fn len(&self) -> u32 {
        self.inserted
    }

    pub fn is_empty(&self) -> bool {
        self.inserted == 0
    }

    /// Reduces `v`; returns the residual and the combination of basis
    /// members consumed.
    fn reduce(&self, v: &[u64]) -> (Vec<u64>, u32) {
        let mut v = v.to_vec();
        let mut combo = 0u32;
        for (row, pivot, c) in &self.rows {
            if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (a, b) in v.iter_mut().zip(row) {
                    *a ^= b;
                }
                combo ^= c;
            }
        }
        (v, combo)
    }

    /// Inserts `v` as basis member number `len()` if it is independent of
    /// the current basis. Returns whether it was inserted.
    pub fn try_insert(&mut self, v: &[u64]) -> bool {
        assert!(self.inserted < 32, "WideEchelon holds at most 32 basis vectors");
        let (res, combo) = self.reduce(v);
        let Some(pivot) = first_set_bit(&res) else {
            return false;
        };
        let own = combo ^ (1 << self.inserted);
        // keep rows fully reduced on the new pivot so reduction stays one pass
        for (row, _, c) in self.rows.iter_mut() {
            if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (a, b) in row.iter_mut().zip(&res) {
                    *a ^= b;
                }
                *c ^= own;
            }
        }
        self.rows.push((res, pivot, own));
        self.inserted += 1;
        true
    }

    /// Expresses `v` in the inserted basis; `None` if `v` is outside the span.
    pub fn express(&self, v: &[u64]) -> Option<u32> {
        let (res, combo) = self.reduce(v);
        if res.iter().all(|&w| w == 0) {
            Some(combo)
        } else {
            None
        }
    }
}

impl Default for WideEchelon {
    fn default() -> Self {
        Self::new()
    }
}

fn first_set_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}
