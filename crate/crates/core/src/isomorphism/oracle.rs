//! Exhaustive isomorphism test used to validate certificates.

use crate::design::Design;
use crate::error::{Error, Result};
use crate::matrix::{design_matrix, RunMatrix};

pub const ORACLE_MAX_RUNS: usize = 32;
pub const ORACLE_MAX_FACTORS: u32 = 8;

const S4: [[u8; 4]; 24] = {
    let mut out = [[0u8; 4]; 24];
    let mut idx = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                let d = 6 - a - b - c;
                if a != b && a != c && b != c {
                    out[idx] = [a as u8, b as u8, c as u8, d as u8];
                    idx += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Factor {
    Four(usize),
    Two(usize),
}

struct Oracle<'a> {
    x: &'a RunMatrix,
    y: &'a RunMatrix,
    order: Vec<Factor>,
    used_four: Vec<bool>,
    used_two: Vec<bool>,
}

fn levels(x: &RunMatrix, f: Factor) -> Vec<u8> {
    match f {
        Factor::Four(j) => x.four_level()[j].clone(),
        Factor::Two(j) => x.two_level()[j].iter().map(|&v| u8::from(v < 0)).collect(),
    }
}

fn same_multiset(a: &[u64], b: &[u64]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

impl Oracle<'_> {
    /// Tries to extend the partial factor/level matching at `depth`;
    /// `kx`/`ky` hold the projected row keys of the matched factors.
    fn search(&mut self, depth: usize, kx: &[u64], ky: &[u64]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let src = self.order[depth];
        let sx = levels(self.x, src);
        let (targets, perms): (Vec<Factor>, &[[u8; 4]]) = match src {
            Factor::Four(_) => (
                (0..self.y.m()).filter(|&t| !self.used_four[t]).map(Factor::Four).collect(),
                &S4[..],
            ),
            Factor::Two(_) => (
                (0..self.y.n()).filter(|&t| !self.used_two[t]).map(Factor::Two).collect(),
                &[[0, 1, 2, 3], [1, 0, 2, 3]][..],
            ),
        };
        for t in targets {
            let ty = levels(self.y, t);
            let ny: Vec<u64> = ky.iter().zip(&ty).map(|(&k, &l)| k * 4 + l as u64).collect();
            self.mark(t, true);
            for perm in perms {
                let nx: Vec<u64> = kx.iter().zip(&sx).map(|(&k, &l)| k * 4 + perm[l as usize] as u64).collect();
                if same_multiset(&nx, &ny) && self.search(depth + 1, &nx, &ny) {
                    self.mark(t, false);
                    return true;
                }
            }
            self.mark(t, false);
        }
        false
    }

    fn mark(&mut self, t: Factor, v: bool) {
        match t {
            Factor::Four(j) => self.used_four[j] = v,
            Factor::Two(j) => self.used_two[j] = v,
        }
    }
}

/// Decides isomorphism of two designs by trying every factor matching with
/// level permutations and sign switches, comparing row multisets.
///
/// Refuses inputs with more than [`ORACLE_MAX_RUNS`] runs or
/// [`ORACLE_MAX_FACTORS`] factors.
pub fn pairwise_oracle(d1: &Design, d2: &Design) -> Result<bool> {
    if (d1.k(), d1.m(), d1.n()) != (d2.k(), d2.m(), d2.n()) {
        return Err(Error::Dimension("designs differ in runs or factor counts".into()));
    }
    if d1.runs() > ORACLE_MAX_RUNS || d1.m() + d1.n() > ORACLE_MAX_FACTORS {
        return Err(Error::SizeGuard(format!(
            "oracle limited to N <= {ORACLE_MAX_RUNS} and m + n <= {ORACLE_MAX_FACTORS}"
        )));
    }
    let (x, y) = (design_matrix(d1), design_matrix(d2));
    let order = (0..x.m()).map(Factor::Four).chain((0..x.n()).map(Factor::Two)).collect();
    let mut oracle = Oracle {
        x: &x,
        y: &y,
        order,
        used_four: vec![false; x.m()],
        used_two: vec![false; x.n()],
    };
    let zeros = vec![0u64; x.runs()];
    Ok(oracle.search(0, &zeros, &zeros))
}
