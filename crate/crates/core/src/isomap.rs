//! Isomorphic maps: row permutations, same-cardinality factor permutations,
//! four-level level permutations and two-level sign switches.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::matrix::RunMatrix;

/// `π = (κ, ρ, σ)` acting on a run matrix.
///
/// Applying the map sends run `r` to row `row_perm[r]`, four-level factor
/// `j` to position `four_level_perm[j]` with its levels relabeled by
/// `level_perms[j]`, and two-level factor `j` to position
/// `two_level_perm[j]`, negated when `sign_switches[j]` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsoMap {
    pub row_perm: Vec<usize>,
    pub four_level_perm: Vec<usize>,
    pub two_level_perm: Vec<usize>,
    pub level_perms: Vec<[u8; 4]>,
    pub sign_switches: Vec<bool>,
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

impl IsoMap {
    pub fn identity(runs: usize, m: usize, n: usize) -> Self {
        IsoMap {
            row_perm: (0..runs).collect(),
            four_level_perm: (0..m).collect(),
            two_level_perm: (0..n).collect(),
            level_perms: vec![[0, 1, 2, 3]; m],
            sign_switches: vec![false; n],
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.row_perm.len(), self.four_level_perm.len(), self.two_level_perm.len())
    }

    pub fn validate(&self) -> Result<()> {
        let ok = is_permutation(&self.row_perm)
            && is_permutation(&self.four_level_perm)
            && is_permutation(&self.two_level_perm)
            && self.level_perms.len() == self.four_level_perm.len()
            && self.sign_switches.len() == self.two_level_perm.len()
            && self.level_perms.iter().all(|p| {
                let v: Vec<usize> = p.iter().map(|&x| x as usize).collect();
                v.len() == 4 && is_permutation(&v)
            });
        if ok {
            Ok(())
        } else {
            Err(Error::Validation("malformed isomorphic map".into()))
        }
    }

    /// The map applying `self` first and then `then`.
    pub fn then(&self, then: &IsoMap) -> Result<IsoMap> {
        if self.dims() != then.dims() {
            return Err(Error::Dimension("composing maps of different shapes".into()));
        }
        Ok(IsoMap {
            row_perm: self.row_perm.iter().map(|&r| then.row_perm[r]).collect(),
            four_level_perm: self.four_level_perm.iter().map(|&j| then.four_level_perm[j]).collect(),
            two_level_perm: self.two_level_perm.iter().map(|&j| then.two_level_perm[j]).collect(),
            level_perms: self
                .level_perms
                .iter()
                .zip(&self.four_level_perm)
                .map(|(p, &j)| p.map(|l| then.level_perms[j][l as usize]))
                .collect(),
            sign_switches: self
                .sign_switches
                .iter()
                .zip(&self.two_level_perm)
                .map(|(&s, &j)| s ^ then.sign_switches[j])
                .collect(),
        })
    }

    pub fn inverse(&self) -> IsoMap {
        let four_inv = invert(&self.four_level_perm);
        let two_inv = invert(&self.two_level_perm);
        IsoMap {
            row_perm: invert(&self.row_perm),
            level_perms: four_inv
                .iter()
                .map(|&j| {
                    let p = self.level_perms[j];
                    let mut q = [0u8; 4];
                    for (l, &x) in p.iter().enumerate() {
                        q[x as usize] = l as u8;
                    }
                    q
                })
                .collect(),
            sign_switches: two_inv.iter().map(|&j| self.sign_switches[j]).collect(),
            four_level_perm: four_inv,
            two_level_perm: two_inv,
        }
    }
}

/// Applies `map` to `matrix`.
pub fn apply_isomap(matrix: &RunMatrix, map: &IsoMap) -> Result<RunMatrix> {
    if map.dims() != (matrix.runs(), matrix.m(), matrix.n()) {
        return Err(Error::Dimension(format!(
            "map shape {:?} does not match matrix ({}, {}, {})",
            map.dims(),
            matrix.runs(),
            matrix.m(),
            matrix.n()
        )));
    }
    map.validate()?;
    let runs = matrix.runs();
    let mut four = vec![vec![0u8; runs]; matrix.m()];
    for (j, col) in matrix.four_level().iter().enumerate() {
        let target = &mut four[map.four_level_perm[j]];
        let levels = map.level_perms[j];
        for (r, &l) in col.iter().enumerate() {
            target[map.row_perm[r]] = levels[l as usize];
        }
    }
    let mut two = vec![vec![0i8; runs]; matrix.n()];
    for (j, col) in matrix.two_level().iter().enumerate() {
        let target = &mut two[map.two_level_perm[j]];
        let sign = if map.sign_switches[j] { -1 } else { 1 };
        for (r, &x) in col.iter().enumerate() {
            target[map.row_perm[r]] = sign * x;
        }
    }
    RunMatrix::new(four, two)
}

/// A uniformly random map for the shape of `d`, reproducible per seed.
pub fn random_isomap(d: &Design, seed: u64) -> IsoMap {
    random_isomap_for(d.runs(), d.m() as usize, d.n() as usize, seed)
}

pub fn random_isomap_for(runs: usize, m: usize, n: usize, seed: u64) -> IsoMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let perm = |len: usize, rng: &mut ChaCha8Rng| {
        let mut p: Vec<usize> = (0..len).collect();
        p.shuffle(rng);
        p
    };
    let row_perm = perm(runs, &mut rng);
    let four_level_perm = perm(m, &mut rng);
    let two_level_perm = perm(n, &mut rng);
    let level_perms = (0..m)
        .map(|_| {
            let mut p = [0u8, 1, 2, 3];
            p.shuffle(&mut rng);
            p
        })
        .collect();
    let sign_switches = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    IsoMap { row_perm, four_level_perm, two_level_perm, level_perms, sign_switches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::design_matrix;

    fn sample() -> Design {
        Design::new(5, 1, &[4, 8, 16, 7, 29, 14]).unwrap()
    }

    #[test]
    fn identity_and_double_swap() {
        let d = sample();
        let x = design_matrix(&d);
        let id = IsoMap::identity(x.runs(), x.m(), x.n());
        assert_eq!(apply_isomap(&x, &id).unwrap(), x);
        let mut swap = id.clone();
        swap.row_perm.swap(3, 17);
        let twice = apply_isomap(&apply_isomap(&x, &swap).unwrap(), &swap).unwrap();
        assert_eq!(twice, x);
    }

    #[test]
    fn inverse_undoes_map() {
        let d = sample();
        let x = design_matrix(&d);
        for seed in 0..20 {
            let map = random_isomap(&d, seed);
            let y = apply_isomap(&x, &map).unwrap();
            assert_eq!(apply_isomap(&y, &map.inverse()).unwrap(), x);
            let id = map.then(&map.inverse()).unwrap();
            assert_eq!(id, IsoMap::identity(x.runs(), x.m(), x.n()));
        }
    }

    #[test]
    fn composition_matches_sequential_application() {
        let d = sample();
        let x = design_matrix(&d);
        let a = random_isomap(&d, 1);
        let b = random_isomap(&d, 2);
        let seq = apply_isomap(&apply_isomap(&x, &a).unwrap(), &b).unwrap();
        assert_eq!(apply_isomap(&x, &a.then(&b).unwrap()).unwrap(), seq);
    }

    #[test]
    fn random_map_is_reproducible() {
        let d = sample();
        assert_eq!(random_isomap(&d, 42), random_isomap(&d, 42));
        assert_ne!(random_isomap(&d, 42), random_isomap(&d, 43));
        let map = random_isomap(&d, 7);
        assert_eq!(map.level_perms.len(), 1);
        map.validate().unwrap();
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let x = design_matrix(&sample());
        let map = IsoMap::identity(16, 1, 6);
        assert!(matches!(apply_isomap(&x, &map), Err(Error::Dimension(_))));
    }
}
