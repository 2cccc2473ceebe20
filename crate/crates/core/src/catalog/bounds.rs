//! Caps on the length-3 word counts used by bounded enumeration.

use std::collections::{BTreeMap, HashSet};

use crate::design::Design;
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::isomorphism::certificate_of;
use crate::wlp::{wlp, WlpMatrix};

const DEFAULT_64_RUN: &str = include_str!("../../data/bounds_64_res3.txt");

/// Per-(m, n) caps `δ = (δ_0, …, δ_m)` on `A_{3,t}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BoundSpec {
    rows: BTreeMap<(u32, u32), Vec<u64>>,
}

impl BoundSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// The shipped bounds for 64-run resolution-III designs.
    pub fn default_64_run() -> Self {
        Self::parse(DEFAULT_64_RUN).expect("shipped bounds file is valid")
    }

    pub fn insert(&mut self, m: u32, n: u32, delta: Vec<u64>) -> Result<()> {
        if delta.len() != m as usize + 1 {
            return Err(Error::Config(format!(
                "bound for m = {m} needs {} entries, got {}",
                m + 1,
                delta.len()
            )));
        }
        self.rows.insert((m, n), delta);
        Ok(())
    }

    pub fn get(&self, m: u32, n: u32) -> Option<&[u64]> {
        self.rows.get(&(m, n)).map(Vec::as_slice)
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, u32, &[u64])> {
        self.rows.iter().map(|(&(m, n), d)| (m, n, d.as_slice()))
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Checks that every cap is non-decreasing in `n` where consecutive
    /// rows exist.
    pub fn check_monotone(&self) -> Result<()> {
        for (&(m, n), d) in &self.rows {
            if let Some(next) = self.rows.get(&(m, n + 1)) {
                if d.iter().zip(next).any(|(a, b)| a > b) {
                    return Err(Error::Config(format!("bounds for m = {m} decrease from n = {n} to n = {}", n + 1)));
                }
            }
        }
        Ok(())
    }

    /// Parses `m,n,δ_0,…,δ_m` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = BoundSpec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let values = line
                .split(',')
                .map(|f| f.trim().parse::<u64>().map_err(|_| err(format!("invalid number {f:?}"))))
                .collect::<Result<Vec<_>>>()?;
            if values.len() < 3 {
                return Err(err("expected m,n,delta_0,...,delta_m".into()));
            }
            let (m, n) = (values[0] as u32, values[1] as u32);
            if spec.get(m, n).is_some() {
                return Err(err(format!("duplicate bound for m = {m}, n = {n}")));
            }
            spec.insert(m, n, values[2..].to_vec()).map_err(|e| err(e.to_string()))?;
        }
        spec.check_monotone()?;
        Ok(spec)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (m, n, d) in self.rows() {
            let d: Vec<String> = d.iter().map(u64::to_string).collect();
            out.push_str(&format!("{m},{n},{}\n", d.join(",")));
        }
        out
    }
}

/// True when no `A_{3,t}` of the pattern exceeds its cap.
pub fn within_bound(w: &WlpMatrix, delta: &[u64]) -> bool {
    w.by_type(3).iter().zip(delta).all(|(a, d)| a <= d)
}

/// Keeps `candidate` unless some `A_{3,t}` exceeds `δ_{m,n,t}`. A missing
/// row for the candidate's (m, n) is a configuration error.
pub fn bound_filter(candidate: &Design, bounds: &BoundSpec) -> Result<bool> {
    let delta = bounds.get(candidate.m(), candidate.n()).ok_or_else(|| {
        Error::Config(format!("no bound for m = {}, n = {}", candidate.m(), candidate.n()))
    })?;
    Ok(within_bound(&wlp(candidate), delta))
}

/// Derives bounds for levels `n_low..=n(seed)` by descending from `seed`
/// through the worst `A3` projections.
///
/// The top level's cap is the seed's `A3`. Each lower cap is the worst
/// `A3` (maximizing `A_{3,m}`, then `A_{3,m−1}`, …) over all delete-one
/// projections of the current worst set, which is reduced to
/// non-isomorphic members before descending.
pub fn compute_bounds(seed: &Design, n_low: u32, exec: ExecMode) -> Result<BoundSpec> {
    let n0 = seed.k() - 2 * seed.m();
    if n_low < n0 {
        return Err(Error::Config(format!("n_low = {n_low} is below the seed level n0 = {n0}")));
    }
    if n_low > seed.n() {
        return Err(Error::Config(format!("n_low = {n_low} exceeds the seed's n = {}", seed.n())));
    }
    let mut spec = BoundSpec::new();
    spec.insert(seed.m(), seed.n(), wlp(seed).by_type(3))?;
    let mut worst_set = vec![seed.clone()];
    for n in (n_low..seed.n()).rev() {
        let projections: Vec<Design> = worst_set.iter().flat_map(Design::dops).collect();
        let patterns = exec.map(&projections, wlp);
        let worst = patterns.iter().map(WlpMatrix::a3_descending).max().expect("nonempty");
        let chosen: Vec<&Design> = projections
            .iter()
            .zip(&patterns)
            .filter(|(_, w)| w.a3_descending() == worst)
            .map(|(d, _)| d)
            .collect();
        let certs = exec.map(&chosen, |d| certificate_of(d));
        let mut seen = HashSet::new();
        worst_set = chosen
            .into_iter()
            .zip(certs)
            .filter(|(_, c)| seen.insert(c.clone()))
            .map(|(d, _)| d.clone())
            .collect();
        let mut delta = worst;
        delta.reverse();
        spec.insert(seed.m(), n, delta)?;
    }
    Ok(spec)
}
