//! Level-by-level extend/reduce enumeration.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use super::bounds::{within_bound, BoundSpec};
use super::record::{record_id, render_catalog, CatalogRecord, Method};
use crate::design::{Design, MAX_K};
use crate::error::{Error, Result};
use crate::exec::ExecMode;
use crate::extension::{build_search_table, dop_extend, full_extend, st_canonical_form, st_extend, Candidate, SearchTable};
use crate::isomorphism::reduce_keyed;
use crate::wlp::AberrationOrdering;

/// Parameters of an enumeration run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub runs: usize,
    pub m: u32,
    pub min_resolution: u32,
    pub n_max: u32,
    pub method: Method,
    pub bounds: Option<BoundSpec>,
    pub exec: ExecMode,
}

impl EnumerationConfig {
    pub fn new(runs: usize, m: u32, min_resolution: u32, n_max: u32, method: Method) -> Self {
        EnumerationConfig { runs, m, min_resolution, n_max, method, bounds: None, exec: ExecMode::default() }
    }

    pub fn with_bounds(mut self, bounds: BoundSpec) -> Self {
        self.bounds = Some(bounds);
        self
    }

    pub fn with_exec(mut self, exec: ExecMode) -> Self {
        self.exec = exec;
        self
    }

    /// Run-size exponent `k` after validating the configuration.
    pub fn validate(&self) -> Result<u32> {
        if !self.runs.is_power_of_two() || self.runs < 2 {
            return Err(Error::Config(format!("run count {} is not a power of two", self.runs)));
        }
        let k = self.runs.trailing_zeros();
        if k > MAX_K {
            return Err(Error::Config(format!("at most 2^{MAX_K} runs are supported")));
        }
        if 2 * self.m > k {
            return Err(Error::Config(format!(
                "{} four-level factors need {} basic factors but N = {} has {k}",
                self.m,
                2 * self.m,
                self.runs
            )));
        }
        if self.min_resolution < 3 {
            return Err(Error::Config(format!("resolution {} is below III", self.min_resolution)));
        }
        let n0 = k - 2 * self.m;
        let capacity = (1u32 << k) - 1 - 3 * self.m;
        if self.n_max < n0 {
            return Err(Error::Config(format!("n_max = {} is below the seed level {n0}", self.n_max)));
        }
        if self.n_max > capacity {
            return Err(Error::Config(format!(
                "n_max = {} exceeds the {capacity} available two-level columns",
                self.n_max
            )));
        }
        Ok(k)
    }
}

/// The minimal complete set at one number of two-level factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    pub n: u32,
    /// Candidates produced by extension (after the resolution check).
    pub candidates: usize,
    /// Candidates passing the bound filter and submitted to reduction.
    pub submitted: usize,
    pub designs: Vec<Candidate>,
    pub elapsed: Duration,
}

impl Level {
    pub fn len(&self) -> usize {
        self.designs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.designs.is_empty()
    }
}

/// Iterator over the levels `n0..=n_max` of an enumeration.
pub struct Enumeration {
    config: EnumerationConfig,
    table: Option<SearchTable>,
    previous: Option<Level>,
    next_n: u32,
    seed: Design,
}

impl Enumeration {
    pub fn new(config: EnumerationConfig) -> Result<Self> {
        let k = config.validate()?;
        let table = match config.method {
            Method::St => Some(build_search_table(k, config.m)?),
            _ => None,
        };
        let seed = Design::seed(k, config.m)?;
        Ok(Enumeration { next_n: seed.n(), config, table, previous: None, seed })
    }

    pub fn config(&self) -> &EnumerationConfig {
        &self.config
    }

    fn extend(&self, parents: &[Candidate]) -> Vec<Candidate> {
        let r = self.config.min_resolution;
        let indexed: Vec<(usize, &Candidate)> = parents.iter().enumerate().collect();
        self.config.exec.flat_map(&indexed, |&(i, p)| {
            let mut out = match self.config.method {
                Method::St => st_extend(p, self.table.as_ref().expect("table built for st"), r)
                    .expect("table matches design shape"),
                Method::Dop => dop_extend(&p.design, r),
                Method::Full => full_extend(&p.design, r),
            };
            for c in &mut out {
                c.parent = Some(i);
            }
            out
        })
    }

    fn step(&self, prev: &Level) -> Level {
        let start = Instant::now();
        let n = prev.n + 1;
        let mut cands = self.extend(&prev.designs);
        let produced = cands.len();
        if let Some(delta) = self.config.bounds.as_ref().and_then(|b| b.get(self.config.m, n)) {
            cands.retain(|c| within_bound(&c.wlp, delta));
        }
        let keys: Vec<Vec<u64>> =
            self.config.exec.map(&cands, |c| c.wlp.flatten(AberrationOrdering::TypeM));
        let refs: Vec<&Design> = cands.iter().map(|c| &c.design).collect();
        let reps = reduce_keyed(&refs, &keys, self.config.exec);
        let submitted = cands.len();
        let mut slots: Vec<Option<Candidate>> = cands.into_iter().map(Some).collect();
        let mut designs: Vec<Candidate> =
            reps.iter().map(|r| slots[r.index].take().expect("distinct indices")).collect();
        if let Some(table) = &self.table {
            designs = self.config.exec.map(&designs, |c| {
                let (design, rows) = st_canonical_form(&c.design, table).expect("spanning design");
                Candidate { design, wlp: c.wlp.clone(), last_row: rows.last().copied(), parent: c.parent }
            });
        }
        Level { n, candidates: produced, submitted, designs, elapsed: start.elapsed() }
    }
}

impl Iterator for Enumeration {
    type Item = Level;

    fn next(&mut self) -> Option<Level> {
        if self.next_n > self.config.n_max {
            return None;
        }
        let level = match &self.previous {
            None => {
                let seed = Candidate::root(self.seed.clone());
                Level { n: seed.design.n(), candidates: 1, submitted: 1, designs: vec![seed], elapsed: Duration::ZERO }
            }
            Some(prev) => self.step(prev),
        };
        self.next_n += 1;
        self.previous = Some(level.clone());
        Some(level)
    }
}

/// Runs a full enumeration and collects every level.
pub fn enumerate(config: EnumerationConfig) -> Result<Vec<Level>> {
    Ok(Enumeration::new(config)?.collect())
}

/// Catalog records of a level in rank order.
pub fn level_records(config: &EnumerationConfig, level: &Level) -> Vec<CatalogRecord> {
    level
        .designs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let id = record_id(config.runs, config.m, level.n, i + 1);
            let parent = c.parent.map(|p| record_id(config.runs, config.m, level.n - 1, p + 1));
            CatalogRecord::new(id, &c.design, &c.wlp, parent, config.method)
        })
        .collect()
}

/// Catalog file name for one level.
pub fn level_file_name(runs: usize, m: u32, n: u32) -> String {
    format!("{runs}-{m}-{n}.cat")
}

/// Summary of one written level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenLevel {
    pub n: u32,
    pub count: usize,
    pub candidates: usize,
    pub path: PathBuf,
}

/// Enumerates and writes one catalog file per level into `out_dir`,
/// calling `progress` after each level.
pub fn write_catalogs(
    config: EnumerationConfig,
    out_dir: &Path,
    mut progress: impl FnMut(&WrittenLevel),
) -> Result<Vec<WrittenLevel>> {
    let it = Enumeration::new(config.clone())?;
    std::fs::create_dir_all(out_dir)?;
    let mut out = Vec::new();
    for level in it {
        let path = out_dir.join(level_file_name(config.runs, config.m, level.n));
        std::fs::write(&path, render_catalog(&level_records(&config, &level)))?;
        let w = WrittenLevel { n: level.n, count: level.len(), candidates: level.candidates, path };
        progress(&w);
        out.push(w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(runs: usize, m: u32, r: u32, n_max: u32, method: Method) -> Vec<usize> {
        enumerate(EnumerationConfig::new(runs, m, r, n_max, method)).unwrap().iter().map(Level::len).collect()
    }

    #[test]
    fn small_16_run_levels() {
        for method in Method::ALL {
            assert_eq!(counts(16, 1, 3, 6, method), [1, 3, 5, 7, 9], "{method}");
        }
    }

    #[test]
    fn config_errors() {
        let bad = |c: EnumerationConfig| matches!(Enumeration::new(c), Err(Error::Config(_)));
        assert!(bad(EnumerationConfig::new(16, 3, 3, 5, Method::St)));
        assert!(bad(EnumerationConfig::new(12, 1, 3, 5, Method::St)));
        assert!(bad(EnumerationConfig::new(16, 1, 3, 13, Method::St)));
        assert!(bad(EnumerationConfig::new(16, 1, 2, 5, Method::St)));
        assert!(bad(EnumerationConfig::new(16, 1, 3, 1, Method::St)));
        assert!(Enumeration::new(EnumerationConfig::new(16, 1, 3, 12, Method::St)).is_ok());
    }

    #[test]
    fn parent_ids_point_into_previous_level() {
        let config = EnumerationConfig::new(16, 1, 3, 6, Method::St);
        let levels = enumerate(config.clone()).unwrap();
        for pair in levels.windows(2) {
            let prev = level_records(&config, &pair[0]);
            for rec in level_records(&config, &pair[1]) {
                let parent = rec.parent_id.unwrap();
                assert!(prev.iter().any(|p| p.id == parent));
            }
        }
    }
}
