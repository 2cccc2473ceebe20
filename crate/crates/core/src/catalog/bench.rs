//! Per-level timing of the three extension methods.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Duration;

use super::enumerate::{Enumeration, EnumerationConfig};
use super::record::Method;
use crate::error::{Error, Result};
use crate::exec::ExecMode;

/// An enumeration setting to time: `N,m,R,n_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchCase {
    pub runs: usize,
    pub m: u32,
    pub min_resolution: u32,
    pub n_max: u32,
}

impl FromStr for BenchCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Config(format!("bench case {s:?} is not of the form N,m,R,n_max"));
        if parts.len() != 4 {
            return Err(bad());
        }
        let num = |x: &str| x.parse::<u64>().map_err(|_| bad());
        Ok(BenchCase {
            runs: num(parts[0])? as usize,
            m: num(parts[1])? as u32,
            min_resolution: num(parts[2])? as u32,
            n_max: num(parts[3])? as u32,
        })
    }
}

impl std::fmt::Display for BenchCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{},{},{}", self.runs, self.m, self.min_resolution, self.n_max)
    }
}

/// Timing of one method at one level.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub level: u32,
    pub method: Method,
    pub repeats: usize,
    pub median_seconds: f64,
    pub min_seconds: f64,
    pub candidates: usize,
    pub representatives: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub case: BenchCase,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    fn median(&self, level: u32, method: Method) -> Option<f64> {
        self.rows.iter().find(|r| r.level == level && r.method == method).map(|r| r.median_seconds)
    }

    /// Whether median times satisfy st ≤ dop ≤ full at `level`; `None` when
    /// a method is missing.
    pub fn ordering_holds(&self, level: u32) -> Option<bool> {
        let st = self.median(level, Method::St)?;
        let dop = self.median(level, Method::Dop)?;
        let full = self.median(level, Method::Full)?;
        Some(st <= dop && dop <= full)
    }

    pub fn levels(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.rows.iter().map(|r| r.level).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "case,level,method,repeats,median_seconds,min_seconds,candidates,representatives,st_le_dop_le_full\n",
        );
        for r in &self.rows {
            let flag = match self.ordering_holds(r.level) {
                Some(true) => "yes",
                Some(false) => "no",
                None => "na",
            };
            writeln!(
                out,
                "\"{}\",{},{},{},{:.6},{:.6},{},{},{}",
                self.case, r.level, r.method, r.repeats, r.median_seconds, r.min_seconds, r.candidates,
                r.representatives, flag
            )
            .expect("writing to a string");
        }
        out
    }
}

fn median(v: &mut [Duration]) -> Duration {
    v.sort_unstable();
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2
    }
}

/// Runs each method `repeats` times on `case` and reports per-level times
/// of the extend/reduce step. The seed level is not timed.
pub fn bench(case: BenchCase, methods: &[Method], repeats: usize, exec: ExecMode) -> Result<BenchReport> {
    if repeats == 0 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &method in methods {
        let config = EnumerationConfig::new(case.runs, case.m, case.min_resolution, case.n_max, method).with_exec(exec);
        let mut times: Vec<Vec<Duration>> = Vec::new();
        let mut counts: Vec<(u32, usize, usize)> = Vec::new();
        for rep in 0..repeats {
            for (i, level) in Enumeration::new(config.clone())?.skip(1).enumerate() {
                if rep == 0 {
                    times.push(Vec::new());
                    counts.push((level.n, level.candidates, level.len()));
                } else if counts[i] != (level.n, level.candidates, level.len()) {
                    return Err(Error::Validation(format!("{method} gave different counts across repeats")));
                }
                times[i].push(level.elapsed);
            }
        }
        for ((n, candidates, reps), mut t) in counts.into_iter().zip(times) {
            let min = *t.iter().min().expect("repeats >= 1");
            rows.push(BenchRow {
                level: n,
                method,
                repeats,
                median_seconds: median(&mut t).as_secs_f64(),
                min_seconds: min.as_secs_f64(),
                candidates,
                representatives: reps,
            });
        }
    }
    Ok(BenchReport { case, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_parsing() {
        let c: BenchCase = "32,1,3,10".parse().unwrap();
        assert_eq!(c, BenchCase { runs: 32, m: 1, min_resolution: 3, n_max: 10 });
        assert_eq!(c.to_string(), "32,1,3,10");
        assert!("32,1,3".parse::<BenchCase>().is_err());
        assert!("32,x,3,4".parse::<BenchCase>().is_err());
    }

    #[test]
    fn small_report() {
        let case: BenchCase = "16,1,3,5".parse().unwrap();
        let report = bench(case, &Method::ALL, 2, ExecMode::Sequential).unwrap();
        assert_eq!(report.levels(), [3, 4, 5]);
        assert_eq!(report.rows.len(), 9);
        for n in report.levels() {
            assert!(report.ordering_holds(n).is_some());
            let get = |m| report.rows.iter().find(|r| r.level == n && r.method == m).unwrap();
            assert!(get(Method::Full).candidates >= get(Method::St).candidates);
            assert_eq!(get(Method::Full).representatives, get(Method::St).representatives);
        }
        let csv = report.to_csv();
        assert_eq!(csv.lines().count(), 10);
        assert!(csv.lines().nth(1).unwrap().starts_with("\"16,1,3,5\",3,st,2,"));
    }
}
