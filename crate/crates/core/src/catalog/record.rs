//! The line-oriented catalog format.
//!
//! ```text
//! # ffenum catalog v1
//! 16-1-3.1;16;1;3;4,8,12;3;0:1,1:0;0:0,1:0;0:0,1:0;16-1-2.1;st
//! ```
//!
//! Fields: id, runs, m, n, two-level columns, resolution (`inf` when there
//! are no words), `A3`, `A4`, `A5` as `type:count` pairs, parent id (`-`
//! for seeds) and the extension method.

use std::fmt;
use std::str::FromStr;

use crate::design::Design;
use crate::error::{Error, Result};
use crate::wlp::{Resolution, WlpMatrix};

pub const CATALOG_HEADER: &str = "# ffenum catalog v1";

/// How the designs of a catalog were extended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    St,
    Dop,
    Full,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::St, Method::Dop, Method::Full];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::St => "st",
            Method::Dop => "dop",
            Method::Full => "full",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "st" => Ok(Method::St),
            "dop" => Ok(Method::Dop),
            "full" => Ok(Method::Full),
            other => Err(format!("unknown method {other:?} (expected st, dop or full)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogRecord {
    pub id: String,
    pub runs: usize,
    pub m: u32,
    pub n: u32,
    pub columns: Vec<u32>,
    pub resolution: Resolution,
    /// `A_{3,t}` for `t = 0..=m`.
    pub a3: Vec<u64>,
    pub a4: Vec<u64>,
    pub a5: Vec<u64>,
    pub parent_id: Option<String>,
    pub method: Method,
}

/// Stable record id `N-m-n.r` with 1-based rank `r`.
pub fn record_id(runs: usize, m: u32, n: u32, rank: usize) -> String {
    format!("{runs}-{m}-{n}.{rank}")
}

impl CatalogRecord {
    pub fn new(id: String, design: &Design, wlp: &WlpMatrix, parent_id: Option<String>, method: Method) -> Self {
        CatalogRecord {
            id,
            runs: design.runs(),
            m: design.m(),
            n: design.n(),
            columns: design.column_indices(),
            resolution: wlp.resolution(),
            a3: wlp.by_type(3),
            a4: wlp.by_type(4),
            a5: wlp.by_type(5),
            parent_id,
            method,
        }
    }

    pub fn design(&self) -> Result<Design> {
        if !self.runs.is_power_of_two() {
            return Err(Error::Validation(format!("run count {} is not a power of two", self.runs)));
        }
        Design::new(self.runs.trailing_zeros(), self.m, &self.columns)
    }

    pub fn render(&self) -> String {
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        let pairs = |v: &[u64]| v.iter().enumerate().map(|(t, c)| format!("{t}:{c}")).collect::<Vec<_>>().join(",");
        format!(
            "{};{};{};{};{};{};{};{};{};{};{}",
            self.id,
            self.runs,
            self.m,
            self.n,
            join(&self.columns),
            self.resolution,
            pairs(&self.a3),
            pairs(&self.a4),
            pairs(&self.a5),
            self.parent_id.as_deref().unwrap_or("-"),
            self.method
        )
    }

    /// Parses one record line; `line` is the 1-based line number used in
    /// errors.
    pub fn parse(text: &str, line: usize) -> Result<Self> {
        let err = |msg: String| Error::Parse { line, msg };
        let fields: Vec<&str> = text.trim_end().split(';').collect();
        if fields.len() != 11 {
            return Err(err(format!("expected 11 fields, found {}", fields.len())));
        }
        let num = |s: &str, what: &str| -> Result<u64> {
            s.parse::<u64>().map_err(|_| err(format!("invalid {what} {s:?}")))
        };
        let runs = num(fields[1], "run count")? as usize;
        let m = num(fields[2], "m")? as u32;
        let n = num(fields[3], "n")? as u32;
        let columns = if fields[4].is_empty() {
            Vec::new()
        } else {
            fields[4]
                .split(',')
                .map(|c| num(c, "column").map(|v| v as u32))
                .collect::<Result<Vec<_>>>()?
        };
        if columns.len() != n as usize {
            return Err(err(format!("n = {n} but {} columns listed", columns.len())));
        }
        let resolution = match fields[5] {
            "inf" => Resolution::Infinite,
            s => Resolution::Finite(num(s, "resolution")? as u32),
        };
        let pattern = |s: &str| -> Result<Vec<u64>> {
            let mut out = Vec::new();
            for (expect, pair) in s.split(',').enumerate() {
                let (t, c) = pair.split_once(':').ok_or_else(|| err(format!("invalid pair {pair:?}")))?;
                if num(t, "type")? != expect as u64 {
                    return Err(err(format!("types out of order in {s:?}")));
                }
                out.push(num(c, "count")?);
            }
            if out.len() != m as usize + 1 {
                return Err(err(format!("expected {} type counts in {s:?}", m + 1)));
            }
            Ok(out)
        };
        let (a3, a4, a5) = (pattern(fields[6])?, pattern(fields[7])?, pattern(fields[8])?);
        let parent_id = match fields[9] {
            "-" => None,
            "" => return Err(err("empty parent id".into())),
            p => Some(p.to_string()),
        };
        let method = fields[10].parse().map_err(err)?;
        if fields[0].is_empty() {
            return Err(err("empty id".into()));
        }
        Ok(CatalogRecord {
            id: fields[0].to_string(),
            runs,
            m,
            n,
            columns,
            resolution,
            a3,
            a4,
            a5,
            parent_id,
            method,
        })
    }
}

/// Renders a catalog file: header plus one line per record.
pub fn render_catalog(records: &[CatalogRecord]) -> String {
    let mut out = String::from(CATALOG_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.render());
        out.push('\n');
    }
    out
}

/// Parses a catalog file, skipping blank lines and `#` comments. Ids must be
/// unique.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogRecord>> {
    let mut out: Vec<CatalogRecord> = Vec::new();
    let mut ids = std::collections::HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let rec = CatalogRecord::parse(trimmed, i + 1)?;
        if !ids.insert(rec.id.clone()) {
            return Err(Error::Parse { line: i + 1, msg: format!("duplicate id {}", rec.id) });
        }
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wlp::wlp;

    #[test]
    fn render_and_parse_round_trip() {
        let d = Design::new(4, 1, &[4, 8, 7, 13]).unwrap();
        let rec = CatalogRecord::new("16-1-4.2".into(), &d, &wlp(&d), Some("16-1-3.1".into()), Method::St);
        let line = rec.render();
        assert_eq!(line, "16-1-4.2;16;1;4;4,8,7,13;3;0:0,1:1;0:0,1:2;0:0,1:0;16-1-3.1;st");
        assert_eq!(CatalogRecord::parse(&line, 1).unwrap(), rec);
        assert_eq!(rec.design().unwrap(), d);
    }

    #[test]
    fn seed_with_no_columns() {
        let d = Design::seed(4, 2).unwrap();
        let rec = CatalogRecord::new(record_id(16, 2, 0, 1), &d, &wlp(&d), None, Method::Dop);
        let line = rec.render();
        assert_eq!(line, "16-2-0.1;16;2;0;;inf;0:0,1:0,2:0;0:0,1:0,2:0;0:0,1:0,2:0;-;dop");
        assert_eq!(CatalogRecord::parse(&line, 1).unwrap(), rec);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = format!("{CATALOG_HEADER}\n\n16-1-2.1;16;1;2;4,8;inf;0:0,1:0;0:0,1:0;0:0,1:0;-;st\n16-1-3.1;16;1;3;4,x,7;3;0:0,1:1;0:0,1:0;0:0,1:0;-;st\n");
        match parse_catalog(&text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let dup = "a;16;1;2;4,8;inf;0:0,1:0;0:0,1:0;0:0,1:0;-;st\na;16;1;2;4,8;inf;0:0,1:0;0:0,1:0;0:0,1:0;-;st\n";
        assert!(matches!(parse_catalog(dup), Err(Error::Parse { line: 2, .. })));
        assert!(CatalogRecord::parse("a;16;1;2;4,8;inf;0:0;0:0,1:0;0:0,1:0;-;st", 7).is_err());
        assert!(CatalogRecord::parse("a;16;1;2;4,8;inf;0:0,1:0;0:0,1:0;0:0,1:0;-;xx", 7).is_err());
    }
}
