//! Filtering, ranking and export of catalog records.

use std::collections::HashMap;

use super::record::CatalogRecord;
use crate::error::{Error, Result};
use crate::isomorphism::{certificate_of, Certificate};
use crate::matrix::design_matrix;
use crate::wlp::{wlp, AberrationOrdering, WlpMatrix};

/// Optional record filters; `None` matches everything.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QueryFilter {
    pub runs: Option<usize>,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub min_resolution: Option<u32>,
}

impl QueryFilter {
    pub fn matches(&self, r: &CatalogRecord) -> bool {
        self.runs.is_none_or(|x| r.runs == x)
            && self.m.is_none_or(|x| r.m == x)
            && self.n.is_none_or(|x| r.n == x)
            && self.min_resolution.is_none_or(|x| r.resolution.at_least(x))
    }
}

/// A record selected by [`query`] with its ranking key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranked {
    pub record: CatalogRecord,
    pub wlp: WlpMatrix,
    /// Flattened pattern under the ranking order.
    pub key: Vec<u64>,
}

impl Ranked {
    /// `A3`, `A4`, `A5` blocks concatenated in the ranking's type order.
    pub fn signature(&self, ordering: AberrationOrdering) -> Vec<u64> {
        signature(&self.wlp, ordering, 5)
    }
}

/// Blocks of lengths `3..=max_length` of the pattern, each ordered by type
/// as `ordering` prescribes. Lengths beyond `m + n` contribute zeros.
pub fn signature(w: &WlpMatrix, ordering: AberrationOrdering, max_length: u32) -> Vec<u64> {
    let mut out = Vec::new();
    for i in 3..=max_length {
        let mut block = w.by_type(i);
        if ordering == AberrationOrdering::TypeM {
            block.reverse();
        }
        out.extend(block);
    }
    out
}

/// Filters `records`, ranks them by the flattened pattern under `rank_by`
/// (recomputed from the columns), breaks ties by certificate and returns the
/// first `top`.
pub fn query(
    records: &[CatalogRecord],
    filter: &QueryFilter,
    rank_by: AberrationOrdering,
    top: usize,
) -> Result<Vec<Ranked>> {
    let mut ranked = Vec::new();
    for r in records.iter().filter(|r| filter.matches(r)) {
        let design = r.design()?;
        let w = wlp(&design);
        ranked.push(Ranked { record: r.clone(), key: w.flatten(rank_by), wlp: w });
    }
    ranked.sort_by(|a, b| a.key.cmp(&b.key));
    if top == 0 {
        return Ok(Vec::new());
    }
    if ranked.len() > top {
        // certificates are only needed for the tie group straddling the cut
        if ranked[top - 1].key == ranked[top].key {
            let key = ranked[top].key.clone();
            let lo = ranked.partition_point(|x| x.key < key);
            let hi = ranked.partition_point(|x| x.key <= key);
            sort_by_certificate(&mut ranked[lo..hi])?;
        }
        ranked.truncate(top);
    }
    let mut i = 0;
    while i < ranked.len() {
        let j = i + ranked[i..].iter().take_while(|x| x.key == ranked[i].key).count();
        if j - i > 1 {
            sort_by_certificate(&mut ranked[i..j])?;
        }
        i = j;
    }
    Ok(ranked)
}

fn sort_by_certificate(group: &mut [Ranked]) -> Result<()> {
    let mut certs: HashMap<String, Certificate> = HashMap::new();
    for r in group.iter() {
        certs.insert(r.record.id.clone(), certificate_of(&r.record.design()?));
    }
    group.sort_by(|a, b| certs[&a.record.id].cmp(&certs[&b.record.id]));
    Ok(())
}

/// Output format of [`export`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Columns,
    Matrix,
}

/// Renders the record `id` as its column list or as its run matrix (one
/// run per line, four-level factors first as `0..3`, then `-1`/`1`).
pub fn export(records: &[CatalogRecord], id: &str, format: ExportFormat) -> Result<String> {
    let rec = records
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::NotFound(format!("no record with id {id}")))?;
    let design = rec.design()?;
    Ok(match format {
        ExportFormat::Columns => {
            let cols: Vec<String> = design.column_indices().iter().map(u32::to_string).collect();
            format!("{}\n", cols.join(","))
        }
        ExportFormat::Matrix => {
            let x = design_matrix(&design);
            let mut out = String::new();
            for r in 0..x.runs() {
                let row: Vec<String> = x.row(r).iter().map(i32::to_string).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
    })
}

/// Parses an exported column list back into column indices.
pub fn parse_columns(text: &str) -> Result<Vec<u32>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|c| c.trim().parse().map_err(|_| Error::Parse { line: 1, msg: format!("invalid column {c:?}") }))
        .collect()
}
