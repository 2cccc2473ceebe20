//! Enumeration of regular `4^m 2^(n-p)` fractional factorial designs.
//!
//! Designs are column sets over GF(2)^k. Levels are grown one two-level
//! factor at a time by extension (search table, delete-one-factor
//! projection, or full extension) followed by isomorphism reduction with
//! canonical graph certificates.

pub mod catalog;
pub mod design;
pub mod error;
pub mod exec;
pub mod extension;
pub mod gf2;
pub mod isomap;
pub mod isomorphism;
pub mod matrix;
pub mod wlp;

pub use design::{column_values, dop, make_design, Column, Design};
pub use error::{Error, Result};
pub use exec::ExecMode;
pub use extension::{build_search_table, dop_extend, full_extend, st_canonical_form, st_extend, Candidate, SearchRow, SearchTable};
pub use isomap::{apply_isomap, random_isomap, IsoMap};
pub use isomorphism::{canonical_certificate, certificate_of, design_to_graph, pairwise_oracle, reduce, Certificate};
pub use matrix::{design_matrix, recover_design, regularity_check, RunMatrix};
pub use wlp::{
    compare_aberration, defining_words, flatten, resolution, select_min_aberration, wlp, word_length_type, worst_a3,
    AberrationOrdering, Resolution, WlpMatrix, Word,
};
