//! Catalog orchestration: enumeration runs, bounds, the record format,
//! queries, export and method benchmarks.

pub mod bench;
pub mod bounds;
pub mod enumerate;
pub mod query;
pub mod record;

pub use bench::{bench, BenchCase, BenchReport, BenchRow};
pub use bounds::{bound_filter, compute_bounds, within_bound, BoundSpec};
pub use enumerate::{enumerate, level_file_name, level_records, write_catalogs, Enumeration, EnumerationConfig, Level};
pub use query::{export, parse_columns, query, signature, ExportFormat, QueryFilter, Ranked};
pub use record::{parse_catalog, record_id, render_catalog, CatalogRecord, Method, CATALOG_HEADER};
