//! Verification harness for the `imperfect` crate: named suites of exact
//! checks, rendered as deterministic JSON or markdown reports.

pub mod anchors;
pub mod config;
pub mod report;
pub mod sampling;
pub mod suites;

pub use config::{ConfigError, Format, SuiteConfig, SuiteId};
pub use report::{to_json, to_markdown, CheckRecord, Report, Status, SCHEMA_VERSION};
pub use suites::run_suite;

pub fn emit_report(r: &Report, fmt: Format) -> String {
    match fmt {
        Format::Json => to_json(r),
        Format::Md => to_markdown(r),
    }
}
