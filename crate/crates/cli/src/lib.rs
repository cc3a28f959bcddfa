//! Configuration-driven verification runner. The binary `tlkp` is a thin
//! wrapper over [`app::execute`].

pub mod app;
pub mod config;
pub mod report;
pub mod suite;

pub use config::{FieldChoice, SchemaError, SuiteConfig, CHECK_NAMES};
pub use report::{CheckRecord, Report, Summary};
pub use suite::{run_suite, run_suite_at};
