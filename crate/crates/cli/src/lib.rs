//! Config-driven suite runner: JSON reports, a verdict summary and CSV trails.

pub mod config;
pub mod plot;
pub mod suite;

pub use config::{SuiteConfig, SuiteEntry, WindowDefaults};
pub use plot::{emit_plot_data, emit_plot_data_json, CSV_HEADER};
pub use suite::{exit_status, run_config, run_suite, Outcome, Summary, SummaryEntry, SuiteRun};
pub use wholder::lab::{list_cases, CaseInfo};
