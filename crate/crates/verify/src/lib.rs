//! Verification suites, the boundedness experiment and report emission for `gauss-riesz`.

pub mod config;
pub mod error;
pub mod families;
pub mod probe;
pub mod report;
pub mod suite;
pub mod theorem;

pub use config::{Budget, ExperimentConfig, Format, Suite, Tolerances};
pub use error::{Error, Result};
pub use report::{emit_report, CheckOutcome, RatioReport, RatioRow, RatioSummary, Status, SuiteReport};
pub use suite::run_suite;
pub use theorem::{theorem_experiment, TheoremData};
