//! Experiment configuration, runs and reports.

pub mod claims;
pub mod config;
pub mod report;
pub mod run;

pub use claims::{claim_suite, criteria, run_criterion, ClaimContext, Criterion, Outcome};
pub use config::{ExperimentConfig, Function2DRef, FunctionRef, LambdaGrid, Mode};
pub use report::{ReportRow, Relation, Summary};
pub use run::{run, RunOutcome};
