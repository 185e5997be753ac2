//! Command-line harness around the analytic model and the simulator.
//!
//! Subcommands `analytic`, `simulate`, `compare` and `threshold`; CSV with the
//! columns in [`report::CSV_HEADER`] or JSON carrying the same rows plus the
//! metadata needed to re-run.
//!
//! Exit codes: 0 success, 1 comparison failed, 2 usage error, 3 runtime error.

pub mod error;
pub mod report;
pub mod run;
pub mod run_spec;

pub use error::HarnessError;
pub use report::{ComparisonReport, Policy, Row};
pub use run::{execute, main_with_args, run, RunOutput, OUTPUT_DIR_ENV};
pub use run_spec::{parse_spec, Format, Invocation, LoadGrid, Mode, PolicyChoice, RunSpec, ThresholdSpec};
