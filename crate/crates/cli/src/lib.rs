//! Scenario parsing, suite orchestration and report emission for the
//! metriforms identity checks.

pub mod checks;
pub mod report;
pub mod scenario;
pub mod suite;

pub use checks::{CheckName, Suite};
pub use report::{emit_report, parse_report, Format, Record, Report, ToleranceTable};
pub use scenario::{parse_scenario, Prepared, Scenario, ScenarioError};
pub use suite::{evaluate, input_digest, run_suite, Evaluation, Quantity, RunOptions};
