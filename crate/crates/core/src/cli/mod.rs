//! Experiment harness behind the `plearn` binary: experiment specs and
//! reports, named check suites, and one function per subcommand.

pub mod commands;
pub mod experiment;
pub mod suites;

pub use commands::{dp_audit, error_json, load_class, AuditInstance, CommandOutput, AUDIT_MECHANISMS};
pub use experiment::{
    run_experiment, Aggregate, ClassSource, CurvePoint, DistSpec, ExperimentSpec, LearnerKind,
    Report, TrialOutcome, DESK_SCALE_WARNING, REPORT_SCHEMA,
};
pub use suites::{run_suite, Check, SuiteReport, SUITES};
