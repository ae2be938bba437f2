//! Scenario files, reports and the pinned counterexamples for `cakecut`.

#![allow(clippy::result_large_err)]

pub mod builtin;
pub mod report;
pub mod scenario;

pub use builtin::{builtin_counterexample, UnknownCounterexample};
pub use report::{run_scenario, Report};
pub use scenario::{parse_scenario, Check, ProcedureSpec, Scenario, ScenarioError};
