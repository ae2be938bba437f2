//! Exact cake division on the unit interval.
//!
//! Every quantity in this crate is an exact rational. Players value the cake
//! through [`ValueMeasure`]s: a piecewise-constant density plus finitely many
//! point masses, normalized to total mass one. On top of that the crate
//! provides
//!
//! - the classic two-player procedures (cut-and-choose, the surplus
//!   procedure) and the n-player equitability procedure, each of which reports
//!   degenerate inputs (non-unique medians, unsolvable cut equations) as
//!   errors instead of guessing,
//! - exact Pareto-dominance search, both over arbitrary allocations (an exact
//!   simplex over the common refinement of the measures) and over contiguous
//!   allocations with `n - 1` cuts,
//! - fairness checks and strategy-payoff helpers.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod efficiency;
pub mod interval;
pub mod lp;
pub mod measure;
pub mod procedures;
pub mod properties;
mod pwl;
pub mod rational;

pub use efficiency::{
    dominates, find_dominating, find_dominating_contiguous, find_dominating_contiguous_utilities,
    find_dominating_utilities, utilities, weighted_optimal, ContiguousCuts, DominanceCertificate,
    EfficiencyError, FractionAllocation,
};
pub use interval::{Allocation, AllocationError, IntervalSet};
pub use measure::{
    common_refinement, mutually_abs_continuous, project_2d, Axis, MeasureError, PiecewiseDensity,
    QuantileResult, Rect2DMeasure, Refinement, ValueMeasure,
};
pub use procedures::{
    cut_and_choose, ep_best_order, equitability_procedure, surplus_procedure, CcResult, Degeneracy,
    EpResult, ProcedureError, SpResult, Unsolvable,
};
pub use properties::{
    check_fairness, identical_reports_floor, payoffs_under_reports, rightward_shift_probe,
    FairnessReport, FairnessViolation, FloorCheck, Procedure, ShiftProbe, StrategyOutcome,
};
pub use rational::{rat, Rational};
