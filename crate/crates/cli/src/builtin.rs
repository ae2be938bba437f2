//! The three pinned counterexample scenarios.

use cake_core::rational::{int, rat};
use cake_core::{Allocation, Axis, IntervalSet, Rect2DMeasure, ValueMeasure};

use crate::scenario::{Baseline, Check, Misreport, Player, PlayerMeasure, ProcedureSpec, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown counterexample {0} (expected 1, 2 or 3)")]
pub struct UnknownCounterexample(pub u32);

fn interval(name: &str, m: ValueMeasure) -> Player {
    Player {
        name: name.into(),
        measure: PlayerMeasure::Interval(m),
    }
}

/// Uniform on the half of the square with `y >= 1/2` (`top`) or below it.
fn half_square(name: &str, top: bool) -> Player {
    let (low, high) = if top {
        (int(0), int(2))
    } else {
        (int(2), int(0))
    };
    let m = Rect2DMeasure::new(
        vec![int(0), int(1)],
        vec![int(0), rat(1, 2), int(1)],
        vec![vec![low, high]],
    )
    .expect("valid square measure");
    Player {
        name: name.into(),
        measure: PlayerMeasure::Square(m),
    }
}

fn outer_quarters() -> ValueMeasure {
    ValueMeasure::from_density(
        vec![int(0), rat(1, 4), rat(3, 4), int(1)],
        vec![int(2), int(0), int(2)],
    )
    .expect("valid measure")
}

fn front_quarter() -> ValueMeasure {
    ValueMeasure::from_density(vec![int(0), rat(1, 4), int(1)], vec![int(4), int(0)])
        .expect("valid measure")
}

pub fn builtin_counterexample(id: u32) -> Result<Scenario, UnknownCounterexample> {
    let scenario = match id {
        1 => Scenario {
            name: "counterexample-1".into(),
            description: Some(
                "unit square; player 1 values only the top half, player 2 only the bottom half"
                    .into(),
            ),
            players: vec![half_square("player 1", true), half_square("player 2", false)],
            axes: vec![Axis::X, Axis::Y],
            procedures: vec![ProcedureSpec::CutAndChoose],
            checks: vec![Check::Pareto, Check::ParetoContiguous, Check::Fairness],
            baseline: Some(Baseline {
                axis: Some(Axis::Y),
                allocation: Allocation::new(vec![
                    IntervalSet::to_end(rat(1, 2)),
                    IntervalSet::half_open(int(0), rat(1, 2)),
                ]),
            }),
            misreports: Vec::new(),
            probe: None,
        },
        2 => Scenario {
            name: "counterexample-2".into(),
            description: Some(
                "player 1 uniform; player 2 values only the outer quarters".into(),
            ),
            players: vec![
                interval("player 1", ValueMeasure::uniform()),
                interval("player 2", outer_quarters()),
            ],
            axes: Vec::new(),
            procedures: vec![
                ProcedureSpec::CutAndChoose,
                ProcedureSpec::Surplus,
                ProcedureSpec::Equitability { order: None },
            ],
            checks: vec![Check::Pareto, Check::ParetoContiguous, Check::Fairness],
            baseline: None,
            misreports: Vec::new(),
            probe: None,
        },
        3 => Scenario {
            name: "counterexample-3".into(),
            description: Some(
                "two players with uniform true measures; player 1 may report the first quarter only"
                    .into(),
            ),
            players: vec![
                interval("player 1", ValueMeasure::uniform()),
                interval("player 2", ValueMeasure::uniform()),
            ],
            axes: Vec::new(),
            procedures: vec![
                ProcedureSpec::Surplus,
                ProcedureSpec::Equitability { order: None },
            ],
            checks: vec![Check::StrategyFloor, Check::Fairness],
            baseline: None,
            misreports: vec![Misreport {
                player: 0,
                measure: front_quarter(),
            }],
            probe: Some(crate::scenario::Probe {
                marks: vec![rat(1, 2)],
            }),
        },
        other => return Err(UnknownCounterexample(other)),
    };
    Ok(scenario)
}
