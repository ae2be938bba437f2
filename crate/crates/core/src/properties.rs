//! Fairness of allocations, payoffs under misreported measures, and a probe
//! for equal shares above `1/n` to the right of given marks.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::efficiency::{monotone_assignments, Regions};
use crate::interval::Allocation;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::measure::{common_refinement, ValueMeasure};
use crate::procedures::{
    cut_and_choose, ep_best_order, equitability_procedure, surplus_procedure, ProcedureError,
};
use crate::rational::Rational;

fn share(n: usize) -> Rational {
    Rational::new(1.into(), (n as i64).into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FairnessViolation {
    /// `player` values its own portion below `1/n`.
    BelowShare { player: usize, value: Rational },
    /// `player` values `envied`'s portion above its own.
    Envy {
        player: usize,
        envied: usize,
        own: Rational,
        other: Rational,
    },
    /// Two players value their own portions differently.
    Unequal {
        first: usize,
        first_value: Rational,
        second: usize,
        second_value: Rational,
    },
}

impl fmt::Display for FairnessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::BelowShare { player, value } => {
                write!(f, "player {} values own portion at {value}", player + 1)
            }
            Self::Envy {
                player,
                envied,
                own,
                other,
            } => write!(
                f,
                "player {} values player {}'s portion at {other} > own {own}",
                player + 1,
                envied + 1
            ),
            Self::Unequal {
                first,
                first_value,
                second,
                second_value,
            } => write!(
                f,
                "player {} gets {first_value} but player {} gets {second_value}",
                first + 1,
                second + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessReport {
    pub payoffs: Vec<Rational>,
    pub proportional: bool,
    pub envy_free: bool,
    pub equitable: bool,
    /// The first violation of each failed property, in the order above.
    pub witnesses: Vec<FairnessViolation>,
}

/// Cross-valuation of a complete allocation. Panics if the number of
/// portions and measures differ.
pub fn check_fairness(a: &Allocation, ms: &[ValueMeasure]) -> FairnessReport {
    let n = ms.len();
    assert_eq!(a.players(), n, "one portion per player");
    let values: Vec<Vec<Rational>> = ms
        .iter()
        .map(|m| a.portions.iter().map(|p| m.value(p)).collect())
        .collect();
    let payoffs: Vec<Rational> = (0..n).map(|i| values[i][i].clone()).collect();
    let mut witnesses = Vec::new();

    let fair_share = share(n);
    let below = (0..n).find(|&i| payoffs[i] < fair_share);
    if let Some(player) = below {
        witnesses.push(FairnessViolation::BelowShare {
            player,
            value: payoffs[player].clone(),
        });
    }
    let envy = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| values[i][j] > values[i][i]);
    if let Some((player, envied)) = envy {
        witnesses.push(FairnessViolation::Envy {
            player,
            envied,
            own: values[player][player].clone(),
            other: values[player][envied].clone(),
        });
    }
    let unequal = (1..n).find(|&i| payoffs[i] != payoffs[0]);
    if let Some(second) = unequal {
        witnesses.push(FairnessViolation::Unequal {
            first: 0,
            first_value: payoffs[0].clone(),
            second,
            second_value: payoffs[second].clone(),
        });
    }
    FairnessReport {
        payoffs,
        proportional: below.is_none(),
        envy_free: envy.is_none(),
        equitable: unequal.is_none(),
        witnesses,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Procedure {
    /// Player 0 cuts, player 1 chooses.
    CutAndChoose,
    Surplus,
    Equitability {
        order: Vec<usize>,
    },
    EquitabilityBestOrder,
}

impl Procedure {
    /// Runs the procedure on `ms` and returns the allocation with each
    /// player's payoff under its own measure.
    pub fn run(&self, ms: &[ValueMeasure]) -> Result<(Allocation, Vec<Rational>), ProcedureError> {
        let two = |name: &str| {
            if ms.len() == 2 {
                Ok(())
            } else {
                Err(ProcedureError::InvalidInput(format!(
                    "{name} needs exactly 2 players, got {}",
                    ms.len()
                )))
            }
        };
        match self {
            Self::CutAndChoose => {
                two("cut-and-choose")?;
                let r = cut_and_choose(&ms[0], &ms[1]);
                Ok((r.allocation, r.payoffs))
            }
            Self::Surplus => {
                two("the surplus procedure")?;
                let r = surplus_procedure(&ms[0], &ms[1])?;
                Ok((r.allocation, r.payoffs))
            }
            Self::Equitability { order } => {
                let r = equitability_procedure(ms, order)?;
                Ok((r.allocation, r.payoffs))
            }
            Self::EquitabilityBestOrder => {
                let r = ep_best_order(ms)?;
                Ok((r.allocation, r.payoffs))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyOutcome {
    pub procedure: Procedure,
    pub true_measures: Vec<ValueMeasure>,
    pub reported_measures: Vec<ValueMeasure>,
    /// Produced from the reports.
    pub allocation: Allocation,
    /// Payoffs the procedure believes it gives, under the reports.
    pub reported_payoffs: Vec<Rational>,
    /// The same allocation valued under the true measures.
    pub true_payoffs: Vec<Rational>,
}

pub fn payoffs_under_reports(
    procedure: &Procedure,
    true_ms: &[ValueMeasure],
    reported_ms: &[ValueMeasure],
) -> Result<StrategyOutcome, ProcedureError> {
    if true_ms.len() != reported_ms.len() {
        return Err(ProcedureError::InvalidInput(format!(
            "{} true measures but {} reports",
            true_ms.len(),
            reported_ms.len()
        )));
    }
    let (allocation, reported_payoffs) = procedure.run(reported_ms)?;
    let true_payoffs = true_ms
        .iter()
        .zip(&allocation.portions)
        .map(|(m, p)| m.value(p))
        .collect();
    Ok(StrategyOutcome {
        procedure: procedure.clone(),
        true_measures: true_ms.to_vec(),
        reported_measures: reported_ms.to_vec(),
        allocation,
        reported_payoffs,
        true_payoffs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorCheck {
    pub payoffs: Vec<Rational>,
    pub min: Rational,
    /// `1/n`.
    pub share: Rational,
    /// `min <= share`.
    pub holds: bool,
}

/// Every player reports `m`; disjoint portions all valued by the same
/// measure cannot all exceed `1/n`.
pub fn identical_reports_floor(
    procedure: &Procedure,
    m: &ValueMeasure,
    n: usize,
) -> Result<FloorCheck, ProcedureError> {
    let ms = vec![m.clone(); n];
    let (_, payoffs) = procedure.run(&ms)?;
    let min = payoffs
        .iter()
        .min()
        .cloned()
        .ok_or_else(|| ProcedureError::InvalidInput("no players".into()))?;
    let share = share(n);
    Ok(FloorCheck {
        holds: min <= share,
        payoffs,
        min,
        share,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftProbe {
    /// Cuts at or right of the marks giving every player exactly `value`,
    /// which exceeds `1/n`.
    Witness {
        cuts: Vec<Rational>,
        value: Rational,
        allocation: Allocation,
    },
    /// No such cuts. `best` is the largest common value reachable at or
    /// right of the marks, with the lexicographically smallest cuts reaching
    /// it, if any equal split is reachable at all.
    Exhausted {
        best: Option<(Vec<Rational>, Rational)>,
    },
}

/// Looks for cuts `x_k >= marks_k` such that the pieces, given left to right
/// to players `0, 1, ..., n - 1`, are all worth exactly the same value
/// `t > 1/n` to their owners. The search is exact: every cut is placed in
/// every refinement cell in turn and the largest `t` found by linear
/// programming.
pub fn rightward_shift_probe(
    ms: &[ValueMeasure],
    marks: &[Rational],
) -> Result<ShiftProbe, ProcedureError> {
    let n = ms.len();
    if n < 2 || marks.len() + 1 != n {
        return Err(ProcedureError::InvalidInput(format!(
            "{n} players need {} marks, got {}",
            n.saturating_sub(1),
            marks.len()
        )));
    }
    let in_unit = marks
        .iter()
        .all(|x| *x >= Rational::zero() && *x <= Rational::one());
    if !in_unit || marks.windows(2).any(|w| w[0] > w[1]) {
        return Err(ProcedureError::InvalidInput(
            "marks must be nondecreasing points of [0, 1]".into(),
        ));
    }

    let r = common_refinement(ms);
    let regions = Regions::new(&r, ms);
    let order: Vec<usize> = (0..n).collect();
    let t_var = n - 1;
    let mut best: Option<(Rational, Vec<Rational>, Vec<usize>)> = None;
    for cells in monotone_assignments(n - 1, regions.count()) {
        let mut lp = LinearProgram::new(n);
        lp.objective[t_var] = Rational::one();
        for (k, &region) in cells.iter().enumerate() {
            let (lo, hi) = regions.bounds(region);
            let lo = core::cmp::max(lo, marks[k].clone());
            lp.add_terms(&[(k, Rational::one())], Relation::Ge, lo);
            lp.add_terms(&[(k, Rational::one())], Relation::Le, hi);
            if k + 1 < cells.len() {
                lp.add_terms(
                    &[(k, Rational::one()), (k + 1, -Rational::one())],
                    Relation::Le,
                    Rational::zero(),
                );
            }
        }
        for k in 0..n {
            let (mut terms, constant) = regions.piece_value(k, &cells, k);
            terms.push((t_var, -Rational::one()));
            lp.add_terms(&terms, Relation::Eq, -constant);
        }
        let LpOutcome::Optimal { value, .. } = lp.maximize() else {
            continue;
        };
        lp.add_terms(&[(t_var, Rational::one())], Relation::Eq, value.clone());
        let cut_vars: Vec<usize> = (0..n - 1).collect();
        let x = lp.lexmin(&cut_vars).expect("the optimum stays feasible");
        let cuts = x[..n - 1].to_vec();
        let better = best
            .as_ref()
            .is_none_or(|(t, c, _)| value > *t || (value == *t && cuts < *c));
        if better {
            best = Some((value, cuts, cells));
        }
    }

    let Some((value, cuts, cells)) = best else {
        return Ok(ShiftProbe::Exhausted { best: None });
    };
    if value <= share(n) {
        return Ok(ShiftProbe::Exhausted {
            best: Some((cuts, value)),
        });
    }
    let allocation = regions.allocation(&order, &cells, &cuts);
    for (m, p) in ms.iter().zip(&allocation.portions) {
        assert_eq!(m.value(p), value, "probe witness must re-verify");
    }
    Ok(ShiftProbe::Witness {
        cuts,
        value,
        allocation,
    })
}
