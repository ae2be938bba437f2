//! Cut-and-choose, the surplus procedure and the equitability procedure.
//!
//! Players are indexed from 0 in the order the measures are passed. Every
//! procedure returns a complete [`Allocation`] together with the payoff of
//! each player under its own measure. Inputs for which a procedure is not
//! well defined come back as a [`ProcedureError`] that carries the data
//! needed to reproduce the degeneracy.

mod ep;

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::interval::{Allocation, IntervalSet};
use crate::measure::{QuantileResult, ValueMeasure};
use crate::rational::Rational;

pub use ep::{ep_best_order, equitability_procedure, EpResult};

/// Handled corner cases, recorded alongside a result.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    /// The cutter's median is a flat interval; the cut is its midpoint.
    FlatMedian { lo: Rational, hi: Rational },
    /// The cutter's median sits on an atom; the atom went to the right piece.
    CutAtAtom(Rational),
    /// The cutter's CDF reaches 1/2 exactly on top of an atom; the atom
    /// stays with the left piece so both pieces are worth 1/2.
    AtomKeptLeft(Rational),
    /// Neither player values the surplus; it is split at its midpoint.
    SurplusWorthless,
    /// Only this player values the surplus and receives all of it.
    SurplusValuedOnlyBy(usize),
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FlatMedian { lo, hi } => {
                write!(
                    f,
                    "cutter median is the flat interval [{lo}, {hi}]; cut at its midpoint"
                )
            }
            Self::CutAtAtom(x) => write!(f, "cutter median is a jump at {x}; the atom goes right"),
            Self::AtomKeptLeft(x) => {
                write!(
                    f,
                    "cutter median is the top of an atom at {x}; the atom stays left"
                )
            }
            Self::SurplusWorthless => f.write_str("surplus worthless to both; split at midpoint"),
            Self::SurplusValuedOnlyBy(p) => {
                write!(
                    f,
                    "surplus valued only by player {}; it receives all of it",
                    p + 1
                )
            }
        }
    }
}

/// Why a system of cut equations has no exact solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Unsolvable {
    /// The residual (last piece's value minus the common value) jumps over
    /// zero at `t`.
    ResidualJump {
        t: Rational,
        left: Rational,
        right: Rational,
    },
    /// At common value `t`, piece `piece` (left to right) cannot be worth
    /// exactly `t` to `player`: ending it at `cut` gives `without_atom`,
    /// taking the atom at `cut` as well gives `with_atom`.
    PieceSkips {
        t: Rational,
        piece: usize,
        player: usize,
        cut: Rational,
        without_atom: Rational,
        with_atom: Rational,
    },
    /// The surplus proportion equation jumps from `left` to `right` at the
    /// atom at `at` (values are the proportion difference).
    SurplusJump {
        at: Rational,
        left: Rational,
        right: Rational,
    },
}

impl fmt::Display for Unsolvable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: &Rational| {
            if v.is_negative() {
                "negative"
            } else if v.is_zero() {
                "zero"
            } else {
                "positive"
            }
        };
        match self {
            Self::ResidualJump { t, left, right } => write!(
                f,
                "residual jumps from {} ({left}) to {} ({right}) at t = {t}",
                sign(left),
                sign(right)
            ),
            Self::PieceSkips {
                t,
                piece,
                player,
                cut,
                without_atom,
                with_atom,
            } => write!(
                f,
                "piece {} of player {} cannot be worth {t}: at cut {cut} it is worth {without_atom} \
                 without the atom and {with_atom} with it",
                piece + 1,
                player + 1
            ),
            Self::SurplusJump { at, left, right } => write!(
                f,
                "surplus equation jumps from {} ({left}) to {} ({right}) at the atom at {at}",
                sign(left),
                sign(right)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProcedureError {
    #[error("player {} has no unique median: {}", .player + 1, QuantileResult::FlatInterval(.lo.clone(), .hi.clone()))]
    NonUniqueMedian {
        player: usize,
        lo: Rational,
        hi: Rational,
    },
    #[error("no solution: {0}")]
    NoSolution(Unsolvable),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CcResult {
    pub cut: Rational,
    pub cutter: usize,
    pub chooser: usize,
    pub chooser_took_left: bool,
    pub cutter_median: QuantileResult,
    pub allocation: Allocation,
    pub payoffs: Vec<Rational>,
    pub degeneracy: Option<Degeneracy>,
}

/// Player 0 cuts, player 1 chooses.
///
/// The cutter plays maximin: it cuts at a point of its median set so both
/// pieces are worth 1/2 to it (midpoint of a flat median; at an atom's
/// location when the median is a jump, where the cutter gets less). When
/// the CDF reaches 1/2 exactly on top of an atom, that atom stays with the
/// left piece. The chooser takes the piece it
/// values more, the left one on a tie.
pub fn cut_and_choose(cutter: &ValueMeasure, chooser: &ValueMeasure) -> CcResult {
    let median = cutter.median();
    let (cut, degeneracy) = match &median {
        QuantileResult::UniquePoint(x) if !cutter.atom(x).is_zero() => {
            (x.clone(), Some(Degeneracy::AtomKeptLeft(x.clone())))
        }
        QuantileResult::UniquePoint(x) => (x.clone(), None),
        QuantileResult::FlatInterval(lo, hi) => (
            (lo + hi) / Rational::from_integer(2.into()),
            Some(Degeneracy::FlatMedian {
                lo: lo.clone(),
                hi: hi.clone(),
            }),
        ),
        QuantileResult::AtJump(x) => (x.clone(), Some(Degeneracy::CutAtAtom(x.clone()))),
    };
    let mut left = IntervalSet::half_open(Rational::zero(), cut.clone());
    let mut right = IntervalSet::to_end(cut.clone());
    if matches!(degeneracy, Some(Degeneracy::AtomKeptLeft(_))) {
        left = left.with_point(cut.clone());
        right = right.without_point(cut.clone());
    }
    let chooser_took_left = chooser.value(&left) >= chooser.value(&right);
    let portions = if chooser_took_left {
        vec![right, left]
    } else {
        vec![left, right]
    };
    let payoffs = vec![cutter.value(&portions[0]), chooser.value(&portions[1])];
    CcResult {
        cut,
        cutter: 0,
        chooser: 1,
        chooser_took_left,
        cutter_median: median,
        allocation: Allocation::new(portions),
        payoffs,
        degeneracy,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpResult {
    /// Median of each player.
    pub medians: [Rational; 2],
    /// `[a, b]` between the two medians.
    pub surplus: (Rational, Rational),
    /// The player receiving `[0, e)`.
    pub left_player: usize,
    /// The cut `e` inside the surplus.
    pub cut: Rational,
    pub allocation: Allocation,
    pub payoffs: Vec<Rational>,
    /// Each player's value of the whole surplus `[a, b)`.
    pub surplus_values: [Rational; 2],
    /// Share of its own surplus value each player receives; `None` when the
    /// player values the surplus at zero.
    pub surplus_proportions: [Option<Rational>; 2],
    pub degeneracy: Option<Degeneracy>,
}

fn median_point(m: &ValueMeasure, player: usize) -> Result<Rational, ProcedureError> {
    match m.median() {
        QuantileResult::UniquePoint(x) | QuantileResult::AtJump(x) => Ok(x),
        QuantileResult::FlatInterval(lo, hi) => {
            Err(ProcedureError::NonUniqueMedian { player, lo, hi })
        }
    }
}

/// The surplus procedure for two players.
///
/// The player with the smaller median `a` gets `[0, a)`, the other gets
/// `[b, 1]` for its median `b`. The surplus `[a, b)` is cut at `e` so that
/// both players receive the same proportion of their own value of the
/// surplus. Ties between equal medians put player 0 on the left.
pub fn surplus_procedure(f1: &ValueMeasure, f2: &ValueMeasure) -> Result<SpResult, ProcedureError> {
    let medians = [median_point(f1, 0)?, median_point(f2, 1)?];
    let ms = [f1, f2];
    let left_player = if medians[0] <= medians[1] { 0 } else { 1 };
    let right_player = 1 - left_player;
    let a = medians[left_player].clone();
    let b = medians[right_player].clone();
    let surplus = IntervalSet::half_open(a.clone(), b.clone());
    let surplus_values = [ms[0].value(&surplus), ms[1].value(&surplus)];
    let (s_left, s_right) = (&surplus_values[left_player], &surplus_values[right_player]);

    let (cut, degeneracy) = if a == b {
        (a.clone(), None)
    } else {
        // A left median with a < b is a point of increase or an atom at a, so
        // in practice only the right player can value the surplus at zero.
        match (s_left.is_zero(), s_right.is_zero()) {
            (true, true) => (
                (&a + &b) / Rational::from_integer(2.into()),
                Some(Degeneracy::SurplusWorthless),
            ),
            (false, true) => (
                b.clone(),
                Some(Degeneracy::SurplusValuedOnlyBy(left_player)),
            ),
            (true, false) => (
                a.clone(),
                Some(Degeneracy::SurplusValuedOnlyBy(right_player)),
            ),
            (false, false) => (
                proportional_cut(ms[left_player], ms[right_player], &a, &b, s_left, s_right)?,
                None,
            ),
        }
    };

    let mut portions = vec![IntervalSet::empty(), IntervalSet::empty()];
    portions[left_player] = IntervalSet::half_open(Rational::zero(), cut.clone());
    portions[right_player] = IntervalSet::to_end(cut.clone());
    let payoffs = vec![ms[0].value(&portions[0]), ms[1].value(&portions[1])];

    let mut surplus_proportions = [None, None];
    let shares = [
        IntervalSet::half_open(a.clone(), cut.clone()),
        IntervalSet::half_open(cut.clone(), b.clone()),
    ];
    for (player, share) in [(left_player, &shares[0]), (right_player, &shares[1])] {
        let total = &surplus_values[player];
        if !total.is_zero() {
            surplus_proportions[player] = Some(ms[player].value(share) / total);
        }
    }
    Ok(SpResult {
        medians,
        surplus: (a, b),
        left_player,
        cut,
        allocation: Allocation::new(portions),
        payoffs,
        surplus_values,
        surplus_proportions,
        degeneracy,
    })
}

/// Leftmost `e` in `[a, b]` with
/// `v_L([a, e)) / s_L = v_R([e, b)) / s_R`, found by scanning the
/// piecewise-linear function
/// `phi(e) = s_R * v_L([a, e)) - s_L * v_R([e, b))` between breakpoints.
fn proportional_cut(
    left: &ValueMeasure,
    right: &ValueMeasure,
    a: &Rational,
    b: &Rational,
    s_left: &Rational,
    s_right: &Rational,
) -> Result<Rational, ProcedureError> {
    let base_left = left.mass_before(a);
    let base_right = right.mass_before(b);
    let phi = |e: &Rational| {
        s_right * (left.mass_before(e) - &base_left) - s_left * (&base_right - right.mass_before(e))
    };
    let mut pts: Vec<Rational> = left
        .events()
        .into_iter()
        .chain(right.events())
        .filter(|x| x > a && x < b)
        .collect();
    pts.push(a.clone());
    pts.push(b.clone());
    pts.sort();
    pts.dedup();

    for (i, p) in pts.iter().enumerate() {
        let at = phi(p);
        if at.is_zero() {
            return Ok(p.clone());
        }
        let after = &at + s_right * left.atom(p) + s_left * right.atom(p);
        let slope = s_right * left.density().at(p) + s_left * right.density().at(p);
        // A zero right limit is only attained if phi stays flat afterwards.
        if at.is_positive() || after.is_positive() || (after.is_zero() && slope.is_positive()) {
            return Err(ProcedureError::NoSolution(Unsolvable::SurplusJump {
                at: p.clone(),
                left: at,
                right: after,
            }));
        }
        if let Some(next) = pts.get(i + 1) {
            if slope.is_positive() {
                let root = p - &after / &slope;
                if root < *next {
                    return Ok(root);
                }
            }
        }
    }
    unreachable!("phi(b) = s_L * s_R > 0, so a root or a jump is found by b")
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
}
