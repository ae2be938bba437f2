//! The equitability procedure: `n - 1` cuts such that every player values
//! its own contiguous piece at the same common value `t`.
//!
//! For a candidate `t` the monotone sweep places every cut at the leftmost
//! point giving its piece value exactly `t`; the residual (value of the last
//! piece minus `t`) is then strictly decreasing in `t`. The residual is built
//! as an exact piecewise-affine function of `t` by composing each player's
//! cumulative mass with the generalized inverse of the next player's, so its
//! sign change is located by scanning segments rather than by bisection.
//!
//! The sweep runs on a virtual cake extended past 1 with unit density, which
//! keeps every composition defined when some `t` is too large for the real
//! cake; such `t` never survive verification.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{permutations, ProcedureError, Unsolvable};
use crate::interval::Allocation;
use crate::measure::ValueMeasure;
use crate::pwl::Pwl;
use crate::rational::Rational;

const MAX_BEST_ORDER_PLAYERS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpResult {
    /// `order[k]` receives the `k`-th piece from the left.
    pub order: Vec<usize>,
    pub cuts: Vec<Rational>,
    pub common_value: Rational,
    pub allocation: Allocation,
    pub payoffs: Vec<Rational>,
}

/// Mass of `[0, y)`, continued past 1 with unit density.
fn mass_before_ext(m: &ValueMeasure, y: &Rational) -> Rational {
    if *y <= Rational::one() {
        m.mass_before(y)
    } else {
        y.clone()
    }
}

/// `inf { y >= 0 : mass_before_ext(y) >= c }`.
fn first_reaching_ext(m: &ValueMeasure, c: &Rational) -> Rational {
    if *c <= Rational::zero() {
        return Rational::zero();
    }
    let events = m.events();
    let mut acc = Rational::zero();
    for (i, x) in events.iter().enumerate() {
        acc += m.atom(x);
        if acc >= *c {
            return x.clone();
        }
        if let Some(next) = events.get(i + 1) {
            let d = m.density().at(x);
            let gain = &d * (next - x);
            if &acc + &gain >= *c {
                return x + (c - &acc) / d;
            }
            acc += gain;
        }
    }
    c.clone()
}

/// `sup { y in [0, 1] : mass_before(y) <= c }` for `c >= 0`.
fn last_within(m: &ValueMeasure, c: &Rational) -> Rational {
    let events = m.events();
    let mut acc = Rational::zero();
    for (i, x) in events.iter().enumerate() {
        acc += m.atom(x);
        if acc > *c {
            return x.clone();
        }
        if let Some(next) = events.get(i + 1) {
            let d = m.density().at(x);
            let gain = &d * (next - x);
            if &acc + &gain > *c {
                return x + (c - &acc) / d;
            }
            acc += gain;
        }
    }
    Rational::one()
}

fn mass_pwl(m: &ValueMeasure, end: &Rational) -> Pwl {
    let mut knots: BTreeSet<Rational> = m.events().into_iter().collect();
    knots.insert(end.clone());
    Pwl::from_fn(knots, |y| mass_before_ext(m, y))
}

fn inverse_pwl(m: &ValueMeasure, end: &Rational) -> Pwl {
    let mut knots = BTreeSet::new();
    knots.insert(Rational::zero());
    knots.insert(end.clone());
    for x in m.events() {
        let before = m.mass_before(&x);
        knots.insert(&before + m.atom(&x));
        knots.insert(before);
    }
    Pwl::from_fn(knots, |c| first_reaching_ext(m, c))
}

/// Residual of the leftmost sweep as a function of `t` on `[0, 1]`.
fn residual_pwl(ms: &[ValueMeasure], order: &[usize]) -> Pwl {
    let n = order.len();
    // Cuts on the virtual cake stay below n + 1.
    let end = Rational::from_integer((n as i64 + 2).into());
    let unit: BTreeSet<Rational> = [Rational::zero(), Rational::one()].into_iter().collect();
    let mut cut = Pwl::from_fn(unit, |_| Rational::zero());
    for &player in &order[..n - 1] {
        let m = &ms[player];
        let mass = cut.compose_into(&mass_pwl(m, &end));
        let level = Pwl::from_fn(mass.knots().iter().cloned().collect(), |t| mass.eval(t) + t);
        cut = level.compose_into(&inverse_pwl(m, &end));
    }
    let last = cut.compose_into(&mass_pwl(&ms[order[n - 1]], &end));
    Pwl::from_fn(last.knots().iter().cloned().collect(), |t| {
        Rational::one() - last.eval(t) - t
    })
}

fn leftmost_cuts(ms: &[ValueMeasure], order: &[usize], t: &Rational) -> Vec<Rational> {
    let mut x = Rational::zero();
    let mut cuts = Vec::with_capacity(order.len() - 1);
    for &player in &order[..order.len() - 1] {
        let m = &ms[player];
        let next = first_reaching_ext(m, &(mass_before_ext(m, &x) + t));
        if next > x {
            x = next;
        }
        cuts.push(x.clone());
    }
    cuts
}

/// Searches the cut vectors with value exactly `t` for every piece when the
/// leftmost sweep overshoots a plateau: propagates the interval of admissible
/// positions for each cut, then backtracks leftmost-first from the last cut.
fn plateau_repair(ms: &[ValueMeasure], order: &[usize], t: &Rational) -> Option<Vec<Rational>> {
    let n = order.len();
    let one = Rational::one();
    let mut bounds: Vec<(Rational, Rational)> = Vec::with_capacity(n - 1);
    let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
    for &player in &order[..n - 1] {
        let m = &ms[player];
        let new_lo = first_reaching_ext(m, &(m.mass_before(&lo) + t));
        let new_hi = last_within(m, &(m.mass_before(&hi) + t));
        if new_lo > one || new_lo > new_hi {
            return None;
        }
        lo = new_lo;
        hi = new_hi;
        bounds.push((lo.clone(), hi.clone()));
    }
    let last = &ms[order[n - 1]];
    let target = &one - t;
    let a = core::cmp::max(lo, first_reaching_ext(last, &target));
    if a > hi || last.mass_before(&a) != target {
        return None;
    }
    let mut cuts = vec![Rational::zero(); n - 1];
    cuts[n - 2] = a;
    for k in (1..n - 1).rev() {
        let m = &ms[order[k]];
        let target = m.mass_before(&cuts[k]) - t;
        let (l, u) = &bounds[k - 1];
        let b = core::cmp::max(l.clone(), first_reaching_ext(m, &target));
        if b > *u {
            return None;
        }
        cuts[k - 1] = b;
    }
    Some(cuts)
}

fn realize(
    ms: &[ValueMeasure],
    order: &[usize],
    cuts: &[Rational],
) -> Option<(Allocation, Vec<Rational>)> {
    let in_range = cuts
        .iter()
        .all(|c| *c >= Rational::zero() && *c <= Rational::one());
    if !in_range || cuts.windows(2).any(|w| w[0] > w[1]) {
        return None;
    }
    let allocation = Allocation::from_cuts(cuts, order);
    let payoffs = ms
        .iter()
        .zip(&allocation.portions)
        .map(|(m, p)| m.value(p))
        .collect();
    Some((allocation, payoffs))
}

fn check_order(n: usize, order: &[usize]) -> Result<(), ProcedureError> {
    if n < 2 {
        return Err(ProcedureError::InvalidInput(format!(
            "equitability needs at least 2 players, got {n}"
        )));
    }
    let mut seen = vec![false; n];
    let valid = order.len() == n
        && order
            .iter()
            .all(|&p| p < n && !core::mem::replace(&mut seen[p], true));
    if valid {
        Ok(())
    } else {
        Err(ProcedureError::InvalidInput(format!(
            "order {order:?} is not a permutation of the {n} players"
        )))
    }
}

/// Equal-value contiguous pieces, assigned left to right in `order`.
pub fn equitability_procedure(
    ms: &[ValueMeasure],
    order: &[usize],
) -> Result<EpResult, ProcedureError> {
    check_order(ms.len(), order)?;
    let residual = residual_pwl(ms, order);
    let t = residual.last_nonnegative();

    let leftmost = leftmost_cuts(ms, order, &t);
    let candidates = [Some(leftmost.clone()), plateau_repair(ms, order, &t)];
    for cuts in candidates.into_iter().flatten() {
        if let Some((allocation, payoffs)) = realize(ms, order, &cuts) {
            if payoffs.iter().all(|p| *p == t) {
                return Ok(EpResult {
                    order: order.to_vec(),
                    cuts,
                    common_value: t,
                    allocation,
                    payoffs,
                });
            }
        }
    }

    let (left, value, right) = residual.limits(&t);
    let one = Rational::one();
    if value.is_zero() && leftmost.iter().all(|c| *c <= one) {
        let mut start = Rational::zero();
        for (k, cut) in leftmost.iter().enumerate() {
            let m = &ms[order[k]];
            let without_atom = m.mass_before(cut) - m.mass_before(&start);
            if without_atom != t {
                return Err(ProcedureError::NoSolution(Unsolvable::PieceSkips {
                    t,
                    piece: k,
                    player: order[k],
                    cut: cut.clone(),
                    with_atom: &without_atom + m.atom(cut),
                    without_atom,
                }));
            }
            start = cut.clone();
        }
    }
    let (left, right) = if value >= Rational::zero() {
        (value, right)
    } else {
        (left, value)
    };
    Err(ProcedureError::NoSolution(Unsolvable::ResidualJump {
        t,
        left,
        right,
    }))
}

/// Runs the equitability procedure for every order of the players and keeps
/// the solvable one with the largest common value; ties go to the
/// lexicographically smallest order.
pub fn ep_best_order(ms: &[ValueMeasure]) -> Result<EpResult, ProcedureError> {
    let n = ms.len();
    if n > MAX_BEST_ORDER_PLAYERS {
        return Err(ProcedureError::InvalidInput(format!(
            "order search is limited to {MAX_BEST_ORDER_PLAYERS} players, got {n}"
        )));
    }
    check_order(n, &(0..n).collect::<Vec<_>>())?;
    let mut best: Option<EpResult> = None;
    let mut first_error = None;
    for order in permutations(n) {
        match equitability_procedure(ms, &order) {
            Ok(r) => {
                if best
                    .as_ref()
                    .is_none_or(|b| r.common_value > b.common_value)
                {
                    best = Some(r);
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_error.expect("at least one order was tried"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::IntervalSet;
    use crate::rational::{int, one, rat, zero};

    fn outer_quarters() -> ValueMeasure {
        ValueMeasure::from_density(
            vec![zero(), rat(1, 4), rat(3, 4), one()],
            vec![int(2), zero(), int(2)],
        )
        .unwrap()
    }

    fn front_loaded() -> ValueMeasure {
        ValueMeasure::from_density(vec![zero(), rat(1, 4), one()], vec![int(4), zero()]).unwrap()
    }

    #[test]
    fn three_uniform_players() {
        let u = ValueMeasure::uniform();
        let r = equitability_procedure(&[u.clone(), u.clone(), u], &[0, 1, 2]).unwrap();
        assert_eq!(r.cuts, vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(r.common_value, rat(1, 3));
        assert_eq!(r.payoffs, vec![rat(1, 3); 3]);
    }

    #[test]
    fn outer_quarters_pair_both_orders() {
        let ms = [ValueMeasure::uniform(), outer_quarters()];
        let r = equitability_procedure(&ms, &[0, 1]).unwrap();
        assert_eq!(
            (r.cuts.clone(), r.common_value.clone()),
            (vec![rat(1, 2)], rat(1, 2))
        );
        assert_eq!(r.payoffs, vec![rat(1, 2), rat(1, 2)]);
        // the reversed order needs a cut inside player 2's plateau
        let r = equitability_procedure(&ms, &[1, 0]).unwrap();
        assert_eq!((r.cuts, r.common_value), (vec![rat(1, 2)], rat(1, 2)));
        let best = ep_best_order(&ms).unwrap();
        assert_eq!(best.order, vec![0, 1]);
        assert_eq!(best.common_value, rat(1, 2));
    }

    #[test]
    fn best_order_prefers_larger_common_value() {
        let ms = [ValueMeasure::uniform(), front_loaded()];
        let id = equitability_procedure(&ms, &[0, 1]).unwrap();
        assert_eq!((id.cuts, id.common_value), (vec![rat(1, 5)], rat(1, 5)));
        let best = ep_best_order(&ms).unwrap();
        assert_eq!(best.order, vec![1, 0]);
        assert_eq!(best.cuts, vec![rat(1, 5)]);
        assert_eq!(best.common_value, rat(4, 5));
        assert_eq!(
            best.allocation.portions[1],
            IntervalSet::half_open(zero(), rat(1, 5))
        );
    }

    #[test]
    fn atom_against_uniform_has_no_solution() {
        let ms = [
            ValueMeasure::point_mass(rat(1, 2)).unwrap(),
            ValueMeasure::uniform(),
        ];
        let err = equitability_procedure(&ms, &[0, 1]).unwrap_err();
        assert_eq!(
            err,
            ProcedureError::NoSolution(Unsolvable::PieceSkips {
                t: rat(1, 2),
                piece: 0,
                player: 0,
                cut: rat(1, 2),
                without_atom: zero(),
                with_atom: one(),
            })
        );
        // Reversed, the uniform player moves first and the atom's owner gets
        // either everything or nothing.
        let err = equitability_procedure(&ms, &[1, 0]).unwrap_err();
        assert!(matches!(
            err,
            ProcedureError::NoSolution(Unsolvable::ResidualJump { .. })
        ));
        assert!(ep_best_order(&ms).is_err());
    }

    #[test]
    fn rejects_bad_orders() {
        let u = ValueMeasure::uniform();
        let ms = [u.clone(), u.clone()];
        assert!(matches!(
            equitability_procedure(&ms, &[0, 0]),
            Err(ProcedureError::InvalidInput(_))
        ));
        assert!(matches!(
            equitability_procedure(&ms[..1], &[0]),
            Err(ProcedureError::InvalidInput(_))
        ));
        assert!(matches!(
            ep_best_order(&vec![u; 9]),
            Err(ProcedureError::InvalidInput(_))
        ));
    }

    #[test]
    fn residual_matches_direct_sweep() {
        let ms = [front_loaded(), outer_quarters(), ValueMeasure::uniform()];
        let order = [2, 0, 1];
        let residual = residual_pwl(&ms, &order);
        for k in 0..=24 {
            let t = rat(k, 24);
            let cuts = leftmost_cuts(&ms, &order, &t);
            let last = cuts.last().unwrap();
            let direct = one() - mass_before_ext(&ms[order[2]], last) - &t;
            assert_eq!(residual.eval(&t), direct, "t = {t}");
        }
    }

    #[test]
    fn inverse_helpers() {
        let m = outer_quarters();
        assert_eq!(first_reaching_ext(&m, &rat(1, 2)), rat(1, 4));
        assert_eq!(last_within(&m, &rat(1, 2)), rat(3, 4));
        assert_eq!(first_reaching_ext(&m, &rat(3, 2)), rat(3, 2));
        let atom = ValueMeasure::point_mass(rat(1, 2)).unwrap();
        assert_eq!(first_reaching_ext(&atom, &rat(1, 3)), rat(1, 2));
        assert_eq!(last_within(&atom, &rat(1, 3)), rat(1, 2));
        assert_eq!(last_within(&atom, &one()), one());
    }
}
