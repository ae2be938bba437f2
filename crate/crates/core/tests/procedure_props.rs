mod common;

use cake_core::lp::{LinearProgram, LpOutcome, Relation};
use cake_core::measure::QuantileResult;
use cake_core::{
    check_fairness, common_refinement, cut_and_choose, equitability_procedure, rat,
    surplus_procedure, ProcedureError, Rational, ValueMeasure,
};
use common::{atomless, integrate, with_atoms};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn integrated_payoffs(ms: &[ValueMeasure], a: &cake_core::Allocation) -> Vec<Rational> {
    ms.iter()
        .zip(&a.portions)
        .map(|(m, p)| integrate(m, p))
        .collect()
}

/// Largest common value over all contiguous allocations in `order`, by one
/// linear program per placement of the cuts into closed refinement cells.
/// Atomless measures only: mass to the left of a cut is then affine on
/// every closed cell.
fn ep_oracle(ms: &[ValueMeasure], order: &[usize]) -> Option<Rational> {
    let n = ms.len();
    let r = common_refinement(ms);
    let cells = r.cell_count();
    let mut best: Option<Rational> = None;
    let mut place = vec![0usize; n - 1];
    loop {
        let mut lp = LinearProgram::new(n);
        lp.objective[n - 1] = Rational::one();
        #[allow(clippy::needless_range_loop)]
        for k in 0..n - 1 {
            let (a, b) = r.cell(place[k]);
            lp.add_terms(&[(k, Rational::one())], Relation::Ge, a.clone());
            lp.add_terms(&[(k, Rational::one())], Relation::Le, b.clone());
            if k + 1 < n - 1 {
                lp.add_terms(
                    &[(k, Rational::one()), (k + 1, -Rational::one())],
                    Relation::Le,
                    Rational::zero(),
                );
            }
        }
        // mass left of cut k for player i: m0 + d * (x - b)
        let left = |i: usize, k: usize| -> (Rational, Rational) {
            let c = place[k];
            let (b, _) = r.cell(c);
            let d = r.densities[c][i].clone();
            (ms[i].mass_before(b) - &d * b, d)
        };
        for (k, &i) in order.iter().enumerate() {
            let mut terms = vec![(n - 1, -Rational::one())];
            let mut constant = Rational::zero();
            if k < n - 1 {
                let (c, s) = left(i, k);
                terms.push((k, s));
                constant += c;
            } else {
                constant += Rational::one();
            }
            if k > 0 {
                let (c, s) = left(i, k - 1);
                terms.push((k - 1, -s));
                constant -= c;
            }
            lp.add_terms(&terms, Relation::Eq, -constant);
        }
        if let LpOutcome::Optimal { value, .. } = lp.maximize() {
            if best.as_ref().is_none_or(|b| value > *b) {
                best = Some(value);
            }
        }
        // next nondecreasing placement
        let mut k = n - 1;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if place[k] + 1 < cells {
                let v = place[k] + 1;
                for p in place[k..].iter_mut() {
                    *p = v;
                }
                break;
            }
        }
    }
}

fn permutation() -> impl Strategy<Value = Vec<usize>> {
    Just(vec![0usize, 1, 2]).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cut_and_choose_outputs(cutter in with_atoms(), chooser in with_atoms()) {
        let ms = [cutter, chooser];
        let r = cut_and_choose(&ms[0], &ms[1]);
        r.allocation.check_partition(&ms).unwrap();
        prop_assert_eq!(&r.payoffs, &integrated_payoffs(&ms, &r.allocation));
        prop_assert!(r.payoffs[1] >= rat(1, 2));
        if !matches!(r.cutter_median, QuantileResult::AtJump(_)) {
            prop_assert_eq!(r.payoffs[0].clone(), rat(1, 2));
            prop_assert!(check_fairness(&r.allocation, &ms).envy_free);
        }
    }

    #[test]
    fn cut_and_choose_is_envy_free_without_atoms(cutter in atomless(), chooser in atomless()) {
        let ms = [cutter, chooser];
        let r = cut_and_choose(&ms[0], &ms[1]);
        let f = check_fairness(&r.allocation, &ms);
        prop_assert!(f.envy_free && f.proportional);
    }

    #[test]
    fn surplus_outputs(f1 in with_atoms(), f2 in with_atoms()) {
        let ms = [f1, f2];
        match surplus_procedure(&ms[0], &ms[1]) {
            Ok(r) => {
                r.allocation.check_partition(&ms).unwrap();
                prop_assert_eq!(&r.payoffs, &integrated_payoffs(&ms, &r.allocation));
                let (a, b) = &r.surplus;
                prop_assert!(a <= &r.cut && &r.cut <= b);
                if let [Some(p), Some(q)] = &r.surplus_proportions {
                    prop_assert_eq!(p, q);
                    // proportion of own surplus value, recomputed by integration
                    let l = r.left_player;
                    let own = cake_core::IntervalSet::half_open(a.clone(), r.cut.clone());
                    prop_assert_eq!(integrate(&ms[l], &own) / &r.surplus_values[l], p.clone());
                }
                if ms.iter().all(ValueMeasure::is_atomless) {
                    prop_assert!(r.payoffs.iter().all(|p| *p >= rat(1, 2)));
                }
            }
            Err(ProcedureError::NonUniqueMedian { player, lo, hi }) => {
                prop_assert!(matches!(ms[player].median(), QuantileResult::FlatInterval(l, h) if l == lo && h == hi));
            }
            Err(ProcedureError::NoSolution(_)) => {
                prop_assert!(ms.iter().any(|m| !m.is_atomless()));
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn equitability_with_atoms_is_exact_or_refused(ms in prop::collection::vec(with_atoms(), 2..4)) {
        let order: Vec<usize> = (0..ms.len()).collect();
        match equitability_procedure(&ms, &order) {
            Ok(r) => {
                r.allocation.check_partition(&ms).unwrap();
                prop_assert!(r.payoffs.iter().all(|p| *p == r.common_value));
                prop_assert_eq!(&r.payoffs, &integrated_payoffs(&ms, &r.allocation));
            }
            Err(e) => prop_assert!(matches!(e, ProcedureError::NoSolution(_))),
        }
    }

    #[test]
    fn equitability_pairs_match_oracle(ms in prop::collection::vec(atomless(), 2), flip in any::<bool>()) {
        let order = if flip { vec![1, 0] } else { vec![0, 1] };
        let r = equitability_procedure(&ms, &order).unwrap();
        prop_assert_eq!(Some(r.common_value.clone()), ep_oracle(&ms, &order));
        prop_assert_eq!(&r.payoffs, &integrated_payoffs(&ms, &r.allocation));
    }

    #[test]
    fn equitability_triples_match_oracle(ms in prop::collection::vec(atomless(), 3), order in permutation()) {
        let r = equitability_procedure(&ms, &order).unwrap();
        prop_assert_eq!(Some(r.common_value.clone()), ep_oracle(&ms, &order));
        r.allocation.check_partition(&ms).unwrap();
        prop_assert!(integrated_payoffs(&ms, &r.allocation).iter().all(|p| *p == r.common_value));
    }
}
