mod common;

use cake_core::measure::QuantileResult;
use cake_core::{
    common_refinement, project_2d, rat, Axis, IntervalSet, Rational, Rect2DMeasure, ValueMeasure,
};
use common::{atomless, grid_rational, integrate, with_atoms};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn sorted_pair(a: Rational, b: Rational) -> (Rational, Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn normalization(m in with_atoms()) {
        prop_assert_eq!(m.value(&IntervalSet::whole()), Rational::one());
        prop_assert_eq!(integrate(&m, &IntervalSet::whole()), Rational::one());
    }

    #[test]
    fn additivity_of_adjacent_pieces(m in with_atoms(), a in grid_rational(), b in grid_rational()) {
        let (a, b) = sorted_pair(a, b);
        let left = IntervalSet::half_open(Rational::zero(), a.clone());
        let mid = IntervalSet::half_open(a.clone(), b.clone());
        let right = IntervalSet::to_end(b);
        let sum = m.value(&left) + m.value(&mid) + m.value(&right);
        prop_assert_eq!(sum, Rational::one());
        let joined = left.union(&right);
        prop_assert_eq!(m.value(&joined), m.value(&left) + m.value(&right));
    }

    #[test]
    fn value_matches_sampling_oracle(m in with_atoms(), a in grid_rational(), b in grid_rational(), p in grid_rational()) {
        let (a, b) = sorted_pair(a, b);
        let portion = IntervalSet::half_open(a, b).with_point(p);
        prop_assert_eq!(m.value(&portion), integrate(&m, &portion));
    }

    #[test]
    fn cdf_shape(m in with_atoms(), a in grid_rational(), b in grid_rational()) {
        let (a, b) = sorted_pair(a, b);
        prop_assert!(m.cdf(&a).unwrap() <= m.cdf(&b).unwrap());
        prop_assert!(m.cdf(&Rational::zero()).unwrap() >= Rational::zero());
        prop_assert_eq!(m.cdf(&Rational::one()).unwrap(), Rational::one());
        // right-continuity at every event, left limit equals mass_before
        let eps = rat(1, 1 << 20);
        for x in m.events() {
            let cdf = m.cdf(&x).unwrap();
            if x < Rational::one() {
                let just_right = m.cdf(&(&x + &eps)).unwrap();
                let d = m.density().at(&x);
                prop_assert_eq!(just_right - &cdf, d * &eps);
            }
            prop_assert_eq!(&cdf - m.mass_before(&x), m.atom(&x));
        }
    }

    #[test]
    fn quantile_consistency(m in with_atoms(), k in 1i64..24) {
        let p = rat(k, 24);
        let grid: Vec<Rational> = (0..=48).map(|j| rat(j, 48)).chain(m.events()).collect();
        match m.quantile(&p).unwrap() {
            QuantileResult::UniquePoint(x) => {
                prop_assert_eq!(m.cdf(&x).unwrap(), p.clone());
                for y in grid.iter().filter(|y| **y < x) {
                    prop_assert!(m.cdf(y).unwrap() < p);
                }
                for y in grid.iter().filter(|y| **y > x) {
                    prop_assert!(m.cdf(y).unwrap() > p);
                }
            }
            QuantileResult::FlatInterval(lo, hi) => {
                prop_assert!(lo < hi);
                for y in grid.iter().filter(|y| lo <= **y && **y < hi) {
                    prop_assert_eq!(m.cdf(y).unwrap(), p.clone());
                }
                prop_assert!(m.cdf(&hi).unwrap() > p || m.density().at(&hi) > Rational::zero());
            }
            QuantileResult::AtJump(x) => {
                prop_assert!(m.mass_before(&x) <= p);
                prop_assert!(m.cdf(&x).unwrap() > p);
            }
        }
    }

    #[test]
    fn refinement_conservation(ms in prop::collection::vec(with_atoms(), 1..4)) {
        let r = common_refinement(&ms);
        for i in 0..ms.len() {
            let cells = (0..r.cell_count()).fold(Rational::zero(), |acc, c| acc + r.cell_value(c, i));
            let atoms = r.atom_masses.iter().fold(Rational::zero(), |acc, a| acc + &a[i]);
            prop_assert_eq!(cells + atoms, Rational::one());
        }
    }

    #[test]
    fn projection_is_a_measure(
        xs in prop::collection::btree_set(1i64..6, 0..3),
        ys in prop::collection::btree_set(1i64..6, 0..3),
        w in prop::collection::vec(0i64..5, 16),
        axis in prop_oneof![Just(Axis::X), Just(Axis::Y)],
    ) {
        let bps = |s: &std::collections::BTreeSet<i64>| -> Vec<Rational> {
            let mut b = vec![Rational::zero()];
            b.extend(s.iter().map(|&k| rat(k, 6)));
            b.push(Rational::one());
            b
        };
        let (xb, yb) = (bps(&xs), bps(&ys));
        let (nx, ny) = (xb.len() - 1, yb.len() - 1);
        let raw: Vec<Vec<Rational>> = (0..nx)
            .map(|i| (0..ny).map(|j| rat(w[i * 4 + j], 1)).collect())
            .collect();
        let mass = (0..nx).fold(Rational::zero(), |acc, i| {
            (0..ny).fold(acc, |acc, j| acc + &raw[i][j] * (&xb[i + 1] - &xb[i]) * (&yb[j + 1] - &yb[j]))
        });
        prop_assume!(!mass.is_zero());
        let cells = raw.iter().map(|row| row.iter().map(|v| v / &mass).collect()).collect();
        let sq = Rect2DMeasure::new(xb, yb, cells).unwrap();
        let m = project_2d(&sq, axis);
        prop_assert!(m.is_atomless());
        prop_assert_eq!(m.value(&IntervalSet::whole()), Rational::one());
        prop_assert!(ValueMeasure::new(m.density().clone(), Default::default()).is_ok());
    }

    #[test]
    fn atomless_measures_have_no_jump_medians(m in atomless()) {
        prop_assert!(!matches!(m.median(), QuantileResult::AtJump(_)));
    }
}
