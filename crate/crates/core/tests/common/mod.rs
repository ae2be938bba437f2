#![allow(dead_code)]

use std::collections::BTreeMap;

use cake_core::measure::PiecewiseDensity;
use cake_core::{rat, Rational, ValueMeasure};
use num_traits::{One, Zero};
use proptest::prelude::*;

pub const GRID: i64 = 12;

fn breakpoints(inner: &std::collections::BTreeSet<i64>) -> Vec<Rational> {
    let mut b = vec![Rational::zero()];
    b.extend(inner.iter().map(|&k| rat(k, GRID)));
    b.push(Rational::one());
    b
}

/// Normalizes integer weights on cells and atoms into a measure.
pub fn build(
    bps: Vec<Rational>,
    weights: &[i64],
    atoms: &BTreeMap<i64, i64>,
) -> Option<ValueMeasure> {
    let cells = bps.len() - 1;
    let raw: Vec<Rational> = weights[..cells].iter().map(|&w| rat(w, 1)).collect();
    let mass = bps
        .windows(2)
        .zip(&raw)
        .fold(Rational::zero(), |acc, (w, d)| acc + d * (&w[1] - &w[0]));
    let atom_total: i64 = atoms.values().sum();
    let total = mass + rat(atom_total, 1);
    if total.is_zero() {
        return None;
    }
    let values = raw.iter().map(|d| d / &total).collect();
    let atoms = atoms
        .iter()
        .map(|(&at, &w)| (rat(at, GRID), rat(w, 1) / &total))
        .collect();
    ValueMeasure::new(PiecewiseDensity::new(bps, values).ok()?, atoms).ok()
}

fn inner_points() -> impl Strategy<Value = std::collections::BTreeSet<i64>> {
    prop::collection::btree_set(1..GRID, 0..4)
}

pub fn atomless() -> impl Strategy<Value = ValueMeasure> {
    (inner_points(), prop::collection::vec(0i64..6, 5))
        .prop_filter_map("zero mass", |(inner, w)| {
            build(breakpoints(&inner), &w, &BTreeMap::new())
        })
}

pub fn with_atoms() -> impl Strategy<Value = ValueMeasure> {
    (
        inner_points(),
        prop::collection::vec(0i64..6, 5),
        prop::collection::btree_map(0..=GRID, 1i64..4, 0..3),
    )
        .prop_filter_map("zero mass", |(inner, w, atoms)| {
            build(breakpoints(&inner), &w, &atoms)
        })
}

/// Two atomless measures with the same null sets.
pub fn mac_pair() -> impl Strategy<Value = (ValueMeasure, ValueMeasure)> {
    (
        inner_points(),
        prop::collection::vec(any::<bool>(), 5),
        prop::collection::vec(1i64..6, 5),
        prop::collection::vec(1i64..6, 5),
    )
        .prop_filter_map("empty support", |(inner, mask, a, b)| {
            let bps = breakpoints(&inner);
            let cells = bps.len() - 1;
            if !mask[..cells].iter().any(|&m| m) {
                return None;
            }
            let pick = |v: &[i64]| -> Vec<i64> {
                v.iter()
                    .zip(&mask)
                    .map(|(&x, &m)| if m { x } else { 0 })
                    .collect()
            };
            Some((
                build(bps.clone(), &pick(&a), &BTreeMap::new())?,
                build(bps, &pick(&b), &BTreeMap::new())?,
            ))
        })
}

pub fn grid_rational() -> impl Strategy<Value = Rational> {
    (0..=24i64).prop_map(|k| rat(k, 24))
}

/// Value of a portion by midpoint sampling on every gap between the
/// portion's and the measure's special points, plus atoms by membership.
/// No sampled midpoint is ever a special point.
pub fn integrate(m: &ValueMeasure, portion: &cake_core::IntervalSet) -> Rational {
    let mut pts: std::collections::BTreeSet<Rational> =
        m.density().breakpoints().iter().cloned().collect();
    for (a, b) in portion.pieces() {
        pts.insert(a.clone());
        pts.insert(b.clone());
    }
    pts.extend(m.atoms().keys().cloned());
    pts.extend(portion.extra_points().cloned());
    pts.extend(portion.excluded_points().cloned());
    let pts: Vec<Rational> = pts.into_iter().collect();
    let two = rat(2, 1);
    let mut total = Rational::zero();
    for w in pts.windows(2) {
        let mid = (&w[0] + &w[1]) / &two;
        if portion.contains(&mid) {
            total += m.density().at(&mid) * (&w[1] - &w[0]);
        }
    }
    for (x, mass) in m.atoms() {
        if portion.contains(x) {
            total += mass;
        }
    }
    total
}
