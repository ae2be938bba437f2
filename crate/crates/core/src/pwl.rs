//! Piecewise-affine functions of one variable with arbitrary jumps.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Knots `t_0 < ... < t_m`, the value at every knot, and on every open
/// segment `(t_i, t_{i+1})` the right limit at `t_i` and the slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Pwl {
    knots: Vec<Rational>,
    at: Vec<Rational>,
    segs: Vec<(Rational, Rational)>,
}

impl Pwl {
    /// Tabulates `f`, which must be affine on every open segment between
    /// consecutive `knots`.
    pub fn from_fn(knots: BTreeSet<Rational>, f: impl Fn(&Rational) -> Rational) -> Self {
        let knots: Vec<Rational> = knots.into_iter().collect();
        assert!(knots.len() >= 2, "a domain needs two knots");
        let at = knots.iter().map(&f).collect();
        let three = Rational::from_integer(3.into());
        let segs = knots
            .windows(2)
            .map(|w| {
                let third = (&w[1] - &w[0]) / &three;
                let p = &w[0] + &third;
                let q = &p + &third;
                let (fp, fq) = (f(&p), f(&q));
                let slope = (&fq - &fp) / &third;
                (&fp - &slope * &third, slope)
            })
            .collect();
        Self { knots, at, segs }
    }

    pub fn knots(&self) -> &[Rational] {
        &self.knots
    }

    fn segment_of(&self, t: &Rational) -> Result<usize, usize> {
        // Ok(i): t is knot i. Err(i): t lies in open segment i.
        match self.knots.binary_search(t) {
            Ok(i) => Ok(i),
            Err(0) => Err(0),
            Err(i) if i >= self.knots.len() => Err(self.segs.len() - 1),
            Err(i) => Err(i - 1),
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        match self.segment_of(t) {
            Ok(i) => self.at[i].clone(),
            Err(i) => {
                let (v, s) = &self.segs[i];
                v + s * (t - &self.knots[i])
            }
        }
    }

    /// `(left limit, value, right limit)` at `t`; one-sided limits at the
    /// domain ends equal the value.
    pub fn limits(&self, t: &Rational) -> (Rational, Rational, Rational) {
        match self.segment_of(t) {
            Ok(i) => {
                let value = self.at[i].clone();
                let left = if i == 0 {
                    value.clone()
                } else {
                    let (v, s) = &self.segs[i - 1];
                    v + s * (&self.knots[i] - &self.knots[i - 1])
                };
                let right = self
                    .segs
                    .get(i)
                    .map_or_else(|| value.clone(), |(v, _)| v.clone());
                (left, value, right)
            }
            Err(_) => {
                let v = self.eval(t);
                (v.clone(), v.clone(), v)
            }
        }
    }

    /// Knots of `self` plus every point where an open segment crosses one of
    /// `levels`.
    pub fn preimage_knots(&self, levels: &[Rational]) -> BTreeSet<Rational> {
        let mut out: BTreeSet<Rational> = self.knots.iter().cloned().collect();
        for (i, (v0, s)) in self.segs.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let v1 = v0 + s * (&self.knots[i + 1] - &self.knots[i]);
            let (lo, hi) = if v0 < &v1 { (v0, &v1) } else { (&v1, v0) };
            for level in levels.iter().filter(|l| *l > lo && *l < hi) {
                out.insert(&self.knots[i] + (level - v0) / s);
            }
        }
        out
    }

    /// `outer(self(t))`.
    pub fn compose_into(&self, outer: &Pwl) -> Pwl {
        Pwl::from_fn(self.preimage_knots(&outer.knots), |t| {
            outer.eval(&self.eval(t))
        })
    }

    /// `sup { t : self(t) >= 0 }` for a function that starts nonnegative and
    /// changes sign at most once (from nonnegative to negative).
    pub fn last_nonnegative(&self) -> Rational {
        assert!(!self.at[0].is_negative(), "function must start nonnegative");
        for (i, (v0, s)) in self.segs.iter().enumerate() {
            if self.at[i].is_negative() || v0.is_negative() {
                return self.knots[i].clone();
            }
            let v1 = v0 + s * (&self.knots[i + 1] - &self.knots[i]);
            if v1.is_negative() {
                return &self.knots[i] - v0 / s;
            }
        }
        self.knots[self.knots.len() - 1].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, one, rat, zero};

    fn knots(ts: &[Rational]) -> BTreeSet<Rational> {
        ts.iter().cloned().collect()
    }

    // floor-like step with a ramp: 0 on [0,1/2], jumps to 1 right after 1/2,
    // then slope 2.
    fn step() -> Pwl {
        Pwl::from_fn(knots(&[zero(), rat(1, 2), one()]), |t| {
            if *t <= rat(1, 2) {
                zero()
            } else {
                one() + int(2) * (t - rat(1, 2))
            }
        })
    }

    #[test]
    fn tabulates_and_evaluates() {
        let f = step();
        assert_eq!(f.eval(&rat(1, 4)), zero());
        assert_eq!(f.eval(&rat(1, 2)), zero());
        assert_eq!(f.eval(&rat(3, 4)), rat(3, 2));
        assert_eq!(f.limits(&rat(1, 2)), (zero(), zero(), one()));
    }

    #[test]
    fn composition_inserts_preimage_knots() {
        let inner = Pwl::from_fn(knots(&[zero(), one()]), |t| t.clone());
        let outer = step();
        let h = inner.compose_into(&outer);
        assert_eq!(h.knots(), &[zero(), rat(1, 2), one()]);
        let doubled = Pwl::from_fn(knots(&[zero(), rat(1, 2)]), |t| int(2) * t);
        let g = doubled.compose_into(&outer);
        assert_eq!(g.knots(), &[zero(), rat(1, 4), rat(1, 2)]);
        assert_eq!(g.eval(&rat(3, 8)), rat(3, 2));
    }

    #[test]
    fn sign_change_location() {
        let f = Pwl::from_fn(knots(&[zero(), one()]), |t| rat(1, 3) - t);
        assert_eq!(f.last_nonnegative(), rat(1, 3));
        let jump = Pwl::from_fn(knots(&[zero(), rat(1, 2), one()]), |t| {
            if *t <= rat(1, 2) {
                one()
            } else {
                -one()
            }
        });
        assert_eq!(jump.last_nonnegative(), rat(1, 2));
    }
}
