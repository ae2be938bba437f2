//! Portions of the cake and allocations of portions to players.
//!
//! A portion is a finite union of intervals `[a, b)` where an interval ending
//! at 1 also contains the point 1. Point masses make single points matter, so
//! a portion also carries explicit point corrections: points it owns outside
//! its intervals, and points inside its intervals that belong to someone else.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::measure::ValueMeasure;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AllocationError {
    #[error("interval [{0}, {1}) is not inside [0, 1]")]
    BadInterval(Rational, Rational),
    #[error("point {0} is not inside [0, 1]")]
    BadPoint(Rational),
    #[error("no portion covers the cake at {0}")]
    Gap(Rational),
    #[error("portions overlap at {0}")]
    Overlap(Rational),
    #[error("point {at} is owned by {owners} players")]
    PointOwners { at: Rational, owners: usize },
    #[error("allocation has {got} portions but there are {expected} players")]
    PlayerCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntervalSet {
    pieces: Vec<(Rational, Rational)>,
    extra: BTreeSet<Rational>,
    excluded: BTreeSet<Rational>,
}

fn in_unit(x: &Rational) -> bool {
    *x >= Rational::zero() && *x <= Rational::one()
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The whole cake `[0, 1]`.
    pub fn whole() -> Self {
        Self::to_end(Rational::zero())
    }

    /// Builds a portion from intervals under the closing-at-1 convention.
    /// Intervals may touch or overlap; they are merged.
    pub fn from_pieces<I>(pieces: I) -> Result<Self, AllocationError>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut set = Self::empty();
        for (a, b) in pieces {
            if !in_unit(&a) || !in_unit(&b) || a > b {
                return Err(AllocationError::BadInterval(a, b));
            }
            set.pieces.push((a, b));
        }
        set.normalize();
        Ok(set)
    }

    /// Exactly `[a, b)`, open at `b` even when `b == 1`.
    pub fn half_open(a: Rational, b: Rational) -> Self {
        debug_assert!(a <= b);
        let mut set = Self::empty();
        if a < b {
            if b.is_one() {
                set.excluded.insert(b.clone());
            }
            set.pieces.push((a, b));
        }
        set.normalize();
        set
    }

    /// `[a, 1]`; the single point `{1}` when `a == 1`.
    pub fn to_end(a: Rational) -> Self {
        let mut set = Self::empty();
        if a.is_one() {
            set.extra.insert(a);
        } else {
            set.pieces.push((a, Rational::one()));
        }
        set
    }

    pub fn point(x: Rational) -> Self {
        let mut set = Self::empty();
        set.extra.insert(x);
        set
    }

    pub fn with_point(mut self, x: Rational) -> Self {
        self.excluded.remove(&x);
        if !self.in_pieces(&x) {
            self.extra.insert(x);
        }
        self
    }

    pub fn without_point(mut self, x: Rational) -> Self {
        self.extra.remove(&x);
        if self.in_pieces(&x) {
            self.excluded.insert(x);
        }
        self
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = Self::empty();
        out.pieces.extend(self.pieces.iter().cloned());
        out.pieces.extend(other.pieces.iter().cloned());
        out.extra.extend(self.extra.iter().cloned());
        out.extra.extend(other.extra.iter().cloned());
        out.normalize();
        let excluded: BTreeSet<Rational> = self
            .excluded
            .iter()
            .chain(other.excluded.iter())
            .filter(|p| !self.contains(p) && !other.contains(p))
            .cloned()
            .collect();
        out.excluded = excluded;
        out.normalize();
        out
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.extra.contains(x) || (self.in_pieces(x) && !self.excluded.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() && self.extra.is_empty()
    }

    /// Intervals `[a, b)`, sorted and merged (an interval ending at 1 is
    /// closed there unless 1 is listed in [`excluded_points`](Self::excluded_points)).
    pub fn pieces(&self) -> &[(Rational, Rational)] {
        &self.pieces
    }

    pub fn extra_points(&self) -> impl Iterator<Item = &Rational> {
        self.extra.iter()
    }

    pub fn excluded_points(&self) -> impl Iterator<Item = &Rational> {
        self.excluded.iter()
    }

    /// Lebesgue measure of the portion.
    pub fn length(&self) -> Rational {
        self.pieces
            .iter()
            .fold(Rational::zero(), |acc, (a, b)| acc + (b - a))
    }

    fn in_pieces(&self, x: &Rational) -> bool {
        self.pieces
            .iter()
            .any(|(a, b)| (a <= x && x < b) || (b.is_one() && x.is_one()))
    }

    fn normalize(&mut self) {
        self.pieces.retain(|(a, b)| a < b);
        self.pieces.sort();
        let mut merged: Vec<(Rational, Rational)> = Vec::with_capacity(self.pieces.len());
        for (a, b) in self.pieces.drain(..) {
            match merged.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => merged.push((a, b)),
            }
        }
        self.pieces = merged;

        let extra = core::mem::take(&mut self.extra);
        for p in extra {
            if self.in_pieces(&p) {
                self.excluded.remove(&p);
            } else {
                self.extra.insert(p);
            }
        }
        let excluded = core::mem::take(&mut self.excluded);
        self.excluded = excluded.into_iter().filter(|p| self.in_pieces(p)).collect();
    }

    fn special_points(&self) -> impl Iterator<Item = &Rational> {
        self.pieces
            .iter()
            .flat_map(|(a, b)| [a, b])
            .chain(self.extra.iter())
            .chain(self.excluded.iter())
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if !core::mem::take(&mut first) {
                f.write_str(" u ")?;
            }
            Ok::<(), fmt::Error>(())
        };
        for (a, b) in &self.pieces {
            sep(f)?;
            if b.is_one() && !self.excluded.contains(b) {
                write!(f, "[{a}, {b}]")?;
            } else {
                write!(f, "[{a}, {b})")?;
            }
        }
        for p in &self.extra {
            sep(f)?;
            write!(f, "{{{p}}}")?;
        }
        for p in self.excluded.iter().filter(|p| !p.is_one()) {
            write!(f, " \\ {{{p}}}")?;
        }
        Ok(())
    }
}

/// One portion per player, indexed by player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub portions: Vec<IntervalSet>,
}

impl Allocation {
    pub fn new(portions: Vec<IntervalSet>) -> Self {
        Self { portions }
    }

    /// Contiguous allocation from nondecreasing cuts `x_1 <= ... <= x_{n-1}`.
    /// Piece `k` (left to right) goes to player `order[k]`. A point sitting
    /// on a cut belongs to the piece on its right.
    pub fn from_cuts(cuts: &[Rational], order: &[usize]) -> Self {
        let n = order.len();
        assert_eq!(cuts.len() + 1, n, "need n - 1 cuts for n pieces");
        let mut portions = alloc::vec![IntervalSet::empty(); n];
        let mut left = Rational::zero();
        for (k, &player) in order.iter().enumerate() {
            let piece = if k + 1 < n {
                IntervalSet::half_open(left.clone(), cuts[k].clone())
            } else {
                IntervalSet::to_end(left.clone())
            };
            portions[player] = portions[player].union(&piece);
            if k + 1 < n {
                left = cuts[k].clone();
            }
        }
        Self { portions }
    }

    pub fn players(&self) -> usize {
        self.portions.len()
    }

    /// Checks that the portions partition `[0, 1]` and that every atom of
    /// every measure has exactly one owner.
    pub fn check_partition(&self, measures: &[ValueMeasure]) -> Result<(), AllocationError> {
        if !measures.is_empty() && measures.len() != self.portions.len() {
            return Err(AllocationError::PlayerCount {
                expected: measures.len(),
                got: self.portions.len(),
            });
        }
        let mut spans: Vec<&(Rational, Rational)> =
            self.portions.iter().flat_map(|p| p.pieces.iter()).collect();
        spans.sort();
        let mut pos = Rational::zero();
        for (a, b) in spans {
            if *a > pos {
                return Err(AllocationError::Gap(pos));
            }
            if *a < pos {
                return Err(AllocationError::Overlap(a.clone()));
            }
            pos = b.clone();
        }
        if !pos.is_one() {
            return Err(AllocationError::Gap(pos));
        }

        let mut points: BTreeSet<&Rational> = self
            .portions
            .iter()
            .flat_map(|p| p.special_points())
            .collect();
        for m in measures {
            points.extend(m.atoms().keys());
        }
        let zero = Rational::zero();
        let one = Rational::one();
        points.insert(&zero);
        points.insert(&one);
        for p in points {
            if !in_unit(p) {
                return Err(AllocationError::BadPoint(p.clone()));
            }
            let owners = self.portions.iter().filter(|s| s.contains(p)).count();
            if owners != 1 {
                return Err(AllocationError::PointOwners {
                    at: p.clone(),
                    owners,
                });
            }
        }
        Ok(())
    }
}
