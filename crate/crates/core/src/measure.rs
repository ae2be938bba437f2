//! Player value measures on the unit interval.
//!
//! A [`ValueMeasure`] is a piecewise-constant density plus finitely many
//! atoms (point masses), with total mass exactly one. This class is closed
//! under everything the procedures need: integration over interval unions,
//! the CDF, quantiles, and marginals of piecewise-constant densities on the
//! unit square.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::interval::IntervalSet;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("breakpoints must increase strictly from 0 to 1")]
    BadBreakpoints,
    #[error("expected {expected} density values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("negative density {0}")]
    NegativeDensity(Rational),
    #[error("atom location {0} is outside [0, 1]")]
    AtomOutOfRange(Rational),
    #[error("atom at {at} has non-positive mass {mass}")]
    AtomMass { at: Rational, mass: Rational },
    #[error("total mass is {0}, expected 1")]
    Mass(Rational),
    #[error("{0} is outside the admissible range")]
    OutOfRange(Rational),
    #[error(
        "grid has {rows}x{cols} cells but the breakpoints describe {expected_rows}x{expected_cols}"
    )]
    GridShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
}

/// Density constant on each cell `[b_k, b_{k+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseDensity {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
}

fn check_breakpoints(bps: &[Rational]) -> Result<(), MeasureError> {
    let ok = bps.len() >= 2
        && bps[0].is_zero()
        && bps[bps.len() - 1].is_one()
        && bps.windows(2).all(|w| w[0] < w[1]);
    if ok {
        Ok(())
    } else {
        Err(MeasureError::BadBreakpoints)
    }
}

impl PiecewiseDensity {
    pub fn new(breakpoints: Vec<Rational>, values: Vec<Rational>) -> Result<Self, MeasureError> {
        check_breakpoints(&breakpoints)?;
        if values.len() + 1 != breakpoints.len() {
            return Err(MeasureError::LengthMismatch {
                expected: breakpoints.len() - 1,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| **v < Rational::zero()) {
            return Err(MeasureError::NegativeDensity(v.clone()));
        }
        Ok(Self {
            breakpoints,
            values,
        })
    }

    pub fn constant(value: Rational) -> Self {
        Self {
            breakpoints: alloc::vec![Rational::zero(), Rational::one()],
            values: alloc::vec![value],
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Cells as `(left, right, density)`.
    pub fn cells(&self) -> impl Iterator<Item = (&Rational, &Rational, &Rational)> {
        self.breakpoints
            .windows(2)
            .zip(self.values.iter())
            .map(|(w, v)| (&w[0], &w[1], v))
    }

    /// Density on the cell `[b_k, b_{k+1})` containing `x`; zero at and
    /// beyond 1.
    pub fn at(&self, x: &Rational) -> Rational {
        self.cells()
            .find(|(a, b, _)| *a <= x && x < *b)
            .map(|(_, _, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Integral over `[a, b]`.
    pub fn integral(&self, a: &Rational, b: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (l, r, v) in self.cells() {
            let lo = if l > a { l } else { a };
            let hi = if r < b { r } else { b };
            if lo < hi {
                total += v * (hi - lo);
            }
        }
        total
    }

    pub fn total(&self) -> Rational {
        self.integral(&Rational::zero(), &Rational::one())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueMeasure {
    density: PiecewiseDensity,
    atoms: BTreeMap<Rational, Rational>,
}

/// Level-set classification of a CDF at a probability level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuantileResult {
    /// The CDF reaches the level at a single point and leaves it at once.
    UniquePoint(Rational),
    /// The CDF equals the level on all of `[lo, hi]`, `lo < hi`.
    FlatInterval(Rational, Rational),
    /// An atom at this location carries the CDF strictly past the level.
    AtJump(Rational),
}

impl QuantileResult {
    /// Leftmost point of the level set.
    pub fn left(&self) -> &Rational {
        match self {
            Self::UniquePoint(x) | Self::AtJump(x) | Self::FlatInterval(x, _) => x,
        }
    }
}

impl fmt::Display for QuantileResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UniquePoint(x) => write!(f, "unique point {x}"),
            Self::FlatInterval(lo, hi) => write!(f, "flat interval [{lo}, {hi}]"),
            Self::AtJump(x) => write!(f, "jump at {x}"),
        }
    }
}

impl ValueMeasure {
    pub fn new(
        density: PiecewiseDensity,
        atoms: BTreeMap<Rational, Rational>,
    ) -> Result<Self, MeasureError> {
        for (at, mass) in &atoms {
            if *at < Rational::zero() || *at > Rational::one() {
                return Err(MeasureError::AtomOutOfRange(at.clone()));
            }
            if *mass <= Rational::zero() {
                return Err(MeasureError::AtomMass {
                    at: at.clone(),
                    mass: mass.clone(),
                });
            }
        }
        let total = atoms.values().fold(density.total(), |acc, m| acc + m);
        if !total.is_one() {
            return Err(MeasureError::Mass(total));
        }
        Ok(Self { density, atoms })
    }

    pub fn uniform() -> Self {
        Self {
            density: PiecewiseDensity::constant(Rational::one()),
            atoms: BTreeMap::new(),
        }
    }

    /// Atomless measure from breakpoints and cell densities.
    pub fn from_density(
        breakpoints: Vec<Rational>,
        values: Vec<Rational>,
    ) -> Result<Self, MeasureError> {
        Self::new(PiecewiseDensity::new(breakpoints, values)?, BTreeMap::new())
    }

    /// All mass on a single point.
    pub fn point_mass(at: Rational) -> Result<Self, MeasureError> {
        let mut atoms = BTreeMap::new();
        atoms.insert(at, Rational::one());
        Self::new(PiecewiseDensity::constant(Rational::zero()), atoms)
    }

    pub fn density(&self) -> &PiecewiseDensity {
        &self.density
    }

    pub fn atoms(&self) -> &BTreeMap<Rational, Rational> {
        &self.atoms
    }

    pub fn atom(&self, at: &Rational) -> Rational {
        self.atoms.get(at).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_atomless(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Value of a portion: density integral over its intervals plus the
    /// atoms it owns.
    pub fn value(&self, portion: &IntervalSet) -> Rational {
        let continuous = portion
            .pieces()
            .iter()
            .fold(Rational::zero(), |acc, (a, b)| {
                acc + self.density.integral(a, b)
            });
        self.atoms
            .iter()
            .filter(|(at, _)| portion.contains(at))
            .fold(continuous, |acc, (_, m)| acc + m)
    }

    /// Mass of `[0, x]`, including an atom at `x`.
    pub fn cdf(&self, x: &Rational) -> Result<Rational, MeasureError> {
        if *x < Rational::zero() || *x > Rational::one() {
            return Err(MeasureError::OutOfRange(x.clone()));
        }
        Ok(self.mass_before(x) + self.atom(x))
    }

    /// Mass of `[0, x)`: the left limit of the CDF.
    pub fn mass_before(&self, x: &Rational) -> Rational {
        let continuous = self.density.integral(&Rational::zero(), x);
        self.atoms
            .range(..x.clone())
            .fold(continuous, |acc, (_, m)| acc + m)
    }

    /// Sorted breakpoints and atom locations, always including 0 and 1.
    pub fn events(&self) -> Vec<Rational> {
        let mut pts: BTreeSet<Rational> = self.density.breakpoints.iter().cloned().collect();
        pts.extend(self.atoms.keys().cloned());
        pts.into_iter().collect()
    }

    /// Classifies the level set `{x : cdf(x) = p}` (or the jump crossing
    /// `p`), for `0 < p < 1`.
    pub fn quantile(&self, p: &Rational) -> Result<QuantileResult, MeasureError> {
        if *p <= Rational::zero() || *p >= Rational::one() {
            return Err(MeasureError::OutOfRange(p.clone()));
        }
        let events = self.events();
        // Leftmost x with cdf(x) >= p.
        let mut reached = Rational::zero();
        let mut first = None;
        for (i, x) in events.iter().enumerate() {
            reached += self.atom(x);
            if reached >= *p {
                first = Some(x.clone());
                break;
            }
            if let Some(next) = events.get(i + 1) {
                let d = self.density.at(x);
                let gain = &d * (next - x);
                if &reached + &gain > *p {
                    first = Some(x + (p - &reached) / d);
                    break;
                }
                reached += gain;
            }
        }
        let lo = first.expect("total mass is one, so every level below one is reached");
        if self.cdf(&lo)? > *p {
            return Ok(QuantileResult::AtJump(lo));
        }
        // The CDF sits at p from lo until mass appears again.
        let hi = if self.density.at(&lo) > Rational::zero() {
            lo.clone()
        } else {
            events
                .iter()
                .filter(|y| **y > lo)
                .find(|y| !self.atom(y).is_zero() || self.density.at(y) > Rational::zero())
                .cloned()
                .expect("mass above the level must appear before 1")
        };
        Ok(if hi == lo {
            QuantileResult::UniquePoint(lo)
        } else {
            QuantileResult::FlatInterval(lo, hi)
        })
    }

    pub fn median(&self) -> QuantileResult {
        self.quantile(&Rational::new(1.into(), 2.into()))
            .expect("1/2 is an admissible level")
    }
}

/// Which coordinate of the unit square survives a projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// Piecewise-constant density on the unit square over a rectangular grid.
/// `cells[i][j]` is the density on `[x_i, x_{i+1}) x [y_j, y_{j+1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rect2DMeasure {
    x_breakpoints: Vec<Rational>,
    y_breakpoints: Vec<Rational>,
    cells: Vec<Vec<Rational>>,
}

impl Rect2DMeasure {
    pub fn new(
        x_breakpoints: Vec<Rational>,
        y_breakpoints: Vec<Rational>,
        cells: Vec<Vec<Rational>>,
    ) -> Result<Self, MeasureError> {
        check_breakpoints(&x_breakpoints)?;
        check_breakpoints(&y_breakpoints)?;
        let (rows, cols) = (x_breakpoints.len() - 1, y_breakpoints.len() - 1);
        if cells.len() != rows || cells.iter().any(|c| c.len() != cols) {
            return Err(MeasureError::GridShape {
                rows: cells.len(),
                cols: cells.first().map_or(0, Vec::len),
                expected_rows: rows,
                expected_cols: cols,
            });
        }
        let mut total = Rational::zero();
        for (i, row) in cells.iter().enumerate() {
            let w = &x_breakpoints[i + 1] - &x_breakpoints[i];
            for (j, v) in row.iter().enumerate() {
                if *v < Rational::zero() {
                    return Err(MeasureError::NegativeDensity(v.clone()));
                }
                total += v * &w * (&y_breakpoints[j + 1] - &y_breakpoints[j]);
            }
        }
        if !total.is_one() {
            return Err(MeasureError::Mass(total));
        }
        Ok(Self {
            x_breakpoints,
            y_breakpoints,
            cells,
        })
    }

    pub fn x_breakpoints(&self) -> &[Rational] {
        &self.x_breakpoints
    }

    pub fn y_breakpoints(&self) -> &[Rational] {
        &self.y_breakpoints
    }

    pub fn cells(&self) -> &[Vec<Rational>] {
        &self.cells
    }
}

/// Marginal of a square measure along `axis` (the other coordinate is
/// integrated out).
pub fn project_2d(m: &Rect2DMeasure, axis: Axis) -> ValueMeasure {
    let widths =
        |bps: &[Rational]| -> Vec<Rational> { bps.windows(2).map(|w| &w[1] - &w[0]).collect() };
    let (breakpoints, values) = match axis {
        Axis::X => {
            let dy = widths(&m.y_breakpoints);
            let values = m
                .cells
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&dy)
                        .fold(Rational::zero(), |acc, (v, h)| acc + v * h)
                })
                .collect();
            (m.x_breakpoints.clone(), values)
        }
        Axis::Y => {
            let dx = widths(&m.x_breakpoints);
            let values = (0..m.y_breakpoints.len() - 1)
                .map(|j| {
                    m.cells
                        .iter()
                        .zip(&dx)
                        .fold(Rational::zero(), |acc, (row, w)| acc + &row[j] * w)
                })
                .collect();
            (m.y_breakpoints.clone(), values)
        }
    };
    ValueMeasure {
        density: PiecewiseDensity {
            breakpoints,
            values,
        },
        atoms: BTreeMap::new(),
    }
}

/// The common refinement of several measures: cells cut at every
/// breakpoint and every atom location of any measure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refinement {
    /// Cell boundaries, `0 = b_0 < ... < b_k = 1`.
    pub breakpoints: Vec<Rational>,
    /// `densities[cell][measure]`.
    pub densities: Vec<Vec<Rational>>,
    /// Union of atom locations, sorted.
    pub atoms: Vec<Rational>,
    /// `atom_masses[atom][measure]`, zero where a measure has no atom.
    pub atom_masses: Vec<Vec<Rational>>,
}

impl Refinement {
    pub fn cell_count(&self) -> usize {
        self.densities.len()
    }

    pub fn measure_count(&self) -> usize {
        self.densities.first().map_or(0, Vec::len)
    }

    pub fn cell(&self, c: usize) -> (&Rational, &Rational) {
        (&self.breakpoints[c], &self.breakpoints[c + 1])
    }

    /// Mass measure `i` puts on the open cell `c`.
    pub fn cell_value(&self, c: usize, i: usize) -> Rational {
        &self.densities[c][i] * (&self.breakpoints[c + 1] - &self.breakpoints[c])
    }
}

pub fn common_refinement(ms: &[ValueMeasure]) -> Refinement {
    let mut pts: BTreeSet<Rational> = BTreeSet::new();
    pts.insert(Rational::zero());
    pts.insert(Rational::one());
    for m in ms {
        pts.extend(m.events());
    }
    let breakpoints: Vec<Rational> = pts.into_iter().collect();
    let densities = breakpoints[..breakpoints.len() - 1]
        .iter()
        .map(|left| ms.iter().map(|m| m.density.at(left)).collect())
        .collect();
    let atoms: Vec<Rational> = ms
        .iter()
        .flat_map(|m| m.atoms.keys().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let atom_masses = atoms
        .iter()
        .map(|at| ms.iter().map(|m| m.atom(at)).collect())
        .collect();
    Refinement {
        breakpoints,
        densities,
        atoms,
        atom_masses,
    }
}

/// Same null sets: no cell where exactly one density vanishes, and the
/// same atom locations.
pub fn mutually_abs_continuous(m1: &ValueMeasure, m2: &ValueMeasure) -> bool {
    let r = common_refinement(&[m1.clone(), m2.clone()]);
    let zero = Rational::zero();
    let densities_agree = r.densities.iter().all(|d| (d[0] > zero) == (d[1] > zero));
    densities_agree && m1.atoms.keys().eq(m2.atoms.keys())
}
