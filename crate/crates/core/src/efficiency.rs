//! Pareto dominance: does some other allocation give every player at least
//! as much and someone strictly more?
//!
//! Unrestricted search works on the common refinement of the measures.
//! Densities are constant on every cell, so an allocation is described up to
//! utility by the fraction of each cell every player receives, plus the owner
//! of each (indivisible) atom. For a fixed atom assignment the best
//! improvement is an exact linear program.
//!
//! Contiguous search fixes a left-to-right order of players and, for every
//! cut, the refinement cell it lies in; utilities are then affine in the
//! cuts and again one linear program per choice decides dominance.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::interval::{Allocation, AllocationError, IntervalSet};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::measure::{common_refinement, Refinement, ValueMeasure};
use crate::procedures::permutations;
use crate::rational::Rational;

const MAX_ATOM_ASSIGNMENTS: usize = 1 << 12;
const MAX_CONTIGUOUS_PLAYERS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EfficiencyError {
    #[error("expected {expected} players, got {got}")]
    PlayerCount { expected: usize, got: usize },
    #[error("{players} players and {atoms} atoms give more than 4096 atom assignments")]
    TooManyAtoms { players: usize, atoms: usize },
    #[error("contiguous search supports at most {max} players, got {got}")]
    TooManyPlayers { max: usize, got: usize },
    #[error("measures with atoms are not supported here")]
    AtomsPresent,
    #[error("weights must be nonnegative and not all zero")]
    BadWeights,
    #[error("invalid allocation: {0}")]
    Allocation(AllocationError),
}

/// Utility-relevant description of an allocation on a refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionAllocation {
    /// Cell boundaries `0 = b_0 < ... < b_k = 1`.
    pub breakpoints: Vec<Rational>,
    /// `cell_fractions[cell][player]`; every row sums to 1.
    pub cell_fractions: Vec<Vec<Rational>>,
    pub atom_owner: BTreeMap<Rational, usize>,
}

impl FractionAllocation {
    pub fn players(&self) -> usize {
        self.cell_fractions.first().map_or(0, Vec::len)
    }

    /// Splits every cell left to right in player-index order, then hands
    /// each atom to its owner.
    pub fn realize(&self) -> Allocation {
        let n = self.players();
        let mut spans: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); n];
        for (c, row) in self.cell_fractions.iter().enumerate() {
            let (a, b) = (&self.breakpoints[c], &self.breakpoints[c + 1]);
            let width = b - a;
            let mut pos = a.clone();
            for (i, f) in row.iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let end = &pos + f * &width;
                spans[i].push((pos, end.clone()));
                pos = end;
            }
        }
        let mut portions: Vec<IntervalSet> = spans
            .into_iter()
            .map(|s| IntervalSet::from_pieces(s).expect("cell spans lie in [0, 1]"))
            .collect();
        for (x, &owner) in &self.atom_owner {
            for (i, p) in portions.iter_mut().enumerate() {
                let taken = core::mem::take(p);
                *p = if i == owner {
                    taken.with_point(x.clone())
                } else {
                    taken.without_point(x.clone())
                };
            }
        }
        Allocation::new(portions)
    }

    fn utilities_on(&self, r: &Refinement) -> Vec<Rational> {
        let n = self.players();
        let mut u = vec![Rational::zero(); n];
        for (c, row) in self.cell_fractions.iter().enumerate() {
            for (i, f) in row.iter().enumerate() {
                u[i] += f * r.cell_value(c, i);
            }
        }
        for (a, at) in r.atoms.iter().enumerate() {
            let owner = self.atom_owner[at];
            u[owner] += &r.atom_masses[a][owner];
        }
        u
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContiguousCuts {
    pub cuts: Vec<Rational>,
    /// `order[k]` receives the `k`-th piece from the left.
    pub order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceCertificate {
    pub alternative: FractionAllocation,
    pub allocation: Allocation,
    /// Present for contiguous certificates.
    pub contiguous: Option<ContiguousCuts>,
    pub utilities_before: Vec<Rational>,
    pub utilities_after: Vec<Rational>,
    pub improvements: Vec<Rational>,
}

pub fn utilities(a: &Allocation, ms: &[ValueMeasure]) -> Result<Vec<Rational>, EfficiencyError> {
    if a.players() != ms.len() {
        return Err(EfficiencyError::PlayerCount {
            expected: ms.len(),
            got: a.players(),
        });
    }
    Ok(ms
        .iter()
        .zip(&a.portions)
        .map(|(m, p)| m.value(p))
        .collect())
}

/// Weak improvement for everyone, strict for someone.
pub fn dominates(after: &[Rational], before: &[Rational]) -> bool {
    after.len() == before.len()
        && after.iter().zip(before).all(|(x, y)| x >= y)
        && after.iter().zip(before).any(|(x, y)| x > y)
}

fn checked_baseline(a: &Allocation, ms: &[ValueMeasure]) -> Result<Vec<Rational>, EfficiencyError> {
    let u = utilities(a, ms)?;
    a.check_partition(ms).map_err(EfficiencyError::Allocation)?;
    Ok(u)
}

/// Searches all allocations for one dominating `a`.
pub fn find_dominating(
    a: &Allocation,
    ms: &[ValueMeasure],
) -> Result<Option<DominanceCertificate>, EfficiencyError> {
    let before = checked_baseline(a, ms)?;
    find_dominating_utilities(&before, ms)
}

/// Searches all allocations for one giving every player `i` at least
/// `baseline[i]` and someone strictly more. Among atom assignments the one
/// with the largest total improvement wins; ties go to the first assignment
/// in lexicographic order of atom owners.
pub fn find_dominating_utilities(
    baseline: &[Rational],
    ms: &[ValueMeasure],
) -> Result<Option<DominanceCertificate>, EfficiencyError> {
    let n = ms.len();
    if baseline.len() != n {
        return Err(EfficiencyError::PlayerCount {
            expected: n,
            got: baseline.len(),
        });
    }
    let r = common_refinement(ms);
    let atoms = r.atoms.len();
    let assignments = u32::try_from(atoms)
        .ok()
        .and_then(|a| n.checked_pow(a))
        .filter(|&k| k <= MAX_ATOM_ASSIGNMENTS)
        .ok_or(EfficiencyError::TooManyAtoms { players: n, atoms })?;

    let cells = r.cell_count();
    let eps = |i: usize| cells * n + i;
    let mut best: Option<(Rational, Vec<Rational>, Vec<usize>)> = None;
    for index in 0..assignments {
        let mut owners = vec![0; atoms];
        let mut rest = index;
        for slot in owners.iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        let mut lp = LinearProgram::new(cells * n + n);
        #[allow(clippy::needless_range_loop)]
        for i in 0..n {
            lp.objective[eps(i)] = Rational::one();
            let mut terms: Vec<(usize, Rational)> = (0..cells)
                .map(|c| (c * n + i, r.cell_value(c, i)))
                .collect();
            terms.push((eps(i), -Rational::one()));
            let from_atoms = owners
                .iter()
                .enumerate()
                .filter(|(_, &o)| o == i)
                .fold(Rational::zero(), |acc, (a, _)| acc + &r.atom_masses[a][i]);
            lp.add_terms(&terms, Relation::Ge, &baseline[i] - from_atoms);
        }
        for c in 0..cells {
            let terms: Vec<(usize, Rational)> =
                (0..n).map(|i| (c * n + i, Rational::one())).collect();
            lp.add_terms(&terms, Relation::Eq, Rational::one());
        }
        if let LpOutcome::Optimal { x, value } = lp.maximize() {
            if value.is_positive() && best.as_ref().is_none_or(|(v, _, _)| value > *v) {
                best = Some((value, x, owners));
            }
        }
    }

    let Some((_, x, owners)) = best else {
        return Ok(None);
    };
    let alternative = FractionAllocation {
        breakpoints: r.breakpoints.clone(),
        cell_fractions: (0..cells).map(|c| x[c * n..(c + 1) * n].to_vec()).collect(),
        atom_owner: r.atoms.iter().cloned().zip(owners).collect(),
    };
    let allocation = alternative.realize();
    Ok(Some(certificate(
        alternative,
        allocation,
        None,
        baseline,
        ms,
        &r,
    )))
}

fn certificate(
    alternative: FractionAllocation,
    allocation: Allocation,
    contiguous: Option<ContiguousCuts>,
    baseline: &[Rational],
    ms: &[ValueMeasure],
    r: &Refinement,
) -> DominanceCertificate {
    let after = utilities(&allocation, ms).expect("one portion per player");
    assert_eq!(
        after,
        alternative.utilities_on(r),
        "realization changed utilities"
    );
    assert!(dominates(&after, baseline), "certificate does not dominate");
    let improvements = after.iter().zip(baseline).map(|(x, y)| x - y).collect();
    DominanceCertificate {
        alternative,
        allocation,
        contiguous,
        utilities_before: baseline.to_vec(),
        utilities_after: after,
        improvements,
    }
}

/// Fractions of every refinement cell held by each player, and atom owners.
fn fractions_of(a: &Allocation, r: &Refinement) -> FractionAllocation {
    let cell_fractions = (0..r.cell_count())
        .map(|c| {
            let (lo, hi) = r.cell(c);
            let width = hi - lo;
            a.portions
                .iter()
                .map(|p| {
                    let covered = p.pieces().iter().fold(Rational::zero(), |acc, (x, y)| {
                        let s = core::cmp::max(x, lo);
                        let e = core::cmp::min(y, hi);
                        if s < e {
                            acc + (e - s)
                        } else {
                            acc
                        }
                    });
                    covered / &width
                })
                .collect()
        })
        .collect();
    let atom_owner = r
        .atoms
        .iter()
        .map(|x| {
            let owner = a.portions.iter().position(|p| p.contains(x)).unwrap_or(0);
            (x.clone(), owner)
        })
        .collect();
    FractionAllocation {
        breakpoints: r.breakpoints.clone(),
        cell_fractions,
        atom_owner,
    }
}

/// Where a cut may sit. Region 0 is the point 0 with nothing to its left;
/// region `j >= 1` is the closed cell `[b_{j-1}, b_j]` on which
/// `mass_before` continued from the right of `b_{j-1}` is affine. A cut at
/// `b_{j-1}` in region `j` therefore leaves an atom at `b_{j-1}` with the
/// piece on its left.
pub(crate) struct Regions<'a> {
    r: &'a Refinement,
    /// `start[i][c]`: mass of measure `i` on `[0, b_c]` (atom at `b_c` included).
    start: Vec<Vec<Rational>>,
}

impl<'a> Regions<'a> {
    pub(crate) fn new(r: &'a Refinement, ms: &[ValueMeasure]) -> Self {
        let start = ms
            .iter()
            .map(|m| {
                r.breakpoints[..r.cell_count()]
                    .iter()
                    .map(|b| m.mass_before(b) + m.atom(b))
                    .collect()
            })
            .collect();
        Self { r, start }
    }

    pub(crate) fn count(&self) -> usize {
        self.r.cell_count() + 1
    }

    pub(crate) fn bounds(&self, region: usize) -> (Rational, Rational) {
        if region == 0 {
            (Rational::zero(), Rational::zero())
        } else {
            let (a, b) = self.r.cell(region - 1);
            (a.clone(), b.clone())
        }
    }

    /// `(constant, slope)` with mass to the left of a cut at `x` equal to
    /// `constant + slope * x` for player `i`.
    fn affine(&self, i: usize, region: usize) -> (Rational, Rational) {
        if region == 0 {
            return (Rational::zero(), Rational::zero());
        }
        let c = region - 1;
        let d = self.r.densities[c][i].clone();
        (&self.start[i][c] - &d * &self.r.breakpoints[c], d)
    }

    /// Value to `player` of piece `k` when cut `j` lies in region
    /// `cells[j]`, as `terms . x + constant` over cut variables `0..n-1`.
    pub(crate) fn piece_value(
        &self,
        player: usize,
        cells: &[usize],
        k: usize,
    ) -> (Vec<(usize, Rational)>, Rational) {
        let mut terms = Vec::with_capacity(2);
        let mut constant = Rational::zero();
        if k < cells.len() {
            let (c, s) = self.affine(player, cells[k]);
            terms.push((k, s));
            constant += c;
        } else {
            constant += Rational::one();
        }
        if k > 0 {
            let (c, s) = self.affine(player, cells[k - 1]);
            terms.push((k - 1, -s));
            constant -= c;
        }
        (terms, constant)
    }

    /// The contiguous allocation described by `cuts` placed in `cells`.
    pub(crate) fn allocation(
        &self,
        order: &[usize],
        cells: &[usize],
        cuts: &[Rational],
    ) -> Allocation {
        let mut a = Allocation::from_cuts(cuts, order);
        for (k, x) in cuts.iter().enumerate() {
            let (lo, _) = self.bounds(cells[k]);
            if cells[k] > 0 && *x == lo {
                // the point x goes to the left piece
                for (p, portion) in a.portions.iter_mut().enumerate() {
                    let taken = core::mem::take(portion);
                    *portion = if p == order[k] {
                        taken.with_point(x.clone())
                    } else {
                        taken.without_point(x.clone())
                    };
                }
            }
        }
        a
    }
}

pub(crate) fn monotone_assignments(slots: usize, regions: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(slots);
    fn go(
        slots: usize,
        regions: usize,
        from: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == slots {
            out.push(cur.clone());
            return;
        }
        for j in from..regions {
            cur.push(j);
            go(slots, regions, j, cur, out);
            cur.pop();
        }
    }
    go(slots, regions, 0, &mut current, &mut out);
    out
}

struct ContiguousLp<'a> {
    regions: &'a Regions<'a>,
    baseline: &'a [Rational],
    order: &'a [usize],
    cells: &'a [usize],
}

impl ContiguousLp<'_> {
    fn n(&self) -> usize {
        self.order.len()
    }

    /// Variables: cuts `x_0 .. x_{n-2}`, then improvements `e_0 .. e_{n-1}`.
    fn build(&self) -> LinearProgram {
        let n = self.n();
        let mut lp = LinearProgram::new(2 * n - 1);
        for (k, &region) in self.cells.iter().enumerate() {
            let (lo, hi) = self.regions.bounds(region);
            lp.add_terms(&[(k, Rational::one())], Relation::Ge, lo);
            lp.add_terms(&[(k, Rational::one())], Relation::Le, hi);
            if k + 1 < self.cells.len() {
                lp.add_terms(
                    &[(k, Rational::one()), (k + 1, -Rational::one())],
                    Relation::Le,
                    Rational::zero(),
                );
            }
        }
        for (k, &player) in self.order.iter().enumerate() {
            let e = n - 1 + player;
            lp.objective[e] = Rational::one();
            let (mut terms, constant) = self.regions.piece_value(player, self.cells, k);
            terms.push((e, -Rational::one()));
            let rhs = &self.baseline[player] - constant;
            lp.add_terms(&terms, Relation::Ge, rhs);
        }
        lp
    }

    fn best(&self) -> Option<Rational> {
        match self.build().maximize() {
            LpOutcome::Optimal { value, .. } if value.is_positive() => Some(value),
            _ => None,
        }
    }

    /// Lexicographically smallest cut vector among solutions with total
    /// improvement `value`.
    fn lexmin_cuts(&self, value: &Rational) -> Vec<Rational> {
        let n = self.n();
        let mut lp = self.build();
        let all: Vec<(usize, Rational)> =
            (n - 1..2 * n - 1).map(|j| (j, Rational::one())).collect();
        lp.add_terms(&all, Relation::Eq, value.clone());
        let cut_vars: Vec<usize> = (0..n - 1).collect();
        let x = lp.lexmin(&cut_vars).expect("the optimum stays feasible");
        x[..n - 1].to_vec()
    }
}

/// Searches allocations into `n` contiguous pieces (any order of players)
/// for one dominating `a`. Prefers the largest total improvement, then the
/// lexicographically smallest cut vector, then the first order in
/// lexicographic order.
pub fn find_dominating_contiguous(
    a: &Allocation,
    ms: &[ValueMeasure],
) -> Result<Option<DominanceCertificate>, EfficiencyError> {
    let baseline = checked_baseline(a, ms)?;
    find_dominating_contiguous_utilities(&baseline, ms)
}

/// Contiguous counterpart of [`find_dominating_utilities`], with the
/// tie-breaking of [`find_dominating_contiguous`].
pub fn find_dominating_contiguous_utilities(
    baseline: &[Rational],
    ms: &[ValueMeasure],
) -> Result<Option<DominanceCertificate>, EfficiencyError> {
    let n = ms.len();
    if n > MAX_CONTIGUOUS_PLAYERS {
        return Err(EfficiencyError::TooManyPlayers {
            max: MAX_CONTIGUOUS_PLAYERS,
            got: n,
        });
    }
    if baseline.len() != n {
        return Err(EfficiencyError::PlayerCount {
            expected: n,
            got: baseline.len(),
        });
    }
    if n < 2 {
        return Ok(None);
    }
    let r = common_refinement(ms);
    let regions = Regions::new(&r, ms);
    let orders = permutations(n);
    let placements = monotone_assignments(n - 1, regions.count());

    let mut top: Option<Rational> = None;
    let mut winners: Vec<(usize, usize)> = Vec::new();
    for (oi, order) in orders.iter().enumerate() {
        for (pi, cells) in placements.iter().enumerate() {
            let lp = ContiguousLp {
                regions: &regions,
                baseline,
                order,
                cells,
            };
            let Some(value) = lp.best() else { continue };
            match top.as_ref().map(|t| value.cmp(t)) {
                None | Some(core::cmp::Ordering::Greater) => {
                    top = Some(value);
                    winners = vec![(oi, pi)];
                }
                Some(core::cmp::Ordering::Equal) => winners.push((oi, pi)),
                Some(core::cmp::Ordering::Less) => {}
            }
        }
    }
    let Some(value) = top else {
        return Ok(None);
    };

    let mut chosen: Option<(Vec<Rational>, usize, usize)> = None;
    for (oi, pi) in winners {
        let lp = ContiguousLp {
            regions: &regions,
            baseline,
            order: &orders[oi],
            cells: &placements[pi],
        };
        let cuts = lp.lexmin_cuts(&value);
        if chosen.as_ref().is_none_or(|(c, _, _)| cuts < *c) {
            chosen = Some((cuts, oi, pi));
        }
    }
    let (cuts, oi, pi) = chosen.expect("at least one winner");
    let allocation = regions.allocation(&orders[oi], &placements[pi], &cuts);
    let alternative = fractions_of(&allocation, &r);
    let contiguous = ContiguousCuts {
        cuts,
        order: orders[oi].clone(),
    };
    Ok(Some(certificate(
        alternative,
        allocation,
        Some(contiguous),
        baseline,
        ms,
        &r,
    )))
}

/// Maximizes `w_0 u_0 + w_1 u_1` over all allocations of two atomless
/// measures: each refinement cell goes to the player with the larger
/// weighted density, split evenly on ties.
pub fn weighted_optimal(
    ms: &[ValueMeasure],
    w: &[Rational],
) -> Result<(FractionAllocation, Vec<Rational>), EfficiencyError> {
    if ms.len() != 2 || w.len() != 2 {
        return Err(EfficiencyError::PlayerCount {
            expected: 2,
            got: if ms.len() != 2 { ms.len() } else { w.len() },
        });
    }
    if w.iter().any(Signed::is_negative) || w.iter().all(Zero::is_zero) {
        return Err(EfficiencyError::BadWeights);
    }
    if ms.iter().any(|m| !m.is_atomless()) {
        return Err(EfficiencyError::AtomsPresent);
    }
    let r = common_refinement(ms);
    let half = Rational::new(1.into(), 2.into());
    let cell_fractions = r
        .densities
        .iter()
        .map(|d| {
            let (a, b) = (&w[0] * &d[0], &w[1] * &d[1]);
            match a.cmp(&b) {
                core::cmp::Ordering::Greater => vec![Rational::one(), Rational::zero()],
                core::cmp::Ordering::Less => vec![Rational::zero(), Rational::one()],
                core::cmp::Ordering::Equal => vec![half.clone(), half.clone()],
            }
        })
        .collect();
    let f = FractionAllocation {
        breakpoints: r.breakpoints.clone(),
        cell_fractions,
        atom_owner: BTreeMap::new(),
    };
    let u = f.utilities_on(&r);
    Ok((f, u))
}
