//! A small dense simplex solver over exact rationals.
//!
//! Two-phase tableau method with Bland's rule, so it never cycles and its
//! pivots (and therefore its optimal vertex) are fully deterministic. All
//! variables are nonnegative. Problem sizes in this crate are tens of
//! variables, which a dense tableau handles comfortably.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// `maximize objective . x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(vars: usize) -> Self {
        Self {
            objective: vec![Rational::zero(); vars],
            constraints: Vec::new(),
        }
    }

    pub fn vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        assert_eq!(
            coeffs.len(),
            self.vars(),
            "constraint width must match variable count"
        );
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    /// Sparse convenience form of [`add`](Self::add).
    pub fn add_terms(&mut self, terms: &[(usize, Rational)], relation: Relation, rhs: Rational) {
        let mut coeffs = vec![Rational::zero(); self.vars()];
        for (j, c) in terms {
            coeffs[*j] += c;
        }
        self.add(coeffs, relation, rhs);
    }

    /// Whether `x` satisfies every constraint exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.vars()
            && x.iter().all(|v| !v.is_negative())
            && self.constraints.iter().all(|c| {
                let lhs = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    }

    pub fn maximize(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective)
    }

    /// A feasible point minimizing `x[vars[0]]`, then `x[vars[1]]` among
    /// those, and so on. The objective is ignored. `None` if infeasible.
    pub fn lexmin(&self, vars: &[usize]) -> Option<Vec<Rational>> {
        let mut lp = self.clone();
        let mut last = match lp.maximize() {
            LpOutcome::Optimal { x, .. } => x,
            _ => return None,
        };
        for &j in vars {
            lp.objective = vec![Rational::zero(); lp.vars()];
            lp.objective[j] = -Rational::one();
            match lp.maximize() {
                LpOutcome::Optimal { x, .. } => {
                    lp.add_terms(&[(j, Rational::one())], Relation::Eq, x[j].clone());
                    last = x;
                }
                LpOutcome::Unbounded => return None,
                LpOutcome::Infeasible => {
                    unreachable!("fixing an optimal coordinate keeps feasibility")
                }
            }
        }
        Some(last)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

struct Tableau {
    /// Row-major: `rows[i][j]` for structural, slack and artificial columns,
    /// last entry is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    structural: usize,
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let n = lp.vars();
        let slack_count = lp
            .constraints
            .iter()
            .filter(|c| c.relation != Relation::Eq)
            .count();
        // After sign normalization, `>=` and `=` rows need an artificial.
        let normalized: Vec<(Vec<Rational>, Relation, Rational)> = lp
            .constraints
            .iter()
            .map(|c| {
                if c.rhs.is_negative() {
                    let flipped = match c.relation {
                        Relation::Le => Relation::Ge,
                        Relation::Ge => Relation::Le,
                        Relation::Eq => Relation::Eq,
                    };
                    (c.coeffs.iter().map(|v| -v).collect(), flipped, -&c.rhs)
                } else {
                    (c.coeffs.clone(), c.relation, c.rhs.clone())
                }
            })
            .collect();
        let artificial_count = normalized
            .iter()
            .filter(|(_, r, _)| *r != Relation::Le)
            .count();
        let first_artificial = n + slack_count;
        let width = first_artificial + artificial_count;

        let mut rows = Vec::with_capacity(normalized.len());
        let mut basis = Vec::with_capacity(normalized.len());
        let (mut slack, mut art) = (n, first_artificial);
        for (coeffs, relation, rhs) in normalized {
            let mut row = vec![Rational::zero(); width + 1];
            row[..n].clone_from_slice(&coeffs);
            row[width] = rhs;
            match relation {
                Relation::Le => {
                    row[slack] = Rational::from_integer(1.into());
                    basis.push(slack);
                    slack += 1;
                }
                Relation::Ge => {
                    row[slack] = Rational::from_integer((-1).into());
                    slack += 1;
                    row[art] = Rational::from_integer(1.into());
                    basis.push(art);
                    art += 1;
                }
                Relation::Eq => {
                    row[art] = Rational::from_integer(1.into());
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        Self {
            rows,
            basis,
            structural: n,
            first_artificial,
            width,
        }
    }

    fn solve(mut self, objective: &[Rational]) -> LpOutcome {
        if self.width > self.first_artificial {
            let mut phase1 = vec![Rational::zero(); self.width];
            for c in phase1.iter_mut().skip(self.first_artificial) {
                *c = Rational::from_integer((-1).into());
            }
            let bound = self.width;
            if !self.run(&phase1, bound) {
                unreachable!("phase one is bounded by construction");
            }
            if self.objective_value(&phase1).is_negative() {
                return LpOutcome::Infeasible;
            }
            self.expel_artificials();
        }
        let mut phase2 = vec![Rational::zero(); self.width];
        phase2[..self.structural].clone_from_slice(objective);
        if !self.run(&phase2, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); self.structural];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.structural {
                x[b] = self.rows[i][self.width].clone();
            }
        }
        let value = dot(objective, &x);
        LpOutcome::Optimal { x, value }
    }

    fn objective_value(&self, cost: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .fold(Rational::zero(), |acc, (i, &b)| {
                acc + &cost[b] * &self.rows[i][self.width]
            })
    }

    /// Pivots until optimal (true) or unbounded (false). Only columns below
    /// `allowed` may enter.
    fn run(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let entering = (0..allowed)
                .find(|&j| !self.basis.contains(&j) && self.reduced_cost(cost, j).is_positive());
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.width] / a;
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else {
                return false;
            };
            self.pivot(i, j);
        }
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .fold(cost[j].clone(), |acc, (i, &b)| {
                acc - &cost[b] * &self.rows[i][j]
            })
    }

    fn pivot(&mut self, i: usize, j: usize) {
        let p = self.rows[i][j].clone();
        for v in self.rows[i].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[i].clone();
        for (k, row) in self.rows.iter_mut().enumerate() {
            if k == i || row[j].is_zero() {
                continue;
            }
            let factor = row[j].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[i] = j;
    }

    /// After a feasible phase one, replaces artificial basics (all at zero)
    /// by real columns, dropping rows that turn out redundant.
    fn expel_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.first_artificial {
                i += 1;
                continue;
            }
            match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.basis.remove(i);
                }
            }
        }
    }
}
