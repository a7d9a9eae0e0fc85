//! Scalar-generic model types and solver entry points.

use num_traits::Float;
use std::fmt::{Debug, Display};

mod lu;
mod mip;
mod simplex;

/// Scalar requirements for the solver core.
///
/// Satisfied by `f32` and `f64`; everything downstream in this workspace
/// instantiates with `f64`.
pub trait Scalar: Float + Debug + Display + Default + Send + Sync + 'static {
    /// Converts a literal tolerance/constant.
    fn c(v: f64) -> Self {
        Self::from(v).expect("scalar conversion")
    }
}

impl<T> Scalar for T where T: Float + Debug + Display + Default + Send + Sync + 'static {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    /// Pivot cap hit or the basis became numerically unusable; the solve is
    /// reported as failed rather than returning a possibly-wrong answer.
    IterationLimit,
    /// Branch-and-bound node cap hit; `Solution` carries the best incumbent.
    NodeLimit,
}

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    #[error("variable {0} out of range")]
    BadVariable(usize),
    #[error("variable {0}: lower bound exceeds upper bound")]
    BadBounds(usize),
    #[error("binary variable {0} has bounds outside [0,1]")]
    BadBinaryBounds(usize),
}

#[derive(Debug, Clone)]
pub(crate) struct Row<S> {
    pub coeffs: Vec<(usize, S)>,
    pub rel: Relation,
    pub rhs: S,
}

/// An LP/MIP: variables with bounds and integrality, sparse rows, and a
/// linear objective with a sense.
#[derive(Debug, Clone)]
pub struct Model<S: Scalar = f64> {
    pub(crate) sense: Sense,
    pub(crate) obj: Vec<S>,
    pub(crate) lower: Vec<S>,
    pub(crate) upper: Vec<S>,
    pub(crate) kind: Vec<VarKind>,
    pub(crate) rows: Vec<Row<S>>,
    pub(crate) mip_gap: S,
    pub(crate) start_hint: Option<Vec<S>>,
}

impl<S: Scalar> Model<S> {
    pub fn new(sense: Sense) -> Self {
        Model {
            sense,
            obj: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            kind: Vec::new(),
            rows: Vec::new(),
            mip_gap: S::zero(),
            start_hint: None,
        }
    }

    /// Relative optimality gap accepted by the branch-and-bound search: it
    /// stops once the incumbent is within `gap * (1 + |incumbent|)` of the
    /// best open bound. Zero (the default) demands the exact optimum.
    pub fn set_mip_gap(&mut self, gap: S) {
        self.mip_gap = gap;
    }

    /// Suggests a full primal assignment as an initial incumbent for the
    /// branch-and-bound search. The point is validated (feasibility and
    /// integrality of the binaries) before use and ignored when it fails.
    pub fn set_start_hint(&mut self, primal: Vec<S>) {
        self.start_hint = Some(primal);
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Adds a variable and returns its index.
    pub fn add_var(&mut self, obj: S, lower: S, upper: S, kind: VarKind) -> usize {
        self.obj.push(obj);
        self.lower.push(lower);
        self.upper.push(upper);
        self.kind.push(kind);
        self.obj.len() - 1
    }

    /// Adds a constraint row. Duplicate variable references are merged.
    pub fn add_row(&mut self, rel: Relation, rhs: S, coeffs: &[(usize, S)]) {
        let mut sorted: Vec<(usize, S)> = coeffs.to_vec();
        sorted.sort_by_key(|&(j, _)| j);
        let mut merged: Vec<(usize, S)> = Vec::with_capacity(sorted.len());
        for (j, v) in sorted {
            match merged.last_mut() {
                Some((pj, pv)) if *pj == j => *pv = *pv + v,
                _ => merged.push((j, v)),
            }
        }
        merged.retain(|&(_, v)| v != S::zero());
        self.rows.push(Row { coeffs: merged, rel, rhs });
    }

    pub fn num_vars(&self) -> usize {
        self.obj.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn var_kind(&self, j: usize) -> VarKind {
        self.kind[j]
    }

    pub fn bounds(&self, j: usize) -> (S, S) {
        (self.lower[j], self.upper[j])
    }

    pub fn set_bounds(&mut self, j: usize, lower: S, upper: S) {
        self.lower[j] = lower;
        self.upper[j] = upper;
    }

    pub fn set_kind(&mut self, j: usize, kind: VarKind) {
        self.kind[j] = kind;
    }

    pub fn objective_coeff(&self, j: usize) -> S {
        self.obj[j]
    }

    pub(crate) fn check(&self) -> Result<(), SolveError> {
        let n = self.num_vars();
        for (j, (&l, &u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if l > u {
                return Err(SolveError::BadBounds(j));
            }
            if self.kind[j] == VarKind::Binary && (l < -S::c(1e-12) || u > S::one() + S::c(1e-12)) {
                return Err(SolveError::BadBinaryBounds(j));
            }
        }
        for row in &self.rows {
            for &(j, _) in &row.coeffs {
                if j >= n {
                    return Err(SolveError::BadVariable(j));
                }
            }
        }
        Ok(())
    }

    /// Objective value of a primal point, in the model's sense.
    pub fn objective_value(&self, primal: &[S]) -> S {
        self.obj.iter().zip(primal).fold(S::zero(), |acc, (&c, &x)| acc + c * x)
    }

    /// Max constraint/bound violation of a primal point.
    pub fn primal_infeasibility(&self, primal: &[S]) -> S {
        let mut worst = S::zero();
        for j in 0..self.num_vars() {
            worst = worst.max(self.lower[j] - primal[j]).max(primal[j] - self.upper[j]);
        }
        for row in &self.rows {
            let lhs = row.coeffs.iter().fold(S::zero(), |acc, &(j, a)| acc + a * primal[j]);
            let diff = lhs - row.rhs;
            let v = match row.rel {
                Relation::Le => diff,
                Relation::Ge => -diff,
                Relation::Eq => diff.abs(),
            };
            worst = worst.max(v);
        }
        worst
    }
}

#[derive(Debug, Clone)]
pub struct Solution<S: Scalar = f64> {
    pub status: Status,
    pub objective: S,
    pub primal: Vec<S>,
    /// One multiplier per constraint row. For a `Maximize` problem, `Le` rows
    /// get nonnegative duals (the Lagrangian-bound convention); `Minimize`
    /// problems get the mirrored signs. Empty for MIP solves.
    pub duals: Vec<S>,
}

#[derive(Debug, Clone)]
pub struct PoolEntry<S: Scalar = f64> {
    pub objective: S,
    pub primal: Vec<S>,
}

/// Integer-feasible incumbents found during branch and bound, best first.
#[derive(Debug, Clone, Default)]
pub struct SolutionPool<S: Scalar = f64> {
    pub entries: Vec<PoolEntry<S>>,
}

pub fn solve_lp<S: Scalar>(model: &Model<S>) -> Result<Solution<S>, SolveError> {
    model.check()?;
    Ok(simplex::solve(model, None))
}

pub fn solve_mip<S: Scalar>(model: &Model<S>) -> Result<(Solution<S>, SolutionPool<S>), SolveError> {
    model.check()?;
    Ok(mip::solve(model))
}

/// Dual objective implied by `solution.duals`: `y·b` plus the bound terms of
/// the sign-consistent reduced costs. Equals the primal objective at an
/// optimal LP solution (strong duality).
pub fn dual_objective<S: Scalar>(model: &Model<S>, solution: &Solution<S>) -> S {
    // Work in min form: for Maximize, flip objective and duals.
    let flip = model.sense == Sense::Maximize;
    let sgn = if flip { -S::one() } else { S::one() };
    let mut red: Vec<S> = model.obj.iter().map(|&c| sgn * c).collect();
    let mut yb = S::zero();
    for (row, &d) in model.rows.iter().zip(&solution.duals) {
        let y = sgn * d;
        yb = yb + y * row.rhs;
        for &(j, a) in &row.coeffs {
            red[j] = red[j] - y * a;
        }
    }
    // A positive reduced cost is tight at the lower bound, negative at upper.
    let mut bound_terms = S::zero();
    let tol = S::c(1e-9);
    for j in 0..model.num_vars() {
        let d = red[j];
        if d.abs() <= tol {
            continue;
        }
        if d > S::zero() {
            bound_terms = bound_terms + d * model.lower[j];
        } else if d < S::zero() {
            bound_terms = bound_terms + d * model.upper[j];
        }
    }
    sgn * (yb + bound_terms)
}
