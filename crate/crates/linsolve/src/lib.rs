//! Sparse LP/MIP solving with dual values and a solution pool.
//!
//! The solver core is generic over the scalar type (see [`generic`]); the
//! crate root re-exports `f64` instantiations, which is what the rest of the
//! workspace uses.
//!
//! The LP engine is a bounded-variable revised simplex with a sparse LU
//! factorization of the basis, eta-file updates between refactorizations,
//! and a two-phase start. The MIP layer is best-bound branch and bound over
//! binary variables, collecting every integer-feasible incumbent in a pool.

pub mod backend;
pub mod generic;
pub mod text;

pub use generic::{Relation, Sense, SolveError, Status, VarKind};

/// LP/MIP model over `f64`.
pub type Model = generic::Model<f64>;
/// Solve result over `f64`.
pub type Solution = generic::Solution<f64>;
/// Pool of integer-feasible incumbents over `f64`.
pub type SolutionPool = generic::SolutionPool<f64>;
/// Pool entry over `f64`.
pub type PoolEntry = generic::PoolEntry<f64>;

/// Solves the linear relaxation of `model` (binaries relaxed to their bounds).
pub fn solve_lp(model: &Model) -> Result<Solution, SolveError> {
    generic::solve_lp(model)
}

/// Solves `model` to mixed-integer optimality, returning the incumbent pool.
pub fn solve_mip(model: &Model) -> Result<(Solution, SolutionPool), SolveError> {
    generic::solve_mip(model)
}

/// Dual objective implied by a solution's duals, for strong-duality checks.
pub fn dual_objective(model: &Model, solution: &Solution) -> f64 {
    generic::dual_objective(model, solution)
}
