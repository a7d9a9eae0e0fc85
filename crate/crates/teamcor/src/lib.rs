//! Solvers for optimal ex-ante coordination of a two-player team against an
//! opponent in three-seat zero-sum extensive-form games.
//!
//! The pipeline: [`efg`] models the game tree and its sequence form;
//! [`games`] generates the benchmark families; [`correlation`] builds the
//! relevant-sequence-pair index, the correlation-plan polytope constraints,
//! and plan constructors; [`cfr`] samples pure team profiles by self-play to
//! seed the master; [`tmecor`] houses the three solve strategies (direct LP,
//! fixed-support MIP, column generation) on top of the `linsolve` engine.

pub mod cfr;
pub mod correlation;
pub mod efg;
pub mod games;
pub mod jsonfmt;
pub mod tmecor;
