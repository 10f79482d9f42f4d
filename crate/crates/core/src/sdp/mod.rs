//! Small dense semidefinite programming with dual certificates.

mod diamond;
mod problem;
mod solver;

pub use diamond::{build_diamond_norm, build_diamond_unital, names, trace_a_ops, trace_b_ops};
pub use problem::{
    verify, BlockVar, Equality, IterateRecord, Objective, ResidualReport, ScalarVar, SdpProblem,
    SdpSolution, SdpStatus, StartPoint, Term,
};
pub use solver::{solve, solve_with, SolverOptions};
