//! Semidiscrete Grünwald scheme for the forward equation of the reflected
//! stable process on a truncated half-line.

mod integrator;
mod matrix;
mod solution;

pub use integrator::{integrate_linear, Method, SolverConfig, StepStats, Trajectory};
pub use matrix::{build_rate_matrix, initial_delta, GridSpec, HessenbergLu, HessenbergMatrix, RateMatrix, MAX_DENSE_N};
pub use solution::{
    convergence_study, integrate, l1_error_from_zero, loglog_slope, solve_forward, transition_density, ConvergenceStudy,
    ForwardSolution,
};
