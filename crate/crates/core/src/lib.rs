//! Numerical toolkit for the reflected spectrally negative stable process and
//! the inverse stable subordinator, with solvers for time-fractional Cauchy
//! problems and a Grünwald–Letnikov forward-equation solver.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::excessive_precision)]

pub mod cauchy;
pub mod error;
pub mod forward_solver;
pub mod frac_ops;
pub mod par;
pub mod params;
pub mod quad;
pub mod rng;
pub mod special;
pub mod stochastic;
pub mod table;
pub mod validation;

pub use error::{Error, Result};
pub use params::StableParams;
