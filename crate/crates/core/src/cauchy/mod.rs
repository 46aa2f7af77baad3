//! Time-fractional Cauchy problems `∂_t^β p = L p`, `p(·, 0) = f`, solved by
//! subordination quadrature or by Monte Carlo time change.

mod base;
mod solve;

pub use base::{BaseSemigroup, DriftDiffusion, EigenDecay, Heat, InitialCondition};
pub use solve::{
    fractional_diffusion_profile, mc_time_change_solve, subordination_solve, FracCauchyConfig, McEstimate, TimeChange,
};
