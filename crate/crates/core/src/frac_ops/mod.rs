//! Grünwald weights and fractional integrals/derivatives.

mod operators;
mod weights;

pub use operators::{
    caputo_derivative, rl_derivative_neg, rl_derivative_order_minus_one_at_zero, rl_integral,
    SampledFunction, Side,
};
pub use weights::{grunwald_partial_sums, grunwald_weights, GrunwaldWeights};

pub(crate) use weights::raw_weights;
