use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index pair of the spectrally negative stable process (`alpha`) and of the
/// stable subordinator whose inverse shares its marginals (`beta = 1/alpha`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StableParams {
    alpha: f64,
    beta: f64,
}

impl StableParams {
    /// Builds the pair from the stability index `alpha ∈ (1, 2]`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(alpha > 1.0 && alpha <= 2.0) {
            return Err(Error::domain(
                "StableParams::from_alpha",
                format!("alpha must lie in (1, 2], got {alpha}"),
            ));
        }
        Ok(Self {
            alpha,
            beta: 1.0 / alpha,
        })
    }

    /// Builds the pair from the subordinator index `beta ∈ [1/2, 1)`.
    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(0.5..1.0).contains(&beta) {
            return Err(Error::domain(
                "StableParams::from_beta",
                format!("beta must lie in [1/2, 1), got {beta}"),
            ));
        }
        Ok(Self {
            alpha: 1.0 / beta,
            beta,
        })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }
}
