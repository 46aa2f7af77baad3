//! Exact samplers for stable increments.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::params::StableParams;
use crate::rng::RngStream;

/// Kanter's representation of the standard β-stable subordinator:
/// `D_1 = (A(U)/E)^{(1-β)/β}` with `U ~ U(0, π)`, `E ~ Exp(1)` and Zolotarev's
/// function `A`. Increments over `dt` are `dt^{1/β} D_1`.
#[derive(Debug, Clone, Copy)]
pub struct SubordinatorSampler {
    beta: f64,
    exponent: f64,
    a_min: f64,
}

impl SubordinatorSampler {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(
                "SubordinatorSampler::new",
                format!("beta must lie in (0, 1), got {beta}"),
            ));
        }
        Ok(Self {
            beta,
            exponent: (1.0 - beta) / beta,
            a_min: (1.0 - beta) * beta.powf(beta / (1.0 - beta)),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    fn ln_a(&self, phi: f64) -> f64 {
        let b = self.beta;
        let sb = (b * phi).sin();
        (sb / phi.sin()).ln() / (1.0 - b) + (((1.0 - b) * phi).sin() / sb).ln()
    }

    /// One draw of `D_1`.
    #[inline]
    pub fn sample_unit(&self, rng: &mut RngStream) -> f64 {
        let u = PI * rng.uniform_open();
        let e = rng.exp1();
        (self.exponent * (self.ln_a(u) - e.ln())).exp()
    }

    /// One draw of `D_dt`.
    #[inline]
    pub fn sample(&self, dt: f64, rng: &mut RngStream) -> f64 {
        dt.powf(1.0 / self.beta) * self.sample_unit(rng)
    }

    /// One draw of `D_1` conditioned on `D_1 <= c`.
    ///
    /// The event is `E >= A(U) κ` with `κ = c^{-β/(1-β)}`; `U` is drawn with
    /// weight `exp(-A(U) κ)` by rejection and `E` by memorylessness.
    pub fn sample_unit_below(&self, c: f64, rng: &mut RngStream, max_tries: usize) -> Option<f64> {
        let kappa = (-c.ln() / self.exponent).exp();
        for _ in 0..max_tries {
            let u = PI * rng.uniform_open();
            let a = self.ln_a(u).exp();
            let accept = (-(a - self.a_min) * kappa).exp();
            if rng.uniform_open() <= accept {
                let e = a * kappa + rng.exp1();
                let x = (self.exponent * (a.ln() - e.ln())).exp();
                return Some(x.min(c));
            }
        }
        None
    }
}

/// Chambers–Mallows–Stuck sampler for the spectrally negative law with
/// characteristic function `exp(dt (ik)^α)`.
///
/// In the `S_α(σ, -1, 0)` parameterization this law has `σ^α = -cos(πα/2)`;
/// at `α = 2` it is the normal law with variance `2 dt`.
#[derive(Debug, Clone, Copy)]
pub struct SpectrallyNegativeSampler {
    alpha: f64,
    // α B with B = arctan(-tan(πα/2)) / α
    alpha_b: f64,
    // σ S, the combined scale of the unit draw
    scale: f64,
}

impl SpectrallyNegativeSampler {
    pub fn new(params: &StableParams) -> Self {
        let alpha = params.alpha();
        let tan = (FRAC_PI_2 * alpha).tan();
        let alpha_b = (-tan).atan();
        let s = (1.0 + tan * tan).powf(0.5 / alpha);
        let sigma = (-(FRAC_PI_2 * alpha).cos()).powf(1.0 / alpha);
        Self {
            alpha,
            alpha_b,
            scale: sigma * s,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// One draw of `Y_1`.
    #[inline]
    pub fn sample_unit(&self, rng: &mut RngStream) -> f64 {
        if self.alpha == 2.0 {
            return std::f64::consts::SQRT_2 * rng.standard_normal();
        }
        let a = self.alpha;
        let v = PI * (rng.uniform_open() - 0.5);
        let w = rng.exp1();
        let arg = a * v + self.alpha_b;
        let ln_rest = -v.cos().ln() / a + ((1.0 - a) / a) * ((v - arg).cos().ln() - w.ln());
        self.scale * arg.sin() * ln_rest.exp()
    }

    /// One draw of `Y_dt`.
    #[inline]
    pub fn sample(&self, dt: f64, rng: &mut RngStream) -> f64 {
        dt.powf(1.0 / self.alpha) * self.sample_unit(rng)
    }

    /// Fills `out` with increments over steps of length `dt`.
    #[inline]
    pub fn fill(&self, dt: f64, rng: &mut RngStream, out: &mut [f64]) {
        let s = dt.powf(1.0 / self.alpha);
        for v in out.iter_mut() {
            *v = s * self.sample_unit(rng);
        }
    }
}

/// One draw of the subordinator increment `D_dt` (index `β` of `params`).
pub fn sample_subordinator_increment(params: &StableParams, dt: f64, rng: &mut RngStream) -> Result<f64> {
    check_dt("sample_subordinator_increment", dt)?;
    Ok(SubordinatorSampler::new(params.beta())?.sample(dt, rng))
}

/// One draw of the spectrally negative increment `Y_dt`.
pub fn sample_spectrally_negative_increment(params: &StableParams, dt: f64, rng: &mut RngStream) -> Result<f64> {
    check_dt("sample_spectrally_negative_increment", dt)?;
    Ok(SpectrallyNegativeSampler::new(params).sample(dt, rng))
}

pub(crate) fn check_dt(op: &'static str, dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("time step must be positive, got {dt}")))
    }
}
