//! Sampling the inverse stable subordinator `E_t = inf{r > 0 : D_r > t}`.
//!
//! The hitting method walks `D` forward over a geometric `r`-grid until the
//! level `t` is crossed. The bracketing increment is then bisected: given the
//! sum `I` of `D` over an interval split into two halves of length `s`, the
//! first half has density proportional to `f_s(x) f_s(I - x)` on `(0, I)`,
//! where `f_s` is the law of `D_s`. That bridge law is sampled exactly by
//! rejection, so refinement introduces no bias.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::StableParams;
use crate::rng::RngStream;
use crate::special::OneSidedStable;
use crate::stochastic::paths::path_extremes;
use crate::stochastic::samplers::{SpectrallyNegativeSampler, SubordinatorSampler};

const MAX_COARSE_STEPS: usize = 400;
const MAX_BISECTIONS: usize = 200;
const MAX_REJECTIONS: usize = 1_000_000;

/// How to draw `E_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum InverseMethod {
    /// First passage of the subordinator, bracketed to relative tolerance.
    Hitting { rel_tol: f64 },
    /// Grid running maximum of a `Y` path with the given number of steps.
    Supremum { n_steps: usize },
}

impl InverseMethod {
    pub fn hitting() -> Self {
        InverseMethod::Hitting { rel_tol: 1e-6 }
    }
}

/// First-passage sampler for a fixed subordinator index.
#[derive(Debug, Clone)]
pub struct HittingSampler {
    sampler: SubordinatorSampler,
    law: OneSidedStable,
    mode: f64,
    mode_density: f64,
    rel_tol: f64,
}

impl HittingSampler {
    pub fn new(beta: f64, rel_tol: f64) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::domain("HittingSampler::new", format!("rel_tol must lie in (0, 1), got {rel_tol}")));
        }
        let law = OneSidedStable::new(beta)?;
        let (mode, mode_density) = law.mode();
        Ok(Self {
            sampler: SubordinatorSampler::new(beta)?,
            law,
            mode,
            mode_density,
            rel_tol,
        })
    }

    pub fn beta(&self) -> f64 {
        self.sampler.beta()
    }

    /// Splits a standardized increment `total` of `D` over two unit-length
    /// halves; returns the first half.
    fn split_unit(&self, total: f64, rng: &mut RngStream) -> Result<f64> {
        let half = 0.5 * total;
        // sup of the density over [I/2, I]
        let peak = self.mode.clamp(half, total);
        let bound = if peak == self.mode {
            self.mode_density
        } else {
            self.law.density(peak)
        };
        for _ in 0..MAX_REJECTIONS {
            let x = self
                .sampler
                .sample_unit_below(half, rng, MAX_REJECTIONS)
                .ok_or_else(|| Error::numeric("simulate_inverse_subordinator", "truncated draw did not terminate", half))?;
            let ratio = self.law.density(total - x) / bound;
            if rng.uniform_open() <= ratio {
                return Ok(if rng.coin() { x } else { total - x });
            }
        }
        Err(Error::numeric(
            "simulate_inverse_subordinator",
            "bridge rejection sampler did not terminate",
            total,
        ))
    }

    /// One draw of `E_t`.
    pub fn sample(&self, t: f64, rng: &mut RngStream) -> Result<f64> {
        const OP: &str = "simulate_inverse_subordinator";
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain(OP, format!("t must be positive, got {t}")));
        }
        let beta = self.beta();
        let inv_beta = 1.0 / beta;
        let scale = t.powf(beta);
        let floor = 1e-12 * scale;

        let (mut ra, mut da) = (0.0f64, 0.0f64);
        let mut rb = 1e-3 * scale;
        let mut db;
        let mut steps = 0;
        loop {
            db = da + self.sampler.sample(rb - ra, rng);
            if db > t {
                break;
            }
            steps += 1;
            if steps > MAX_COARSE_STEPS {
                return Err(Error::numeric(OP, "level not bracketed within the iteration cap", t - da));
            }
            ra = rb;
            da = db;
            rb *= 2.0;
        }

        let mut bisections = 0;
        while rb - ra > self.rel_tol * ra.max(floor) {
            bisections += 1;
            if bisections > MAX_BISECTIONS {
                return Err(Error::numeric(OP, "bisection did not reach tolerance", rb - ra));
            }
            let s = 0.5 * (rb - ra);
            let unit = s.powf(inv_beta);
            let first = unit * self.split_unit((db - da) / unit, rng)?;
            let mid = ra + s;
            if da + first > t {
                rb = mid;
                db = da + first;
            } else {
                ra = mid;
                da += first;
            }
        }
        Ok(0.5 * (ra + rb))
    }
}

/// One draw of `E_t` for the subordinator index `params.beta()`.
pub fn simulate_inverse_subordinator(
    params: &StableParams,
    t: f64,
    rng: &mut RngStream,
    method: InverseMethod,
) -> Result<f64> {
    InverseSampler::new(params.beta(), method)?.sample(t, rng)
}

/// Reusable `E_t` sampler for either method.
#[derive(Debug, Clone)]
pub enum InverseSampler {
    Hitting(HittingSampler),
    Supremum {
        sampler: SpectrallyNegativeSampler,
        n_steps: usize,
    },
}

impl InverseSampler {
    /// The supremum method needs `beta ∈ [1/2, 1)`; hitting accepts `(0, 1)`.
    pub fn new(beta: f64, method: InverseMethod) -> Result<Self> {
        match method {
            InverseMethod::Hitting { rel_tol } => Ok(InverseSampler::Hitting(HittingSampler::new(beta, rel_tol)?)),
            InverseMethod::Supremum { n_steps } => {
                if n_steps == 0 {
                    return Err(Error::domain("simulate_inverse_subordinator", "n_steps must be at least 1"));
                }
                let params = StableParams::from_beta(beta)?;
                Ok(InverseSampler::Supremum {
                    sampler: SpectrallyNegativeSampler::new(&params),
                    n_steps,
                })
            }
        }
    }

    pub fn sample(&self, t: f64, rng: &mut RngStream) -> Result<f64> {
        match self {
            InverseSampler::Hitting(h) => h.sample(t, rng),
            InverseSampler::Supremum { sampler, n_steps } => {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::domain("simulate_inverse_subordinator", format!("t must be positive, got {t}")));
                }
                Ok(path_extremes(sampler, t / *n_steps as f64, *n_steps, rng).max)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hitting_draws_are_positive() {
        let h = HittingSampler::new(0.6, 1e-6).unwrap();
        let mut rng = RngStream::new(8, 0);
        for _ in 0..2000 {
            let e = h.sample(1.0, &mut rng).unwrap();
            assert!(e > 0.0 && e.is_finite());
        }
    }

    #[test]
    fn split_stays_inside() {
        let h = HittingSampler::new(0.7, 1e-6).unwrap();
        let mut rng = RngStream::new(1, 0);
        for &total in &[0.3, 0.5, 3.0, 50.0, 1e4] {
            for _ in 0..500 {
                let x = h.split_unit(total, &mut rng).unwrap();
                assert!(x >= 0.0 && x <= total);
            }
        }
    }

    #[test]
    fn bad_arguments() {
        let p = StableParams::from_beta(0.5).unwrap();
        let mut rng = RngStream::new(1, 0);
        assert!(simulate_inverse_subordinator(&p, 0.0, &mut rng, InverseMethod::hitting()).is_err());
        assert!(InverseSampler::new(0.4, InverseMethod::Supremum { n_steps: 10 }).is_err());
        assert!(InverseSampler::new(0.4, InverseMethod::hitting()).is_ok());
    }
}
