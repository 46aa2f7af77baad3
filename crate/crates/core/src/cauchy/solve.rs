use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cauchy::base::BaseSemigroup;
use crate::error::{Error, Result};
use crate::par::{map_chunks, McPlan};
use crate::params::StableParams;
use crate::quad::{integrate, integrate_to_infinity, QuadConfig, QuadResult};
use crate::special::inverse_subordinator_density_beta;
use crate::stochastic::{simulate_extremes, HittingSampler};
use crate::table::{DensityTable, Provenance};

/// Which process supplies the random operational time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TimeChange {
    /// Terminal value of a grid-simulated reflected path.
    ReflectedZ { n_steps: usize },
    /// First passage of the subordinator.
    InverseE { rel_tol: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracCauchyConfig {
    /// Order of the time derivative, in `(0, 1)`.
    pub beta: f64,
    pub quad: QuadConfig,
    pub samples: usize,
    pub time_change: TimeChange,
    pub seed: u64,
}

impl FracCauchyConfig {
    pub fn new(beta: f64) -> Result<Self> {
        let cfg = Self {
            beta,
            quad: QuadConfig::new(1e-13, 1e-11),
            samples: 100_000,
            time_change: TimeChange::InverseE { rel_tol: 1e-6 },
            seed: 0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_time_change(mut self, time_change: TimeChange) -> Self {
        self.time_change = time_change;
        self
    }

    pub fn with_samples(mut self, samples: usize, seed: u64) -> Self {
        self.samples = samples;
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        const OP: &str = "FracCauchyConfig";
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::domain(OP, format!("beta must lie in (0, 1), got {}", self.beta)));
        }
        if self.samples == 0 {
            return Err(Error::domain(OP, "sample count must be at least 1"));
        }
        if !(self.quad.abs_tol > 0.0 && self.quad.rel_tol > 0.0) {
            return Err(Error::domain(OP, "quadrature tolerances must be positive"));
        }
        match self.time_change {
            TimeChange::ReflectedZ { n_steps } => {
                if n_steps == 0 {
                    return Err(Error::domain(OP, "n_steps must be at least 1"));
                }
                if self.beta < 0.5 {
                    return Err(Error::domain(
                        OP,
                        format!("the reflected-process time change needs beta >= 1/2, got {}", self.beta),
                    ));
                }
            }
            TimeChange::InverseE { rel_tol } => {
                if !(rel_tol > 0.0 && rel_tol < 1.0) {
                    return Err(Error::domain(OP, format!("rel_tol must lie in (0, 1), got {rel_tol}")));
                }
            }
        }
        Ok(())
    }
}

/// `∫ u(r) h(r, t) dr` in the self-similar variable `rho = r / t^beta`,
/// with `rho = v^2` on `(0, 1)`.
fn subordinate(u: impl Fn(f64) -> f64, t: f64, beta: f64, quad: QuadConfig) -> Result<QuadResult> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("subordination_solve", format!("t must be positive, got {t}")));
    }
    let scale = t.powf(beta);
    let h1 = |rho: f64| inverse_subordinator_density_beta(rho, 1.0, beta).unwrap_or(f64::NAN);
    let lower = integrate(
        |v| {
            let rho = v * v;
            2.0 * v * u(scale * rho) * h1(rho)
        },
        0.0,
        1.0,
        quad,
    )?;
    let upper = integrate_to_infinity(|rho| u(scale * rho) * h1(rho), 1.0, quad)?;
    Ok(QuadResult {
        value: lower.value + upper.value,
        abs_error: lower.abs_error + upper.abs_error,
        evaluations: lower.evaluations + upper.evaluations,
    })
}

/// `p(x, t) = ∫ u(x, r) h(r, t) dr` for the base semigroup's initial function.
pub fn subordination_solve(base: &dyn BaseSemigroup, x: f64, t: f64, cfg: &FracCauchyConfig) -> Result<QuadResult> {
    cfg.validate()?;
    subordinate(|r| base.evaluate(x, r), t, cfg.beta, cfg.quad)
}

/// Mean of `f(X_T)` over independent pairs of a time change `T` and a base
/// path, with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, v: f64) {
        self.n += 1.0;
        let d = v - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (v - self.mean);
    }

    fn merge(self, o: Welford) -> Welford {
        if o.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Welford {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Monte Carlo estimate of `E^x f(X_T)` with `T = Z_t` or `T = E_t`.
pub fn mc_time_change_solve(
    base: &dyn BaseSemigroup,
    f: &(dyn Fn(f64) -> f64 + Sync),
    x: f64,
    t: f64,
    cfg: &FracCauchyConfig,
) -> Result<McEstimate> {
    cfg.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain("mc_time_change_solve", format!("t must be positive, got {t}")));
    }
    let hitting = match cfg.time_change {
        TimeChange::InverseE { rel_tol } => Some(HittingSampler::new(cfg.beta, rel_tol)?),
        TimeChange::ReflectedZ { .. } => None,
    };
    let params = match cfg.time_change {
        TimeChange::ReflectedZ { .. } => Some(StableParams::from_beta(cfg.beta)?),
        TimeChange::InverseE { .. } => None,
    };
    let plan = McPlan::new(cfg.seed, cfg.samples);
    let chunks = map_chunks(&plan, |rng, len| -> Result<Welford> {
        let mut acc = Welford::default();
        for _ in 0..len {
            let r = match (cfg.time_change, &hitting, &params) {
                (TimeChange::InverseE { .. }, Some(h), _) => h.sample(t, rng)?,
                (TimeChange::ReflectedZ { n_steps }, _, Some(p)) => simulate_extremes(p, t, n_steps, rng)?.reflected_terminal(0.0),
                _ => unreachable!("sampler matches the time change"),
            };
            acc.push(base.sample(x, r, rng).map_or(0.0, f));
        }
        Ok(acc)
    });
    let mut total = Welford::default();
    for c in chunks {
        total = total.merge(c?);
    }
    let var = if total.n > 1.0 { total.m2.max(0.0) / (total.n - 1.0) } else { 0.0 };
    Ok(McEstimate {
        estimate: total.mean,
        stderr: (var / total.n).sqrt(),
        samples: cfg.samples,
    })
}

/// Profile at time `t` of `∂_t^beta u = ∂_x^2 u` from a unit point mass at 0.
pub fn fractional_diffusion_profile(beta: f64, t: f64, x_grid: &[f64], cfg: &FracCauchyConfig) -> Result<DensityTable> {
    let params = StableParams::from_beta(beta)?;
    let values = x_grid
        .iter()
        .map(|&x| {
            let kernel = |r: f64| (-x * x / (4.0 * r)).exp() / (4.0 * PI * r).sqrt();
            subordinate(kernel, t, beta, cfg.quad).map(|q| q.value.max(0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    let table = DensityTable::new(params, x_grid.to_vec(), vec![t], vec![values], Provenance::Analytic)?;
    Ok(table.with_config(serde_json::json!({
        "problem": "fractional_diffusion",
        "beta": beta,
        "quad": cfg.quad,
    })))
}
