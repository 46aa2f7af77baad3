//! Monte Carlo check of `P(S_t ≥ x) = P(Y_t ≥ x) / P(Y_t ≥ 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{map_chunks, McPlan};
use crate::params::StableParams;
use crate::stochastic::paths::path_extremes;
use crate::stochastic::samplers::SpectrallyNegativeSampler;

/// Estimates for one level `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReflectionEstimate {
    pub x: f64,
    /// `P(S_t ≥ x)` from grid maxima
    pub lhs: f64,
    pub lhs_stderr: f64,
    /// `P(Y_t ≥ x) / P(Y_t ≥ 0)` from terminal values
    pub rhs: f64,
    pub rhs_stderr: f64,
    /// `P(Y_t ≥ x)` alone
    pub tail: f64,
    pub tail_stderr: f64,
    /// `P(Y_t ≥ 0)`
    pub positive: f64,
}

impl ReflectionEstimate {
    pub fn combined_stderr(&self) -> f64 {
        self.lhs_stderr.hypot(self.rhs_stderr)
    }

    /// `|lhs - rhs|` in units of the combined standard error.
    pub fn z_score(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.combined_stderr()
    }
}

#[derive(Default, Clone)]
struct Counts {
    n: u64,
    positive: u64,
    tail: Vec<u64>,
    sup: Vec<u64>,
}

/// Runs `plan.n` grid paths with `n_steps` steps on `[0, t]` and estimates
/// both sides of the identity at every level in `xs`. Paths are shared
/// across levels.
pub fn reflection_identity_levels(
    params: &StableParams,
    t: f64,
    xs: &[f64],
    n_steps: usize,
    plan: &McPlan,
) -> Result<Vec<ReflectionEstimate>> {
    const OP: &str = "reflection_identity_check";
    if !(t > 0.0) || xs.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::domain(OP, "t and every level x must be positive"));
    }
    if n_steps == 0 || plan.n == 0 {
        return Err(Error::domain(OP, "need at least one path and one step"));
    }
    let sampler = SpectrallyNegativeSampler::new(params);
    let dt = t / n_steps as f64;
    let parts = map_chunks(plan, |rng, len| {
        let mut c = Counts {
            n: len as u64,
            positive: 0,
            tail: vec![0; xs.len()],
            sup: vec![0; xs.len()],
        };
        for _ in 0..len {
            let e = path_extremes(&sampler, dt, n_steps, rng);
            if e.terminal >= 0.0 {
                c.positive += 1;
            }
            for (k, &x) in xs.iter().enumerate() {
                if e.terminal >= x {
                    c.tail[k] += 1;
                }
                if e.max >= x {
                    c.sup[k] += 1;
                }
            }
        }
        c
    });
    let mut tot = Counts {
        n: 0,
        positive: 0,
        tail: vec![0; xs.len()],
        sup: vec![0; xs.len()],
    };
    for c in parts {
        tot.n += c.n;
        tot.positive += c.positive;
        for k in 0..xs.len() {
            tot.tail[k] += c.tail[k];
            tot.sup[k] += c.sup[k];
        }
    }
    let n = tot.n as f64;
    let b = tot.positive as f64 / n;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let l = tot.sup[k] as f64 / n;
            let a = tot.tail[k] as f64 / n;
            let ratio = if b > 0.0 { a / b } else { f64::NAN };
            // delta method for a/b, where {Y ≥ x} ⊂ {Y ≥ 0}
            let var_ratio = if b > 0.0 {
                (a * (1.0 - a) / (b * b) - a * a * (1.0 - b) / (b * b * b)).max(0.0) / n
            } else {
                f64::NAN
            };
            ReflectionEstimate {
                x,
                lhs: l,
                lhs_stderr: (l * (1.0 - l) / n).sqrt(),
                rhs: ratio,
                rhs_stderr: var_ratio.sqrt(),
                tail: a,
                tail_stderr: (a * (1.0 - a) / n).sqrt(),
                positive: b,
            }
        })
        .collect())
}

/// Single-level form of [`reflection_identity_levels`]; requires `n ≥ 10⁴`.
pub fn reflection_identity_check(
    params: &StableParams,
    t: f64,
    x: f64,
    n: usize,
    n_steps: usize,
    seed: u64,
) -> Result<ReflectionEstimate> {
    if n < 10_000 {
        return Err(Error::domain("reflection_identity_check", format!("need at least 10^4 paths, got {n}")));
    }
    let plan = McPlan::new(seed, n);
    Ok(reflection_identity_levels(params, t, &[x], n_steps, &plan)?[0])
}
