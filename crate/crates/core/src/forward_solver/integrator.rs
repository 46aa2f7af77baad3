use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward_solver::matrix::HessenbergMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Three-stage L-stable SDIRK of order 3 with an embedded order-2 pair.
    Sdirk3,
    /// Explicit Dormand–Prince 5(4).
    Dopri5,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    pub rtol: f64,
    pub atol: f64,
    /// First trial step; `None` picks one from the output horizon.
    pub initial_step: Option<f64>,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: Method::Sdirk3,
            rtol: 1e-8,
            atol: 1e-10,
            initial_step: None,
            max_steps: 1_000_000,
        }
    }
}

impl SolverConfig {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_tolerances(mut self, rtol: f64, atol: f64) -> Self {
        self.rtol = rtol;
        self.atol = atol;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err(Error::domain("SolverConfig", "tolerances must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::domain("SolverConfig", "max_steps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub factorizations: usize,
}

/// States of `u' = A u` at the requested times.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub stats: StepStats,
}

const GAMMA: f64 = 0.435_866_521_508_458_99;

fn error_norm(err: &[f64], a: &[f64], b: &[f64], cfg: &SolverConfig) -> f64 {
    let s: f64 = err
        .iter()
        .zip(a.iter().zip(b))
        .map(|(e, (x, y))| {
            let sc = cfg.atol + cfg.rtol * x.abs().max(y.abs());
            (e / sc).powi(2)
        })
        .sum();
    (s / err.len() as f64).sqrt()
}

trait Stepper {
    const ORDER: f64;
    /// Attempts one step; returns the new state and the scaled error norm.
    fn attempt(&mut self, a: &HessenbergMatrix, u: &[f64], dt: f64, cfg: &SolverConfig) -> Result<(Vec<f64>, f64)>;
    fn stats(&self) -> StepStats;
}

#[derive(Default)]
struct Sdirk3 {
    factorizations: usize,
}

impl Stepper for Sdirk3 {
    const ORDER: f64 = 2.0;

    fn attempt(&mut self, a: &HessenbergMatrix, u: &[f64], dt: f64, cfg: &SolverConfig) -> Result<(Vec<f64>, f64)> {
        let g = GAMMA;
        let a21 = 0.5 * (1.0 - g);
        let b1 = -(6.0 * g * g - 16.0 * g + 1.0) / 4.0;
        let b2 = (6.0 * g * g - 20.0 * g + 5.0) / 4.0;
        let bh2 = (1.0 - 2.0 * g) / (1.0 - g);
        let bh1 = 1.0 - bh2;

        let lu = a.shifted_lu(g * dt)?;
        self.factorizations += 1;
        let gdt = g * dt;
        let stage = |rhs: &[f64]| {
            let mut x = rhs.to_vec();
            lu.solve(&mut x);
            let k: Vec<f64> = x.iter().zip(rhs).map(|(x, r)| (x - r) / gdt).collect();
            (x, k)
        };
        let (_, k1) = stage(u);
        let rhs2: Vec<f64> = u.iter().zip(&k1).map(|(u, k)| u + dt * a21 * k).collect();
        let (_, k2) = stage(&rhs2);
        let rhs3: Vec<f64> = u
            .iter()
            .zip(k1.iter().zip(&k2))
            .map(|(u, (k1, k2))| u + dt * (b1 * k1 + b2 * k2))
            .collect();
        let (next, k3) = stage(&rhs3);
        let mut err: Vec<f64> = k1
            .iter()
            .zip(k2.iter().zip(&k3))
            .map(|(k1, (k2, k3))| dt * ((b1 - bh1) * k1 + (b2 - bh2) * k2 + g * k3))
            .collect();
        lu.solve(&mut err);
        let e = error_norm(&err, u, &next, cfg);
        Ok((next, e))
    }

    fn stats(&self) -> StepStats {
        StepStats {
            factorizations: self.factorizations,
            ..StepStats::default()
        }
    }
}

struct Dopri5;

const DP_A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

impl Stepper for Dopri5 {
    const ORDER: f64 = 4.0;

    fn attempt(&mut self, a: &HessenbergMatrix, u: &[f64], dt: f64, cfg: &SolverConfig) -> Result<(Vec<f64>, f64)> {
        let n = u.len();
        let mut k: Vec<Vec<f64>> = Vec::with_capacity(7);
        let mut tmp = vec![0.0; n];
        for s in 0..7 {
            for (i, t) in tmp.iter_mut().enumerate() {
                *t = u[i] + dt * (0..s).map(|j| DP_A[s][j] * k[j][i]).sum::<f64>();
            }
            k.push(a.matvec(&tmp));
        }
        // The seventh stage point is the fifth-order solution.
        let next: Vec<f64> = (0..n).map(|i| u[i] + dt * (0..6).map(|j| DP_A[6][j] * k[j][i]).sum::<f64>()).collect();
        let err: Vec<f64> = (0..n).map(|i| dt * (0..7).map(|j| DP_E[j] * k[j][i]).sum::<f64>()).collect();
        let e = error_norm(&err, u, &next, cfg);
        Ok((next, e))
    }

    fn stats(&self) -> StepStats {
        StepStats::default()
    }
}

/// Solves `u' = A u`, `u(0) = u0`, returning snapshots at `times`.
pub fn integrate_linear(a: &HessenbergMatrix, u0: &[f64], times: &[f64], cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if u0.len() != a.dim() {
        return Err(Error::domain(
            "integrate",
            format!("initial vector has length {}, matrix has dimension {}", u0.len(), a.dim()),
        ));
    }
    if times.is_empty() || !(times[0] > 0.0) || times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("integrate", "times must be positive and strictly increasing"));
    }
    match cfg.method {
        Method::Sdirk3 => run(Sdirk3::default(), a, u0, times, cfg),
        Method::Dopri5 => run(Dopri5, a, u0, times, cfg),
    }
}

fn run<S: Stepper>(mut stepper: S, a: &HessenbergMatrix, u0: &[f64], times: &[f64], cfg: &SolverConfig) -> Result<Trajectory> {
    let horizon = *times.last().unwrap();
    let mut dt = cfg.initial_step.unwrap_or(1e-6 * horizon).min(times[0]);
    let mut t = 0.0;
    let mut u = u0.to_vec();
    let mut states = Vec::with_capacity(times.len());
    let mut stats = StepStats::default();
    let expo = -1.0 / (S::ORDER + 1.0);

    for &target in times {
        while t < target {
            if stats.accepted + stats.rejected >= cfg.max_steps {
                return Err(Error::numeric(
                    "integrate",
                    format!("step budget {} exhausted at t = {t:e}", cfg.max_steps),
                    dt,
                ));
            }
            let landing = t + dt >= target * (1.0 - 1e-12);
            let step = if landing { target - t } else { dt };
            if step < 1e-14 * target.max(1.0) {
                return Err(Error::numeric(
                    "integrate",
                    format!("step size underflow at t = {t:e} (step {step:e})"),
                    step,
                ));
            }
            let (next, err) = stepper.attempt(a, &u, step, cfg)?;
            if !err.is_finite() {
                stats.rejected += 1;
                dt = 0.2 * step;
                continue;
            }
            let fac = (0.9 * err.max(1e-10).powf(expo)).clamp(0.2, 5.0);
            if err <= 1.0 {
                stats.accepted += 1;
                u = next;
                t = if landing { target } else { t + step };
                if !landing {
                    dt = step * fac;
                } else {
                    dt = dt.max(step * fac);
                }
            } else {
                stats.rejected += 1;
                dt = step * fac.min(1.0);
            }
        }
        states.push(u.clone());
    }
    stats.factorizations = stepper.stats().factorizations;
    log::debug!(
        "integrated to t = {horizon} with {} accepted, {} rejected steps",
        stats.accepted,
        stats.rejected
    );
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        stats,
    })
}
