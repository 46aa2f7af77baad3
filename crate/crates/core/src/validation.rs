//! The acceptance suite: ten numbered checks shared by the command-line
//! `validate` command and the `acceptance` test target.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cauchy::{mc_time_change_solve, subordination_solve, EigenDecay, FracCauchyConfig, TimeChange};
use crate::error::Result;
use crate::forward_solver::{
    build_rate_matrix, l1_error_from_zero, loglog_slope, solve_forward, ForwardSolution, GridSpec, SolverConfig,
};
use crate::frac_ops::{grunwald_partial_sums, grunwald_weights};
use crate::par::{sample_vec, try_sample_vec, McPlan};
use crate::params::StableParams;
use crate::special::{gamma_fn, inverse_subordinator_density_beta, reflected_density_from_zero};
use crate::stochastic::{ks_two_sample, reflection_identity_levels, simulate_extremes, HittingSampler, SpectrallyNegativeSampler};

pub const REPORT_VERSION: &str = "v1";

/// `(id, key, title)` of every check, in order.
pub const CHECKS: [(u8, &str, &str); 10] = [
    (1, "l1_error", "L1 error of the forward solver from zero"),
    (2, "convergence", "linear convergence in h"),
    (3, "rate_matrix", "rate-matrix generator structure"),
    (4, "weights", "Grünwald weight identities"),
    (5, "positivity", "P(Y_1 >= 0) = 1/alpha"),
    (6, "reflection", "reflection identity for the supremum"),
    (7, "marginals", "equal marginals of Z_t and E_t"),
    (8, "closed_form", "closed forms at beta = 1/2"),
    (9, "cauchy", "fractional Cauchy triangle"),
    (10, "boundary", "discrete no-flux boundary condition"),
];

const Y_MAX: f64 = 12.0;
const TIMES: [f64; 3] = [0.5, 1.0, 2.0];
const STEPS: [f64; 3] = [0.04, 0.02, 0.01];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// One measured quantity against its limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub label: String,
    pub measured: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub passed: bool,
}

impl CaseResult {
    pub fn at_most(label: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            tolerance,
            bound: Bound::AtMost,
            passed: measured <= tolerance,
        }
    }

    pub fn at_least(label: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            label: label.into(),
            measured,
            tolerance,
            bound: Bound::AtLeast,
            passed: measured >= tolerance,
        }
    }

    /// Larger is worse; above 1 fails.
    fn severity(&self) -> f64 {
        let (num, den) = match self.bound {
            Bound::AtMost => (self.measured, self.tolerance),
            Bound::AtLeast => (self.tolerance, self.measured),
        };
        if den > 0.0 {
            num / den
        } else if self.passed {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: u8,
    pub key: String,
    pub name: String,
    pub passed: bool,
    /// Worst case.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
    pub cases: Vec<CaseResult>,
    pub seconds: f64,
}

impl CheckResult {
    fn from_cases(id: u8, cases: Vec<CaseResult>, seconds: f64) -> Self {
        let (_, key, name) = CHECKS[id as usize - 1];
        let worst = cases
            .iter()
            .max_by(|a, b| a.severity().total_cmp(&b.severity()))
            .cloned();
        let passed = !cases.is_empty() && cases.iter().all(|c| c.passed);
        let failed: Vec<&str> = cases.iter().filter(|c| !c.passed).map(|c| c.label.as_str()).collect();
        let detail = match (&worst, failed.is_empty()) {
            (Some(w), true) => format!("{} cases, worst {}", cases.len(), w.label),
            (Some(_), false) => format!("failed: {}", failed.join("; ")),
            (None, _) => "no cases".to_string(),
        };
        Self {
            id,
            key: key.to_string(),
            name: name.to_string(),
            passed,
            measured: worst.as_ref().map_or(f64::NAN, |w| w.measured),
            tolerance: worst.as_ref().map_or(f64::NAN, |w| w.tolerance),
            detail,
            cases,
            seconds,
        }
    }

    fn from_error(id: u8, err: crate::Error, seconds: f64) -> Self {
        let (_, key, name) = CHECKS[id as usize - 1];
        Self {
            id,
            key: key.to_string(),
            name: name.to_string(),
            passed: false,
            measured: f64::NAN,
            tolerance: f64::NAN,
            detail: format!("error: {err}"),
            cases: Vec::new(),
            seconds,
        }
    }

    /// `[PASS]  6 reflection      worst ... (12.3 s)`
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] {:>2} {:<12} measured {:.6e} vs {} {:.6e} ({:.1} s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.key,
            self.measured,
            match self.cases.iter().find(|c| c.measured == self.measured).map(|c| c.bound) {
                Some(Bound::AtLeast) => ">=",
                _ => "<=",
            },
            self.tolerance,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub seed: u64,
    /// Overrides every Monte Carlo sample count when set.
    pub mc_samples: Option<usize>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            seed: 2024,
            mc_samples: None,
        }
    }
}

impl ValidationConfig {
    fn samples(&self, default: usize) -> usize {
        self.mc_samples.unwrap_or(default)
    }

    fn plan(&self, salt: u64, default: usize) -> McPlan {
        McPlan::new(self.seed.wrapping_mul(1_000_003).wrapping_add(salt), self.samples(default))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub version: String,
    pub config: ValidationConfig,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

/// Looks up a check by number or key.
pub fn resolve_check(name: &str) -> Option<u8> {
    CHECKS
        .iter()
        .find(|(id, key, _)| *key == name || id.to_string() == name)
        .map(|(id, _, _)| *id)
}

/// Runs checks in order, sharing forward solves between them.
pub struct Validator {
    cfg: ValidationConfig,
    solves: BTreeMap<(u64, usize), ForwardSolution>,
}

impl Validator {
    pub fn new(cfg: ValidationConfig) -> Self {
        Self {
            cfg,
            solves: BTreeMap::new(),
        }
    }

    pub fn run(&mut self, id: u8) -> CheckResult {
        let start = Instant::now();
        let out = match id {
            1 => self.l1_error(),
            2 => self.convergence(),
            3 => rate_matrix(),
            4 => weights(),
            5 => self.positivity(),
            6 => self.reflection(),
            7 => self.marginals(),
            8 => closed_form(),
            9 => self.cauchy(),
            10 => self.boundary(),
            _ => panic!("unknown check {id}"),
        };
        let secs = start.elapsed().as_secs_f64();
        let res = match out {
            Ok(cases) => CheckResult::from_cases(id, cases, secs),
            Err(e) => CheckResult::from_error(id, e, secs),
        };
        log::info!("{}", res.summary_line());
        res
    }

    pub fn run_all(&mut self, ids: &[u8]) -> ValidationReport {
        let checks: Vec<CheckResult> = ids.iter().map(|id| self.run(*id)).collect();
        ValidationReport {
            version: REPORT_VERSION.to_string(),
            config: self.cfg,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    fn solve(&mut self, alpha: f64, h: f64) -> Result<&ForwardSolution> {
        let grid = GridSpec::from_step(Y_MAX, h)?;
        let key = (alpha.to_bits(), grid.n);
        if let Entry::Vacant(slot) = self.solves.entry(key) {
            slot.insert(solve_forward(alpha, 0.0, grid, &TIMES, &SolverConfig::default())?);
        }
        Ok(&self.solves[&key])
    }

    fn l1_error(&mut self) -> Result<Vec<CaseResult>> {
        let mut cases = Vec::new();
        for (alpha, limit) in [(1.2, 0.05), (1.8, 0.004)] {
            let start = Instant::now();
            let sol = self.solve(alpha, 0.01)?;
            let errs = l1_error_from_zero(sol)?;
            let per_time = start.elapsed().as_secs_f64() / TIMES.len() as f64;
            for (t, e) in TIMES.iter().zip(errs) {
                cases.push(CaseResult::at_most(format!("alpha={alpha} t={t} L1"), e, limit));
            }
            if per_time > 0.0 {
                log::info!("alpha={alpha}: {per_time:.1} s per time level");
            }
        }
        Ok(cases)
    }

    fn convergence(&mut self) -> Result<Vec<CaseResult>> {
        let mut cases = Vec::new();
        for alpha in [1.2, 1.5, 1.8] {
            let mut errs = Vec::new();
            for h in STEPS {
                errs.push(l1_error_from_zero(self.solve(alpha, h)?)?);
            }
            for (j, t) in TIMES.iter().enumerate() {
                let pts: Vec<(f64, f64)> = STEPS.iter().zip(&errs).map(|(h, e)| (*h, e[j])).collect();
                let slope = loglog_slope(&pts);
                cases.push(CaseResult::at_most(
                    format!("alpha={alpha} t={t} slope={slope:.4}"),
                    (slope - 1.0).abs(),
                    0.2,
                ));
            }
        }
        Ok(cases)
    }

    fn positivity(&self) -> Result<Vec<CaseResult>> {
        let mut cases = Vec::new();
        for (k, alpha) in [1.2, 1.5, 1.8, 2.0].into_iter().enumerate() {
            let params = StableParams::from_alpha(alpha)?;
            let sampler = SpectrallyNegativeSampler::new(&params);
            let plan = self.cfg.plan(50 + k as u64, 1_000_000);
            let ys = sample_vec(&plan, |rng| sampler.sample_unit(rng));
            let n = ys.len() as f64;
            let p_hat = ys.iter().filter(|y| **y >= 0.0).count() as f64 / n;
            let p = 1.0 / alpha;
            let sigma = (p * (1.0 - p) / n).sqrt();
            cases.push(CaseResult::at_most(
                format!("alpha={alpha} P={p_hat:.5}"),
                (p_hat - p).abs(),
                3.0 * sigma,
            ));
        }
        Ok(cases)
    }

    fn reflection(&self) -> Result<Vec<CaseResult>> {
        let xs = [0.5, 1.0, 2.0];
        let ts = [0.5, 1.0];
        let mut cases = Vec::new();
        for (k, alpha) in [1.2, 1.5, 1.8, 2.0].into_iter().enumerate() {
            let params = StableParams::from_alpha(alpha)?;
            // Y_{ct} and c^{1/alpha} Y_t agree in law as processes, so one run
            // to t = 1 serves every t at the levels x t^{-1/alpha}.
            let levels: Vec<f64> = ts
                .iter()
                .flat_map(|t: &f64| xs.iter().map(move |x| x * t.powf(-1.0 / alpha)))
                .collect();
            let plan = self.cfg.plan(60 + k as u64, 1_000_000);
            let est = reflection_identity_levels(&params, 1.0, &levels, 2000, &plan)?;
            for (i, e) in est.iter().enumerate() {
                let (t, x) = (ts[i / xs.len()], xs[i % xs.len()]);
                let (rhs, sd) = if alpha == 2.0 {
                    (2.0 * e.tail, e.lhs_stderr.hypot(2.0 * e.tail_stderr))
                } else {
                    (e.rhs, e.combined_stderr())
                };
                cases.push(CaseResult::at_most(
                    format!("alpha={alpha} t={t} x={x} lhs={:.5} rhs={rhs:.5}", e.lhs),
                    (e.lhs - rhs).abs(),
                    3.0 * sd,
                ));
            }
        }
        Ok(cases)
    }

    fn marginals(&self) -> Result<Vec<CaseResult>> {
        let mut cases = Vec::new();
        for (i, beta) in [0.5, 0.6, 0.8].into_iter().enumerate() {
            let params = StableParams::from_beta(beta)?;
            let hitting = HittingSampler::new(beta, 1e-6)?;
            for (j, t) in TIMES.into_iter().enumerate() {
                let salt = 70 + 10 * i as u64 + j as u64;
                let z = try_sample_vec(&self.cfg.plan(salt, 100_000), |rng| {
                    simulate_extremes(&params, t, 4000, rng).map(|e| e.reflected_terminal(0.0))
                })?;
                let e = try_sample_vec(&self.cfg.plan(salt + 1000, 100_000), |rng| hitting.sample(t, rng))?;
                let ks = ks_two_sample(&z, &e)?;
                cases.push(CaseResult::at_least(
                    format!("beta={beta} t={t} D={:.5} p={:.4}", ks.statistic, ks.p_value),
                    ks.p_value,
                    0.01,
                ));
            }
        }
        Ok(cases)
    }

    fn cauchy(&self) -> Result<Vec<CaseResult>> {
        let want = std::f64::consts::E * libm::erfc(1.0);
        let base = EigenDecay::unit(1.0)?;
        let samples = self.cfg.samples(100_000);
        let cfg = FracCauchyConfig::new(0.5)?.with_samples(samples, self.cfg.seed.wrapping_add(90));
        let q = subordination_solve(&base, 0.0, 1.0, &cfg)?;
        let mut cases = vec![CaseResult::at_most(
            format!("quadrature {:.12}", q.value),
            (q.value - want).abs(),
            1e-6,
        )];
        let one = |_: f64| 1.0;
        for (label, tc) in [
            ("E", TimeChange::InverseE { rel_tol: 1e-6 }),
            ("Z", TimeChange::ReflectedZ { n_steps: 1 << 16 }),
        ] {
            let est = mc_time_change_solve(&base, &one, 0.0, 1.0, &cfg.with_time_change(tc))?;
            cases.push(CaseResult::at_most(
                format!("time change {label} {:.5}±{:.5}", est.estimate, est.stderr),
                (est.estimate - want).abs(),
                3.0 * est.stderr,
            ));
        }
        Ok(cases)
    }

    fn boundary(&mut self) -> Result<Vec<CaseResult>> {
        if self.solves.is_empty() {
            for alpha in [1.2, 1.5, 1.8] {
                self.solve(alpha, 0.01)?;
            }
        }
        let mut cases = Vec::new();
        for sol in self.solves.values() {
            for (j, t) in sol.times.iter().enumerate() {
                let l1 = sol.grid.h * sol.snapshot(j).iter().map(|v| v.abs()).sum::<f64>();
                let f = sol.boundary_functional(j)?;
                cases.push(CaseResult::at_most(
                    format!("alpha={} h={} t={t}", sol.alpha, sol.grid.h),
                    f.abs(),
                    1e-8 * l1,
                ));
            }
        }
        Ok(cases)
    }
}

fn rate_matrix() -> Result<Vec<CaseResult>> {
    let mut cases = Vec::new();
    for alpha in [1.1, 1.5, 1.9] {
        let grid = GridSpec::new(10.0, 1000)?;
        let m = build_rate_matrix(alpha, grid)?;
        let a = m.matrix();
        let s = m.scale();
        let n = grid.n;
        let mut worst_offdiag = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst_offdiag = worst_offdiag.min(a.get(i, j));
                }
            }
        }
        let cs = a.column_sums();
        let inner = cs[..n - 1].iter().fold(0.0f64, |m, c| m.max(c.abs()));
        cases.push(CaseResult::at_most(format!("alpha={alpha} negative off-diagonal"), (-worst_offdiag).max(0.0), 0.0));
        cases.push(CaseResult::at_most(format!("alpha={alpha} columns 1..N-1"), inner, 1e-13 * s));
        cases.push(CaseResult::at_most(format!("alpha={alpha} column N"), (cs[n - 1] + s).abs(), 1e-13 * s));
    }
    Ok(cases)
}

fn weights() -> Result<Vec<CaseResult>> {
    let n = 10_000;
    let mut cases = Vec::new();
    for alpha in [1.1, 1.2, 1.5, 1.8, 1.9] {
        let wa = grunwald_weights(alpha, n)?;
        let wb = grunwald_weights(alpha - 1.0, n)?;
        let (wa, wb) = (wa.values(), wb.values());
        let step = (1..=n)
            .map(|k| ((wa[k] - wb[k] + wb[k - 1]) / wb[k - 1]).abs())
            .fold(0.0, f64::max);
        cases.push(CaseResult::at_most(format!("alpha={alpha} difference identity"), step, 1e-13));
        let sums = grunwald_partial_sums(alpha, n)?;
        let partial = (0..=n).map(|m| ((sums[m] - wb[m]) / wb[m]).abs()).fold(0.0, f64::max);
        cases.push(CaseResult::at_most(format!("alpha={alpha} partial sums"), partial, 1e-13));
        let c = alpha * (alpha - 1.0) / gamma_fn(2.0 - alpha)?;
        let ratio = wa[n] / (c * (n as f64).powf(-alpha - 1.0));
        cases.push(CaseResult::at_most(format!("alpha={alpha} tail constant"), (ratio - 1.0).abs(), 0.01));
    }
    Ok(cases)
}

fn closed_form() -> Result<Vec<CaseResult>> {
    let mut worst = 0.0f64;
    for t in [0.25, 0.5, 1.0, 2.0, 5.0] {
        for k in 1..=60 {
            let r = 0.1 * k as f64;
            let exact = (-r * r / (4.0 * t)).exp() / (std::f64::consts::PI * t).sqrt();
            let got = inverse_subordinator_density_beta(r, t, 0.5)?;
            worst = worst.max((got - exact).abs());
        }
    }
    let params = StableParams::from_alpha(2.0)?;
    let p0 = reflected_density_from_zero(0.0, 1.0, &params)?;
    Ok(vec![
        CaseResult::at_most("h(r,t) at beta=1/2", worst, 1e-8),
        CaseResult::at_most("p(0,1) = 1/sqrt(pi)", (p0 - 1.0 / std::f64::consts::PI.sqrt()).abs(), 1e-8),
    ])
}
