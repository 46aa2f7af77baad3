use std::fmt::Write as _;

use serde_json::json;

use fracstable::cauchy::{
    fractional_diffusion_profile, mc_time_change_solve, subordination_solve, EigenDecay, FracCauchyConfig, TimeChange,
};
use fracstable::forward_solver::{l1_error_from_zero, solve_forward, GridSpec, Method, SolverConfig};
use fracstable::par::{map_chunks, try_sample_vec, McPlan};
use fracstable::stochastic::{
    fmt17, simulate_extremes, simulate_reflected_path, simulate_subordinator_path, simulate_supremum_path,
    simulate_y_path, InverseMethod, InverseSampler, PathSample, SpectrallyNegativeSampler, SubordinatorSampler,
};
use fracstable::validation::{resolve_check, ValidationConfig, Validator, CHECKS};
use fracstable::StableParams;

use crate::manifest::{manifest_path, RunManifest};
use crate::{
    CauchyArgs, CliError, Common, ForwardArgs, Integrator, InverseMethodArg, Problem, Process, SimulateArgs, SolveMethod,
    TimeChangeArg, ValidateArgs,
};

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Prints the manifest on `--dry-run`; returns whether to stop.
fn dry_run(common: &Common, manifest: &RunManifest) -> bool {
    if common.dry_run {
        println!("{}", manifest.to_json());
    }
    common.dry_run
}

/// L¹ limits for the solver self-check from zero.
fn self_check_limit(alpha: f64) -> Option<f64> {
    if alpha == 1.2 {
        Some(0.05)
    } else if alpha == 1.8 {
        Some(0.004)
    } else {
        None
    }
}

pub fn forward(a: ForwardArgs) -> Result<()> {
    if a.times.0.is_empty() || a.times.0.iter().any(|t| !(*t > 0.0)) {
        return Err(usage("--times must be positive"));
    }
    if a.times.0.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(usage("--times must be strictly increasing"));
    }
    if !(a.x0 >= 0.0 && a.x0 < a.ymax) {
        return Err(usage(format!("--x0 must lie in [0, {})", a.ymax)));
    }
    let cfg = SolverConfig::default()
        .with_method(match a.method {
            Integrator::Sdirk3 => Method::Sdirk3,
            Integrator::Dopri5 => Method::Dopri5,
        })
        .with_tolerances(a.rtol, a.atol);
    let params = json!({
        "alpha": a.alpha, "ymax": a.ymax, "n": a.n, "x0": a.x0, "times": a.times.0,
        "method": a.method, "rtol": a.rtol, "atol": a.atol, "out": a.out,
    });
    let mut manifest = RunManifest::new("forward", params, None);
    if dry_run(&a.common, &manifest) {
        return Ok(());
    }
    let grid = GridSpec::new(a.ymax, a.n)?;
    let sol = solve_forward(a.alpha, a.x0, grid, &a.times.0, &cfg)?;
    let table = sol.to_table()?;
    let mut csv = Vec::new();
    table.write_csv(&mut csv)?;
    manifest.write_output(&a.out, &csv)?;
    println!(
        "wrote {} ({} nodes, {} times; {} steps accepted, {} rejected)",
        a.out.display(),
        grid.n,
        a.times.0.len(),
        sol.stats.accepted,
        sol.stats.rejected
    );
    for (j, t) in a.times.0.iter().enumerate() {
        println!("t={t} mass={:.12}", sol.mass(j));
    }

    let mut failed = Vec::new();
    if a.x0 == 0.0 {
        let errs = l1_error_from_zero(&sol)?;
        let limit = self_check_limit(a.alpha);
        for (t, e) in a.times.0.iter().zip(&errs) {
            match limit {
                Some(l) => {
                    let ok = *e < l;
                    println!("t={t} L1 error {e:.6e} (limit {l}) {}", if ok { "ok" } else { "FAILED" });
                    if !ok {
                        failed.push(format!("t={t}"));
                    }
                }
                None => println!("t={t} L1 error {e:.6e}"),
            }
        }
    }
    manifest.finish(&manifest_path(&a.out, a.common.manifest.as_ref()))?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("L1 self-check failed at {}", failed.join(", "))))
    }
}

enum Draw {
    Exact(SpectrallyNegativeSampler),
    Subordinator(SubordinatorSampler),
    Grid(StableParams),
    Inverse(InverseSampler),
}

pub fn simulate(a: SimulateArgs) -> Result<()> {
    if a.method.is_some() && a.process != Process::E {
        return Err(usage("--method only applies to --process E"));
    }
    if a.full_paths && a.process == Process::E {
        return Err(usage("--full-paths is not available for E; draw terminal values instead"));
    }
    if a.paths == 0 || a.steps == 0 {
        return Err(usage("--paths and --steps must be at least 1"));
    }
    if !(a.t > 0.0 && a.t.is_finite()) {
        return Err(usage("--t must be positive"));
    }
    let method = a.method.unwrap_or(InverseMethodArg::Hitting);
    let params = json!({
        "process": a.process, "alpha": a.alpha, "beta": a.beta, "t": a.t, "paths": a.paths,
        "steps": a.steps, "method": (a.process == Process::E).then_some(method),
        "rel_tol": a.rel_tol, "full_paths": a.full_paths, "out": a.out,
    });
    let mut manifest = RunManifest::new("simulate", params, Some(a.seed));
    if dry_run(&a.common, &manifest) {
        return Ok(());
    }

    let stable = || match (a.alpha, a.beta) {
        (Some(alpha), _) => StableParams::from_alpha(alpha),
        (None, Some(beta)) => StableParams::from_beta(beta),
        (None, None) => unreachable!("clap requires one of the indices"),
    };
    let plan = McPlan::new(a.seed, a.paths);
    let mut buf = String::new();
    if a.full_paths {
        let p = stable()?;
        let one = |rng: &mut _| match a.process {
            Process::Y => simulate_y_path(&p, a.t, a.steps, rng),
            Process::Z => simulate_reflected_path(&p, a.t, a.steps, rng),
            Process::S => simulate_supremum_path(&p, a.t, a.steps, rng),
            Process::D => simulate_subordinator_path(&p, a.t, a.steps, rng),
            Process::E => unreachable!("rejected above"),
        };
        let chunks = map_chunks(&plan, |rng, len| (0..len).map(|_| one(rng)).collect::<fracstable::Result<Vec<PathSample>>>());
        buf.push_str("path,t,value\n");
        let mut k = 0;
        for c in chunks {
            for path in c? {
                for (t, v) in path.times.iter().zip(&path.values) {
                    let _ = writeln!(buf, "{k},{},{}", fmt17(*t), fmt17(*v));
                }
                k += 1;
            }
        }
    } else {
        let draw = match a.process {
            Process::Y => Draw::Exact(SpectrallyNegativeSampler::new(&stable()?)),
            Process::D => Draw::Subordinator(SubordinatorSampler::new(stable()?.beta())?),
            Process::Z | Process::S => Draw::Grid(stable()?),
            Process::E => {
                let beta = match (a.alpha, a.beta) {
                    (Some(alpha), _) => StableParams::from_alpha(alpha)?.beta(),
                    (None, Some(beta)) => beta,
                    (None, None) => unreachable!("clap requires one of the indices"),
                };
                let m = match method {
                    InverseMethodArg::Hitting => InverseMethod::Hitting { rel_tol: a.rel_tol },
                    InverseMethodArg::Supremum => InverseMethod::Supremum { n_steps: a.steps },
                };
                Draw::Inverse(InverseSampler::new(beta, m)?)
            }
        };
        let values = try_sample_vec(&plan, |rng| match &draw {
            Draw::Exact(s) => Ok(s.sample(a.t, rng)),
            Draw::Subordinator(s) => Ok(s.sample(a.t, rng)),
            Draw::Grid(p) => {
                let e = simulate_extremes(p, a.t, a.steps, rng)?;
                Ok(if a.process == Process::Z { e.reflected_terminal(0.0) } else { e.max })
            }
            Draw::Inverse(s) => s.sample(a.t, rng),
        })?;
        let name = serde_json::to_value(a.process).ok().and_then(|v| v.as_str().map(str::to_string));
        let _ = writeln!(buf, "{}", name.unwrap_or_default());
        for v in &values {
            buf.push_str(&fmt17(*v));
            buf.push('\n');
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        println!("mean of {} terminal values: {mean:.6}", values.len());
    }
    manifest.write_output(&a.out, buf.as_bytes())?;
    println!("wrote {}", a.out.display());
    manifest.finish(&manifest_path(&a.out, a.common.manifest.as_ref()))?;
    Ok(())
}

pub fn validate(a: ValidateArgs) -> Result<()> {
    let ids: Vec<u8> = if a.only.is_empty() {
        CHECKS.iter().map(|(id, _, _)| *id).collect()
    } else {
        let mut ids = a
            .only
            .iter()
            .map(|k| resolve_check(k.trim()).ok_or_else(|| usage(format!("unknown check `{k}`"))))
            .collect::<Result<Vec<_>>>()?;
        ids.sort_unstable();
        ids.dedup();
        ids
    };
    let cfg = ValidationConfig {
        seed: a.seed,
        mc_samples: a.mc_samples,
    };
    let params = json!({ "checks": ids, "mc_samples": a.mc_samples, "out": a.out });
    let mut manifest = RunManifest::new("validate", params, Some(a.seed));
    if dry_run(&a.common, &manifest) {
        return Ok(());
    }
    let mut v = Validator::new(cfg);
    let mut checks = Vec::new();
    for id in &ids {
        let r = v.run(*id);
        println!("{}", r.summary_line());
        checks.push(r);
    }
    let passed = checks.iter().all(|c| c.passed);
    let report = fracstable::validation::ValidationReport {
        version: fracstable::validation::REPORT_VERSION.to_string(),
        config: cfg,
        checks,
        passed,
    };
    let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
    text.push('\n');
    manifest.write_output(&a.out, text.as_bytes())?;
    manifest.finish(&manifest_path(&a.out, a.common.manifest.as_ref()))?;
    if passed {
        Ok(())
    } else {
        let n = report.checks.iter().filter(|c| !c.passed).count();
        Err(CliError::Failed(format!("{n} of {} checks failed", report.checks.len())))
    }
}

pub fn cauchy(a: CauchyArgs) -> Result<()> {
    if a.problem == Problem::Heat && a.method == SolveMethod::Mc {
        return Err(usage("the heat profile is computed by quadrature only; use --method quad"));
    }
    let time_change = match a.time_change {
        TimeChangeArg::Z => TimeChange::ReflectedZ { n_steps: a.steps },
        TimeChangeArg::E => TimeChange::InverseE { rel_tol: 1e-6 },
    };
    let cfg = FracCauchyConfig::new(a.beta)?
        .with_samples(a.samples, a.seed)
        .with_time_change(time_change);
    cfg.validate()?;
    let params = json!({
        "problem": a.problem, "beta": a.beta, "t": a.t, "method": a.method, "lambda": a.lambda,
        "time_change": (a.method == SolveMethod::Mc).then_some(a.time_change),
        "steps": a.steps, "samples": a.samples,
        "xgrid": (a.problem == Problem::Heat).then_some(&a.xgrid.0), "out": a.out,
    });
    let seed = (a.method == SolveMethod::Mc).then_some(a.seed);
    let mut manifest = RunManifest::new("cauchy", params, seed);
    if dry_run(&a.common, &manifest) {
        return Ok(());
    }
    let csv = match a.problem {
        Problem::Decay => {
            let base = EigenDecay::unit(a.lambda)?;
            let (value, err, label) = match a.method {
                SolveMethod::Quad => {
                    let q = subordination_solve(&base, 0.0, a.t, &cfg)?;
                    (q.value, q.abs_error, "quadrature error estimate")
                }
                SolveMethod::Mc => {
                    let e = mc_time_change_solve(&base, &|_| 1.0, 0.0, a.t, &cfg)?;
                    (e.estimate, e.stderr, "standard error")
                }
            };
            println!("p(t={}) = {value:.12} ± {err:.3e} ({label})", a.t);
            format!("t,value,error\n{},{},{}\n", fmt17(a.t), fmt17(value), fmt17(err))
        }
        Problem::Heat => {
            let table = fractional_diffusion_profile(a.beta, a.t, &a.xgrid.0, &cfg)?;
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            println!("profile on {} points", a.xgrid.0.len());
            String::from_utf8(buf).expect("csv is utf-8")
        }
    };
    manifest.write_output(&a.out, csv.as_bytes())?;
    println!("wrote {}", a.out.display());
    manifest.finish(&manifest_path(&a.out, a.common.manifest.as_ref()))?;
    Ok(())
}
