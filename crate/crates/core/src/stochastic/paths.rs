//! Grid simulation of sample paths.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::StableParams;
use crate::rng::RngStream;
use crate::stochastic::samplers::{check_dt, SpectrallyNegativeSampler, SubordinatorSampler};

/// Which process a [`PathSample`] records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProcessTag {
    /// spectrally negative stable process
    Y,
    /// `Y` reflected at its running infimum
    Z,
    /// running supremum of `Y`
    S,
    /// stable subordinator
    D,
    /// inverse stable subordinator
    E,
}

/// A discretized trajectory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub tag: ProcessTag,
    pub params: StableParams,
    pub seed: u64,
    pub stream_id: u64,
}

impl PathSample {
    pub fn terminal(&self) -> f64 {
        *self.values.last().expect("paths have at least one point")
    }

    /// Writes `t,value` rows with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut buf = String::with_capacity(self.values.len() * 40);
        buf.push_str("t,value\n");
        for (t, v) in self.times.iter().zip(&self.values) {
            let _ = writeln!(buf, "{},{}", fmt17(*t), fmt17(*v));
        }
        out.write_all(buf.as_bytes())
    }
}

/// 17 significant digits, round-trip exact for `f64`.
pub fn fmt17(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{:.16e}", v)
}

fn uniform_times(t_end: f64, n_steps: usize) -> Vec<f64> {
    let dt = t_end / n_steps as f64;
    (0..=n_steps).map(|k| k as f64 * dt).collect()
}

fn check_grid(op: &'static str, t_end: f64, n_steps: usize) -> Result<f64> {
    if n_steps == 0 {
        return Err(Error::domain(op, "n_steps must be at least 1"));
    }
    let dt = t_end / n_steps as f64;
    check_dt(op, dt)?;
    Ok(dt)
}

/// Path of `Y` on the uniform grid by exact increments.
pub fn simulate_y_path(params: &StableParams, t_end: f64, n_steps: usize, rng: &mut RngStream) -> Result<PathSample> {
    let dt = check_grid("simulate_y_path", t_end, n_steps)?;
    let sampler = SpectrallyNegativeSampler::new(params);
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut y = 0.0;
    values.push(y);
    for _ in 0..n_steps {
        y += sampler.sample(dt, rng);
        values.push(y);
    }
    Ok(PathSample {
        times: uniform_times(t_end, n_steps),
        values,
        tag: ProcessTag::Y,
        params: *params,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    })
}

/// Reflected path `Z = Y - min(0, running min of Y)` over grid points,
/// started from `Z_0 = 0`.
pub fn simulate_reflected_path(params: &StableParams, t_end: f64, n_steps: usize, rng: &mut RngStream) -> Result<PathSample> {
    simulate_reflected_path_from(params, 0.0, t_end, n_steps, rng)
}

/// Reflected path started from `x0 >= 0`: `Z_t = x0 + Y_t - min(0, inf_s (x0 + Y_s))`.
pub fn simulate_reflected_path_from(
    params: &StableParams,
    x0: f64,
    t_end: f64,
    n_steps: usize,
    rng: &mut RngStream,
) -> Result<PathSample> {
    if !(x0 >= 0.0) {
        return Err(Error::domain("simulate_reflected_path", format!("start must be nonnegative, got {x0}")));
    }
    let mut path = simulate_y_path(params, t_end, n_steps, rng)?;
    let mut low = 0.0f64;
    for v in path.values.iter_mut() {
        let shifted = x0 + *v;
        low = low.min(shifted);
        *v = shifted - low;
    }
    path.tag = ProcessTag::Z;
    Ok(path)
}

/// Running supremum of a `Y` path.
pub fn simulate_supremum_path(params: &StableParams, t_end: f64, n_steps: usize, rng: &mut RngStream) -> Result<PathSample> {
    let mut path = simulate_y_path(params, t_end, n_steps, rng)?;
    let mut high = 0.0f64;
    for v in path.values.iter_mut() {
        high = high.max(*v);
        *v = high;
    }
    path.tag = ProcessTag::S;
    Ok(path)
}

/// Subordinator path with index `params.beta()` on the uniform grid.
pub fn simulate_subordinator_path(params: &StableParams, t_end: f64, n_steps: usize, rng: &mut RngStream) -> Result<PathSample> {
    let dt = check_grid("simulate_subordinator_path", t_end, n_steps)?;
    let sampler = SubordinatorSampler::new(params.beta())?;
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut d = 0.0;
    values.push(d);
    for _ in 0..n_steps {
        d += sampler.sample(dt, rng);
        values.push(d);
    }
    Ok(PathSample {
        times: uniform_times(t_end, n_steps),
        values,
        tag: ProcessTag::D,
        params: *params,
        seed: rng.seed(),
        stream_id: rng.stream_id(),
    })
}

/// Terminal value, grid minimum and grid maximum of one `Y` path, without
/// storing the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathExtremes {
    pub terminal: f64,
    pub min: f64,
    pub max: f64,
}

impl PathExtremes {
    /// Terminal value of the reflected process started at `x0`.
    pub fn reflected_terminal(&self, x0: f64) -> f64 {
        x0 + self.terminal - (x0 + self.min).min(0.0)
    }
}

pub(crate) fn path_extremes(
    sampler: &SpectrallyNegativeSampler,
    dt: f64,
    n_steps: usize,
    rng: &mut RngStream,
) -> PathExtremes {
    let s = dt.powf(1.0 / sampler.alpha());
    let (mut y, mut lo, mut hi) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..n_steps {
        y += s * sampler.sample_unit(rng);
        lo = lo.min(y);
        hi = hi.max(y);
    }
    PathExtremes {
        terminal: y,
        min: lo,
        max: hi,
    }
}

/// Extremes of one grid path of `Y` on `[0, t_end]`.
pub fn simulate_extremes(params: &StableParams, t_end: f64, n_steps: usize, rng: &mut RngStream) -> Result<PathExtremes> {
    let dt = check_grid("simulate_extremes", t_end, n_steps)?;
    Ok(path_extremes(&SpectrallyNegativeSampler::new(params), dt, n_steps, rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflected_path_invariants() {
        let p = StableParams::from_alpha(1.3).unwrap();
        for seed in 0..20 {
            let mut rng = RngStream::new(seed, 0);
            let z = simulate_reflected_path(&p, 1.0, 500, &mut rng).unwrap();
            assert_eq!(z.values[0], 0.0);
            assert!(z.values.iter().all(|&v| v >= 0.0));
            assert_eq!(z.values.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
            assert_eq!(z.tag, ProcessTag::Z);
        }
    }

    #[test]
    fn subordinator_and_supremum_are_monotone() {
        let p = StableParams::from_alpha(1.7).unwrap();
        let mut rng = RngStream::new(2, 0);
        let d = simulate_subordinator_path(&p, 2.0, 300, &mut rng).unwrap();
        assert_eq!(d.values[0], 0.0);
        assert!(d.values.windows(2).all(|w| w[1] >= w[0]));
        let s = simulate_supremum_path(&p, 2.0, 300, &mut rng).unwrap();
        assert!(s.values.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn extremes_match_stored_path() {
        let p = StableParams::from_alpha(1.5).unwrap();
        let y = simulate_y_path(&p, 1.0, 100, &mut RngStream::new(4, 9)).unwrap();
        let e = simulate_extremes(&p, 1.0, 100, &mut RngStream::new(4, 9)).unwrap();
        assert_eq!(e.terminal, y.terminal());
        let lo = y.values.iter().cloned().fold(0.0, f64::min);
        assert_eq!(e.min, lo);
        let z = simulate_reflected_path_from(&p, 0.7, 1.0, 100, &mut RngStream::new(4, 9)).unwrap();
        assert_eq!(e.reflected_terminal(0.7), z.terminal());
    }

    #[test]
    fn csv_has_header_and_rows() {
        let p = StableParams::from_alpha(1.5).unwrap();
        let z = simulate_reflected_path(&p, 1.0, 4, &mut RngStream::new(1, 0)).unwrap();
        let mut buf = Vec::new();
        z.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = s.lines().collect();
        assert_eq!(lines[0], "t,value");
        assert_eq!(lines.len(), 6);
        let back: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, z.values[2]);
    }

    #[test]
    fn zero_steps_rejected() {
        let p = StableParams::from_alpha(1.5).unwrap();
        assert!(simulate_y_path(&p, 1.0, 0, &mut RngStream::new(1, 0)).is_err());
    }
}
