use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward_solver::integrator::{integrate_linear, SolverConfig, StepStats};
use crate::forward_solver::matrix::{build_rate_matrix, initial_delta, GridSpec, RateMatrix};
use crate::frac_ops::{raw_weights, rl_derivative_order_minus_one_at_zero, SampledFunction};
use crate::params::StableParams;
use crate::special::StableDensities;
use crate::table::{DensityTable, Provenance};

/// Interior node values at each requested time, plus the reconstructed
/// boundary value at `y_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardSolution {
    pub alpha: f64,
    pub grid: GridSpec,
    pub times: Vec<f64>,
    /// `u[j][i-1]` approximates the density at `y_i`, time `times[j]`.
    pub u: Vec<Vec<f64>>,
    pub boundary: Vec<f64>,
    pub stats: StepStats,
}

impl ForwardSolution {
    /// Values on `y_0..=y_N`.
    pub fn snapshot(&self, j: usize) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.grid.n + 1);
        v.push(self.boundary[j]);
        v.extend_from_slice(&self.u[j]);
        v
    }

    /// `h Σ u_i` over the interior nodes.
    pub fn mass(&self, j: usize) -> f64 {
        self.grid.h * self.u[j].iter().sum::<f64>()
    }

    /// Discrete order `alpha-1` derivative at the origin of snapshot `j`.
    pub fn boundary_functional(&self, j: usize) -> Result<f64> {
        let f = SampledFunction::new(self.grid.h, 0.0, self.snapshot(j))?;
        rl_derivative_order_minus_one_at_zero(&f, self.alpha)
    }

    /// Smallest `min u / max u` over all snapshots.
    pub fn worst_undershoot(&self) -> f64 {
        self.u
            .iter()
            .map(|s| {
                let max = s.iter().cloned().fold(f64::MIN, f64::max);
                let min = s.iter().cloned().fold(f64::MAX, f64::min);
                min / max
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `h Σ |u_i - p(y_i, t_j)|` over the interior nodes.
    pub fn l1_distance(&self, j: usize, p: impl Fn(f64) -> f64) -> f64 {
        let h = self.grid.h;
        h * self.u[j]
            .iter()
            .enumerate()
            .map(|(i, u)| (u - p(self.grid.node(i + 1))).abs())
            .sum::<f64>()
    }

    /// Table on the interior nodes; negative undershoots are clipped here.
    pub fn to_table(&self) -> Result<DensityTable> {
        let params = StableParams::from_alpha(self.alpha)?;
        let mut clipped = 0.0f64;
        let values = self
            .u
            .iter()
            .map(|s| {
                s.iter()
                    .map(|v| {
                        if *v < 0.0 {
                            clipped = clipped.max(-v);
                            0.0
                        } else {
                            *v
                        }
                    })
                    .collect()
            })
            .collect();
        if clipped > 0.0 {
            log::info!("clipped negative densities of magnitude up to {clipped:e}");
        }
        DensityTable::new(params, self.grid.interior_nodes(), self.times.clone(), values, Provenance::Pde)
    }
}

/// Evolves `u0` under the rate matrix and reconstructs the boundary value.
pub fn integrate(matrix: &RateMatrix, u0: &[f64], times: &[f64], cfg: &SolverConfig) -> Result<ForwardSolution> {
    let tr = integrate_linear(matrix.matrix(), u0, times, cfg)?;
    let w = raw_weights(matrix.alpha - 1.0, matrix.grid.n);
    let boundary = tr
        .states
        .iter()
        .map(|s| -s.iter().zip(&w[1..]).map(|(u, w)| u * w).sum::<f64>())
        .collect();
    Ok(ForwardSolution {
        alpha: matrix.alpha,
        grid: matrix.grid,
        times: tr.times,
        u: tr.states,
        boundary,
        stats: tr.stats,
    })
}

/// Forward solve from a cell approximation of the point mass at `x0`.
pub fn solve_forward(alpha: f64, x0: f64, grid: GridSpec, times: &[f64], cfg: &SolverConfig) -> Result<ForwardSolution> {
    let m = build_rate_matrix(alpha, grid)?;
    let u0 = initial_delta(x0, &grid)?;
    integrate(&m, &u0, times, cfg)
}

/// Transition densities `p(x0, y, t)` on the interior nodes.
pub fn transition_density(alpha: f64, x0: f64, grid: GridSpec, times: &[f64], cfg: &SolverConfig) -> Result<DensityTable> {
    let sol = solve_forward(alpha, x0, grid, times, cfg)?;
    Ok(sol.to_table()?.with_config(serde_json::json!({
        "x0": x0,
        "grid": grid,
        "solver": cfg,
    })))
}

/// L¹ distance of the solution from zero to the exact density, per time.
pub fn l1_error_from_zero(sol: &ForwardSolution) -> Result<Vec<f64>> {
    let d = StableDensities::new(StableParams::from_alpha(sol.alpha)?);
    Ok((0..sol.times.len())
        .map(|j| sol.l1_distance(j, |y| d.reflected(y, sol.times[j])))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub alpha: f64,
    pub t: f64,
    pub y_max: f64,
    /// `(h, L¹ error)` in the order given.
    pub points: Vec<(f64, f64)>,
    /// Least-squares slope of `ln error` against `ln h`.
    pub slope: f64,
}

impl ConvergenceStudy {
    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 < w[0].1)
    }
}

/// L¹ errors from `x0 = 0` at one time over a decreasing list of steps.
pub fn convergence_study(alpha: f64, y_max: f64, h_list: &[f64], t: f64, cfg: &SolverConfig) -> Result<ConvergenceStudy> {
    if h_list.len() < 3 || h_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::domain(
            "convergence_study",
            "need at least three strictly decreasing step sizes",
        ));
    }
    let mut points = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let grid = GridSpec::from_step(y_max, h)?;
        let sol = solve_forward(alpha, 0.0, grid, &[t], cfg)?;
        points.push((grid.h, l1_error_from_zero(&sol)?[0]));
    }
    let slope = loglog_slope(&points);
    Ok(ConvergenceStudy {
        alpha,
        t,
        y_max,
        points,
        slope,
    })
}

/// Least-squares slope of `ln e` against `ln h`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|(h, e)| (h.ln(), e.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<_> = [0.04, 0.02, 0.01].iter().map(|h: &f64| (*h, 3.0 * h.powf(1.5))).collect();
        assert!((loglog_slope(&pts) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn boundary_functional_vanishes() {
        let sol = solve_forward(1.5, 0.5, GridSpec::new(4.0, 80).unwrap(), &[0.1, 0.3], &SolverConfig::default()).unwrap();
        for j in 0..2 {
            let norm = sol.mass(j);
            assert!(sol.boundary_functional(j).unwrap().abs() <= 1e-8 * norm);
        }
    }

    #[test]
    fn needs_three_steps() {
        assert!(convergence_study(1.5, 4.0, &[0.1, 0.05], 1.0, &SolverConfig::default()).is_err());
        assert!(convergence_study(1.5, 4.0, &[0.05, 0.1, 0.2], 1.0, &SolverConfig::default()).is_err());
    }
}
