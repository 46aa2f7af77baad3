//! Densities built on the one-sided stable law `g_β` (Laplace transform
//! `exp(-s^β)`): the inverse subordinator density `h(r, t)`, the density of
//! the reflected process started at zero, and the positive half-line density
//! of the spectrally negative process.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::params::StableParams;
use crate::quad::{integrate_with_breaks, QuadConfig};
use crate::special::gamma::{gamma_unchecked, ln_gamma, sin_pi};

const SERIES_TERMS: usize = 200;

/// Evaluator for the density of a standard β-stable subordinator at time 1.
///
/// For `u >= crossover` the convergent expansion in powers of `u^{-β}` is
/// summed with Neumaier compensation. Below the crossover the series suffers
/// cancellation, and the density is taken from the Zolotarev–Kanter integral
/// representation, whose integrand is positive.
#[derive(Debug, Clone)]
pub struct OneSidedStable {
    beta: f64,
    // (ln |c_k|, sign c_k) for k = 1..=SERIES_TERMS
    coeffs: Vec<(f64, f64)>,
    crossover: f64,
}

impl OneSidedStable {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::domain(
                "OneSidedStable::new",
                format!("beta must lie in (0, 1), got {beta}"),
            ));
        }
        let coeffs: Vec<(f64, f64)> = (1..=SERIES_TERMS)
            .map(|k| {
                let kf = k as f64;
                let s = sin_pi(kf * beta);
                if s == 0.0 {
                    return (f64::NEG_INFINITY, 0.0);
                }
                let ln_mag = ln_gamma(kf * beta + 1.0) - ln_gamma(kf + 1.0) + s.abs().ln() - PI.ln();
                let alt = if k % 2 == 1 { 1.0 } else { -1.0 };
                (ln_mag, alt * s.signum())
            })
            .collect();
        // smallest power of two where the tail of the truncated series is negligible
        let mut crossover = 1.0f64;
        loop {
            let lnz = -beta * crossover.ln();
            let tail = coeffs[SERIES_TERMS - 50..]
                .iter()
                .enumerate()
                .map(|(i, (c, _))| c + (SERIES_TERMS - 50 + i + 1) as f64 * lnz)
                .fold(f64::NEG_INFINITY, f64::max);
            if tail < -43.0 || crossover > 1e6 {
                break;
            }
            crossover *= 2.0;
        }
        Ok(Self {
            beta,
            coeffs,
            crossover,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Argument above which the power series is used.
    pub fn crossover(&self) -> f64 {
        self.crossover
    }

    /// Density at `u`; zero for `u <= 0`.
    pub fn density(&self, u: f64) -> f64 {
        if !(u > 0.0) {
            return 0.0;
        }
        if u.is_infinite() {
            return 0.0;
        }
        if u >= self.crossover {
            self.density_series(u)
        } else {
            self.density_integral(u)
        }
    }

    pub(crate) fn density_series(&self, u: f64) -> f64 {
        let lnz = -self.beta * u.ln();
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (k, &(ln_c, sign)) in self.coeffs.iter().enumerate() {
            if sign == 0.0 {
                continue;
            }
            let term = sign * (ln_c + (k + 1) as f64 * lnz).exp();
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            if k > 8 && term.abs() < 1e-18 * (sum + comp).abs() {
                break;
            }
        }
        ((sum + comp) / u).max(0.0)
    }

    pub(crate) fn density_integral(&self, u: f64) -> f64 {
        let b = self.beta;
        let ob = 1.0 - b;
        let lnu = u.ln();
        let y = (-b / ob * lnu).exp();
        let ln_pref = (b / ob / PI).ln() - lnu / ob;
        let a0 = zolotarev_a(1e-12, b);
        if ln_pref + a0.ln() - a0 * y < -745.0 {
            return 0.0;
        }
        let integrand = |phi: f64| {
            let a = zolotarev_a(phi, b);
            if !a.is_finite() {
                return 0.0;
            }
            (ln_pref + a.ln() - a * y).exp()
        };
        let w = (1.0 / y.max(1.0).sqrt()).min(PI / 32.0);
        let breaks = [0.0, w, 4.0 * w, 16.0 * w, PI];
        let cfg = QuadConfig {
            abs_tol: 1e-300,
            rel_tol: 1e-12,
            max_intervals: 800,
        };
        match integrate_with_breaks(integrand, &breaks, cfg) {
            Ok(r) => r.value.max(0.0),
            Err(Error::Numeric { .. }) => {
                // relax once; the integrand is smooth so this only happens at extreme ranges
                let cfg = QuadConfig {
                    rel_tol: 1e-9,
                    max_intervals: 4000,
                    ..cfg
                };
                integrate_with_breaks(integrand, &breaks, cfg)
                    .map(|r| r.value.max(0.0))
                    .unwrap_or(f64::NAN)
            }
            Err(_) => f64::NAN,
        }
    }

    /// Location and height of the maximum of the density.
    pub fn mode(&self) -> (f64, f64) {
        // golden-section search on ln u; the density is unimodal
        let f = |lu: f64| self.density(lu.exp());
        let (mut a, mut b) = (-6.0f64, 6.0f64);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - r * (b - a);
        let mut d = a + r * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..90 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - r * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + r * (b - a);
                fd = f(d);
            }
        }
        let lu = 0.5 * (a + b);
        (lu.exp(), f(lu))
    }
}

/// Zolotarev's function `A(φ)` for the one-sided law, `0 < φ < π`.
#[inline]
pub(crate) fn zolotarev_a(phi: f64, beta: f64) -> f64 {
    let sb = (beta * phi).sin();
    ((sb / phi.sin()).powf(1.0 / (1.0 - beta))) * ((1.0 - beta) * phi).sin() / sb
}

thread_local! {
    static LAW_CACHE: RefCell<Option<Arc<OneSidedStable>>> = const { RefCell::new(None) };
}

/// Shared evaluator for `beta`, reused across calls on the same thread.
pub(crate) fn cached_law(beta: f64) -> Result<Arc<OneSidedStable>> {
    LAW_CACHE.with(|cell| {
        let mut slot = cell.borrow_mut();
        if let Some(law) = slot.as_ref() {
            if law.beta == beta {
                return Ok(law.clone());
            }
        }
        let law = Arc::new(OneSidedStable::new(beta)?);
        *slot = Some(law.clone());
        Ok(law)
    })
}

/// Density `g_β(u)` of the standard stable subordinator at time one.
pub fn stable_subordinator_density(u: f64, beta: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::domain(
            "stable_subordinator_density",
            format!("u must be positive, got {u}"),
        ));
    }
    Ok(cached_law(beta)?.density(u))
}

fn check_positive(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{name} must be positive and finite, got {v}")))
    }
}

/// Density of the inverse subordinator `E_t` at `r`, for any `beta ∈ (0, 1)`.
pub fn inverse_subordinator_density_beta(r: f64, t: f64, beta: f64) -> Result<f64> {
    const OP: &str = "inverse_subordinator_density";
    check_positive(OP, "r", r)?;
    check_positive(OP, "t", t)?;
    let law = cached_law(beta)?;
    Ok(h_with(&law, r, t))
}

#[inline]
fn h_with(law: &OneSidedStable, r: f64, t: f64) -> f64 {
    let b = law.beta;
    let lnr = r.ln();
    let arg = t * (-lnr / b).exp();
    let g = law.density(arg);
    if g == 0.0 {
        return 0.0;
    }
    (t / b) * (-(1.0 + 1.0 / b) * lnr).exp() * g
}

/// Density `h(r, t)` of the inverse stable subordinator.
pub fn inverse_subordinator_density(r: f64, t: f64, params: &StableParams) -> Result<f64> {
    inverse_subordinator_density_beta(r, t, params.beta())
}

/// Density of the reflected process `Z_t` started at zero, all three branches.
pub fn reflected_density_from_zero(x: f64, t: f64, params: &StableParams) -> Result<f64> {
    check_positive("reflected_density_from_zero", "t", t)?;
    if x.is_nan() {
        return Err(Error::domain("reflected_density_from_zero", "x is NaN"));
    }
    let b = params.beta();
    if x < 0.0 {
        Ok(0.0)
    } else if x == 0.0 {
        Ok(t.powf(-b) / gamma_unchecked(1.0 - b))
    } else {
        let law = cached_law(b)?;
        Ok(h_with(&law, x, t))
    }
}

/// Density of the spectrally negative process `Y_t` on `x > 0`, via `q = β p`.
pub fn spectrally_negative_density_pos(x: f64, t: f64, params: &StableParams) -> Result<f64> {
    const OP: &str = "spectrally_negative_density_pos";
    check_positive(OP, "x", x)?;
    check_positive(OP, "t", t)?;
    Ok(params.beta() * reflected_density_from_zero(x, t, params)?)
}

/// Reusable evaluator of `h`, `p` and `q` for a fixed parameter pair.
#[derive(Debug, Clone)]
pub struct StableDensities {
    params: StableParams,
    law: Arc<OneSidedStable>,
}

impl StableDensities {
    pub fn new(params: StableParams) -> Self {
        let law = Arc::new(OneSidedStable::new(params.beta()).expect("beta in [1/2, 1)"));
        Self { params, law }
    }

    pub fn params(&self) -> &StableParams {
        &self.params
    }

    pub fn law(&self) -> &OneSidedStable {
        &self.law
    }

    /// `p(x, t)` for `t > 0`; panics are avoided by returning 0 off the support.
    pub fn reflected(&self, x: f64, t: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else if x == 0.0 {
            t.powf(-self.params.beta()) / gamma_unchecked(1.0 - self.params.beta())
        } else {
            h_with(&self.law, x, t)
        }
    }

    pub fn inverse_subordinator(&self, r: f64, t: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        h_with(&self.law, r, t)
    }

    pub fn spectrally_negative_pos(&self, x: f64, t: f64) -> f64 {
        self.params.beta() * self.reflected(x, t)
    }
}
