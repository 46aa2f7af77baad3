use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// A Markov semigroup `T_r f(x) = E^x f(X_r)` for one fixed initial
/// function `f`.
pub trait BaseSemigroup: Sync {
    /// Name of the generator, for reports.
    fn generator(&self) -> String;

    /// `u(x, r) = T_r f(x)`.
    fn evaluate(&self, x: f64, r: f64) -> f64;

    /// `X_r` started at `x`; `None` when the process has been killed.
    fn sample(&self, x: f64, r: f64, rng: &mut RngStream) -> Option<f64>;

    /// The initial function `f`.
    fn initial(&self, x: f64) -> f64 {
        self.evaluate(x, 0.0)
    }
}

/// Initial data with closed-form Gaussian smoothing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitialCondition {
    /// `exp(-(x - center)^2 / (2 width^2))`
    GaussianBump { center: f64, width: f64 },
    /// indicator of `[lo, hi]`
    Indicator { lo: f64, hi: f64 },
    Constant { value: f64 },
}

impl InitialCondition {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            InitialCondition::GaussianBump { center, width } => center.is_finite() && width > 0.0 && width.is_finite(),
            InitialCondition::Indicator { lo, hi } => lo < hi,
            InitialCondition::Constant { value } => value.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain("InitialCondition", format!("invalid initial condition {self:?}")))
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            InitialCondition::GaussianBump { center, width } => (-(x - center).powi(2) / (2.0 * width * width)).exp(),
            InitialCondition::Indicator { lo, hi } => {
                if x >= lo && x <= hi {
                    1.0
                } else {
                    0.0
                }
            }
            InitialCondition::Constant { value } => value,
        }
    }

    /// `E f(m + sqrt(v) N)` for a standard normal `N`.
    pub fn gaussian_average(&self, m: f64, v: f64) -> f64 {
        if v <= 0.0 {
            return self.eval(m);
        }
        match *self {
            InitialCondition::GaussianBump { center, width } => {
                let s2 = width * width;
                (s2 / (s2 + v)).sqrt() * (-(m - center).powi(2) / (2.0 * (s2 + v))).exp()
            }
            InitialCondition::Indicator { lo, hi } => {
                let d = (2.0 * v).sqrt();
                0.5 * (libm::erf((hi - m) / d) - libm::erf((lo - m) / d))
            }
            InitialCondition::Constant { value } => value,
        }
    }
}

/// `L = -lambda`: the state is frozen and killed at rate `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenDecay {
    pub lambda: f64,
    pub initial: InitialCondition,
}

impl EigenDecay {
    pub fn new(lambda: f64, initial: InitialCondition) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::domain("EigenDecay::new", format!("lambda must be nonnegative, got {lambda}")));
        }
        initial.validate()?;
        Ok(Self { lambda, initial })
    }

    /// `u(x, r) = exp(-lambda r)`.
    pub fn unit(lambda: f64) -> Result<Self> {
        Self::new(lambda, InitialCondition::Constant { value: 1.0 })
    }
}

impl BaseSemigroup for EigenDecay {
    fn generator(&self) -> String {
        format!("-{}", self.lambda)
    }

    fn evaluate(&self, x: f64, r: f64) -> f64 {
        (-self.lambda * r).exp() * self.initial.eval(x)
    }

    fn sample(&self, x: f64, r: f64, rng: &mut RngStream) -> Option<f64> {
        if self.lambda * r > 0.0 && rng.exp1() < self.lambda * r {
            None
        } else {
            Some(x)
        }
    }
}

/// `L = d^2/dx^2`; `X_r` is Brownian motion with variance `2r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Heat {
    pub initial: InitialCondition,
}

impl Heat {
    pub fn new(initial: InitialCondition) -> Result<Self> {
        initial.validate()?;
        Ok(Self { initial })
    }
}

impl BaseSemigroup for Heat {
    fn generator(&self) -> String {
        "d^2/dx^2".to_string()
    }

    fn evaluate(&self, x: f64, r: f64) -> f64 {
        self.initial.gaussian_average(x, 2.0 * r)
    }

    fn sample(&self, x: f64, r: f64, rng: &mut RngStream) -> Option<f64> {
        Some(x + (2.0 * r).sqrt() * rng.standard_normal())
    }
}

/// `L = drift d/dx + diffusivity d^2/dx^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftDiffusion {
    pub drift: f64,
    pub diffusivity: f64,
    pub initial: InitialCondition,
}

impl DriftDiffusion {
    pub fn new(drift: f64, diffusivity: f64, initial: InitialCondition) -> Result<Self> {
        if !drift.is_finite() || !(diffusivity >= 0.0 && diffusivity.is_finite()) {
            return Err(Error::domain(
                "DriftDiffusion::new",
                format!("need finite drift and nonnegative diffusivity, got {drift}, {diffusivity}"),
            ));
        }
        initial.validate()?;
        Ok(Self {
            drift,
            diffusivity,
            initial,
        })
    }
}

impl BaseSemigroup for DriftDiffusion {
    fn generator(&self) -> String {
        format!("{} d/dx + {} d^2/dx^2", self.drift, self.diffusivity)
    }

    fn evaluate(&self, x: f64, r: f64) -> f64 {
        self.initial
            .gaussian_average(x + self.drift * r, 2.0 * self.diffusivity * r)
    }

    fn sample(&self, x: f64, r: f64, rng: &mut RngStream) -> Option<f64> {
        Some(x + self.drift * r + (2.0 * self.diffusivity * r).sqrt() * rng.standard_normal())
    }
}
