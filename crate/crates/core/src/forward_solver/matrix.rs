use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frac_ops::{grunwald_partial_sums, raw_weights};

/// Largest dimension accepted for dense storage.
pub const MAX_DENSE_N: usize = 4096;

/// Uniform grid `y_i = i h`, `i = 0..=n`, with `h = y_max / n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub y_max: f64,
    pub n: usize,
    pub h: f64,
}

impl GridSpec {
    pub fn new(y_max: f64, n: usize) -> Result<Self> {
        if !(y_max > 0.0 && y_max.is_finite()) {
            return Err(Error::domain("GridSpec::new", format!("y_max must be positive, got {y_max}")));
        }
        if n < 3 {
            return Err(Error::domain("GridSpec::new", format!("need at least 3 interior nodes, got {n}")));
        }
        Ok(Self {
            y_max,
            n,
            h: y_max / n as f64,
        })
    }

    /// Grid with step closest to `h` that ends exactly at `y_max`.
    pub fn from_step(y_max: f64, h: f64) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::domain("GridSpec::from_step", format!("h must be positive, got {h}")));
        }
        Self::new(y_max, (y_max / h).round() as usize)
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 * self.h
    }

    /// Interior nodes `y_1..=y_n`.
    pub fn interior_nodes(&self) -> Vec<f64> {
        (1..=self.n).map(|i| self.node(i)).collect()
    }
}

/// Square matrix with zeros below the first subdiagonal, stored densely by row.
#[derive(Debug, Clone, PartialEq)]
pub struct HessenbergMatrix {
    n: usize,
    data: Vec<f64>,
}

impl HessenbergMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_N {
            return Err(Error::domain(
                "HessenbergMatrix::zeros",
                format!("dimension must lie in 1..={MAX_DENSE_N}, got {n}"),
            ));
        }
        Ok(Self {
            n,
            data: vec![0.0; n * n],
        })
    }

    /// Builds from rows; entries below the subdiagonal must be zero.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::domain("HessenbergMatrix::from_rows", "matrix must be square"));
            }
            for (j, &v) in row.iter().enumerate() {
                if j + 1 < i && v != 0.0 {
                    return Err(Error::domain(
                        "HessenbergMatrix::from_rows",
                        format!("nonzero entry below the subdiagonal at ({i}, {j})"),
                    ));
                }
                m.data[i * n + j] = v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn column_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.n];
        for i in 0..self.n {
            for (acc, v) in s.iter_mut().zip(self.row(i)) {
                *acc += v;
            }
        }
        s
    }

    /// `out = A x`, touching only the stored band.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let lo = i.saturating_sub(1);
            let row = &self.data[i * n + lo..(i + 1) * n];
            out[i] = row.iter().zip(&x[lo..]).map(|(a, b)| a * b).sum();
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.matvec_into(x, &mut out);
        out
    }

    /// LU factors of `I - c A` without pivoting.
    pub fn shifted_lu(&self, c: f64) -> Result<HessenbergLu> {
        let n = self.n;
        let mut u = self.data.iter().map(|a| -c * a).collect::<Vec<_>>();
        for i in 0..n {
            u[i * n + i] += 1.0;
        }
        let mut l = vec![0.0; n.saturating_sub(1)];
        for k in 0..n {
            let piv = u[k * n + k];
            if !(piv.abs() > f64::MIN_POSITIVE) || !piv.is_finite() {
                return Err(Error::numeric("HessenbergMatrix::shifted_lu", format!("zero pivot at row {k}"), piv));
            }
            if k + 1 < n {
                let m = u[(k + 1) * n + k] / piv;
                l[k] = m;
                let (top, bottom) = u.split_at_mut((k + 1) * n);
                let src = &top[k * n + k..(k + 1) * n];
                let dst = &mut bottom[k..n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= m * s;
                }
                bottom[k] = 0.0;
            }
        }
        Ok(HessenbergLu { n, l, u })
    }
}

/// Unit lower bidiagonal `L` and upper triangular `U` with `LU = I - cA`.
#[derive(Debug, Clone)]
pub struct HessenbergLu {
    n: usize,
    l: Vec<f64>,
    u: Vec<f64>,
}

impl HessenbergLu {
    /// Solves in place.
    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n.saturating_sub(1) {
            b[k + 1] -= self.l[k] * b[k];
        }
        for i in (0..n).rev() {
            let row = &self.u[i * n..(i + 1) * n];
            let s: f64 = row[i + 1..].iter().zip(&b[i + 1..]).map(|(a, x)| a * x).sum();
            b[i] = (b[i] - s) / row[i];
        }
    }
}

/// Semidiscrete generator of the Grünwald scheme with the no-flux boundary
/// row, already divided by `h^alpha`.
#[derive(Debug, Clone)]
pub struct RateMatrix {
    pub alpha: f64,
    pub grid: GridSpec,
    matrix: HessenbergMatrix,
}

impl RateMatrix {
    pub fn matrix(&self) -> &HessenbergMatrix {
        &self.matrix
    }

    /// `h^-alpha`.
    pub fn scale(&self) -> f64 {
        self.grid.h.powf(-self.alpha)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// 1-based entry, matching the usual matrix notation.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix.get(i - 1, j - 1)
    }
}

pub fn build_rate_matrix(alpha: f64, grid: GridSpec) -> Result<RateMatrix> {
    if !(alpha > 1.0 && alpha < 2.0) {
        return Err(Error::domain("build_rate_matrix", format!("alpha must lie in (1, 2), got {alpha}")));
    }
    if grid.n < 3 {
        return Err(Error::domain("build_rate_matrix", format!("need N >= 3, got {}", grid.n)));
    }
    let n = grid.n;
    let mut m = HessenbergMatrix::zeros(n)?;
    let w = raw_weights(alpha, n);
    let s = grid.h.powf(-alpha);
    let cum = grunwald_partial_sums(alpha, n - 1)?;
    for (j, c) in cum.iter().enumerate() {
        m.set(0, j, -c * s);
    }
    for i in 1..n {
        for j in i - 1..n {
            m.set(i, j, w[j + 1 - i] * s);
        }
    }
    Ok(RateMatrix {
        alpha,
        grid,
        matrix: m,
    })
}

/// Cell approximation of a point mass: `1/h` at 1-based index `floor(x/h)+1`.
pub fn initial_delta(x: f64, grid: &GridSpec) -> Result<Vec<f64>> {
    if !(x >= 0.0) || x >= grid.y_max {
        return Err(Error::domain(
            "initial_delta",
            format!("x must lie in [0, {}), got {x}", grid.y_max),
        ));
    }
    let mut u = vec![0.0; grid.n];
    let idx = ((x / grid.h).floor() as usize).min(grid.n - 1);
    u[idx] = 1.0 / grid.h;
    Ok(u)
}
