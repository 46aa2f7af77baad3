//! Grid × time density tables with CSV and JSON export.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::StableParams;
use crate::stochastic::fmt17;

pub const TABLE_VERSION: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Pde,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    pub version: String,
    pub params: StableParams,
    pub grid: Vec<f64>,
    pub times: Vec<f64>,
    /// `values[j][i]` is the density at `grid[i]`, time `times[j]`.
    pub values: Vec<Vec<f64>>,
    pub provenance: Provenance,
    /// Free-form settings of whatever produced the table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

impl DensityTable {
    pub fn new(
        params: StableParams,
        grid: Vec<f64>,
        times: Vec<f64>,
        values: Vec<Vec<f64>>,
        provenance: Provenance,
    ) -> Result<Self> {
        const OP: &str = "DensityTable::new";
        if grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|g| !g.is_finite()) {
            return Err(Error::domain(OP, "grid must be finite and strictly increasing"));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) || times.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::domain(OP, "times must be positive and strictly increasing"));
        }
        if values.len() != times.len() || values.iter().any(|row| row.len() != grid.len()) {
            return Err(Error::domain(OP, "values must be times.len() rows of grid.len() entries"));
        }
        if let Some(v) = values.iter().flatten().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(Error::domain(OP, format!("density values must be finite and nonnegative, found {v}")));
        }
        Ok(Self {
            version: TABLE_VERSION.to_string(),
            params,
            grid,
            times,
            values,
            provenance,
            config: None,
        })
    }

    pub fn with_config(mut self, config: serde_json::Value) -> Self {
        self.config = Some(config);
        self
    }

    pub fn column(&self, time_index: usize) -> &[f64] {
        &self.values[time_index]
    }

    /// Trapezoid mass over the grid, one entry per time.
    pub fn masses(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| {
                self.grid
                    .windows(2)
                    .zip(row.windows(2))
                    .map(|(g, v)| 0.5 * (g[1] - g[0]) * (v[0] + v[1]))
                    .sum()
            })
            .collect()
    }

    /// Header `y,t=<t1>,...` then one row per grid node.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut buf = String::with_capacity(self.grid.len() * 25 * (self.times.len() + 1));
        buf.push('y');
        for t in &self.times {
            let _ = write!(buf, ",t={}", fmt_time(*t));
        }
        buf.push('\n');
        for (i, y) in self.grid.iter().enumerate() {
            buf.push_str(&fmt17(*y));
            for row in &self.values {
                buf.push(',');
                buf.push_str(&fmt17(row[i]));
            }
            buf.push('\n');
        }
        out.write_all(buf.as_bytes())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }
}

/// Shortest representation that parses back to the same value.
fn fmt_time(t: f64) -> String {
    format!("{t}")
}
