use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grünwald weights `w_k = (-1)^k binom(order, k)`, generated by the
/// multiplicative recurrence `w_k = w_{k-1} (k - 1 - order) / k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrunwaldWeights {
    order: f64,
    values: Vec<f64>,
    /// `Some(h)` when the values have been divided by `h^order`.
    scaled_by: Option<f64>,
}

impl GrunwaldWeights {
    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled_by(&self) -> Option<f64> {
        self.scaled_by
    }

    /// Returns a copy divided by `h^order`.
    pub fn scaled(&self, h: f64) -> Self {
        let s = h.powf(-self.order);
        Self {
            order: self.order,
            values: self.values.iter().map(|w| w * s).collect(),
            scaled_by: Some(h),
        }
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }
}

/// Weights `w_0..=w_n` of the given order in `(0, 2]`.
pub fn grunwald_weights(order: f64, n: usize) -> Result<GrunwaldWeights> {
    if !(order > 0.0 && order <= 2.0) {
        return Err(Error::domain(
            "grunwald_weights",
            format!("order must lie in (0, 2], got {order}"),
        ));
    }
    Ok(GrunwaldWeights {
        order,
        values: raw_weights(order, n),
        scaled_by: None,
    })
}

/// Partial sums `S_n = w_0 + ... + w_n` for `n = 0..=n_max`.
///
/// The sums cancel heavily (for `order` near 2, `S_n` is many orders of
/// magnitude below the leading weights), so they are accumulated from the
/// double-double weights and rounded once.
pub fn grunwald_partial_sums(order: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(order > 0.0 && order <= 2.0) {
        return Err(Error::domain(
            "grunwald_partial_sums",
            format!("order must lie in (0, 2], got {order}"),
        ));
    }
    let mut s = Dd::ZERO;
    Ok(dd_weights(order, n_max)
        .into_iter()
        .map(|w| {
            s = s.add(w);
            s.to_f64()
        })
        .collect())
}

/// Recurrence without the order check; also used for negative orders in tests.
pub(crate) fn raw_weights(order: f64, n: usize) -> Vec<f64> {
    dd_weights(order, n).into_iter().map(Dd::to_f64).collect()
}

/// The recurrence carried in double-double arithmetic.
fn dd_weights(order: f64, n: usize) -> Vec<Dd> {
    let mut w = Vec::with_capacity(n + 1);
    let mut cur = Dd::from(1.0);
    w.push(cur);
    for k in 1..=n {
        let kf = k as f64;
        let num = Dd::two_sum(kf - 1.0, -order);
        cur = cur.mul(num).div_f64(kf);
        w.push(cur);
    }
    w
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let e = (a - (s - bb)) + (b - bb);
        Dd { hi: s, lo: e }
    }

    fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Dd { hi: s, lo: b - (s - a) }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        let t = Dd::two_sum(self.lo, o.lo);
        let r = Dd::quick_two_sum(s.hi, s.lo + t.hi);
        Dd::quick_two_sum(r.hi, r.lo + t.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Dd::quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div_f64(self, d: f64) -> Dd {
        let q1 = self.hi / d;
        let p = q1 * d;
        let e = q1.mul_add(d, -p);
        let r = (self.hi - p - e + self.lo) / d;
        Dd::quick_two_sum(q1, r)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
