use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const ANTICONCENTRATION_FLOOR: f64 = 0.01;

/// Exact mass function of `B(p, n)` accumulated in log space.
#[derive(Debug, Clone)]
pub struct BinomialPmf {
    pub n: usize,
    pub p: f64,
    pmf: Vec<f64>,
    /// `cdf[x] = P(X <= x)`
    cdf: Vec<f64>,
}

impl BinomialPmf {
    pub fn new(p: f64, n: usize) -> Self {
        let mut logs = Vec::with_capacity(n + 1);
        if p <= 0.0 || p >= 1.0 {
            let mut pmf = vec![0.0; n + 1];
            pmf[if p >= 1.0 { n } else { 0 }] = 1.0;
            return Self::from_pmf(p, n, pmf);
        }
        let odds = (p / (1.0 - p)).ln();
        let mut cur = n as f64 * (-p).ln_1p();
        logs.push(cur);
        for x in 0..n {
            cur += ((n - x) as f64 / (x + 1) as f64).ln() + odds;
            logs.push(cur);
        }
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut pmf: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = pmf.iter().sum();
        pmf.iter_mut().for_each(|m| *m /= total);
        Self::from_pmf(p, n, pmf)
    }

    fn from_pmf(p: f64, n: usize, pmf: Vec<f64>) -> Self {
        let mut cdf = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        for &m in &pmf {
            acc += m;
            cdf.push(acc);
        }
        Self { n, p, pmf, cdf }
    }

    pub fn pmf(&self, x: usize) -> f64 {
        self.pmf.get(x).copied().unwrap_or(0.0)
    }

    /// `P(a <= X <= b)` over integers, clipped to the support.
    pub fn mass_between(&self, a: i64, b: i64) -> f64 {
        let a = a.max(0);
        let b = b.min(self.n as i64);
        if a > b {
            return 0.0;
        }
        let upper = self.cdf[b as usize];
        let lower = if a == 0 {
            0.0
        } else {
            self.cdf[a as usize - 1]
        };
        (upper - lower).max(0.0)
    }

    /// `P(|X - θ| >= t)` by summing the two tails directly.
    pub fn outside(&self, theta: f64, t: f64) -> f64 {
        let low = (theta - t).floor() as i64;
        let high = (theta + t).ceil() as i64;
        let left = if low < 0 {
            0.0
        } else {
            self.mass_between(0, low)
        };
        let right = if high > self.n as i64 {
            0.0
        } else {
            self.mass_between(high, self.n as i64)
        };
        (left + right).min(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnticoncentrationReport {
    pub p: f64,
    pub n: usize,
    /// `½·√(pn)`
    pub threshold: f64,
    /// Minimum of `P(|X − θ| ≥ t)` over integer `θ ∈ [0, n]`.
    pub minimum: f64,
    pub argmin_theta: usize,
    /// Infimum over all real `θ`.
    pub real_infimum: f64,
    pub at_mean: f64,
    pub pass: bool,
}

/// Exact `min_θ P(|X − θ| ≥ ½√(pn))` for `X ~ B(p, n)`, scanning every θ.
pub fn binomial_anticoncentration(p: f64, n: usize) -> Result<AnticoncentrationReport> {
    if !(p > 0.0 && p <= 0.25) {
        return Err(Error::Precondition(format!("need 0 < p <= 1/4, got p={p}")));
    }
    let mean = p * n as f64;
    if mean < 36.0 {
        return Err(Error::Precondition(format!("need pn >= 36, got pn={mean}")));
    }
    let dist = BinomialPmf::new(p, n);
    let t = 0.5 * mean.sqrt();
    let (mut minimum, mut argmin_theta) = (f64::INFINITY, 0);
    for theta in 0..=n {
        let v = dist.outside(theta as f64, t);
        if v < minimum {
            minimum = v;
            argmin_theta = theta;
        }
    }
    // An open interval of length 2t holds at most ⌈2t⌉ integers.
    let width = (2.0 * t).ceil() as usize;
    let best_window = (0..=n.saturating_sub(width - 1))
        .map(|a| dist.mass_between(a as i64, (a + width - 1) as i64))
        .fold(0.0, f64::max);
    let real_infimum = (1.0 - best_window).max(0.0);
    Ok(AnticoncentrationReport {
        p,
        n,
        threshold: t,
        minimum,
        argmin_theta,
        real_infimum,
        at_mean: dist.outside(mean, t),
        pass: minimum >= ANTICONCENTRATION_FLOOR,
    })
}

/// `(p, n)` pairs with `p <= 1/4` and `pn >= 36` used for grid checks.
pub fn default_grid() -> Vec<(f64, usize)> {
    let mut grid = Vec::new();
    for &p in &[0.25f64, 0.2, 0.1, 0.05, 0.01] {
        for &mean in &[36.0, 50.0, 100.0, 400.0] {
            grid.push((p, (mean / p).ceil() as usize));
        }
    }
    grid
}
