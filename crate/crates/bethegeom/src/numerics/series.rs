use std::ops::{Add, Mul, Sub};

use super::scalar::{c64, C64};
use crate::error::{Error, Result};

/// Power series in z truncated after z^D.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<C64>,
}

impl TruncatedSeries {
    /// Series with the given coefficients c_0..c_D; order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![c64(0.0, 0.0); order + 1])
    }

    pub fn constant(c: C64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series z itself (zero at order 0).
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = c64(1.0, 0.0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> C64 {
        self.coeffs.get(m).copied().unwrap_or(c64(0.0, 0.0))
    }

    pub fn set_coeff(&mut self, m: usize, c: C64) {
        self.coeffs[m] = c;
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, c64(0.0, 0.0));
        Self::new(c)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add_scalar(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += s;
        out
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(c64(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn invert(&self) -> Result<Self> {
        series_invert(self)
    }
}

/// Multiplicative inverse to the same order.
pub fn series_invert(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    let c0 = s.coeffs[0];
    if c0 == c64(0.0, 0.0) {
        return Err(Error::ZeroConstantTerm);
    }
    let d = s.order();
    let mut inv = vec![c64(0.0, 0.0); d + 1];
    inv[0] = c64(1.0, 0.0) / c0;
    for m in 1..=d {
        let mut acc = c64(0.0, 0.0);
        for j in 1..=m {
            acc += s.coeffs[j] * inv[m - j];
        }
        inv[m] = -acc * inv[0];
    }
    Ok(TruncatedSeries::new(inv))
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let d = self.order().min(rhs.order());
        TruncatedSeries::new((0..=d).map(|m| self.coeffs[m] + rhs.coeffs[m]).collect())
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let d = self.order().min(rhs.order());
        TruncatedSeries::new((0..=d).map(|m| self.coeffs[m] - rhs.coeffs[m]).collect())
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let d = self.order().min(rhs.order());
        let mut out = vec![c64(0.0, 0.0); d + 1];
        for (i, &a) in self.coeffs.iter().take(d + 1).enumerate() {
            if a == c64(0.0, 0.0) {
                continue;
            }
            for j in 0..=d - i {
                out[i + j] += a * rhs.coeffs[j];
            }
        }
        TruncatedSeries::new(out)
    }
}
