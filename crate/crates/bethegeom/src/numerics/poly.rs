use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{c64, C64};
use crate::error::{Error, Result};

/// Name of the polynomial variable; purely a display tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Var {
    #[default]
    U,
    X,
}

/// Dense univariate complex polynomial, lowest degree first.
///
/// The zero polynomial has an empty coefficient vector, so a nonzero
/// polynomial always has a nonzero leading coefficient.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<C64>,
    pub var: Var,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == c64(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs, var: Var::U }
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(c64(1.0, 0.0))
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    /// u - r.
    pub fn linear_root(r: C64) -> Self {
        Self::new(vec![-r, c64(1.0, 0.0)])
    }

    /// Monic polynomial ∏(u - r_i).
    pub fn from_roots(roots: &[C64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| &acc * &Self::linear_root(r))
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> C64 {
        self.coeffs.get(j).copied().unwrap_or(c64(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(c64(0.0, 0.0))
    }

    pub fn eval(&self, u: C64) -> C64 {
        self.coeffs.iter().rev().fold(c64(0.0, 0.0), |acc, &c| acc * u + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, &c)| c * j as f64)
                .collect(),
        )
        .with_var(self.var)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect()).with_var(self.var)
    }

    /// p(λu): coefficient c_j becomes c_j λ^j.
    pub fn dilate(&self, lambda: C64) -> Self {
        let mut pw = c64(1.0, 0.0);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(c * pw);
            pw *= lambda;
        }
        Self::new(out).with_var(self.var)
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DegenerateFactor("monic of zero polynomial".into()));
        }
        Ok(self.scale(c64(1.0, 0.0) / self.leading()))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one().with_var(self.var), |acc, _| &acc * self)
    }

    /// Drops leading coefficients below `tol` times the largest coefficient.
    pub fn trimmed(&self, tol: f64) -> Self {
        let m = self.max_abs_coeff();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.norm() <= tol * m) {
            c.pop();
        }
        Self::new(c).with_var(self.var)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Euclidean division: returns (quotient, remainder).
    pub fn div_rem(&self, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let dd = d
            .degree()
            .ok_or_else(|| Error::DegenerateFactor("division by zero polynomial".into()))?;
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut quo = vec![c64(0.0, 0.0); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let t = rem[k + dd] / lead;
            quo[k] = t;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= t * dc;
            }
        }
        rem.truncate(dd);
        Ok((Self::new(quo).with_var(self.var), Self::new(rem).with_var(self.var)))
    }

    /// Largest coefficient difference.
    pub fn max_coeff_diff(&self, other: &Polynomial) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|j| (self.coeff(j) - other.coeff(j)).norm())
            .fold(0.0, f64::max)
    }
}

pub fn poly_dilate(p: &Polynomial, lambda: C64) -> Polynomial {
    p.dilate(lambda)
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect()).with_var(self.var)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect()).with_var(self.var)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero().with_var(self.var);
        }
        let mut out = vec![c64(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out).with_var(self.var)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(c64(-1.0, 0.0))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let v = match self.var {
            Var::U => "u",
            Var::X => "x",
        };
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(j, c)| match j {
                0 => format!("({c})"),
                1 => format!("({c}){v}"),
                _ => format!("({c}){v}^{j}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
