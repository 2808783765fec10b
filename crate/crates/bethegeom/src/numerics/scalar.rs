use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

pub type C64 = Complex<f64>;

/// Complex double-double, roughly 32 significant digits.
pub type Cdd = Complex<TwoFloat>;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Working precision selectable per run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    Std,
    Extended,
}

/// Minimal complex field interface shared by the binary64 and
/// double-double code paths.
pub trait Field:
    Copy
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(z: C64) -> Self;
    fn to_c64(self) -> C64;
    fn zero() -> Self;
    fn one() -> Self;
    /// Modulus rounded to binary64; adequate for pivoting and step control.
    fn modulus(self) -> f64;
}

impl Field for C64 {
    fn from_c64(z: C64) -> Self {
        z
    }
    fn to_c64(self) -> C64 {
        self
    }
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

impl Field for Cdd {
    fn from_c64(z: C64) -> Self {
        Complex::new(TwoFloat::from(z.re), TwoFloat::from(z.im))
    }
    fn to_c64(self) -> C64 {
        C64::new(f64::from(self.re), f64::from(self.im))
    }
    fn zero() -> Self {
        Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0))
    }
    fn one() -> Self {
        Complex::new(TwoFloat::from(1.0), TwoFloat::from(0.0))
    }
    fn modulus(self) -> f64 {
        self.to_c64().norm()
    }
}

pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Integer powers of x^{1/4} built from one principal fourth root, so that
/// x^{1/2}, x^{1/4}, x^{h/4} all live on the same branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarterPowers {
    root: C64,
}

impl QuarterPowers {
    pub fn new(x: C64) -> Self {
        Self { root: x.powf(0.25) }
    }

    /// x^{m/4}.
    pub fn pow(&self, m: i32) -> C64 {
        self.root.powi(m)
    }

    pub fn sqrt(&self) -> C64 {
        self.pow(2)
    }
}

/// Principal square root; the single branch used everywhere a half power of
/// q or ħ appears outside the spin-chain code.
pub fn principal_sqrt(x: C64) -> C64 {
    x.sqrt()
}

/// Relative distance |x - y| / max(|x|, |y|, tiny).
pub fn rel_dist(x: C64, y: C64) -> f64 {
    let s = x.norm().max(y.norm()).max(1e-300);
    (x - y).norm() / s
}
