use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::scalar::{c64, rel_dist, QuarterPowers, C64};

/// An XXZ chain: evaluation parameters a_i, deformation ħ and twist ζ.
///
/// The Kähler parameter z is derived from ζ through the parameter
/// dictionary (see [`crate::bethe::convention_transform`]) and is kept here
/// for reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    n: usize,
    a: Vec<C64>,
    hbar: C64,
    zeta: C64,
    z: C64,
}

/// Default cap on the number of sites for dense operators.
pub const MAX_SITES: usize = 12;

impl ChainSpec {
    pub fn new(a: Vec<C64>, hbar: C64, zeta: C64) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::InvalidSpec("a: chain needs at least one site".into()));
        }
        if n > MAX_SITES {
            return Err(Error::InvalidSpec(format!("n = {n} exceeds the cap {MAX_SITES}")));
        }
        for (i, &ai) in a.iter().enumerate() {
            if !(ai.norm() > 0.0) || !ai.re.is_finite() || !ai.im.is_finite() {
                return Err(Error::InvalidSpec(format!("a[{i}]: must be finite and nonzero")));
            }
            for (j, &aj) in a.iter().enumerate().take(i) {
                if rel_dist(ai, aj) <= 1e-8 {
                    return Err(Error::InvalidSpec(format!(
                        "a[{j}], a[{i}]: evaluation parameters must be pairwise distinct"
                    )));
                }
            }
        }
        if !(hbar.norm() > 0.0) {
            return Err(Error::InvalidSpec("hbar: must be nonzero".into()));
        }
        let mut hm = c64(1.0, 0.0);
        for m in 1..=2 * n {
            hm *= hbar;
            if (hm - 1.0).norm() <= 1e-8 {
                return Err(Error::InvalidSpec(format!(
                    "hbar: root-of-unity guard violated, |hbar^{m} - 1| <= 1e-8"
                )));
            }
        }
        if !(zeta.norm() > 0.0) {
            return Err(Error::InvalidSpec("zeta: must be nonzero".into()));
        }
        if (zeta * zeta - 1.0).norm() <= 1e-8 {
            return Err(Error::InvalidSpec("zeta: zeta^2 must differ from 1".into()));
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        Ok(Self {
            n,
            a,
            hbar,
            zeta,
            z: zeta * zeta * sign,
        })
    }

    /// Random generic chain: |a_i| in (0.5, 2), |ħ| in [0.3, 0.7],
    /// |ζ| in [0.5, 1.5], all phases uniform.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self::random_separated(n, rng, 0.05)
    }

    /// As [`ChainSpec::random`], rejecting draws whose separation measure
    /// (see [`ChainSpec::separation`]) falls below `sep`.
    pub fn random_separated<R: Rng + ?Sized>(n: usize, rng: &mut R, sep: f64) -> Self {
        loop {
            let a = (0..n).map(|_| random_annulus(rng, 0.5, 2.0)).collect();
            let hbar = random_annulus(rng, 0.3, 0.7);
            let zeta = random_annulus(rng, 0.5, 1.5);
            if let Ok(s) = Self::new(a, hbar, zeta) {
                if s.separation() >= sep {
                    return s;
                }
            }
        }
    }

    /// Distance from the degenerate loci met by random draws: coincident
    /// a's, resonant ratios a_i/a_j = ħ^{±1}, and ζ² = 1.
    pub fn separation(&self) -> f64 {
        let mut sep = (self.zeta * self.zeta - 1.0).norm();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let r = self.a[i] / self.a[j];
                sep = sep
                    .min(rel_dist(self.a[i], self.a[j]))
                    .min((r - self.hbar).norm())
                    .min((r * self.hbar - 1.0).norm());
            }
        }
        sep
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn a(&self) -> &[C64] {
        &self.a
    }
    pub fn hbar(&self) -> C64 {
        self.hbar
    }
    pub fn zeta(&self) -> C64 {
        self.zeta
    }
    /// Kähler parameter z = (-1)^n ζ².
    pub fn z(&self) -> C64 {
        self.z
    }
    /// The deformation parameter on the geometric side, ħ^{-1}.
    pub fn hbar_geometric(&self) -> C64 {
        1.0 / self.hbar
    }
    pub fn quarter(&self) -> QuarterPowers {
        QuarterPowers::new(self.hbar)
    }
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn with_zeta(&self, zeta: C64) -> Result<Self> {
        Self::new(self.a.clone(), self.hbar, zeta)
    }

    /// Same chain with the sites listed in reverse order.
    pub fn reversed(&self) -> Self {
        let mut s = self.clone();
        s.a.reverse();
        s
    }
}

pub fn random_annulus<R: Rng + ?Sized>(rng: &mut R, rmin: f64, rmax: f64) -> C64 {
    let r = rng.gen_range(rmin..rmax);
    let t = rng.gen_range(0.0..TAU);
    C64::from_polar(r, t)
}
