use crate::error::{Error, Result};
use crate::numerics::linalg::{zeros, CMat};
use crate::numerics::scalar::{c64, QuarterPowers, C64};
use crate::numerics::special::qnumber;

/// Finite-dimensional evaluation module V_m with basis v_0..v_m.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteRep {
    pub m: usize,
    pub e: CMat,
    pub f: CMat,
    pub h: CMat,
}

impl SiteRep {
    pub fn dim(&self) -> usize {
        self.m + 1
    }

    /// H-eigenvalue of v_k.
    pub fn weight(&self, k: usize) -> i32 {
        self.m as i32 - 2 * k as i32
    }

    /// ħ^{sH/4} as a diagonal matrix, s an integer multiplier.
    pub fn hbar_h_power(&self, q: &QuarterPowers, s: i32) -> CMat {
        let d = self.dim();
        CMat::from_fn(d, d, |i, j| {
            if i == j {
                q.pow(s * self.weight(i))
            } else {
                c64(0.0, 0.0)
            }
        })
    }

    /// ‖[E,F] - [H]_ħ‖ in the Frobenius norm.
    pub fn commutation_residual(&self, hbar: C64) -> f64 {
        let q = QuarterPowers::new(hbar);
        let lhs = &self.e * &self.f - &self.f * &self.e;
        let den = q.pow(2) - q.pow(-2);
        let rhs = (self.hbar_h_power(&q, 2) - self.hbar_h_power(&q, -2)) / den;
        crate::numerics::linalg::frobenius(&(lhs - rhs))
    }
}

/// F v_k = v_{k+1}, E v_k = [k][m-k+1] v_{k-1}, H v_k = (m - 2k) v_k.
pub fn evaluation_module(m: i64, hbar: C64) -> Result<SiteRep> {
    if m < 1 {
        return Err(Error::InvalidWeight(m));
    }
    let m = m as usize;
    let hs = QuarterPowers::new(hbar).sqrt();
    let d = m + 1;
    let mut e = zeros(d, d);
    let mut f = zeros(d, d);
    let mut h = zeros(d, d);
    for k in 0..d {
        h[(k, k)] = c64(m as f64 - 2.0 * k as f64, 0.0);
        if k + 1 < d {
            f[(k + 1, k)] = c64(1.0, 0.0);
        }
        if k >= 1 {
            e[(k - 1, k)] = qnumber(k as i64, hs) * qnumber((m - k + 1) as i64, hs);
        }
    }
    Ok(SiteRep { m, e, f, h })
}

/// Auxiliary 2×2 matrix of site-space operators, entry [r][c].
pub type LOperator = [[CMat; 2]; 2];

/// Normalized L-operator L(x) acting on one site.
///
/// The lower-right entry is ħ^{-H/4} - ħ^{-1/2} x^{-1} ħ^{H/4}; with this
/// choice the monodromy satisfies the RTT relation (see CONVENTIONS.md).
pub fn l_operator(site: &SiteRep, x: C64, hbar: C64) -> Result<LOperator> {
    if x.norm() == 0.0 {
        return Err(Error::ZeroSpectralParameter);
    }
    let q = QuarterPowers::new(hbar);
    let xi = c64(1.0, 0.0) / x;
    let c = q.pow(2) - q.pow(-2);
    let kp = site.hbar_h_power(&q, 1);
    let km = site.hbar_h_power(&q, -1);
    let a = &kp - &km * (q.pow(-2) * xi);
    let b = &site.f * &km * c;
    let cc = &site.e * &kp * (c * xi);
    let d = &km - &kp * (q.pow(-2) * xi);
    Ok([[a, b], [cc, d]])
}

/// 2×2 scalar entries of the spin-1/2 L-operator, as [r][c][s][t].
pub(crate) fn l_spin_half(x: C64, q: &QuarterPowers) -> [[[[C64; 2]; 2]; 2]; 2] {
    let z = c64(0.0, 0.0);
    let xi = c64(1.0, 0.0) / x;
    let c = q.pow(2) - q.pow(-2);
    let h = q.pow(-2);
    // site basis v_0 (H = 1), v_1 (H = -1)
    let a = [[q.pow(1) - h * xi * q.pow(-1), z], [z, q.pow(-1) - h * xi * q.pow(1)]];
    let d = [[q.pow(-1) - h * xi * q.pow(1), z], [z, q.pow(1) - h * xi * q.pow(-1)]];
    // F ħ^{-H/4}: v_0 -> ħ^{-1/4} v_1
    let b = [[z, z], [c * q.pow(-1), z]];
    // x^{-1} c E ħ^{H/4}: v_1 -> ħ^{-1/4} v_0
    let cc = [[z, c * xi * q.pow(-1)], [z, z]];
    [[a, b], [cc, d]]
}
