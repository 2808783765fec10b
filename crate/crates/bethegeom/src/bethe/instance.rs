use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::scalar::{c64, rel_dist, QuarterPowers, C64};
use crate::spinchain::ChainSpec;

/// Which presentation of the Bethe system is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Convention {
    /// Algebraic Bethe ansatz form in (ħ, ζ).
    Aba,
    /// Saddle-point form in the geometric parameters (ħ', z).
    Saddle,
}

/// A Bethe system with k roots.
///
/// `hbar` and `twist` are read according to the convention: (ħ, ζ) for ABA,
/// (ħ', z) for SADDLE.
#[derive(Debug, Clone, PartialEq)]
pub struct BetheInstance {
    a: Vec<C64>,
    hbar: C64,
    twist: C64,
    k: usize,
    convention: Convention,
}

impl BetheInstance {
    pub fn aba(spec: &ChainSpec, k: usize) -> Result<Self> {
        Self::raw(spec.a().to_vec(), spec.hbar(), spec.zeta(), k, Convention::Aba)
    }

    /// SADDLE system obtained from the chain through the parameter
    /// dictionary (ħ' = ħ^{-1}, z = (-1)^n ζ²).
    pub fn saddle(spec: &ChainSpec, k: usize) -> Result<Self> {
        let (hg, z) = convention_transform(spec.hbar(), spec.zeta(), spec.n());
        Self::raw(spec.a().to_vec(), hg, z, k, Convention::Saddle)
    }

    pub fn raw(a: Vec<C64>, hbar: C64, twist: C64, k: usize, convention: Convention) -> Result<Self> {
        if k > a.len() {
            return Err(Error::IndexOutOfRange(format!("k = {k} > n = {}", a.len())));
        }
        if convention == Convention::Aba && twist.norm() == 0.0 {
            return Err(Error::InvalidSpec("ABA twist ζ must be nonzero".into()));
        }
        Ok(Self {
            a,
            hbar,
            twist,
            k,
            convention,
        })
    }

    pub fn with_twist(&self, twist: C64) -> Self {
        Self { twist, ..self.clone() }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }
    pub fn a(&self) -> &[C64] {
        &self.a
    }
    pub fn hbar(&self) -> C64 {
        self.hbar
    }
    pub fn twist(&self) -> C64 {
        self.twist
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Homotopy parameter of the target system: ζ² (ABA) or z (SADDLE).
    pub fn path_parameter(&self) -> C64 {
        match self.convention {
            Convention::Aba => self.twist * self.twist,
            Convention::Saddle => self.twist,
        }
    }

    fn check_poles(&self, roots: &[C64]) -> Result<()> {
        if roots.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "{} roots for k = {}",
                roots.len(),
                self.k
            )));
        }
        for (i, &v) in roots.iter().enumerate() {
            if let Some(j) = self.a.iter().position(|&a| rel_dist(a, v) < 1e-14) {
                return Err(Error::PoleCollision(format!("root {i} equals a[{j}]")));
            }
            for (j, &w) in roots.iter().enumerate() {
                if i != j && (rel_dist(v, w * self.hbar) < 1e-14 || rel_dist(v * self.hbar, w) < 1e-14) {
                    return Err(Error::PoleCollision(format!("roots {i}, {j} differ by ħ")));
                }
            }
        }
        Ok(())
    }

    /// Both sides (LHS_i, RHS_i) of the selected presentation.
    pub fn sides(&self, roots: &[C64]) -> Result<Vec<(C64, C64)>> {
        self.check_poles(roots)?;
        let q = QuarterPowers::new(self.hbar);
        let (hp, hm) = (q.pow(2), q.pow(-2));
        let n = self.n() as i32;
        let mut out = Vec::with_capacity(self.k);
        for (i, &v) in roots.iter().enumerate() {
            let mut lhs = c64(1.0, 0.0);
            let mut rhs = c64(1.0, 0.0);
            match self.convention {
                Convention::Aba => {
                    for &a in &self.a {
                        lhs *= (hp * v - hm * a) / (v - a);
                    }
                    for (j, &w) in roots.iter().enumerate() {
                        if j != i {
                            rhs *= (v * hp - w * hm) / (v * hm - w * hp);
                        }
                    }
                    rhs /= self.twist * self.twist;
                }
                Convention::Saddle => {
                    for (j, &w) in roots.iter().enumerate() {
                        if j != i {
                            lhs *= (v - w * self.hbar) / (v * self.hbar - w);
                        }
                    }
                    for &a in &self.a {
                        lhs *= (v - a) / (a * self.hbar - v);
                    }
                    rhs = self.twist * q.pow(-2 * n);
                }
            }
            out.push((lhs, rhs));
        }
        Ok(out)
    }

    /// Max over i of |LHS_i/RHS_i - 1|, or of |LHS_i| when RHS vanishes.
    pub fn relative_residual(&self, roots: &[C64]) -> Result<f64> {
        Ok(self
            .sides(roots)?
            .into_iter()
            .map(|(l, r)| if r.norm() > 0.0 { (l / r - 1.0).norm() } else { l.norm() })
            .fold(0.0, f64::max))
    }
}

/// Per-root LHS_i - RHS_i.
///
/// ABA: ∏_j (ħ^{1/2}v_i - ħ^{-1/2}a_j)/(v_i - a_j)
///      - ζ^{-2} ∏_{j≠i} (v_iħ^{1/2} - v_jħ^{-1/2})/(v_iħ^{-1/2} - v_jħ^{1/2}).
/// SADDLE: ∏_{j≠i}(s_i - s_jħ)/(s_iħ - s_j) ∏_j (s_i - a_j)/(a_jħ - s_i) - zħ^{-n/2}.
pub fn bethe_residual(inst: &BetheInstance, roots: &[C64]) -> Result<Vec<C64>> {
    Ok(inst.sides(roots)?.into_iter().map(|(l, r)| l - r).collect())
}

/// (ħ, ζ, n) ↦ (ħ^{-1}, (-1)^n ζ²).
pub fn convention_transform(hbar: C64, zeta: C64, n: usize) -> (C64, C64) {
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    (1.0 / hbar, zeta * zeta * sign)
}
