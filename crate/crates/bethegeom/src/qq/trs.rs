use serde::{Deserialize, Serialize};

use super::wronskian::WronskianData;
use crate::error::{Error, Result};
use crate::numerics::scalar::{principal_sqrt, C64};
use crate::numerics::special::elementary_symmetric;
use crate::spinchain::basis::combinations;

/// Phase-space point of the trigonometric Ruijsenaars-Schneider system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TRSData {
    pub xi: Vec<C64>,
    pub p: Vec<C64>,
    pub hbar: C64,
}

/// Coefficient convention for H_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrsNormalization {
    /// ∏ (ξ_i - ħξ_j)/(ξ_i - ξ_j).
    Printed,
    /// ∏ (ħ^{1/2}ξ_i - ħ^{-1/2}ξ_j)/(ξ_i - ξ_j).
    Symmetric,
}

impl TRSData {
    pub fn new(xi: Vec<C64>, p: Vec<C64>, hbar: C64) -> Result<Self> {
        if xi.len() != p.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates, {} momenta",
                xi.len(),
                p.len()
            )));
        }
        for i in 0..xi.len() {
            for j in 0..i {
                if (xi[i] - xi[j]).norm() <= 1e-12 * xi[i].norm().max(xi[j].norm()) {
                    return Err(Error::CoincidentCoordinates(format!("ξ_{} = ξ_{}", j + 1, i + 1)));
                }
            }
        }
        Ok(Self { xi, p, hbar })
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }
}

/// H_k = Σ_{|J|=k} ∏_{i∈J, j∉J} (ξ_i - ħξ_j)/(ξ_i - ξ_j) ∏_{m∈J} p_m.
pub fn trs_hamiltonian(data: &TRSData, k: usize) -> Result<C64> {
    trs_hamiltonian_with(data, k, TrsNormalization::Printed)
}

pub fn trs_hamiltonian_with(data: &TRSData, k: usize, norm: TrsNormalization) -> Result<C64> {
    let n = data.n();
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange(format!("k = {k} outside 1..={n}")));
    }
    let sh = principal_sqrt(data.hbar);
    let mut total = C64::new(0.0, 0.0);
    for set in combinations(n, k) {
        let inside: Vec<usize> = set.iter().map(|i| i - 1).collect();
        let mut term: C64 = inside.iter().map(|&m| data.p[m]).product();
        for &i in &inside {
            for j in (0..n).filter(|j| !inside.contains(j)) {
                let (x, y) = (data.xi[i], data.xi[j]);
                let den = x - y;
                if den.norm() == 0.0 {
                    return Err(Error::CoincidentCoordinates(format!("ξ_{} = ξ_{}", i + 1, j + 1)));
                }
                term *= match norm {
                    TrsNormalization::Printed => (x - data.hbar * y) / den,
                    TrsNormalization::Symmetric => (sh * x - y / sh) / den,
                };
            }
        }
        total += term;
    }
    Ok(total)
}

/// H_k - e_k(a) for k = 1..n, printed normalization.
pub fn lagrangian_residual(data: &TRSData, a: &[C64]) -> Result<Vec<C64>> {
    lagrangian_residual_with(data, a, TrsNormalization::Printed)
}

pub fn lagrangian_residual_with(data: &TRSData, a: &[C64], norm: TrsNormalization) -> Result<Vec<C64>> {
    if a.len() != data.n() {
        return Err(Error::DimensionMismatch(format!(
            "{} parameters for n = {}",
            a.len(),
            data.n()
        )));
    }
    (1..=data.n())
        .map(|k| Ok(trs_hamiltonian_with(data, k, norm)? - elementary_symmetric(a, k)?))
        .collect()
}

/// tRS point of degree-one sections s_i = c_i(u - p_i): coordinates ξ_i and
/// momenta p_i ħ^{-(n-1)/2}, paired with the symmetric normalization.
pub fn trs_from_sections(data: &WronskianData) -> Result<TRSData> {
    let (_, p) = data
        .linear_form()
        .ok_or_else(|| Error::InvalidSpec("sections are not all of degree one".into()))?;
    let n = p.len();
    let shift = principal_sqrt(data.hbar).powi(-(n as i32 - 1));
    TRSData::new(data.xi.clone(), p.iter().map(|&x| x * shift).collect(), data.hbar)
}
