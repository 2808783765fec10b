use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::solve_dense;
use crate::numerics::scalar::{c64, C64};
use crate::numerics::Polynomial;
use crate::spinchain::chain::random_annulus;

/// Sections s_1..s_{r+1}, the diagonal twist ξ and the Λ data of a quantum
/// Wronskian problem.
#[derive(Debug, Clone, PartialEq)]
pub struct WronskianData {
    pub sections: Vec<Polynomial>,
    pub xi: Vec<C64>,
    /// Λ_1..Λ_r (just Λ_1 when r = 0).
    pub lambda: Vec<Polynomial>,
    pub hbar: C64,
}

/// Placement of the ħ-shifts in W_k = ∏ P_i(ħ^{e_i} u), P_i = Λ_r⋯Λ_{r-i+1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WkPattern {
    /// P_1(u) P_2(ħ²u) P_3(ħ²u) ⋯ P_k(ħ^{k-1}u), as printed.
    Printed,
    /// P_i(ħ^{i-1}u) for i = 1..k.
    Regularized,
    /// P_i(ħ^{k-1-i}u) for i = 1..k-1.
    Consistent,
}

impl WronskianData {
    pub fn new(sections: Vec<Polynomial>, xi: Vec<C64>, lambda: Vec<Polynomial>, hbar: C64) -> Result<Self> {
        let n = sections.len();
        if n == 0 || xi.len() != n || lambda.len() != (n - 1).max(1) {
            return Err(Error::DimensionMismatch(format!(
                "{n} sections, {} twists, {} Λ",
                xi.len(),
                lambda.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if (xi[i] - xi[j]).norm() <= 1e-12 * xi[i].norm().max(xi[j].norm()) {
                    return Err(Error::CoincidentCoordinates(format!("ξ_{} = ξ_{}", j + 1, i + 1)));
                }
            }
        }
        Ok(Self {
            sections,
            xi,
            lambda,
            hbar,
        })
    }

    /// Full-flag data: only Λ_1 is nontrivial.
    pub fn full_flag(sections: Vec<Polynomial>, xi: Vec<C64>, lambda1: Polynomial, hbar: C64) -> Result<Self> {
        let mut lambda = vec![Polynomial::one(); sections.len().saturating_sub(1).max(1)];
        lambda[0] = lambda1;
        Self::new(sections, xi, lambda, hbar)
    }

    pub fn rank(&self) -> usize {
        self.sections.len() - 1
    }

    /// c_i and p_i of degree-one sections s_i = c_i(u - p_i).
    pub fn linear_form(&self) -> Option<(Vec<C64>, Vec<C64>)> {
        let mut c = Vec::new();
        let mut p = Vec::new();
        for s in &self.sections {
            if s.degree() != Some(1) {
                return None;
            }
            c.push(s.coeff(1));
            p.push(-s.coeff(0) / s.coeff(1));
        }
        Some((c, p))
    }

    /// P_i = Λ_r Λ_{r-1} ⋯ Λ_{r-i+1}; Λ's outside 1..r count as 1.
    pub fn p_factor(&self, i: usize) -> Polynomial {
        let r = self.rank();
        ((r + 1).saturating_sub(i)..=r)
            .filter(|&m| m >= 1)
            .fold(Polynomial::one(), |acc, m| &acc * &self.lambda[m - 1])
    }

    pub fn w_factor(&self, k: usize, pattern: WkPattern) -> Polynomial {
        let shift = |e: i32| self.hbar.powi(e);
        let terms: Vec<(usize, i32)> = match pattern {
            WkPattern::Printed => (1..=k)
                .map(|i| {
                    (
                        i,
                        if i == 1 {
                            0
                        } else if i == 2 {
                            2
                        } else {
                            i as i32 - 1
                        },
                    )
                })
                .collect(),
            WkPattern::Regularized => (1..=k).map(|i| (i, i as i32 - 1)).collect(),
            WkPattern::Consistent => (1..k).map(|i| (i, (k - 1 - i) as i32)).collect(),
        };
        terms.into_iter().fold(Polynomial::one(), |acc, (i, e)| {
            &acc * &self.p_factor(i).dilate(shift(e))
        })
    }
}

fn poly_det(m: &[Vec<Polynomial>]) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Polynomial::zero();
            for row in 0..n {
                let sub: Vec<Vec<Polynomial>> = m
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != row)
                    .map(|(_, r)| r[1..].to_vec())
                    .collect();
                let term = &m[row][0] * &poly_det(&sub);
                acc = if row % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

fn wronskian_matrix(data: &WronskianData, k: usize) -> Vec<Vec<Polynomial>> {
    let n = data.sections.len();
    (n - k..n)
        .map(|i| {
            (0..k)
                .map(|m| {
                    data.sections[i]
                        .dilate(data.hbar.powi(m as i32))
                        .scale(data.xi[i].powi((k - 1 - m) as i32))
                })
                .collect()
        })
        .collect()
}

/// 𝒟_k: determinant with identity columns e_1..e_{r+1-k} followed by the
/// columns ξ^{k-1-m} s(ħ^m u), m = 0..k-1.
pub fn quantum_wronskian(data: &WronskianData, k: usize) -> Result<Polynomial> {
    if k > data.sections.len() {
        return Err(Error::IndexOutOfRange(format!(
            "k = {k} above r+1 = {}",
            data.sections.len()
        )));
    }
    Ok(poly_det(&wronskian_matrix(data, k)))
}

/// α_k and monic 𝒱_k with 𝒟_k = α_k W_k 𝒱_k, using the consistent W_k.
pub fn extract_vk(data: &WronskianData, k: usize) -> Result<(C64, Polynomial)> {
    extract_vk_with(data, k, WkPattern::Consistent)
}

pub fn extract_vk_with(data: &WronskianData, k: usize, pattern: WkPattern) -> Result<(C64, Polynomial)> {
    if k == 0 {
        return Ok((c64(1.0, 0.0), Polynomial::one()));
    }
    let d = quantum_wronskian(data, k)?;
    let scale = d.max_abs_coeff();
    if scale == 0.0 {
        return Err(Error::DegenerateFactor(format!("𝒟_{k} vanishes identically")));
    }
    let (q, rem) = d.div_rem(&data.w_factor(k, pattern))?;
    let rel = rem.max_abs_coeff() / scale;
    if rel > 1e-9 {
        return Err(Error::InexactDivision(rel));
    }
    let q = q.trimmed(1e-12);
    Ok((q.leading(), q.monic()?))
}

const FLAG_RESTARTS: usize = 20;
const FLAG_TOL: f64 = 1e-10;

/// Coefficient residual of 𝒟_{r+1} - ∏(u - a_i) for s_i = c_i(u - p_i).
fn flag_equations(c: &[C64], p: &[C64], xi: &[C64], hbar: C64, target: &Polynomial) -> (Vec<C64>, Vec<Vec<C64>>) {
    let n = p.len();
    let sec = |c: &[C64], p: &[C64]| -> Vec<Polynomial> {
        (0..n).map(|i| Polynomial::new(vec![-c[i] * p[i], c[i]])).collect()
    };
    let data = WronskianData {
        sections: sec(c, p),
        xi: xi.to_vec(),
        lambda: Vec::new(),
        hbar,
    };
    let mat = wronskian_matrix(&data, n);
    let d = poly_det(&mat);
    let f: Vec<C64> = (0..=n).map(|j| d.coeff(j) - target.coeff(j)).collect();
    // Jacobian columns: ∂/∂p_i replaces row i by its p-derivative,
    // ∂/∂c_1 replaces row 1 by row 1 / c_1.
    let mut jac = vec![vec![c64(0.0, 0.0); n + 1]; n + 1];
    for i in 0..n {
        let mut m = mat.clone();
        for (col, entry) in m[i].iter_mut().enumerate() {
            *entry = Polynomial::constant(-c[i] * xi[i].powi((n - 1 - col) as i32));
        }
        let dp = poly_det(&m);
        for (j, row) in jac.iter_mut().enumerate() {
            row[i] = dp.coeff(j);
        }
    }
    let mut m = mat;
    for entry in m[0].iter_mut() {
        *entry = entry.scale(1.0 / c[0]);
    }
    let dc = poly_det(&m);
    for (j, row) in jac.iter_mut().enumerate() {
        row[n] = dc.coeff(j);
    }
    (f, jac)
}

/// Degree-one sections s_i = c_i(u - p_i) with 𝒟_{r+1} = ∏(u - a_i), by
/// Newton from random starts. The scaling freedom of the c_i is fixed by
/// c_2 = … = c_{r+1} = 1.
pub fn solve_flag_sections<R: Rng + ?Sized>(a: &[C64], xi: &[C64], hbar: C64, rng: &mut R) -> Result<WronskianData> {
    let n = a.len();
    if n == 0 || xi.len() != n {
        return Err(Error::DimensionMismatch(format!("{n} parameters, {} twists", xi.len())));
    }
    if n > 4 {
        return Err(Error::InvalidSpec(format!("r+1 = {n} above the supported 4")));
    }
    let target = Polynomial::from_roots(a);
    let tscale = target.max_abs_coeff();
    for _ in 0..FLAG_RESTARTS {
        let mut p: Vec<C64> = (0..n).map(|_| random_annulus(rng, 0.3, 2.0)).collect();
        let mut c = vec![c64(1.0, 0.0); n];
        c[0] = random_annulus(rng, 0.3, 2.0);
        for _ in 0..100 {
            let (f, jac) = flag_equations(&c, &p, xi, hbar, &target);
            let res = f.iter().map(|x| x.norm()).fold(0.0, f64::max) / tscale;
            if res < FLAG_TOL * 1e-2 {
                break;
            }
            let Some(step) = solve_dense(jac, f.iter().map(|x| -x).collect()) else {
                break;
            };
            if step.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
                break;
            }
            for i in 0..n {
                p[i] += step[i];
            }
            c[0] += step[n];
        }
        let (f, _) = flag_equations(&c, &p, xi, hbar, &target);
        let res = f.iter().map(|x| x.norm()).fold(0.0, f64::max) / tscale;
        if res < FLAG_TOL && c[0].norm() > 1e-8 {
            let sections = (0..n).map(|i| Polynomial::new(vec![-c[i] * p[i], c[i]])).collect();
            return WronskianData::full_flag(sections, xi.to_vec(), target, hbar);
        }
    }
    Err(Error::NewtonDiverged(FLAG_RESTARTS))
}

/// Largest coefficient of 𝒟_{r+1} - Λ_1 relative to Λ_1 (full-flag data).
pub fn flag_residual(data: &WronskianData) -> Result<f64> {
    let d = quantum_wronskian(data, data.sections.len())?;
    Ok(d.max_coeff_diff(&data.lambda[0]) / data.lambda[0].max_abs_coeff())
}
