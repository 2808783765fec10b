use nalgebra::{DMatrix, DVector};
use rand::Rng;

use super::cartan::CartanData;
use crate::error::{Error, Result};
use crate::numerics::linalg::solve_dense;
use crate::numerics::scalar::{c64, C64};
use crate::numerics::{poly_roots, Polynomial};
use crate::spinchain::chain::random_annulus;
use crate::spinchain::ChainSpec;

/// Solutions of the linear solve for Q_- must reproduce the right-hand side
/// to this relative accuracy.
const QMINUS_TOL: f64 = 1e-10;
const QMINUS_MAX_COND: f64 = 1e10;

/// Data of a QQ-system: Λ_i, ζ_i and the pairs Q^i_±.
#[derive(Debug, Clone, PartialEq)]
pub struct QQInstance {
    pub cartan: CartanData,
    pub lambda: Vec<Polynomial>,
    pub zeta: Vec<C64>,
    pub q_plus: Vec<Polynomial>,
    pub q_minus: Vec<Polynomial>,
}

/// (ξ, ξ̃) for the configured ordering:
/// ξ̃_i = ζ_i ∏_{j>i} ζ_j^{a_ji}, ξ_i = ζ_i^{-1} ∏_{j<i} ζ_j^{-a_ji}.
pub fn xi_factors(zeta: &[C64], cartan: &CartanData) -> Result<(Vec<C64>, Vec<C64>)> {
    let r = cartan.rank();
    if zeta.len() != r {
        return Err(Error::DimensionMismatch(format!("{} twists for rank {r}", zeta.len())));
    }
    if let Some(i) = zeta.iter().position(|z| z.norm() == 0.0) {
        return Err(Error::ZeroTwist(i + 1));
    }
    let mut xi = Vec::with_capacity(r);
    let mut xt = Vec::with_capacity(r);
    for i in 0..r {
        let mut t = zeta[i];
        let mut x = 1.0 / zeta[i];
        for (j, &zj) in zeta.iter().enumerate() {
            if j == i {
                continue;
            }
            let a = cartan.entry(j, i) as i32;
            if cartan.after(j, i) {
                t *= zj.powi(a);
            } else {
                x *= zj.powi(-a);
            }
        }
        xi.push(x);
        xt.push(t);
    }
    Ok((xi, xt))
}

impl QQInstance {
    /// Instance with unknown Q_- (set to zero until solved).
    pub fn new(cartan: CartanData, lambda: Vec<Polynomial>, zeta: Vec<C64>, q_plus: Vec<Polynomial>) -> Result<Self> {
        let r = cartan.rank();
        if lambda.len() != r || zeta.len() != r || q_plus.len() != r {
            return Err(Error::DimensionMismatch(format!(
                "rank {r} with {} Λ, {} ζ, {} Q_+",
                lambda.len(),
                zeta.len(),
                q_plus.len()
            )));
        }
        if let Some(i) = zeta.iter().position(|z| z.norm() == 0.0) {
            return Err(Error::ZeroTwist(i + 1));
        }
        for (i, q) in q_plus.iter().enumerate() {
            if q.is_zero() || (q.leading() - 1.0).norm() > 1e-12 {
                return Err(Error::InvalidSpec(format!("Q^{}_+ is not monic", i + 1)));
            }
        }
        Ok(Self {
            cartan,
            lambda,
            zeta,
            q_minus: vec![Polynomial::zero(); r],
            q_plus,
        })
    }

    pub fn with_q_minus(mut self, q_minus: Vec<Polynomial>) -> Result<Self> {
        if q_minus.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} Q_- for rank {}",
                q_minus.len(),
                self.rank()
            )));
        }
        self.q_minus = q_minus;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.cartan.rank()
    }

    pub fn xi(&self) -> Result<(Vec<C64>, Vec<C64>)> {
        xi_factors(&self.zeta, &self.cartan)
    }

    /// Λ_i(u) ∏_{j>i} Q^j_+(ħu)^{-a_ji} ∏_{j<i} Q^j_+(u)^{-a_ji}.
    pub fn rhs(&self, i: usize, hbar: C64) -> Polynomial {
        self.cartan.neighbours(i).fold(self.lambda[i].clone(), |acc, (j, m)| {
            let q = if self.cartan.after(j, i) {
                self.q_plus[j].dilate(hbar)
            } else {
                self.q_plus[j].clone()
            };
            &acc * &q.pow(m)
        })
    }

    /// ∏_{j≠i} Q^j_+(u)^{-a_ji}.
    pub fn neighbour_product(&self, i: usize) -> Polynomial {
        self.cartan
            .neighbours(i)
            .fold(Polynomial::one(), |acc, (j, m)| &acc * &self.q_plus[j].pow(m))
    }

    /// Checks the gcd and ħ-distinctness conditions within `tol`.
    pub fn check_nondegenerate(&self, hbar: C64, tol: f64) -> Result<()> {
        let r = self.rank();
        let roots: Vec<Vec<C64>> = self.q_plus.iter().map(poly_roots).collect::<Result<_>>()?;
        for i in 0..r {
            if !self.q_minus[i].is_zero() {
                for &w in &roots[i] {
                    let scale = self.q_minus[i]
                        .coeffs()
                        .iter()
                        .enumerate()
                        .map(|(j, c)| c.norm() * w.norm().powi(j as i32))
                        .sum::<f64>();
                    if self.q_minus[i].eval(w).norm() <= tol * scale {
                        return Err(Error::DegenerateFactor(format!(
                            "Q^{0}_+ and Q^{0}_- share the root {w}",
                            i + 1
                        )));
                    }
                }
            }
            for (j, _) in self.cartan.neighbours(i) {
                for &x in &roots[i] {
                    for &y in &roots[j] {
                        for m in -(r as i32 + 1)..=(r as i32 + 1) {
                            if (x - y * hbar.powi(m)).norm() <= tol * x.norm().max(1.0) {
                                return Err(Error::DegenerateFactor(format!(
                                    "roots {x} of Q^{}_+ and {y} of Q^{}_+ differ by ħ^{m}",
                                    i + 1,
                                    j + 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// ξ̃_i Q^i_-(u)Q^i_+(ħu) - ξ_i Q^i_-(ħu)Q^i_+(u) - (right-hand side), per node.
pub fn qq_residual(inst: &QQInstance, hbar: C64) -> Result<Vec<Polynomial>> {
    let (xi, xt) = inst.xi()?;
    Ok((0..inst.rank())
        .map(|i| {
            let qp = &inst.q_plus[i];
            let qm = &inst.q_minus[i];
            let lhs = &(&qm.scale(xt[i]) * &qp.dilate(hbar)) - &(&qm.dilate(hbar).scale(xi[i]) * qp);
            &lhs - &inst.rhs(i, hbar)
        })
        .collect())
}

/// Largest residual coefficient relative to the largest right-hand-side
/// coefficient, over all nodes.
pub fn qq_relative_residual(inst: &QQInstance, hbar: C64) -> Result<f64> {
    let res = qq_residual(inst, hbar)?;
    Ok((0..inst.rank())
        .map(|i| res[i].max_abs_coeff() / inst.rhs(i, hbar).max_abs_coeff().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max))
}

fn solve_node(qp: &Polynomial, rhs: &Polynomial, xi: C64, xt: C64, hbar: C64, degree: usize) -> Result<Polynomial> {
    let dp = qp.degree().unwrap_or(0);
    let rows = (degree + dp).max(rhs.degree().unwrap_or(0)) + 1;
    let cols = degree + 1;
    let shifted = qp.dilate(hbar);
    let mut m = DMatrix::<C64>::zeros(rows, cols);
    for k in 0..cols {
        let hk = hbar.powi(k as i32);
        for j in 0..=dp {
            m[(j + k, k)] += xt * shifted.coeff(j) - xi * hk * qp.coeff(j);
        }
    }
    let b = DVector::from_iterator(rows, (0..rows).map(|j| rhs.coeff(j)));
    let svd = crate::numerics::linalg::svd(&m, true, true)
        .ok_or_else(|| Error::NoPolynomialSolution("SVD did not converge".into()))?;
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(cond < QMINUS_MAX_COND) {
        return Err(Error::IllConditioned(cond));
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::NoPolynomialSolution(e.to_string()))?;
    let scale = b.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let res = (&m * &x - &b).iter().map(|c| c.norm()).fold(0.0, f64::max) / scale;
    if res > QMINUS_TOL {
        return Err(Error::NoPolynomialSolution(format!(
            "degree {degree}: relative residual {res:e}"
        )));
    }
    Ok(Polynomial::new(x.iter().copied().collect()))
}

/// Solves the QQ-system for every Q^i_- given Q^i_+, Λ_i and ζ_i.
///
/// The degree tried first is deg(RHS) - deg Q^i_+, then one above and one
/// below.
pub fn solve_qminus(inst: &QQInstance, hbar: C64) -> Result<Vec<Polynomial>> {
    let (xi, xt) = inst.xi()?;
    (0..inst.rank())
        .map(|i| {
            let rhs = inst.rhs(i, hbar);
            let dp = inst.q_plus[i].degree().unwrap_or(0);
            let base = rhs.degree().unwrap_or(0).saturating_sub(dp);
            let mut candidates = vec![base, base + 1];
            if base > 0 {
                candidates.push(base - 1);
            }
            let mut err = None;
            for d in candidates {
                match solve_node(&inst.q_plus[i], &rhs, xi[i], xt[i], hbar, d) {
                    Ok(q) => return Ok(q),
                    // a failed solve says more than an ill-conditioned one
                    Err(e) if !matches!(err, Some(Error::NoPolynomialSolution(_))) => err = Some(e),
                    Err(_) => {}
                }
            }
            Err(match err {
                Some(Error::NoPolynomialSolution(m)) => Error::NoPolynomialSolution(format!("node {}: {m}", i + 1)),
                Some(e) => e,
                None => Error::NoPolynomialSolution(format!("node {}", i + 1)),
            })
        })
        .collect()
}

/// Per-root value of Λ(w)/Λ(w/ħ) + ζ² Q_+(ħw)/Q_+(w/ħ) for a rank-one
/// instance.
pub fn qq_to_bethe_residual(inst: &QQInstance, hbar: C64) -> Result<Vec<C64>> {
    if inst.rank() != 1 {
        return Err(Error::DimensionMismatch(format!(
            "rank {} instance, expected rank 1",
            inst.rank()
        )));
    }
    let qp = &inst.q_plus[0];
    let lam = &inst.lambda[0];
    let zeta = inst.zeta[0];
    if qp.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let roots = poly_roots(qp)?;
    roots
        .iter()
        .map(|&w| {
            let den_l = lam.eval(w / hbar);
            let den_q = qp.eval(w / hbar);
            if den_l.norm() < 1e-300 || den_q.norm() < 1e-300 {
                return Err(Error::RootAtPole(format!("w = {w}")));
            }
            Ok(lam.eval(w) / den_l + zeta * zeta * qp.eval(hbar * w) / den_q)
        })
        .collect()
}

/// Rank-one instance attached to a Bethe solution of the chain:
/// Q_+ = ∏(u - v_i), Λ = ∏(u - a_j/ħ), ζ_Q = ζ^{-1} ħ^{(n-2k)/4}, with the
/// chain's ħ as the shift. Q_- is solved for. Returns the instance and ħ.
pub fn qq_from_bethe(spec: &ChainSpec, roots: &[C64]) -> Result<(QQInstance, C64)> {
    let n = spec.n();
    let k = roots.len();
    let hbar = spec.hbar();
    let lambda = Polynomial::from_roots(&spec.a().iter().map(|&a| a / hbar).collect::<Vec<_>>());
    let zq = spec.quarter().pow(n as i32 - 2 * k as i32) / spec.zeta();
    let inst = QQInstance::new(
        CartanData::a_type(1)?,
        vec![lambda],
        vec![zq],
        vec![Polynomial::from_roots(roots)],
    )?;
    let qm = solve_qminus(&inst, hbar)?;
    Ok((inst.with_q_minus(qm)?, hbar))
}

/// Completes monic Q^i_+ to a QQ solution: each Λ_i is the monic polynomial
/// of degree deg Q^i_+ for which the root conditions of node i hold, then
/// Q_- is solved for.
pub fn qq_from_qplus(cartan: CartanData, zeta: Vec<C64>, q_plus: Vec<Polynomial>, hbar: C64) -> Result<QQInstance> {
    let r = cartan.rank();
    let mut inst = QQInstance::new(cartan, vec![Polynomial::one(); r], zeta, q_plus)?;
    let (xi, xt) = inst.xi()?;
    for i in 0..r {
        let qp = &inst.q_plus[i];
        let d = qp.degree().unwrap_or(0);
        if d == 0 {
            continue;
        }
        let roots = poly_roots(qp)?;
        let other = {
            let mut t = inst.clone();
            t.lambda[i] = Polynomial::one();
            t.rhs(i, hbar)
        };
        // Λ(w)R(w) ξ Q_+(w/ħ) + ξ̃ Q_+(ħw) Λ(w/ħ)R(w/ħ) = 0 at each root w
        let mut a = Vec::with_capacity(d);
        let mut b = Vec::with_capacity(d);
        for &w in &roots {
            let p = other.eval(w) * xi[i] * qp.eval(w / hbar);
            let q = xt[i] * qp.eval(hbar * w) * other.eval(w / hbar);
            let row: Vec<C64> = (0..d)
                .map(|m| p * w.powi(m as i32) + q * (w / hbar).powi(m as i32))
                .collect();
            a.push(row);
            b.push(-(p * w.powi(d as i32) + q * (w / hbar).powi(d as i32)));
        }
        let mut c = solve_dense(a, b).ok_or(Error::IllConditioned(f64::INFINITY))?;
        c.push(c64(1.0, 0.0));
        inst.lambda[i] = Polynomial::new(c);
    }
    let qm = solve_qminus(&inst, hbar)?;
    inst.with_q_minus(qm)
}

/// Random QQ solution with monic Q^i_+ of the given degrees, roots in the
/// annulus 0.5 < |w| < 2.
pub fn random_qq_instance<R: Rng + ?Sized>(
    cartan: CartanData,
    degrees: &[usize],
    zeta: Vec<C64>,
    hbar: C64,
    rng: &mut R,
) -> Result<QQInstance> {
    if degrees.len() != cartan.rank() {
        return Err(Error::DimensionMismatch(format!(
            "{} degrees for rank {}",
            degrees.len(),
            cartan.rank()
        )));
    }
    let q_plus = degrees
        .iter()
        .map(|&d| Polynomial::from_roots(&(0..d).map(|_| random_annulus(rng, 0.5, 2.0)).collect::<Vec<_>>()))
        .collect();
    qq_from_qplus(cartan, zeta, q_plus, hbar)
}
