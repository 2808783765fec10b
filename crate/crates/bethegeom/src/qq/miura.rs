use std::fmt;
use std::sync::Arc;

use super::system::QQInstance;
use crate::error::{Error, Result};
use crate::numerics::linalg::{frobenius, identity, CMat};
use crate::numerics::scalar::{c64, C64};
use crate::numerics::Polynomial;

/// A matrix-valued function of the spectral parameter.
pub type MatrixFn = Arc<dyn Fn(C64) -> Result<CMat> + Send + Sync>;

/// ħ-connection A(u) of size r+1 in the defining representation, with the
/// QQ data it was built from.
#[derive(Clone)]
pub struct MiuraConnection {
    pub source: QQInstance,
    pub hbar: C64,
    eval: MatrixFn,
}

impl fmt::Debug for MiuraConnection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MiuraConnection")
            .field("size", &self.size())
            .field("hbar", &self.hbar)
            .field("source", &self.source)
            .finish()
    }
}

fn checked_eval(p: &Polynomial, u: C64, what: &str) -> Result<C64> {
    let v = p.eval(u);
    let scale: f64 = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| c.norm() * u.norm().powi(j as i32))
        .sum();
    if v.norm() <= 1e-13 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::PoleAtEvaluation(format!("{what} vanishes at u = {u}")));
    }
    Ok(v)
}

impl MiuraConnection {
    pub fn size(&self) -> usize {
        self.source.rank() + 1
    }

    pub fn eval(&self, u: C64) -> Result<CMat> {
        (self.eval)(u)
    }

    /// g_i(u) = ζ_i Q^i_+(ħu)/Q^i_+(u), 0-based node.
    pub fn g(&self, i: usize, u: C64) -> Result<C64> {
        let q = &self.source.q_plus[i];
        Ok(self.source.zeta[i] * checked_eval(q, self.hbar * u, "Q_+(ħu)")? / checked_eval(q, u, "Q_+(u)")?)
    }

    /// Diagonal ∏ g_i(u)^{α̌_i}.
    pub fn cartan_part(&self, u: C64) -> Result<Vec<C64>> {
        let r = self.source.rank();
        let g: Vec<C64> = (0..r).map(|i| self.g(i, u)).collect::<Result<_>>()?;
        Ok((0..=r)
            .map(|m| {
                let up = if m < r { g[m] } else { c64(1.0, 0.0) };
                let down = if m > 0 { g[m - 1] } else { c64(1.0, 0.0) };
                up / down
            })
            .collect())
    }

    /// Same connection with a different evaluator.
    fn with_eval(&self, source: QQInstance, eval: MatrixFn) -> Self {
        Self {
            source,
            hbar: self.hbar,
            eval,
        }
    }
}

/// A(u) = ∏_j [ζ_j Q^j_+(ħu)/Q^j_+(u)]^{α̌_j} exp(Λ_j Q^j_+(u)/(ζ_j Q^j_+(ħu)) e_j),
/// factors taken in the Coxeter ordering.
pub fn miura_connection(inst: &QQInstance, hbar: C64) -> Result<MiuraConnection> {
    if inst.rank() > 4 {
        return Err(Error::InvalidSpec(format!(
            "rank {} above the supported 4",
            inst.rank()
        )));
    }
    let src = inst.clone();
    let eval = {
        let inst = inst.clone();
        Arc::new(move |u: C64| -> Result<CMat> {
            let size = inst.rank() + 1;
            let mut a = identity(size);
            for &node in inst.cartan.ordering() {
                let j = node - 1;
                let q = &inst.q_plus[j];
                let g = inst.zeta[j] * checked_eval(q, hbar * u, "Q_+(ħu)")? / checked_eval(q, u, "Q_+(u)")?;
                let mut f = identity(size);
                f[(j, j)] = g;
                f[(j + 1, j + 1)] = 1.0 / g;
                f[(j, j + 1)] = inst.lambda[j].eval(u);
                a *= f;
            }
            Ok(a)
        })
    };
    Ok(MiuraConnection {
        source: src,
        hbar,
        eval,
    })
}

/// max over `points` of ‖A(u) - v(ħu) Z v(u)^{-1}‖ / ‖A(u)‖ (Frobenius).
pub fn z_twist_verify(
    conn: &MiuraConnection,
    z: &[C64],
    v: &dyn Fn(C64) -> Result<CMat>,
    points: &[C64],
) -> Result<f64> {
    twist_residual(&|u| conn.eval(u), conn.hbar, z, v, points)
}

fn twist_residual(
    a: &dyn Fn(C64) -> Result<CMat>,
    hbar: C64,
    z: &[C64],
    v: &dyn Fn(C64) -> Result<CMat>,
    points: &[C64],
) -> Result<f64> {
    let zm = CMat::from_diagonal(&nalgebra::DVector::from_column_slice(z));
    let mut worst: f64 = 0.0;
    for &u in points {
        let au = a(u)?;
        let vu = v(u)?;
        let inv = vu
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::SingularGauge(u.to_string()))?;
        let rhs = v(hbar * u)? * &zm * inv;
        worst = worst.max(frobenius(&(&au - rhs)) / frobenius(&au));
    }
    Ok(worst)
}

/// Rank-one gauge v(u) = [[Q_+, -Q_-], [0, 1/Q_+]].
pub fn sl2_gauge(inst: &QQInstance) -> impl Fn(C64) -> Result<CMat> + '_ {
    move |u| {
        let p = checked_eval(&inst.q_plus[0], u, "Q_+(u)")?;
        let m = inst.q_minus[0].eval(u);
        Ok(CMat::from_row_slice(2, 2, &[p, -m, c64(0.0, 0.0), 1.0 / p]))
    }
}

fn minor(a: &CMat, rows: &[usize], cols: &[usize]) -> C64 {
    CMat::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])]).determinant()
}

/// 2×2 block of A(u) on W_i: minors of A on the index sets {1..i} and
/// {1..i-1, i+1} (0-based node i).
pub fn plucker_block(conn: &MiuraConnection, i: usize, u: C64) -> Result<CMat> {
    let a = conn.eval(u)?;
    let i0: Vec<usize> = (0..=i).collect();
    let mut i1: Vec<usize> = (0..i).collect();
    i1.push(i + 1);
    let sets = [&i0, &i1];
    Ok(CMat::from_fn(2, 2, |r, c| minor(&a, sets[r], sets[c])))
}

/// v_i(u) = [[Q^i_+, -Q^i_-], [0, ∏_{j≠i}(Q^j_+)^{-a_ji} / Q^i_+]].
pub fn plucker_gauge(inst: &QQInstance, i: usize) -> impl Fn(C64) -> Result<CMat> + '_ {
    let rest = inst.neighbour_product(i);
    move |u| {
        let p = checked_eval(&inst.q_plus[i], u, "Q_+(u)")?;
        let m = inst.q_minus[i].eval(u);
        Ok(CMat::from_row_slice(2, 2, &[p, -m, c64(0.0, 0.0), rest.eval(u) / p]))
    }
}

/// Z_i = diag(ζ_i, ζ_i^{-1} ∏_{j≠i} ζ_j^{-a_ji}).
pub fn plucker_twist(inst: &QQInstance, i: usize) -> [C64; 2] {
    let rest: C64 = inst
        .cartan
        .neighbours(i)
        .map(|(j, m)| inst.zeta[j].powi(m as i32))
        .product();
    [inst.zeta[i], rest / inst.zeta[i]]
}

/// Z_i-twist residual of every 2×2 block, node by node.
pub fn miura_plucker_residuals(conn: &MiuraConnection, points: &[C64]) -> Result<Vec<f64>> {
    let inst = &conn.source;
    (0..inst.rank())
        .map(|i| {
            let v = plucker_gauge(inst, i);
            twist_residual(
                &|u| plucker_block(conn, i, u),
                conn.hbar,
                &plucker_twist(inst, i),
                &v,
                points,
            )
        })
        .collect()
}

/// μ_i(u) = ∏_{j≠i} Q^j_+(u)^{-a_ji} / (Q^i_+(u) Q^i_-(u)).
fn mu(inst: &QQInstance, i: usize, u: C64) -> Result<C64> {
    let num = inst.neighbour_product(i).eval(u);
    let den = checked_eval(&inst.q_plus[i], u, "Q_+(u)")? * checked_eval(&inst.q_minus[i], u, "Q_-(u)")?;
    Ok(num / den)
}

/// Data with Q^i_+ and Q^i_- exchanged and ζ_i replaced by its simple
/// reflection ζ_i^{-1} ∏_{j≠i} ζ_j^{-a_ij}. The new Q^i_+ is made monic
/// and Q^i_- rescaled so node i still solves the QQ-system; the other
/// nodes' Q_- are carried over unchanged.
pub fn swapped_instance(inst: &QQInstance, i: usize) -> Result<QQInstance> {
    let qm = &inst.q_minus[i];
    if qm.is_zero() {
        return Err(Error::InvalidSpec(format!("Q^{}_- not available", i + 1)));
    }
    let c = qm.leading();
    let mut out = inst.clone();
    out.q_plus[i] = qm.scale(1.0 / c);
    out.q_minus[i] = inst.q_plus[i].scale(-c);
    let refl: C64 = (0..inst.rank())
        .filter(|&j| j != i)
        .map(|j| inst.zeta[j].powi(-inst.cartan.entry(i, j) as i32))
        .product();
    out.zeta[i] = refl / inst.zeta[i];
    Ok(out)
}

/// A^{(i)}(u) = exp(μ_i(ħu) f_i) A(u) exp(-μ_i(u) f_i) with f_i = E_{i+1,i};
/// the returned connection records the swapped data as its source.
pub fn backlund(conn: &MiuraConnection, i: usize) -> Result<MiuraConnection> {
    if i >= conn.source.rank() {
        return Err(Error::IndexOutOfRange(format!(
            "node {} of rank {}",
            i + 1,
            conn.source.rank()
        )));
    }
    let swapped = swapped_instance(&conn.source, i)?;
    let inner = conn.clone();
    let hbar = conn.hbar;
    let eval = Arc::new(move |u: C64| -> Result<CMat> {
        let size = inner.size();
        let mut left = identity(size);
        left[(i + 1, i)] = mu(&inner.source, i, hbar * u)?;
        let mut right = identity(size);
        right[(i + 1, i)] = -mu(&inner.source, i, u)?;
        Ok(left * inner.eval(u)? * right)
    });
    Ok(conn.with_eval(swapped, eval))
}

/// max over `points` of ‖A^{(i)}(u) - A_swapped(u)‖ / ‖A^{(i)}(u)‖.
pub fn backlund_residual(conn: &MiuraConnection, i: usize, points: &[C64]) -> Result<f64> {
    let gauge = backlund(conn, i)?;
    let direct = miura_connection(&gauge.source, conn.hbar)?;
    let mut worst: f64 = 0.0;
    for &u in points {
        let a = gauge.eval(u)?;
        worst = worst.max(frobenius(&(&a - direct.eval(u)?)) / frobenius(&a));
    }
    Ok(worst)
}
