use crate::error::{Error, Result};
use crate::numerics::linalg::{condition_number, solve_dense, CMat};
use crate::numerics::scalar::{c64, C64};
use crate::numerics::series::TruncatedSeries;
use crate::spinchain::SpinBasisIndex;

use super::instance::{BetheInstance, Convention};
use super::system::ClearedSystem;

/// Bethe roots as truncated series in z around the z = 0 fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesRootSet {
    pub roots: Vec<TruncatedSeries>,
    pub origin_subset: SpinBasisIndex,
}

impl SeriesRootSet {
    pub fn order(&self) -> usize {
        self.roots.first().map_or(0, |s| s.order())
    }

    pub fn eval(&self, z: C64) -> Vec<C64> {
        self.roots.iter().map(|s| s.eval(z)).collect()
    }
}

/// Order-by-order series Newton on the SADDLE equations: at order m the
/// correction solves J·c_m = -[F(s^{(m-1)}(z), z)]_m with J the z = 0
/// Jacobian.
pub fn perturbative_roots(inst: &BetheInstance, p: &SpinBasisIndex, d: usize) -> Result<SeriesRootSet> {
    if inst.convention() != Convention::Saddle {
        return Err(Error::InvalidSpec(
            "perturbative roots need the SADDLE convention".into(),
        ));
    }
    if p.len() != inst.k() {
        return Err(Error::DimensionMismatch(format!(
            "subset of size {} for k = {}",
            p.len(),
            inst.k()
        )));
    }
    let k = inst.k();
    let x: Vec<C64> = p.sites().iter().map(|&i| inst.a()[i - 1]).collect();
    let mut roots: Vec<TruncatedSeries> = x.iter().map(|&xi| TruncatedSeries::constant(xi, d)).collect();
    if k == 0 || d == 0 {
        return Ok(SeriesRootSet {
            roots,
            origin_subset: p.clone(),
        });
    }
    let sys = ClearedSystem::new(inst);
    let jac = sys.jacobian(&x, c64(0.0, 0.0));
    let jm = CMat::from_fn(k, k, |i, j| jac[i][j]);
    let cond = condition_number(&jm);
    if !(cond < 1e8) {
        return Err(Error::SingularJacobian(cond));
    }
    for m in 1..=d {
        let f = sys.eval_series(&roots);
        let rhs: Vec<C64> = f.iter().map(|s| -s.coeff(m)).collect();
        let cm = solve_dense(jac.clone(), rhs).ok_or(Error::SingularJacobian(cond))?;
        for (r, c) in roots.iter_mut().zip(cm) {
            r.set_coeff(m, c);
        }
    }
    Ok(SeriesRootSet {
        roots,
        origin_subset: p.clone(),
    })
}

/// SADDLE residual LHS_i(s(z)) - zħ^{-n/2} composed as truncated series.
pub fn saddle_residual_series(inst: &BetheInstance, roots: &SeriesRootSet) -> Result<Vec<TruncatedSeries>> {
    if inst.convention() != Convention::Saddle {
        return Err(Error::InvalidSpec("series residual needs the SADDLE convention".into()));
    }
    let d = roots.order();
    let hb = inst.hbar();
    let q = crate::numerics::scalar::QuarterPowers::new(hb);
    let n = inst.n() as i32;
    let s = &roots.roots;
    let mut out = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        let mut num = TruncatedSeries::constant(c64(1.0, 0.0), d);
        let mut den = TruncatedSeries::constant(c64(1.0, 0.0), d);
        for j in 0..s.len() {
            if j != i {
                num = &num * &(&s[i] - &s[j].scale(hb));
                den = &den * &(&s[i].scale(hb) - &s[j]);
            }
        }
        for &a in inst.a() {
            num = &num * &s[i].add_scalar(-a);
            den = &den * &s[i].scale(c64(-1.0, 0.0)).add_scalar(a * hb);
        }
        let mut r = &num * &den.invert()?;
        if d >= 1 {
            let c1 = r.coeff(1) - q.pow(-2 * n);
            r.set_coeff(1, c1);
        }
        out.push(r);
    }
    Ok(out)
}
