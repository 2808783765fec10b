use crate::error::{Error, Result};
use crate::numerics::linalg::{zeros, CMat, CVec};
use crate::numerics::scalar::{c64, rel_dist, QuarterPowers, C64};

use super::basis::block_indices;
use super::chain::ChainSpec;
use super::operator::Operator;
use super::site::l_spin_half;

type Site2 = [[C64; 2]; 2];

/// Entries of the twisted monodromy M(u) = L_1(u/a_1)⋯L_n(u/a_n)·diag(ζ, ζ^{-1}).
#[derive(Debug, Clone)]
pub struct Monodromy {
    pub a: Operator,
    pub b: Operator,
    pub c: Operator,
    pub d: Operator,
}

fn check_u(spec: &ChainSpec, u: C64) -> Result<()> {
    if !(u.norm() > 0.0) {
        return Err(Error::SpectralParameterAtPole("u = 0".into()));
    }
    if let Some(i) = spec.a().iter().position(|&a| rel_dist(a, u) < 1e-14) {
        return Err(Error::SpectralParameterAtPole(format!("u = a[{i}]")));
    }
    Ok(())
}

/// X · (1 ⊗ l ⊗ 1) with l acting on `site` (1-based).
fn right_mul_site(x: &CMat, n: usize, site: usize, l: &Site2) -> CMat {
    let dim = 1usize << n;
    let bit = 1usize << (n - site);
    let mut out = zeros(x.nrows(), dim);
    for b in 0..dim {
        let beta = usize::from(b & bit != 0);
        for bp in 0..2 {
            let coef = l[bp][beta];
            if coef == c64(0.0, 0.0) {
                continue;
            }
            let src = if bp == 1 { b | bit } else { b & !bit };
            let mut dst = out.column_mut(b);
            dst.axpy(coef, &x.column(src), c64(1.0, 0.0));
        }
    }
    out
}

/// (1 ⊗ l ⊗ 1) · v with l acting on `site` (1-based).
fn left_mul_site_vec(v: &CVec, n: usize, site: usize, l: &Site2) -> CVec {
    let dim = 1usize << n;
    let bit = 1usize << (n - site);
    CVec::from_fn(dim, |b, _| {
        let beta = usize::from(b & bit != 0);
        let lo = b & !bit;
        l[beta][0] * v[lo] + l[beta][1] * v[lo | bit]
    })
}

/// Untwisted product L_1⋯L_n as four full matrices.
fn monodromy_raw(spec: &ChainSpec, u: C64) -> [[CMat; 2]; 2] {
    let n = spec.n();
    let dim = spec.dim();
    let q = spec.quarter();
    let mut m = [
        [CMat::identity(dim, dim), zeros(dim, dim)],
        [zeros(dim, dim), CMat::identity(dim, dim)],
    ];
    for site in 1..=n {
        let l = l_spin_half(u / spec.a()[site - 1], &q);
        let mut next = [[zeros(dim, dim), zeros(dim, dim)], [zeros(dim, dim), zeros(dim, dim)]];
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = zeros(dim, dim);
                for s in 0..2 {
                    if site == 1 && r != s {
                        continue;
                    }
                    acc += right_mul_site(&m[r][s], n, site, &l[s][c]);
                }
                next[r][c] = acc;
            }
        }
        m = next;
    }
    m
}

/// M(u) with an explicit twist (ζ = 1 gives the untwisted monodromy).
pub fn monodromy_twisted(spec: &ChainSpec, u: C64, zeta: C64) -> Result<Monodromy> {
    check_u(spec, u)?;
    let n = spec.n();
    let [[a, b], [c, d]] = monodromy_raw(spec, u);
    let zi = c64(1.0, 0.0) / zeta;
    Ok(Monodromy {
        a: Operator::full(n, a * zeta),
        b: Operator::full(n, b * zi),
        c: Operator::full(n, c * zeta),
        d: Operator::full(n, d * zi),
    })
}

pub fn monodromy(spec: &ChainSpec, u: C64) -> Result<Monodromy> {
    monodromy_twisted(spec, u, spec.zeta())
}

/// T(u) = A(u) + D(u).
pub fn transfer(spec: &ChainSpec, u: C64) -> Result<Operator> {
    let m = monodromy(spec, u)?;
    Ok(Operator::full(spec.n(), m.a.matrix() + m.d.matrix()))
}

/// Applies M(u) to an auxiliary-space vector (ψ_0, ψ_1) without forming
/// the full matrices.
pub fn monodromy_apply(spec: &ChainSpec, u: C64, psi: [&CVec; 2]) -> Result<[CVec; 2]> {
    check_u(spec, u)?;
    let n = spec.n();
    let q = spec.quarter();
    let zeta = spec.zeta();
    let mut phi = [psi[0] * zeta, psi[1] / zeta];
    for site in (1..=n).rev() {
        let l = l_spin_half(u / spec.a()[site - 1], &q);
        let mut next = [CVec::zeros(spec.dim()), CVec::zeros(spec.dim())];
        for r in 0..2 {
            for c in 0..2 {
                next[r] += left_mul_site_vec(&phi[c], n, site, &l[r][c]);
            }
        }
        phi = next;
    }
    Ok(phi)
}

/// B(u)ψ.
pub fn apply_b(spec: &ChainSpec, u: C64, psi: &CVec) -> Result<CVec> {
    let zero = CVec::zeros(spec.dim());
    let [top, _] = monodromy_apply(spec, u, [&zero, psi])?;
    Ok(top)
}

/// Ω_+ = v_0 ⊗ ⋯ ⊗ v_0 on the full space.
pub fn vacuum(spec: &ChainSpec) -> CVec {
    let mut v = CVec::zeros(spec.dim());
    v[0] = c64(1.0, 0.0);
    v
}

/// B(v_1)⋯B(v_k)Ω_+ on the full space.
pub fn bethe_vector_full(spec: &ChainSpec, roots: &[C64]) -> Result<CVec> {
    for (i, &v) in roots.iter().enumerate() {
        for (j, &w) in roots.iter().enumerate().take(i) {
            if rel_dist(v, w) < 1e-12 {
                return Err(Error::CoincidentRoots(format!("roots {j} and {i}")));
            }
        }
        if v.norm() == 0.0 {
            return Err(Error::RootAtPole(format!("root {i} is zero")));
        }
    }
    let mut psi = vacuum(spec);
    for &v in roots.iter().rev() {
        psi = apply_b(spec, v, &psi).map_err(|e| Error::RootAtPole(e.to_string()))?;
    }
    Ok(psi)
}

/// Bethe vector restricted to the weight-k block, k = number of roots.
pub fn bethe_vector(spec: &ChainSpec, roots: &[C64]) -> Result<CVec> {
    if roots.len() > spec.n() {
        return Err(Error::IndexOutOfRange(format!(
            "{} roots on {} sites",
            roots.len(),
            spec.n()
        )));
    }
    let full = bethe_vector_full(spec, roots)?;
    let idx = block_indices(spec.n(), roots.len());
    Ok(CVec::from_iterator(idx.len(), idx.iter().map(|&i| full[i])))
}

/// Vacuum eigenvalues (α(u), δ(u)) of A and D.
pub fn vacuum_eigenvalues(spec: &ChainSpec, u: C64) -> (C64, C64) {
    let q = spec.quarter();
    let n = spec.n() as i32;
    let one = c64(1.0, 0.0);
    let pa: C64 = spec.a().iter().map(|&a| one - a / (u * spec.hbar())).product();
    let pd: C64 = spec.a().iter().map(|&a| one - a / u).product();
    (spec.zeta() * q.pow(n) * pa, q.pow(-n) * pd / spec.zeta())
}

/// Λ(u | roots): the transfer-matrix eigenvalue on the Bethe vector.
pub fn transfer_eigenvalue(spec: &ChainSpec, roots: &[C64], u: C64) -> Result<C64> {
    if let Some(i) = roots.iter().position(|&v| rel_dist(v, u) < 1e-14) {
        return Err(Error::EvaluationAtRoot(format!("u = root {i}")));
    }
    let q = spec.quarter();
    let (alpha, delta) = vacuum_eigenvalues(spec, u);
    let (hp, hm) = (q.pow(2), q.pow(-2));
    let ta: C64 = roots.iter().map(|&v| (v * hp - u * hm) / (v - u)).product();
    let td: C64 = roots.iter().map(|&v| (v * hm - u * hp) / (v - u)).product();
    Ok(alpha * ta + delta * td)
}

/// Eigenvalue of the untwisted D(u) on the eigenvector labelled by the
/// fixed-point subset p.
pub(crate) fn untwisted_d_eigenvalue(spec: &ChainSpec, p: &[usize], u: C64) -> C64 {
    let q: QuarterPowers = spec.quarter();
    let n = spec.n() as i32;
    let k = p.len() as i32;
    let one = c64(1.0, 0.0);
    let mut val = q.pow(-n + 2 * k);
    for (j, &a) in spec.a().iter().enumerate() {
        if p.contains(&(j + 1)) {
            val *= one - a / (u * spec.hbar());
        } else {
            val *= one - a / u;
        }
    }
    val
}
