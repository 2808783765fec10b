use crate::error::{Error, Result};
use crate::numerics::linalg::{zeros, CMat};
use crate::numerics::scalar::{c64, rel_dist, QuarterPowers, C64};

use super::chain::ChainSpec;
use super::operator::Operator;
use super::site::l_spin_half;

/// Trigonometric R-matrix on V(a_1)⊗V(a_2) as a function of a_1/a_2.
///
/// Built from the spin-1/2 L-operator with the first tensor factor in the
/// auxiliary role, index 2·β_1 + β_2, normalized to act as the identity on
/// e_1⊗e_1.
pub fn r_matrix(a_ratio: C64, hbar: C64) -> Result<CMat> {
    if a_ratio.norm() == 0.0 {
        return Err(Error::ResonantRatio("ratio is zero".into()));
    }
    if rel_dist(a_ratio, hbar) < 1e-12 || rel_dist(a_ratio * hbar, c64(1.0, 0.0)) < 1e-12 {
        return Err(Error::ResonantRatio(format!("{a_ratio} is ħ^(±1)")));
    }
    let q = QuarterPowers::new(hbar);
    let l = l_spin_half(a_ratio, &q);
    let mut r = zeros(4, 4);
    for rr in 0..2 {
        for cc in 0..2 {
            for s in 0..2 {
                for t in 0..2 {
                    r[(2 * rr + s, 2 * cc + t)] = l[rr][cc][s][t];
                }
            }
        }
    }
    let norm = r[(3, 3)];
    Ok(r / norm)
}

/// Embeds a two-site matrix acting on sites (i, j) (1-based, first factor
/// at site i) into the 2^n space.
pub fn embed_two_site(m: &CMat, i: usize, j: usize, n: usize) -> CMat {
    assert!(i != j && i >= 1 && j >= 1 && i <= n && j <= n);
    let dim = 1usize << n;
    let bi = 1usize << (n - i);
    let bj = 1usize << (n - j);
    let mut out = zeros(dim, dim);
    for b in 0..dim {
        let col = 2 * usize::from(b & bi != 0) + usize::from(b & bj != 0);
        let rest = b & !bi & !bj;
        for row in 0..4 {
            let coef = m[(row, col)];
            if coef == c64(0.0, 0.0) {
                continue;
            }
            let mut bp = rest;
            if row & 2 != 0 {
                bp |= bi;
            }
            if row & 1 != 0 {
                bp |= bj;
            }
            out[(bp, b)] += coef;
        }
    }
    out
}

/// Embeds a one-site matrix at site i.
pub fn embed_one_site(m: &CMat, i: usize, n: usize) -> CMat {
    let dim = 1usize << n;
    let bi = 1usize << (n - i);
    let mut out = zeros(dim, dim);
    for b in 0..dim {
        let beta = usize::from(b & bi != 0);
        for bp in 0..2 {
            let dst = if bp == 1 { b | bi } else { b & !bi };
            out[(dst, b)] += m[(bp, beta)];
        }
    }
    out
}

/// qKZ operator H_i^{(q)} = R_{i,i-1}(q a_i/a_{i-1})⋯R_{i,1}(q a_i/a_1) · Z_(i)
/// · R_{i,n}(a_i/a_n)⋯R_{i,i+1}(a_i/a_{i+1}).
pub fn qkz_operator(spec: &ChainSpec, q: C64, i: usize) -> Result<Operator> {
    let n = spec.n();
    if !(1..=n).contains(&i) {
        return Err(Error::IndexOutOfRange(format!("qKZ index {i} of {n}")));
    }
    let a = spec.a();
    let dim = spec.dim();
    let mut h = CMat::identity(dim, dim);
    for j in (1..i).rev() {
        let r = r_matrix(q * a[i - 1] / a[j - 1], spec.hbar())?;
        h *= embed_two_site(&r, i, j, n);
    }
    let zeta = spec.zeta();
    let z = CMat::from_row_slice(2, 2, &[zeta, c64(0.0, 0.0), c64(0.0, 0.0), 1.0 / zeta]);
    h *= embed_one_site(&z, i, n);
    for j in (i + 1..=n).rev() {
        let r = r_matrix(a[i - 1] / a[j - 1], spec.hbar())?;
        h *= embed_two_site(&r, i, j, n);
    }
    Ok(Operator::full(n, h))
}
