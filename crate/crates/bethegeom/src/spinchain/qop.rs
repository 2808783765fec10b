use crate::error::{Error, Result};
use crate::numerics::linalg::{diag, null_vector, spectral_norm, zeros, CMat};
use crate::numerics::scalar::{c64, C64};
use crate::numerics::special::elementary_symmetric;

use super::basis::{binomial, block_basis, block_indices};
use super::chain::ChainSpec;
use super::monodromy::{monodromy_twisted, transfer, untwisted_d_eigenvalue};
use super::operator::Operator;

/// Eigenbasis of the untwisted D(u) on each weight block, columns labelled
/// by fixed-point subsets in block order.
#[derive(Debug, Clone)]
pub struct FixedPointBasis {
    n: usize,
    /// (V, V^{-1}) per weight k.
    blocks: Vec<(CMat, CMat)>,
    /// Smallest singular value met while extracting eigenvectors.
    pub worst_null_residual: f64,
}

/// Spectral point for D(u): chosen among a few candidates to maximize the
/// smallest relative eigenvalue gap.
fn pick_probe(spec: &ChainSpec) -> C64 {
    let n = spec.n();
    let scale = spec.a().iter().map(|a| a.norm()).sum::<f64>() / n as f64;
    let mut best = (f64::NEG_INFINITY, c64(1.0, 0.0));
    for j in 0..16 {
        let r = scale * (0.7 + 0.35 * (j % 4) as f64);
        let u = C64::from_polar(r, 0.41 + 1.37 * j as f64);
        let mut gap = f64::INFINITY;
        for k in 0..=n {
            let ev: Vec<C64> = block_basis(n, k)
                .iter()
                .map(|p| untwisted_d_eigenvalue(spec, p.sites(), u))
                .collect();
            let s = ev.iter().map(|e| e.norm()).fold(0.0, f64::max).max(1e-300);
            for i in 0..ev.len() {
                for jj in 0..i {
                    gap = gap.min((ev[i] - ev[jj]).norm() / s);
                }
            }
        }
        if gap > best.0 {
            best = (gap, u);
        }
    }
    best.1
}

pub fn fixed_point_basis(spec: &ChainSpec) -> Result<FixedPointBasis> {
    let n = spec.n();
    let u0 = pick_probe(spec);
    let d = monodromy_twisted(spec, u0, c64(1.0, 0.0))?.d;
    let mut blocks = Vec::with_capacity(n + 1);
    let mut worst: f64 = 0.0;
    for k in 0..=n {
        let dk = d.restrict(k)?.into_matrix();
        let basis = block_basis(n, k);
        let dim = basis.len();
        let scale = crate::numerics::linalg::frobenius(&dk).max(1e-300);
        let mut v = zeros(dim, dim);
        for (col, p) in basis.iter().enumerate() {
            let lam = untwisted_d_eigenvalue(spec, p.sites(), u0);
            let shifted = &dk - CMat::identity(dim, dim) * lam;
            let (vec, smin) = null_vector(&shifted);
            if smin.is_nan() {
                return Err(Error::IllConditioned(f64::NAN));
            }
            worst = worst.max(smin / scale);
            v.set_column(col, &vec);
        }
        let vinv = v
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::SingularDenominator(format!("fixed-point eigenbasis singular in block {k}")))?;
        blocks.push((v, vinv));
    }
    Ok(FixedPointBasis {
        n,
        blocks,
        worst_null_residual: worst,
    })
}

impl FixedPointBasis {
    /// Operator diagonal in the fixed-point basis with entry f(p) on p.
    pub fn diagonal_operator<F: Fn(&[usize]) -> C64>(&self, f: F) -> Operator {
        let blocks: Vec<CMat> = (0..=self.n)
            .map(|k| {
                let (v, vinv) = &self.blocks[k];
                let ent: Vec<C64> = block_basis(self.n, k).iter().map(|p| f(p.sites())).collect();
                v * diag(&ent) * vinv
            })
            .collect();
        Operator::from_blocks(self.n, &blocks).expect("block shapes are consistent")
    }
}

/// Classical Λ^l𝒱: e_l of the fixed-point parameters, in the fixed-point basis.
pub fn classical_exterior_power(spec: &ChainSpec, basis: &FixedPointBasis, l: usize) -> Operator {
    let a = spec.a().to_vec();
    basis.diagonal_operator(|p| {
        let vals: Vec<C64> = p.iter().map(|&i| a[i - 1]).collect();
        elementary_symmetric(&vals, l).unwrap_or(c64(0.0, 0.0))
    })
}

/// Lowering operator E_{-1} = Σ_i a_i (⊗_{j<i} ħ^{-H/2}) ⊗ 𝓔_i.
pub fn lowering_operator(spec: &ChainSpec) -> CMat {
    let n = spec.n();
    let q = spec.quarter();
    let dim = spec.dim();
    let mut m = zeros(dim, dim);
    for b in 0..dim {
        let mut k = c64(1.0, 0.0);
        for i in 1..=n {
            let bit = 1usize << (n - i);
            let up = b & bit != 0;
            if up {
                m[(b & !bit, b)] += spec.a()[i - 1] * k;
            }
            k *= if up { q.pow(2) } else { q.pow(-2) };
        }
    }
    m
}

/// Raising operator F_0 = ħ·ħ^{H/2}·Σ_i (⊗_{j<i} ħ^{H/2}) ⊗ 𝓕_i.
pub fn raising_operator(spec: &ChainSpec) -> CMat {
    let n = spec.n();
    let q = spec.quarter();
    let dim = spec.dim();
    let mut m = zeros(dim, dim);
    for b in 0..dim {
        let mut k = c64(1.0, 0.0);
        for i in 1..=n {
            let bit = 1usize << (n - i);
            let up = b & bit != 0;
            if !up {
                let out = b | bit;
                let h = n as i32 - 2 * out.count_ones() as i32;
                m[(out, b)] += spec.hbar() * q.pow(2 * h) * k;
            }
            k *= if up { q.pow(-2) } else { q.pow(2) };
        }
    }
    m
}

/// (m)_t! = ∏_{i=1}^m (1 - t^i)/(1 - t).
fn qfactorial(m: usize, t: C64) -> C64 {
    let one = c64(1.0, 0.0);
    (1..=m).map(|i| (one - t.powi(i as i32)) / (one - t)).product()
}

/// Everything needed to evaluate the universal formula for several l and z.
#[derive(Debug, Clone)]
pub struct UniversalFormula {
    spec: ChainSpec,
    basis: FixedPointBasis,
    classical: Vec<CMat>,
    lower_pows: Vec<CMat>,
    raise_pows: Vec<CMat>,
}

impl UniversalFormula {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        let n = spec.n();
        let basis = fixed_point_basis(spec)?;
        let classical = (0..=n)
            .map(|l| classical_exterior_power(spec, &basis, l).into_matrix())
            .collect();
        let e = lowering_operator(spec);
        let f = raising_operator(spec);
        let dim = spec.dim();
        let mut lower_pows = vec![CMat::identity(dim, dim)];
        let mut raise_pows = vec![CMat::identity(dim, dim)];
        for m in 1..=n {
            lower_pows.push(&lower_pows[m - 1] * &e);
            raise_pows.push(&raise_pows[m - 1] * &f);
        }
        Ok(Self {
            spec: spec.clone(),
            basis,
            classical,
            lower_pows,
            raise_pows,
        })
    }

    pub fn basis(&self) -> &FixedPointBasis {
        &self.basis
    }

    /// Diagonal coefficient a_m(z) on every basis state, in geometric
    /// variables ħ' = ħ^{-1}, K' = ħ'^{h/2}.
    fn coefficient(&self, m: usize, z: C64) -> Result<CMat> {
        let n = self.spec.n();
        let q = self.spec.quarter();
        let hg = self.spec.hbar_geometric();
        let one = c64(1.0, 0.0);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let pref = (hg - one).powi(m as i32) * hg.powi((m * (m + 1) / 2) as i32) / qfactorial(m, hg);
        let mut entries = vec![c64(0.0, 0.0); self.spec.dim()];
        for k in 0..=n {
            let h = n as i32 - 2 * k as i32;
            let kp = q.pow(-2 * h);
            let mut den = one;
            for i in 1..=m {
                let f = one - sign * hg.powi(i as i32) * kp / z;
                if f.norm() < 1e-12 {
                    return Err(Error::SingularDenominator(format!(
                        "1 - (-1)^n z^-1 ħ'^{i} K' vanishes on block {k}"
                    )));
                }
                den *= f;
            }
            let val = pref * kp.powi(m as i32) / den;
            for idx in block_indices(n, k) {
                entries[idx] = val;
            }
        }
        Ok(diag(&entries))
    }

    /// Λ̂^l𝒱(z).
    pub fn exterior_power(&self, z: C64, l: usize) -> Result<Operator> {
        let n = self.spec.n();
        if l > n {
            return Err(Error::IndexOutOfRange(format!("l = {l} > n = {n}")));
        }
        let mut out = self.classical[l].clone();
        if l > 0 && z.norm() == 0.0 {
            return Ok(Operator::full(n, out));
        }
        for m in 1..=l {
            let am = self.coefficient(m, z)?;
            out += am * &self.raise_pows[m] * &self.classical[l - m] * &self.lower_pows[m];
        }
        Ok(Operator::full(n, out))
    }

    /// Q_+(x) = Σ_l (-x)^l Λ̂^l𝒱(z).
    pub fn q_plus(&self, z: C64, x: C64) -> Result<Operator> {
        let n = self.spec.n();
        let dim = self.spec.dim();
        let mut acc = zeros(dim, dim);
        let mut w = c64(1.0, 0.0);
        for l in 0..=n {
            acc += self.exterior_power(z, l)?.into_matrix() * w;
            w *= -x;
        }
        Ok(Operator::full(n, acc))
    }
}

pub fn quantum_exterior_power(spec: &ChainSpec, z: C64, l: usize) -> Result<Operator> {
    UniversalFormula::new(spec)?.exterior_power(z, l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QSign {
    Plus,
    Minus,
}

/// Permutation b ↦ flip(reverse(b)) realizing C = P·S.
fn flip_reverse(b: usize, n: usize) -> usize {
    let mut r = 0usize;
    for i in 0..n {
        if b >> i & 1 == 1 {
            r |= 1 << (n - 1 - i);
        }
    }
    r ^ ((1 << n) - 1)
}

/// Conjugates the transpose of an operator on the reversed chain back to
/// the original chain: C·M^T·C^T.
fn dualize(m: &CMat, n: usize) -> CMat {
    let dim = 1usize << n;
    let mut out = zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            out[(flip_reverse(i, n), flip_reverse(j, n))] = m[(j, i)];
        }
    }
    out
}

/// Baxter operators Q_±(x) at Kähler parameter z.
///
/// Q_- is Q_+ of the reversed chain at z^{-1}, transposed and conjugated by
/// the spin flip composed with site reversal.
pub fn q_operator(spec: &ChainSpec, z: C64, x: C64, sign: QSign) -> Result<Operator> {
    match sign {
        QSign::Plus => UniversalFormula::new(spec)?.q_plus(z, x),
        QSign::Minus => {
            let rev = UniversalFormula::new(&spec.reversed())?;
            let m = rev.q_plus(1.0 / z, x)?.into_matrix();
            Ok(Operator::full(spec.n(), dualize(&m, spec.n())))
        }
    }
}

/// Precomputed Q_± families for repeated evaluation.
#[derive(Debug, Clone)]
pub struct BaxterPair {
    n: usize,
    plus: UniversalFormula,
    minus: UniversalFormula,
    z: C64,
}

impl BaxterPair {
    pub fn new(spec: &ChainSpec, z: C64) -> Result<Self> {
        Ok(Self {
            n: spec.n(),
            plus: UniversalFormula::new(spec)?,
            minus: UniversalFormula::new(&spec.reversed())?,
            z,
        })
    }

    pub fn eval(&self, x: C64, sign: QSign) -> Result<CMat> {
        match sign {
            QSign::Plus => Ok(self.plus.q_plus(self.z, x)?.into_matrix()),
            QSign::Minus => Ok(dualize(&self.minus.q_plus(1.0 / self.z, x)?.into_matrix(), self.n)),
        }
    }
}

/// Relative spectral-norm residuals of the TQ relations and the quantum
/// Wronskian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    pub tq_plus: f64,
    pub tq_minus: f64,
    pub wronskian: f64,
}

pub fn operator_identity_residuals(spec: &ChainSpec, z: C64, x: C64) -> Result<IdentityResiduals> {
    let n = spec.n();
    let dim = spec.dim();
    let q = spec.quarter();
    let hbar = spec.hbar();
    let zeta = spec.zeta();
    let one = c64(1.0, 0.0);
    let g = |y: C64| -> C64 { spec.a().iter().map(|&a| one - a * y).product() };
    let h_quarter = |s: i32| -> CMat {
        let e: Vec<C64> = (0..dim)
            .map(|b| q.pow(s * (n as i32 - 2 * b.count_ones() as i32)))
            .collect();
        diag(&e)
    };
    let (kp, km) = (h_quarter(1), h_quarter(-1));
    let pair = BaxterPair::new(spec, z)?;
    let t1 = transfer(spec, one / x)?.into_matrix();

    let mut tq = [0.0; 2];
    for (slot, sign) in [QSign::Plus, QSign::Minus].into_iter().enumerate() {
        let (w_up, w_dn) = match sign {
            QSign::Plus => (&kp * zeta, &km / zeta),
            QSign::Minus => (&km / zeta, &kp * zeta),
        };
        let lhs = &t1 * pair.eval(x, sign)?;
        let rhs = w_up * pair.eval(hbar * x, sign)? * g(x / hbar) + w_dn * pair.eval(x / hbar, sign)? * g(x);
        tq[slot] = spectral_norm(&(&lhs - rhs)) / spectral_norm(&lhs).max(1e-300);
    }

    let hs = q.pow(2);
    let first = &kp * zeta * pair.eval(hs * x, QSign::Plus)? * pair.eval(x / hs, QSign::Minus)?;
    let second = &km / zeta * pair.eval(x / hs, QSign::Plus)? * pair.eval(hs * x, QSign::Minus)?;
    let rhs = (&kp * zeta - &km / zeta) * g(x / hs);
    let w = spectral_norm(&(&first - second - rhs)) / spectral_norm(&first).max(1e-300);

    Ok(IdentityResiduals {
        tq_plus: tq[0],
        tq_minus: tq[1],
        wronskian: w,
    })
}

/// Number of basis states of the weight-k block.
pub fn block_dim(n: usize, k: usize) -> usize {
    binomial(n, k)
}
