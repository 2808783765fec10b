//! Vertex functions of T*Gr(k,n) as truncated z-series, their q → 1
//! eigenvalue limit, and symmetric functions of series Bethe roots.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bethe::SeriesRootSet;
use crate::error::{Error, Result};
use crate::numerics::scalar::{c64, principal_sqrt, C64};
use crate::numerics::series::TruncatedSeries;
use crate::numerics::special::{bracket_function, elementary_symmetric, richardson_extrapolate};
use crate::spinchain::{ChainSpec, SpinBasisIndex};

/// Torus fixed point: a k-subset p with its parameters x = (a_i)_{i∈p}.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub p: SpinBasisIndex,
    pub x: Vec<C64>,
}

impl FixedPoint {
    pub fn new(spec: &ChainSpec, p: SpinBasisIndex) -> Result<Self> {
        if p.sites().iter().any(|&i| i > spec.n()) {
            return Err(Error::IndexOutOfRange(format!("{p:?} outside 1..={}", spec.n())));
        }
        let x = p.sites().iter().map(|&i| spec.a()[i - 1]).collect();
        Ok(Self { p, x })
    }

    pub fn k(&self) -> usize {
        self.x.len()
    }
}

type Evaluator = Arc<dyn Fn(&[C64]) -> C64 + Send + Sync>;

/// Symmetric insertion τ(s_1, …, s_k).
#[derive(Clone)]
pub enum SchurInsertion {
    ConstantOne,
    Elementary(usize),
    PowerSum(u32),
    /// Monomial symmetric function m_λ for the partition λ (padded with zeros).
    Monomial(Vec<u32>),
    /// User evaluator; must be symmetric. Cannot be composed with series.
    Custom(Evaluator),
}

impl fmt::Debug for SchurInsertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ConstantOne => write!(f, "1"),
            Self::Elementary(l) => write!(f, "e_{l}"),
            Self::PowerSum(m) => write!(f, "p_{m}"),
            Self::Monomial(l) => write!(f, "m_{l:?}"),
            Self::Custom(_) => write!(f, "custom"),
        }
    }
}

/// Distinct permutations of an exponent vector.
fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable();
    let mut out = vec![sorted.clone()];
    // next_permutation
    loop {
        let n = sorted.len();
        let Some(i) = (1..n).rev().find(|&i| sorted[i - 1] < sorted[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| sorted[j] > sorted[i - 1]).unwrap();
        sorted.swap(i - 1, j);
        sorted[i..].reverse();
        out.push(sorted.clone());
    }
    out
}

impl SchurInsertion {
    pub fn eval(&self, s: &[C64]) -> C64 {
        match self {
            Self::ConstantOne => c64(1.0, 0.0),
            Self::Elementary(l) => elementary_symmetric(s, *l).unwrap_or(c64(0.0, 0.0)),
            Self::PowerSum(m) => s.iter().map(|x| x.powi(*m as i32)).sum(),
            Self::Monomial(lambda) => {
                let Some(exps) = padded(lambda, s.len()) else {
                    return c64(0.0, 0.0);
                };
                distinct_permutations(&exps)
                    .iter()
                    .map(|e| s.iter().zip(e).map(|(x, &k)| x.powi(k as i32)).product::<C64>())
                    .sum()
            }
            Self::Custom(f) => f(s),
        }
    }

    /// τ composed with series arguments.
    pub fn eval_series(&self, s: &[TruncatedSeries], order: usize) -> Result<TruncatedSeries> {
        let one = TruncatedSeries::constant(c64(1.0, 0.0), order);
        let zero = TruncatedSeries::zero(order);
        let pow = |x: &TruncatedSeries, k: u32| (0..k).fold(one.clone(), |acc, _| &acc * x);
        match self {
            Self::ConstantOne => Ok(one),
            Self::Elementary(l) => {
                let mut e = vec![zero.clone(); s.len() + 1];
                e[0] = one.clone();
                for (m, x) in s.iter().enumerate() {
                    for j in (1..=m + 1).rev() {
                        e[j] = &e[j] + &(&e[j - 1] * x);
                    }
                }
                Ok(e.get(*l).cloned().unwrap_or(zero))
            }
            Self::PowerSum(m) => Ok(s.iter().fold(zero, |acc, x| &acc + &pow(x, *m))),
            Self::Monomial(lambda) => {
                let Some(exps) = padded(lambda, s.len()) else {
                    return Ok(zero);
                };
                Ok(distinct_permutations(&exps).iter().fold(zero, |acc, e| {
                    let term = s.iter().zip(e).fold(one.clone(), |t, (x, &k)| &t * &pow(x, k));
                    &acc + &term
                }))
            }
            Self::Custom(_) => Err(Error::TruncationMismatch(
                "custom insertions cannot be composed with series".into(),
            )),
        }
    }
}

fn padded(lambda: &[u32], k: usize) -> Option<Vec<u32>> {
    let nz: Vec<u32> = lambda.iter().copied().filter(|&x| x > 0).collect();
    if nz.len() > k {
        return None;
    }
    let mut e = nz;
    e.resize(k, 0);
    Some(e)
}

/// A vertex function truncated at z^D.
#[derive(Debug, Clone)]
pub struct VertexSeries {
    pub series: TruncatedSeries,
    pub point: FixedPoint,
    pub insertion: SchurInsertion,
    pub q: C64,
    pub hbar: C64,
}

/// τ at the fixed point.
pub fn classical_restriction(point: &FixedPoint, tau: &SchurInsertion) -> C64 {
    tau.eval(&point.x)
}

/// Lattice points d ∈ Z_{≥0}^k with Σd ≤ D.
fn lattice(k: usize, dmax: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for v in &out {
            let used: usize = v.iter().sum();
            for d in 0..=dmax - used {
                let mut w = v.clone();
                w.push(d);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Vertex series with the geometric deformation parameter ħ' = 1/ħ of the
/// chain:
/// Σ_d z^{|d|} q^{n|d|/2} ∏_{i,j}{x_i/x_j}^{-1}_{d_i-d_j} ∏_{i,j}{x_i/a_j}_{d_i} τ(x q^{-d}).
pub fn vertex_series(
    spec: &ChainSpec,
    point: &FixedPoint,
    tau: &SchurInsertion,
    q: C64,
    dmax: usize,
) -> Result<VertexSeries> {
    vertex_series_with_hbar(spec.a(), spec.hbar_geometric(), point, tau, q, dmax)
}

/// Same series with the geometric ħ given explicitly.
pub fn vertex_series_with_hbar(
    a: &[C64],
    hbar: C64,
    point: &FixedPoint,
    tau: &SchurInsertion,
    q: C64,
    dmax: usize,
) -> Result<VertexSeries> {
    let n = a.len();
    let k = point.k();
    let x = &point.x;
    let qh = principal_sqrt(q);
    let mut coeffs = vec![c64(0.0, 0.0); dmax + 1];
    for d in lattice(k, dmax) {
        let total: usize = d.iter().sum();
        let mut t = qh.powi((n * total) as i32);
        for i in 0..k {
            for j in 0..k {
                t /= bracket_function(x[i] / x[j], d[i] as i64 - d[j] as i64, q, hbar)?;
            }
            for &aj in a {
                t *= bracket_function(x[i] / aj, d[i] as i64, q, hbar)?;
            }
        }
        let shifted: Vec<C64> = (0..k).map(|i| x[i] * q.powi(-(d[i] as i32))).collect();
        coeffs[total] += t * tau.eval(&shifted);
    }
    if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::DegenerateFactor("non-finite vertex coefficient".into()));
    }
    Ok(VertexSeries {
        series: TruncatedSeries::new(coeffs),
        point: point.clone(),
        insertion: tau.clone(),
        q,
        hbar,
    })
}

/// Extrapolation nodes ε_j = 2^{-j}, q = 1 - ε_j, and the acceptance
/// threshold on the reported spread.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtrapolationPolicy {
    pub j_min: u32,
    pub j_max: u32,
    /// The limit fails when the spread exceeds 10× this value, relative to
    /// max(1, |coefficient|).
    pub tolerance: f64,
}

impl Default for ExtrapolationPolicy {
    fn default() -> Self {
        Self {
            j_min: 4,
            j_max: 10,
            tolerance: 1e-3,
        }
    }
}

impl ExtrapolationPolicy {
    pub fn nodes(&self) -> Vec<f64> {
        (self.j_min..=self.j_max).map(|j| 2f64.powi(-(j as i32))).collect()
    }
}

/// Extrapolated eigenvalue series and per-coefficient spreads.
#[derive(Debug, Clone)]
pub struct EigenvalueLimit {
    pub series: TruncatedSeries,
    pub spreads: Vec<f64>,
}

/// q → 1 limit of V^{(τ)}/V^{(1)}, taken coefficientwise.
pub fn eigenvalue_limit(
    spec: &ChainSpec,
    point: &FixedPoint,
    tau: &SchurInsertion,
    dmax: usize,
) -> Result<TruncatedSeries> {
    Ok(eigenvalue_limit_with(spec, point, tau, dmax, &ExtrapolationPolicy::default())?.series)
}

pub fn eigenvalue_limit_with(
    spec: &ChainSpec,
    point: &FixedPoint,
    tau: &SchurInsertion,
    dmax: usize,
    policy: &ExtrapolationPolicy,
) -> Result<EigenvalueLimit> {
    if matches!(tau, SchurInsertion::ConstantOne) {
        return Ok(EigenvalueLimit {
            series: TruncatedSeries::constant(c64(1.0, 0.0), dmax),
            spreads: vec![0.0; dmax + 1],
        });
    }
    let nodes = policy.nodes();
    let mut ratios = Vec::with_capacity(nodes.len());
    for &eps in &nodes {
        let q = c64(1.0 - eps, 0.0);
        let num = vertex_series(spec, point, tau, q, dmax)?.series;
        let den = vertex_series(spec, point, &SchurInsertion::ConstantOne, q, dmax)?.series;
        ratios.push(&num * &den.invert()?);
    }
    let mut coeffs = Vec::with_capacity(dmax + 1);
    let mut spreads = Vec::with_capacity(dmax + 1);
    for m in 0..=dmax {
        let samples: Vec<(f64, C64)> = nodes.iter().zip(&ratios).map(|(&e, r)| (e, r.coeff(m))).collect();
        let ex = richardson_extrapolate(&samples)?;
        if ex.spread > 10.0 * policy.tolerance * ex.value.norm().max(1.0) {
            return Err(Error::ExtrapolationDiverged {
                index: m,
                spread: ex.spread,
            });
        }
        coeffs.push(ex.value);
        spreads.push(ex.spread);
    }
    Ok(EigenvalueLimit {
        series: TruncatedSeries::new(coeffs),
        spreads,
    })
}

/// τ(s_1(z), …, s_k(z)) for series roots from the same fixed point.
pub fn bethe_symmetric_series(
    point: &FixedPoint,
    tau: &SchurInsertion,
    roots: &SeriesRootSet,
) -> Result<TruncatedSeries> {
    if roots.origin_subset != point.p {
        return Err(Error::TruncationMismatch(format!(
            "roots from {:?} used at fixed point {:?}",
            roots.origin_subset, point.p
        )));
    }
    tau.eval_series(&roots.roots, roots.order())
}
