use super::scalar::{c64, principal_sqrt, C64};
use crate::error::{Error, Result};

const DEGENERATE_TOL: f64 = 1e-14;

/// Finite q-Pochhammer symbol (x;q)_d, extended to negative d by
/// (x;q)_{-m} = ∏_{i=1}^{m} (1 - x q^{-i})^{-1}.
pub fn qpoch_finite(x: C64, q: C64, d: i64) -> Result<C64> {
    let one = c64(1.0, 0.0);
    if d >= 0 {
        let mut acc = one;
        let mut qi = one;
        for _ in 0..d {
            acc *= one - qi * x;
            qi *= q;
        }
        return Ok(acc);
    }
    let qinv = one / q;
    let mut acc = one;
    let mut qi = qinv;
    for i in 1..=(-d) {
        let t = x * qi;
        let f = one - t;
        if f.norm() <= DEGENERATE_TOL * (1.0 + t.norm()) {
            return Err(Error::DegenerateFactor(format!("1 - x q^-{i} vanishes in (x;q)_{d}")));
        }
        acc /= f;
        qi *= qinv;
    }
    Ok(acc)
}

/// {x}_d = (ħ/x;q)_d / (q/x;q)_d · (-q^{1/2} ħ^{-1/2})^d, principal branches.
pub fn bracket_function(x: C64, d: i64, q: C64, hbar: C64) -> Result<C64> {
    if d == 0 {
        return Ok(c64(1.0, 0.0));
    }
    // Per-factor check: near q = 1 the product itself is legitimately tiny.
    let one = c64(1.0, 0.0);
    let mut qi = q / x;
    for i in 0..d {
        if (one - qi).norm() <= DEGENERATE_TOL * (1.0 + qi.norm()) {
            return Err(Error::DegenerateFactor(format!("factor {i} of (q/x;q)_{d} vanishes")));
        }
        qi *= q;
    }
    let num = qpoch_finite(hbar / x, q, d)?;
    let den = qpoch_finite(q / x, q, d)?;
    let w = -principal_sqrt(q) / principal_sqrt(hbar);
    Ok(num / den * w.powi(d as i32))
}

/// All elementary symmetric polynomials e_0..e_len of the inputs.
pub fn elementary_symmetric_all(values: &[C64]) -> Vec<C64> {
    let mut e = vec![c64(0.0, 0.0); values.len() + 1];
    e[0] = c64(1.0, 0.0);
    for (m, &v) in values.iter().enumerate() {
        for l in (1..=m + 1).rev() {
            let prev = e[l - 1];
            e[l] += prev * v;
        }
    }
    e
}

pub fn elementary_symmetric(values: &[C64], l: usize) -> Result<C64> {
    if l > values.len() {
        return Err(Error::IndexOutOfRange(format!("e_{l} of {} values", values.len())));
    }
    Ok(elementary_symmetric_all(values)[l])
}

/// Symmetric q-number [k]_ħ = (ħ^{k/2} - ħ^{-k/2}) / (ħ^{1/2} - ħ^{-1/2}).
pub fn qnumber(k: i64, hbar_sqrt: C64) -> C64 {
    let one = c64(1.0, 0.0);
    if k == 0 {
        return c64(0.0, 0.0);
    }
    let den = hbar_sqrt - one / hbar_sqrt;
    if den.norm() < 1e-300 {
        return c64(k as f64, 0.0);
    }
    let hk = hbar_sqrt.powi(k as i32);
    (hk - one / hk) / den
}

/// Outcome of a polynomial extrapolation to ε = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub value: C64,
    /// Difference between the two highest-order estimates.
    pub spread: f64,
}

/// Neville extrapolation to ε = 0 through all supplied nodes.
pub fn richardson_extrapolate(samples: &[(f64, C64)]) -> Result<Extrapolation> {
    if samples.len() < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    for (i, s) in samples.iter().enumerate() {
        if !(s.0 > 0.0) {
            return Err(Error::DegenerateFactor(format!("node ε = {} not positive", s.0)));
        }
        if samples[..i].iter().any(|t| t.0 == s.0) {
            return Err(Error::DegenerateFactor(format!("repeated node ε = {}", s.0)));
        }
    }
    let n = samples.len();
    let eps: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let mut p: Vec<C64> = samples.iter().map(|s| s.1).collect();
    // After pass m, p[i] interpolates nodes i..=i+m evaluated at 0; p[1]
    // is left holding the next-to-highest order estimate.
    for m in 1..n {
        for i in 0..n - m {
            let (ei, ej) = (eps[i], eps[i + m]);
            p[i] = (p[i + 1] * ei - p[i] * ej) / (ei - ej);
        }
    }
    Ok(Extrapolation {
        value: p[0],
        spread: (p[0] - p[1]).norm(),
    })
}
