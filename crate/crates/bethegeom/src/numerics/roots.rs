use super::linalg::{eigenvalues, zeros, CMat};
use super::poly::Polynomial;
use super::scalar::{c64, C64};
use crate::error::{Error, Result};

/// Roots of a nonzero polynomial: companion-matrix eigenvalues refined by a
/// few Newton steps on the original coefficients.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<C64>> {
    let d = p
        .degree()
        .ok_or_else(|| Error::DegenerateFactor("roots of the zero polynomial".into()))?;
    if d == 0 {
        return Ok(Vec::new());
    }
    let monic = p.monic()?;
    let c = monic.coeffs();
    let mut comp: CMat = zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = c64(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -c[i];
    }
    let mut roots =
        eigenvalues(&comp).ok_or_else(|| Error::DegenerateFactor("companion eigenvalues did not converge".into()))?;
    let dp = monic.derivative();
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let f = monic.eval(*r);
            let g = dp.eval(*r);
            if g.norm() == 0.0 {
                break;
            }
            let step = f / g;
            if !(step.norm() < 1e-2 * (1.0 + r.norm())) {
                break;
            }
            *r -= step;
        }
    }
    Ok(roots)
}
