use nalgebra::{DMatrix, DVector};

use super::scalar::{c64, Field, C64};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Gaussian elimination with partial pivoting over any [`Field`].
/// Returns `None` when a pivot falls below `1e-300` in modulus.
pub fn solve_dense<F: Field>(mut a: Vec<Vec<F>>, mut b: Vec<F>) -> Option<Vec<F>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .modulus()
                .partial_cmp(&a[j][col].modulus())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[piv][col].modulus() > 1e-300) {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / p;
            if f.modulus() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = a[col][k];
                a[row][k] = a[row][k] - f * v;
            }
            let bc = b[col];
            b[row] = b[row] - f * bc;
        }
    }
    let mut x = vec![F::zero(); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc = acc - a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    Some(x)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values(m).first().copied().unwrap_or(f64::NAN)
}

/// Convergence thresholds tried in turn by the iterative decompositions.
/// nalgebra's default (machine epsilon, unbounded sweeps) can stall on
/// matrices that are already nearly diagonal.
const THRESHOLDS: [f64; 5] = [f64::EPSILON, 1e-15, 1e-14, 1e-13, 1e-12];
const MAX_SWEEPS: usize = 10_000;

/// Singular values in decreasing order; NaN entries if no threshold converges.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let Some(svd) = svd(m, false, false) else {
        return vec![f64::NAN; m.nrows().min(m.ncols())];
    };
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// SVD with bounded sweeps.
pub fn svd(m: &CMat, compute_u: bool, compute_v: bool) -> Option<nalgebra::SVD<C64, nalgebra::Dyn, nalgebra::Dyn>> {
    THRESHOLDS
        .iter()
        .find_map(|&eps| m.clone().try_svd(compute_u, compute_v, eps, MAX_SWEEPS))
}

/// Eigenvalues of a square matrix via complex Schur, None if no threshold
/// converges.
pub fn eigenvalues(m: &CMat) -> Option<Vec<C64>> {
    THRESHOLDS
        .iter()
        .find_map(|&eps| m.clone().try_schur(eps, MAX_SWEEPS))
        .and_then(|s| s.eigenvalues())
        .map(|e| e.iter().copied().collect())
}

/// σ_max / σ_min, infinite when singular.
pub fn condition_number(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Right singular vector of the smallest singular value, with that value.
/// A NaN value signals that the decomposition did not converge.
pub fn null_vector(m: &CMat) -> (CVec, f64) {
    let n = m.ncols();
    let Some(svd) = svd(m, false, true) else {
        return (CVec::zeros(n), f64::NAN);
    };
    let v_t = svd.v_t.expect("requested v_t");
    let (idx, &smin) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    let row = v_t.row(idx);
    let v = CVec::from_iterator(n, row.iter().map(|z| z.conj()));
    (v, smin)
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn diag(entries: &[C64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(entries))
}

pub fn scalar(z: C64, n: usize) -> CMat {
    CMat::identity(n, n) * z
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::from_element(r, c, c64(0.0, 0.0))
}
