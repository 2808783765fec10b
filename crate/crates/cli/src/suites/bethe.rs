use bethegeom::bethe::*;
use bethegeom::numerics::linalg::{singular_values, CMat};
use bethegeom::numerics::{poly_roots, Polynomial};
use bethegeom::spinchain::*;
use bethegeom::{c64, ChainSpec, C64};
use serde_json::json;

use super::{solve_sector, spectral_point};
use crate::config::RunConfig;
use crate::report::{cjson_vec, Recorder};

pub(super) fn run(config: &RunConfig, spec: &ChainSpec, rec: &mut Recorder) {
    let n = spec.n();
    for k in config.sectors() {
        let rep = match solve_sector(config, spec, k) {
            Ok(r) => r,
            Err(e) => {
                rec.check(format!("k={k}.solve_all"), json!({ "k": k }), 0.5, |_| Err(e));
                continue;
            }
        };
        let expected = binomial(n, k);
        let inputs = json!({ "k": k, "expected": expected, "found": rep.distinct, "failures": rep.failures.len() });
        rec.check(format!("k={k}.count"), inputs, 0.5, |_| {
            Ok((rep.distinct as f64 - expected as f64).abs() + rep.failures.len() as f64)
        });
        rec.artifact(
            format!("k={k}.solutions"),
            json!(rep
                .solutions
                .iter()
                .map(|s| json!({
                    "origin": s.origin_subset.sites(),
                    "roots": cjson_vec(&s.roots),
                    "residual": s.residual,
                }))
                .collect::<Vec<_>>()),
        );
        if rep.solutions.is_empty() {
            continue;
        }
        let tol = config.solver.residual_tolerance;
        rec.check(format!("k={k}.bethe_residual"), json!({ "k": k }), tol, |_| {
            let inst = BetheInstance::aba(spec, k)?;
            let mut worst: f64 = 0.0;
            for s in &rep.solutions {
                worst = worst.max(inst.relative_residual(&s.roots)?);
            }
            Ok(worst)
        });

        let points = config.samples.spectral_points;
        rec.check(
            format!("k={k}.eigen_residual"),
            json!({ "k": k, "points": points }),
            1e-8,
            |rng| {
                let mut worst: f64 = 0.0;
                for s in &rep.solutions {
                    let psi = bethe_vector_full(spec, &s.roots)?;
                    for _ in 0..points {
                        let u = spectral_point(rng);
                        let lam = transfer_eigenvalue(spec, &s.roots, u)?;
                        let t = transfer(spec, u)?;
                        worst = worst.max((t.matrix() * &psi - &psi * lam).norm() / psi.norm());
                    }
                }
                Ok(worst)
            },
        );

        // Reported as 1/σ_min of the normalized stacked Bethe vectors.
        rec.check(
            format!("k={k}.span"),
            json!({ "k": k, "min_singular_value": 1e-6 }),
            1e6,
            |_| {
                let mut cols = Vec::new();
                for s in &rep.solutions {
                    let psi = bethe_vector(spec, &s.roots)?;
                    cols.push(&psi / C64::from(psi.norm()));
                }
                let sv = singular_values(&CMat::from_columns(&cols));
                let smin = if cols.len() < expected {
                    0.0
                } else {
                    sv.last().copied().unwrap_or(0.0)
                };
                Ok(1.0 / smin)
            },
        );

        if k >= 1 {
            rec.check(format!("k={k}.saddle_dictionary"), json!({ "k": k }), 1e-10, |_| {
                let sad = BetheInstance::saddle(spec, k)?;
                let mut worst: f64 = 0.0;
                for s in &rep.solutions {
                    worst = worst.max(sad.relative_residual(&s.roots)?);
                }
                Ok(worst)
            });

            let d = config.truncation;
            rec.check(
                format!("k={k}.series_residual"),
                json!({ "k": k, "truncation": d }),
                1e-10,
                |_| {
                    let sad = BetheInstance::saddle(spec, k)?;
                    let mut worst: f64 = 0.0;
                    for p in block_basis(n, k) {
                        let roots = perturbative_roots(&sad, &p, d)?;
                        let scale = roots.roots.iter().map(|r| r.max_abs_coeff()).fold(1.0, f64::max);
                        worst = worst.max(series_residual(&sad, &roots) / scale);
                    }
                    Ok(worst)
                },
            );
        }

        if n == 2 && k == 1 {
            let oracle = quadratic_roots(spec);
            rec.artifact("k=1.quadratic_oracle", cjson_vec(&oracle));
            rec.check("k=1.quadratic_oracle", json!({ "k": 1 }), 1e-10, |_| {
                let mut worst: f64 = 0.0;
                for s in &rep.solutions {
                    let d = oracle
                        .iter()
                        .map(|&v| (s.roots[0] - v).norm() / v.norm())
                        .fold(f64::INFINITY, f64::min);
                    worst = worst.max(d);
                }
                Ok(worst)
            });
        }
    }
}

/// Roots of (ħ^{1/2}v - ħ^{-1/2}a_1)(ħ^{1/2}v - ħ^{-1/2}a_2) - ζ^{-2}(v - a_1)(v - a_2).
fn quadratic_roots(spec: &ChainSpec) -> Vec<C64> {
    let s = spec.hbar().sqrt();
    let (a1, a2) = (spec.a()[0], spec.a()[1]);
    let one = c64(1.0, 0.0);
    let lhs = &Polynomial::new(vec![-a1 / s, s]) * &Polynomial::new(vec![-a2 / s, s]);
    let rhs = Polynomial::from_roots(&[a1, a2]).scale(one / (spec.zeta() * spec.zeta()));
    poly_roots(&(&lhs - &rhs)).unwrap_or_default()
}
