use bethegeom::numerics::linalg::frobenius;
use bethegeom::spinchain::chain::random_annulus;
use bethegeom::spinchain::*;
use bethegeom::{c64, ChainSpec, C64};
use serde_json::json;

use super::{solve_sector, spectral_point};
use crate::config::RunConfig;
use crate::report::{cjson, Recorder};

pub(super) fn run(config: &RunConfig, spec: &ChainSpec, rec: &mut Recorder) {
    let n = spec.n();
    let z = spec.z();
    rec.check("exterior_power_commutation", json!({ "z": cjson(z) }), 1e-9, |rng| {
        let uf = UniversalFormula::new(spec)?;
        let t = transfer(spec, spectral_point(rng))?;
        let mut worst: f64 = 0.0;
        for l in 0..=n {
            worst = worst.max(relative_commutator(&uf.exterior_power(z, l)?, &t)?);
        }
        Ok(worst)
    });

    rec.check("weight_conservation", json!({}), 1e-13, |rng| {
        let x = random_annulus(rng, 0.3, 1.0);
        let mut worst: f64 = 0.0;
        for sign in [QSign::Plus, QSign::Minus] {
            worst = worst.max(q_operator(spec, z, x, sign)?.off_block_max());
        }
        for l in 0..=n {
            worst = worst.max(quantum_exterior_power(spec, z, l)?.off_block_max());
        }
        Ok(worst)
    });

    rec.check("q_at_zero", json!({}), 1e-12, |_| {
        let q0 = q_operator(spec, z, c64(0.0, 0.0), QSign::Plus)?;
        Ok(frobenius(&(q0.matrix() - Operator::identity(n).matrix())))
    });

    let sectors = config.sectors();
    rec.check("q_eigenvalues", json!({ "sectors": sectors }), 1e-7, |rng| {
        let x = random_annulus(rng, 0.3, 1.0);
        let q = q_operator(spec, z, x, QSign::Plus)?;
        let mut worst: f64 = 0.0;
        for &k in &sectors {
            for s in solve_sector(config, spec, k)?.solutions {
                let psi = bethe_vector_full(spec, &s.roots)?;
                let ev: C64 = s.roots.iter().map(|&v| c64(1.0, 0.0) - x * v).product();
                worst = worst.max((q.matrix() * &psi - &psi * ev).norm() / psi.norm());
            }
        }
        Ok(worst)
    });

    let mut residuals = None;
    let x = random_annulus(&mut rec.rng, 0.5, 2.0);
    for (name, pick) in [("tq_plus", 0usize), ("tq_minus", 1), ("wronskian", 2)] {
        rec.check(name, json!({ "x": cjson(x) }), 1e-8, |_| {
            let r = match &residuals {
                Some(r) => r,
                None => residuals.insert(operator_identity_residuals(spec, z, x)?),
            };
            Ok([r.tq_plus, r.tq_minus, r.wronskian][pick])
        });
    }
}
