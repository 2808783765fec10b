use bethegeom::qq::*;
use bethegeom::spinchain::chain::random_annulus;
use bethegeom::ChainSpec;
use serde_json::json;

use super::{max_norm, solve_sector};
use crate::config::RunConfig;
use crate::report::{cjson, cjson_vec, Recorder};

pub(super) fn run(config: &RunConfig, spec: &ChainSpec, rec: &mut Recorder) {
    let n = spec.n();
    for k in config.sectors() {
        let sols = match solve_sector(config, spec, k) {
            Ok(r) => r.solutions,
            Err(e) => {
                rec.check(format!("k={k}.solve_all"), json!({ "k": k }), 0.5, |_| Err(e));
                continue;
            }
        };
        if sols.is_empty() {
            continue;
        }
        let inputs = json!({ "k": k, "instances": sols.len() });
        rec.check(format!("k={k}.qq_residual"), inputs.clone(), 1e-10, |_| {
            let mut worst: f64 = 0.0;
            for s in &sols {
                let (inst, hbar) = qq_from_bethe(spec, &s.roots)?;
                worst = worst.max(qq_residual(&inst, hbar)?[0].max_abs_coeff());
            }
            Ok(worst)
        });
        rec.check(format!("k={k}.qq_to_bethe"), inputs.clone(), 1e-9, |_| {
            let mut worst: f64 = 0.0;
            for s in &sols {
                let (inst, hbar) = qq_from_bethe(spec, &s.roots)?;
                worst = worst.max(max_norm(&qq_to_bethe_residual(&inst, hbar)?));
            }
            Ok(worst)
        });
        rec.check(
            format!("k={k}.q_minus_degree"),
            json!({ "k": k, "expected": n - k }),
            0.5,
            |_| {
                let mut worst: f64 = 0.0;
                for s in &sols {
                    let (inst, _) = qq_from_bethe(spec, &s.roots)?;
                    let d = inst.q_minus[0].degree().map_or(f64::INFINITY, |d| d as f64);
                    worst = worst.max((d - (n - k) as f64).abs());
                }
                Ok(worst)
            },
        );
        // 𝒟_2 of the sections (Q_-, Q_+) with ξ = (ζ, ζ^{-1}) is Λ(u).
        rec.check(format!("k={k}.wronskian_reduction"), inputs, 1e-10, |_| {
            let mut worst: f64 = 0.0;
            for s in &sols {
                let (inst, hbar) = qq_from_bethe(spec, &s.roots)?;
                let z = inst.zeta[0];
                let data = WronskianData::full_flag(
                    vec![inst.q_minus[0].clone(), inst.q_plus[0].clone()],
                    vec![z, 1.0 / z],
                    inst.lambda[0].clone(),
                    hbar,
                )?;
                let d2 = quantum_wronskian(&data, 2)?;
                worst = worst.max(d2.max_coeff_diff(&inst.lambda[0]) / inst.lambda[0].max_abs_coeff().max(1.0));
            }
            Ok(worst)
        });
    }

    for degrees in [[1usize, 1], [2, 1], [1, 2], [2, 2]] {
        let name = format!("a2.degrees={}{}", degrees[0], degrees[1]);
        let hbar = random_annulus(&mut rec.rng, 0.3, 0.7);
        let zeta = vec![
            random_annulus(&mut rec.rng, 0.5, 1.5),
            random_annulus(&mut rec.rng, 0.5, 1.5),
        ];
        let inputs = json!({ "degrees": degrees, "hbar": cjson(hbar), "zeta": cjson_vec(&zeta) });
        rec.check(name, inputs, 1e-10, |rng| {
            let inst = random_qq_instance(CartanData::a_type(2)?, &degrees, zeta, hbar, rng)?;
            inst.check_nondegenerate(hbar, 1e-8)?;
            qq_relative_residual(&inst, hbar)
        });
    }
}
