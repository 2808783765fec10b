use bethegeom::numerics::special::elementary_symmetric;
use bethegeom::qq::*;
use bethegeom::{ChainSpec, C64};
use serde_json::json;

use super::{max_norm, solve_sector};
use crate::config::RunConfig;
use crate::report::{cjson, cjson_vec, Recorder};

/// The flag solver enumerates n! section orderings; beyond this it is skipped.
const MAX_FLAG_N: usize = 4;

pub(super) fn run(config: &RunConfig, spec: &ChainSpec, rec: &mut Recorder) {
    let n = spec.n();
    let a = spec.a().to_vec();
    let hbar = spec.hbar();
    if n > MAX_FLAG_N {
        rec.artifact(
            "skipped",
            json!({ "reason": format!("flag sections limited to n <= {MAX_FLAG_N}"), "n": n }),
        );
        return;
    }
    let inputs = json!({ "a": cjson_vec(&a), "xi": cjson_vec(&config.xi), "hbar": cjson(hbar) });
    let data = solve_flag_sections(&a, &config.xi, hbar, &mut rec.rng);
    let data = match data {
        Ok(d) => d,
        Err(e) => {
            rec.check("flag_sections", inputs, 1e-10, |_| Err(e));
            return;
        }
    };
    rec.check("flag_sections", inputs.clone(), 1e-10, |_| flag_residual(&data));

    let trs = trs_from_sections(&data);
    rec.check("lagrangian", inputs.clone(), 1e-8, |_| {
        let trs = trs.as_ref().map_err(Clone::clone)?;
        Ok(max_norm(&lagrangian_residual_with(
            trs,
            &a,
            TrsNormalization::Symmetric,
        )?))
    });
    if let Ok(trs) = &trs {
        let values = |norm| -> bethegeom::Result<serde_json::Value> {
            let h: Vec<C64> = (1..=n)
                .map(|k| trs_hamiltonian_with(trs, k, norm))
                .collect::<bethegeom::Result<_>>()?;
            let e: Vec<C64> = (1..=n)
                .map(|k| elementary_symmetric(&a, k))
                .collect::<bethegeom::Result<_>>()?;
            let res: Vec<f64> = h.iter().zip(&e).map(|(h, e)| (h - e).norm()).collect();
            Ok(json!({ "H": cjson_vec(&h), "e": cjson_vec(&e), "residuals": res }))
        };
        if let Ok(v) = values(TrsNormalization::Symmetric) {
            rec.artifact("hamiltonians", v);
        }
        if let Ok(v) = values(TrsNormalization::Printed) {
            rec.artifact("hamiltonians_printed_normalization", v);
        }
        rec.artifact("momenta", cjson_vec(&trs.p));
    }

    // 𝒱_k has degree k, except 𝒱_n which is constant once n > 1
    rec.check("extraction", json!({ "n": n }), 0.5, |_| {
        let mut bad = 0usize;
        for k in 1..=n {
            let (alpha, v) = extract_vk(&data, k)?;
            let want = if k == n && n > 1 { 0 } else { k };
            if alpha.norm() == 0.0 || v.degree() != Some(want) {
                bad += 1;
            }
        }
        Ok(bad as f64)
    });

    // n = 2: sections (Q_-, Q_+) of each Bethe solution give a tRS point on
    // the Lagrangian of a/ħ.
    if n == 2 {
        let sectors: Vec<usize> = config.sectors().into_iter().filter(|&k| k == 1).collect();
        for k in sectors {
            rec.check(format!("k={k}.bethe_duality"), json!({ "k": k }), 1e-8, |_| {
                let scaled: Vec<C64> = a.iter().map(|&x| x / hbar).collect();
                let mut worst: f64 = 0.0;
                for s in solve_sector(config, spec, k)?.solutions {
                    let (qq, h) = qq_from_bethe(spec, &s.roots)?;
                    let z = qq.zeta[0];
                    let sl2 = WronskianData::full_flag(
                        vec![qq.q_minus[0].clone(), qq.q_plus[0].clone()],
                        vec![z, 1.0 / z],
                        qq.lambda[0].clone(),
                        h,
                    )?;
                    let point = trs_from_sections(&sl2)?;
                    worst = worst.max(max_norm(&lagrangian_residual_with(
                        &point,
                        &scaled,
                        TrsNormalization::Symmetric,
                    )?));
                }
                Ok(worst)
            });
        }
    }
}
