use bethegeom::numerics::linalg::CMat;
use bethegeom::qq::*;
use bethegeom::spinchain::chain::random_annulus;
use bethegeom::{c64, ChainSpec, C64};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::solve_sector;
use crate::config::RunConfig;
use crate::report::{cjson, cjson_vec, Recorder};

fn points(rng: &mut ChaCha8Rng, count: usize) -> Vec<C64> {
    (0..count).map(|_| random_annulus(rng, 0.4, 2.5)).collect()
}

fn det_residual(conn: &MiuraConnection, points: &[C64]) -> bethegeom::Result<f64> {
    let mut worst: f64 = 0.0;
    for &u in points {
        worst = worst.max((conn.eval(u)?.determinant() - c64(1.0, 0.0)).norm());
    }
    Ok(worst)
}

pub(super) fn run(config: &RunConfig, spec: &ChainSpec, rec: &mut Recorder) {
    let n = spec.n();
    let m = config.samples.gauge_points;

    // r = 1 opers from the chain's own Bethe solutions
    for k in config.sectors().into_iter().filter(|&k| k >= 1) {
        let sols = match solve_sector(config, spec, k) {
            Ok(r) => r.solutions,
            Err(e) => {
                rec.check(format!("sl2.k={k}.solve_all"), json!({ "k": k }), 0.5, |_| Err(e));
                continue;
            }
        };
        if sols.is_empty() {
            continue;
        }
        let conns = || -> bethegeom::Result<Vec<MiuraConnection>> {
            sols.iter()
                .map(|s| {
                    let (inst, hbar) = qq_from_bethe(spec, &s.roots)?;
                    miura_connection(&inst, hbar)
                })
                .collect()
        };
        let inputs = json!({ "k": k, "instances": sols.len(), "points": m });
        rec.check(format!("sl2.k={k}.det"), inputs.clone(), 1e-10, |rng| {
            let mut worst: f64 = 0.0;
            for c in conns()? {
                worst = worst.max(det_residual(&c, &points(rng, m))?);
            }
            Ok(worst)
        });
        rec.check(format!("sl2.k={k}.z_twist"), inputs.clone(), 1e-9, |rng| {
            let mut worst: f64 = 0.0;
            for c in conns()? {
                let z = [c.source.zeta[0], 1.0 / c.source.zeta[0]];
                worst = worst.max(z_twist_verify(&c, &z, &sl2_gauge(&c.source), &points(rng, m))?);
            }
            Ok(worst)
        });
        // Q_- of degree n - k vanishes identically only for k = n
        if k < n {
            rec.check(format!("sl2.k={k}.backlund"), inputs, 1e-9, |rng| {
                let mut worst: f64 = 0.0;
                for c in conns()? {
                    worst = worst.max(backlund_residual(&c, 0, &points(rng, m))?);
                }
                Ok(worst)
            });
        }
    }

    // r = 2 opers from random A_2 QQ data
    for degrees in [[1usize, 1], [2, 1], [1, 2], [2, 2]] {
        let tag = format!("a2.degrees={}{}", degrees[0], degrees[1]);
        let hbar = random_annulus(&mut rec.rng, 0.3, 0.7);
        let zeta = vec![
            random_annulus(&mut rec.rng, 0.5, 1.5),
            random_annulus(&mut rec.rng, 0.5, 1.5),
        ];
        let inst = match random_qq_instance(
            CartanData::a_type(2).expect("rank 2"),
            &degrees,
            zeta.clone(),
            hbar,
            &mut rec.rng,
        ) {
            Ok(i) => i,
            Err(e) => {
                rec.check(format!("{tag}.instance"), json!({ "degrees": degrees }), 0.5, |_| {
                    Err(e)
                });
                continue;
            }
        };
        let inputs = json!({ "degrees": degrees, "hbar": cjson(hbar), "zeta": cjson_vec(&zeta), "points": m });
        let conn = miura_connection(&inst, hbar);
        rec.check(format!("{tag}.det"), inputs.clone(), 1e-10, |rng| {
            det_residual(conn.as_ref().map_err(Clone::clone)?, &points(rng, m))
        });
        rec.check(format!("{tag}.plucker_twist"), inputs.clone(), 1e-9, |rng| {
            let res = miura_plucker_residuals(conn.as_ref().map_err(Clone::clone)?, &points(rng, m))?;
            Ok(res.into_iter().fold(0.0, f64::max))
        });
        for i in 0..2 {
            rec.check(format!("{tag}.backlund.node={}", i + 1), inputs.clone(), 1e-9, |rng| {
                backlund_residual(conn.as_ref().map_err(Clone::clone)?, i, &points(rng, m))
            });
        }
        if degrees == [2, 1] {
            if let Ok(c) = &conn {
                let pts = points(&mut rec.rng, m);
                if let Ok(dev) = backlund_twice_deviation(c, &pts) {
                    rec.artifact(format!("{tag}.backlund_twice_node1"), json!({ "deviation": dev }));
                }
            }
        }
    }

    // which W_k normalization divides 𝒟_{r+1} at r + 1 = 3
    let a: Vec<C64> = spec.a().iter().take(3).copied().collect();
    if a.len() == 3 {
        let xi = unit_product(vec![
            random_annulus(&mut rec.rng, 0.5, 2.0),
            random_annulus(&mut rec.rng, 0.5, 2.0),
            random_annulus(&mut rec.rng, 0.5, 2.0),
        ]);
        if let Ok(data) = solve_flag_sections(&a, &xi, spec.hbar(), &mut rec.rng) {
            let divides = |p| extract_vk_with(&data, 3, p).is_ok();
            rec.artifact(
                "w3_patterns",
                json!({
                    "printed": divides(WkPattern::Printed),
                    "regularized": divides(WkPattern::Regularized),
                    "consistent": divides(WkPattern::Consistent),
                }),
            );
        }
    }
}

fn backlund_twice_deviation(conn: &MiuraConnection, points: &[C64]) -> bethegeom::Result<f64> {
    let twice = backlund(&backlund(conn, 0)?, 0)?;
    let mut worst: f64 = 0.0;
    for &u in points {
        let a: CMat = conn.eval(u)?;
        worst = worst.max((twice.eval(u)? - &a).norm() / a.norm());
    }
    Ok(worst)
}

pub(crate) fn unit_product(mut xi: Vec<C64>) -> Vec<C64> {
    let g = xi.iter().product::<C64>().powf(1.0 / xi.len() as f64);
    xi.iter_mut().for_each(|x| *x /= g);
    xi
}
