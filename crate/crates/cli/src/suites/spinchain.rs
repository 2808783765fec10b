use bethegeom::numerics::linalg::frobenius;
use bethegeom::spinchain::*;
use bethegeom::{c64, ChainSpec, C64};
use serde_json::json;

use super::spectral_point;
use crate::config::RunConfig;
use crate::report::{cjson, Recorder};

pub(super) fn run(config: &RunConfig, spec: &ChainSpec, rec: &mut Recorder) {
    let n = spec.n();
    let pairs = config.samples.commutator_pairs;
    rec.check("transfer_commutativity", json!({ "pairs": pairs }), 1e-10, |rng| {
        let mut worst: f64 = 0.0;
        for _ in 0..pairs {
            let t1 = transfer(spec, spectral_point(rng))?;
            let t2 = transfer(spec, spectral_point(rng))?;
            worst = worst.max(relative_commutator(&t1, &t2)?);
        }
        Ok(worst)
    });

    rec.check("transfer_weight_conservation", json!({}), 1e-13, |rng| {
        Ok(transfer(spec, spectral_point(rng))?.off_block_max())
    });

    rec.check("vacuum_eigenvalues", json!({}), 1e-12, |rng| {
        let u = spectral_point(rng);
        let m = monodromy(spec, u)?;
        let om = vacuum(spec);
        let (alpha, delta) = vacuum_eigenvalues(spec, u);
        let ra = (m.a.matrix() * &om - &om * alpha).norm() / alpha.norm().max(1.0);
        let rd = (m.d.matrix() * &om - &om * delta).norm() / delta.norm().max(1.0);
        let rc = (m.c.matrix() * &om).norm();
        Ok(ra.max(rd).max(rc))
    });

    rec.check("evaluation_modules", json!({ "m": [1, 2, 3] }), 1e-12, |_| {
        let mut worst: f64 = 0.0;
        for m in 1..=3 {
            worst = worst.max(evaluation_module(m, spec.hbar())?.commutation_residual(spec.hbar()));
        }
        Ok(worst)
    });

    let triples = config.samples.ybe_triples;
    // relative to ‖R_12 R_13 R_23‖, since R is fixed only up to a scalar
    rec.check(
        "yang_baxter",
        json!({ "triples": triples, "norm": "relative_frobenius" }),
        1e-12,
        |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..triples {
                let a: Vec<C64> = (0..3).map(|_| spectral_point(rng)).collect();
                let h = spec.hbar();
                let r12 = embed_two_site(&r_matrix(a[0] / a[1], h)?, 1, 2, 3);
                let r13 = embed_two_site(&r_matrix(a[0] / a[2], h)?, 1, 3, 3);
                let r23 = embed_two_site(&r_matrix(a[1] / a[2], h)?, 2, 3, 3);
                let lhs = &r12 * &r13 * &r23;
                worst = worst.max(frobenius(&(&lhs - &r23 * &r13 * &r12)) / frobenius(&lhs));
            }
            Ok(worst)
        },
    );

    let one = c64(1.0, 0.0);
    let holonomies = || -> bethegeom::Result<Vec<Operator>> { (1..=n).map(|i| qkz_operator(spec, one, i)).collect() };
    rec.check("qkz_commutativity", json!({ "q": cjson(one) }), 1e-9, |_| {
        let hs = holonomies()?;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                worst = worst.max(relative_commutator(&hs[i], &hs[j])?);
            }
        }
        Ok(worst)
    });

    // Spectrum of ∏H_i against that of the pure twist ζ^h: eigenvalue
    // ζ^{n-2k} with multiplicity C(n, k).
    rec.check("qkz_total_holonomy", json!({ "q": cjson(one) }), 1e-7, |_| {
        let hs = holonomies()?;
        let prod = hs
            .iter()
            .fold(bethegeom::numerics::linalg::identity(spec.dim()), |acc, h| {
                acc * h.matrix()
            });
        let eig = bethegeom::numerics::linalg::eigenvalues(&prod).unwrap_or_default();
        if eig.len() != spec.dim() {
            return Ok(f64::INFINITY);
        }
        let targets: Vec<C64> = (0..=n).map(|k| spec.zeta().powi(n as i32 - 2 * k as i32)).collect();
        let mut counts = vec![0usize; n + 1];
        let mut worst: f64 = 0.0;
        for e in &eig {
            let (k, d) = targets
                .iter()
                .enumerate()
                .map(|(k, t)| (k, (e - t).norm() / t.norm().max(1.0)))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            counts[k] += 1;
            worst = worst.max(d);
        }
        let multiplicities_ok = (0..=n).all(|k| counts[k] == binomial(n, k));
        Ok(if multiplicities_ok { worst } else { f64::INFINITY })
    });

    rec.check("qkz_vs_inverted_transfer", json!({}), 1e-9, |rng| {
        let dual = ChainSpec::new(spec.a().to_vec(), one / spec.hbar(), one / spec.zeta())?;
        let t = transfer(&dual, spectral_point(rng))?;
        let mut worst: f64 = 0.0;
        for h in holonomies()? {
            worst = worst.max(relative_commutator(&h, &t)?);
        }
        Ok(worst)
    });
}
