use bethegeom::bethe::{perturbative_roots, BetheInstance};
use bethegeom::spinchain::block_basis;
use bethegeom::vertex::*;
use bethegeom::ChainSpec;
use serde_json::json;

use crate::config::RunConfig;
use crate::report::{cjson, Recorder};

pub(super) fn run(config: &RunConfig, spec: &ChainSpec, rec: &mut Recorder) {
    let n = spec.n();
    let d = config.truncation.min(config.vertex_order);
    let policy = &config.extrapolation;
    for k in config.sectors().into_iter().filter(|&k| k >= 1 && k < n) {
        let inputs = json!({ "k": k, "order": d, "insertions": (1..=k).map(|l| format!("e_{l}")).collect::<Vec<_>>() });
        rec.check(format!("k={k}.eigenvalues_vs_bethe"), inputs, policy.tolerance, |_| {
            let inst = BetheInstance::saddle(spec, k)?;
            let mut worst: f64 = 0.0;
            for p in block_basis(n, k) {
                let pt = FixedPoint::new(spec, p.clone())?;
                let roots = perturbative_roots(&inst, &p, d)?;
                for l in 1..=k {
                    let tau = SchurInsertion::Elementary(l);
                    let lim = eigenvalue_limit_with(spec, &pt, &tau, d, policy)?;
                    let bet = bethe_symmetric_series(&pt, &tau, &roots)?;
                    for m in 0..=d {
                        let c = bet.coeff(m);
                        worst = worst.max((lim.series.coeff(m) - c).norm() / c.norm().max(1.0));
                    }
                }
            }
            Ok(worst)
        });

        rec.check(format!("k={k}.classical_limit"), json!({ "k": k }), 1e-12, |_| {
            let mut worst: f64 = 0.0;
            for p in block_basis(n, k) {
                let pt = FixedPoint::new(spec, p)?;
                for l in 1..=k {
                    let tau = SchurInsertion::Elementary(l);
                    let lim = eigenvalue_limit_with(spec, &pt, &tau, 0, policy)?;
                    let c = classical_restriction(&pt, &tau);
                    worst = worst.max((lim.series.coeff(0) - c).norm() / c.norm().max(1.0));
                }
            }
            Ok(worst)
        });

        if let Some(p) = block_basis(n, k).into_iter().next() {
            if let Ok(pt) = FixedPoint::new(spec, p.clone()) {
                if let Ok(lim) = eigenvalue_limit_with(spec, &pt, &SchurInsertion::Elementary(1), d, policy) {
                    rec.artifact(
                        format!("k={k}.e1_series"),
                        json!({
                            "fixed_point": p.sites(),
                            "coefficients": lim.series.coeffs().iter().map(|&c| cjson(c)).collect::<Vec<_>>(),
                            "spreads": lim.spreads,
                        }),
                    );
                }
            }
        }
    }
}
