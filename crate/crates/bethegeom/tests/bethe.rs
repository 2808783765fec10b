use bethegeom::bethe::*;
use bethegeom::numerics::linalg::{singular_values, CMat};
use bethegeom::spinchain::chain::random_annulus;
use bethegeom::spinchain::*;
use bethegeom::{c64, Precision, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn solve_all_is_complete_and_gives_eigenvectors() {
    let mut r = rng(11);
    let cfg = HomotopyConfig::default();
    for n in 2..=5 {
        let spec = ChainSpec::random(n, &mut r);
        for k in 0..=n.min(3) {
            let inst = BetheInstance::aba(&spec, k).unwrap();
            let rep = solve_all(&inst, &cfg);
            assert!(rep.is_complete(), "n={n} k={k}: {:?}", rep.failures);
            let mut cols = Vec::new();
            for sol in &rep.solutions {
                let psi = bethe_vector(&spec, &sol.roots).unwrap();
                let full = bethe_vector_full(&spec, &sol.roots).unwrap();
                for _ in 0..3 {
                    let u = random_annulus(&mut r, 0.5, 2.0);
                    let t = transfer(&spec, u).unwrap();
                    let lam = transfer_eigenvalue(&spec, &sol.roots, u).unwrap();
                    let res = (t.matrix() * &full - &full * lam).norm() / full.norm();
                    assert!(res < 1e-8, "n={n} k={k} eigen residual {res:e}");
                }
                cols.push(&psi / C64::from(psi.norm()));
            }
            let m = CMat::from_columns(&cols);
            let sv = singular_values(&m);
            assert!(*sv.last().unwrap() > 1e-6, "n={n} k={k} rank deficit {sv:?}");
        }
    }
}

#[test]
fn dictionary_maps_aba_roots_to_saddle_roots() {
    let mut r = rng(12);
    for n in 2..=5 {
        let spec = ChainSpec::random(n, &mut r);
        for k in 1..=n.min(3) {
            let aba = BetheInstance::aba(&spec, k).unwrap();
            let sad = BetheInstance::saddle(&spec, k).unwrap();
            for sol in solve_all(&aba, &HomotopyConfig::default()).solutions {
                let res = sad.relative_residual(&sol.roots).unwrap();
                assert!(res < 1e-10, "n={n} k={k} saddle residual {res:e}");
            }
        }
    }
}

#[test]
fn q_operator_eigenvalues_on_bethe_vectors() {
    let mut r = rng(13);
    for n in 2..=4 {
        let spec = ChainSpec::random(n, &mut r);
        let x = random_annulus(&mut r, 0.3, 1.0);
        let q = q_operator(&spec, spec.z(), x, QSign::Plus).unwrap();
        for k in 0..=n {
            let inst = BetheInstance::aba(&spec, k).unwrap();
            for sol in solve_all(&inst, &HomotopyConfig::default()).solutions {
                let psi = bethe_vector_full(&spec, &sol.roots).unwrap();
                let ev: C64 = sol.roots.iter().map(|&v| c64(1.0, 0.0) - x * v).product();
                let res = (q.matrix() * &psi - &psi * ev).norm() / psi.norm();
                assert!(res < 1e-8, "n={n} k={k} Q eigen residual {res:e}");
            }
        }
    }
}

#[test]
fn extended_precision_tracks_the_same_roots() {
    let mut r = rng(14);
    let spec = ChainSpec::random(4, &mut r);
    let inst = BetheInstance::aba(&spec, 2).unwrap();
    let std = solve_all(&inst, &HomotopyConfig::default());
    let ext = solve_all(
        &inst,
        &HomotopyConfig {
            precision: Precision::Extended,
            ..Default::default()
        },
    );
    assert!(ext.is_complete());
    for (a, b) in std.solutions.iter().zip(&ext.solutions) {
        assert!(multiset_distance(&a.roots, &b.roots) < 1e-10);
        assert!(b.residual <= a.residual.max(1e-14));
    }
}

#[test]
fn series_roots_agree_with_tracking_at_small_z() {
    let mut r = rng(15);
    for n in 2..=4 {
        let spec = ChainSpec::random_separated(n, &mut r, 0.3);
        let z = c64(4e-4, -3e-4);
        for k in 1..=n.min(2) {
            let inst = BetheInstance::saddle(&spec, k).unwrap().with_twist(z);
            for p in combinations(n, k) {
                let p = SpinBasisIndex::new(p, n).unwrap();
                let ser = perturbative_roots(&inst, &p, 6).unwrap();
                // Order-m residual coefficients are bounded relative to the
                // size of the order-m root coefficients (at least 1).
                let res = saddle_residual_series(&inst, &ser).unwrap();
                for m in 0..=6 {
                    let scale = ser.roots.iter().map(|s| s.coeff(m).norm()).fold(1.0, f64::max);
                    for rs in &res {
                        assert!(
                            rs.coeff(m).norm() < 1e-10 * scale,
                            "order {m}: {:e}",
                            rs.coeff(m).norm()
                        );
                    }
                }
                let tr = solve_from_subset(&inst, &p, &HomotopyConfig::default()).unwrap();
                let d = multiset_distance(&ser.eval(z), &tr.roots);
                assert!(d < 1e-12, "n={n} k={k} series vs tracking {d:e}");
            }
        }
    }
}
