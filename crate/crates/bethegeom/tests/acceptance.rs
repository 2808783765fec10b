//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bethegeom::bethe::*;
use bethegeom::numerics::linalg::{singular_values, CMat};
use bethegeom::qq::*;
use bethegeom::spinchain::chain::random_annulus;
use bethegeom::spinchain::*;
use bethegeom::vertex::*;
use bethegeom::{c64, Result, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    worst: f64,
    tol: f64,
    note: String,
    ok: bool,
}

impl Outcome {
    fn new(worst: f64, tol: f64) -> Self {
        Self {
            worst,
            tol,
            note: String::new(),
            ok: worst < tol,
        }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.note = s.into();
        self
    }

    fn require(mut self, cond: bool, why: &str) -> Self {
        if !cond {
            self.ok = false;
            self.note = if self.note.is_empty() {
                why.into()
            } else {
                format!("{}; {why}", self.note)
            };
        }
        self
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn(&mut ChaCha8Rng) -> Result<Outcome>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_u(r: &mut ChaCha8Rng) -> C64 {
    random_annulus(r, 0.5, 2.0)
}

fn one() -> C64 {
    c64(1.0, 0.0)
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn transfer_commutativity(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        for _ in 0..10 {
            let spec = ChainSpec::random(n, r);
            for _ in 0..50 {
                let t1 = transfer(&spec, rand_u(r))?;
                let t2 = transfer(&spec, rand_u(r))?;
                worst = worst.max(relative_commutator(&t1, &t2)?);
            }
        }
    }
    Ok(Outcome::new(worst, 1e-10).note("n=2..6, 10 draws x 50 pairs"))
}

fn yang_baxter(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let h = random_annulus(r, 0.3, 0.7);
        let a: Vec<C64> = (0..3).map(|_| rand_u(r)).collect();
        let r12 = embed_two_site(&r_matrix(a[0] / a[1], h)?, 1, 2, 3);
        let r13 = embed_two_site(&r_matrix(a[0] / a[2], h)?, 1, 3, 3);
        let r23 = embed_two_site(&r_matrix(a[1] / a[2], h)?, 2, 3, 3);
        let d = &r12 * &r13 * &r23 - &r23 * &r13 * &r12;
        worst = worst.max(d.norm());
    }
    Ok(Outcome::new(worst, 1e-12).note("100 triples"))
}

fn bethe_eigenpairs(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let cfg = HomotopyConfig::default();
    let mut worst: f64 = 0.0;
    let mut counts_ok = true;
    let mut min_sv = f64::INFINITY;
    for n in 1..=6 {
        let spec = ChainSpec::random(n, r);
        for k in 0..=n.min(3) {
            let rep = solve_all(&BetheInstance::aba(&spec, k)?, &cfg);
            counts_ok &= rep.is_complete() && rep.solutions.len() == binomial(n, k);
            let mut cols = Vec::new();
            for sol in &rep.solutions {
                let full = bethe_vector_full(&spec, &sol.roots)?;
                for _ in 0..5 {
                    let u = rand_u(r);
                    let t = transfer(&spec, u)?;
                    let lam = transfer_eigenvalue(&spec, &sol.roots, u)?;
                    worst = worst.max((t.matrix() * &full - &full * lam).norm() / full.norm());
                }
                let psi = bethe_vector(&spec, &sol.roots)?;
                cols.push(&psi / C64::from(psi.norm()));
            }
            if !cols.is_empty() {
                let sv = singular_values(&CMat::from_columns(&cols));
                min_sv = min_sv.min(*sv.last().unwrap_or(&0.0));
            }
        }
    }
    Ok(Outcome::new(worst, 1e-8)
        .note(format!("n<=6, k<=3, smallest singular value {min_sv:.2e}"))
        .require(counts_ok, "solution count differs from C(n,k)")
        .require(min_sv > 1e-6, "Bethe vectors are rank deficient"))
}

fn q_operator_checks(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let cfg = HomotopyConfig::default();
    let mut comm: f64 = 0.0;
    let mut eig: f64 = 0.0;
    for n in 1..=5 {
        let spec = ChainSpec::random(n, r);
        let uf = UniversalFormula::new(&spec)?;
        let t = transfer(&spec, rand_u(r))?;
        for l in 0..=n {
            comm = comm.max(relative_commutator(&uf.exterior_power(spec.z(), l)?, &t)?);
        }
        let x = random_annulus(r, 0.3, 1.0);
        let q = q_operator(&spec, spec.z(), x, QSign::Plus)?;
        comm = comm.max(relative_commutator(&q, &t)?);
        for k in 0..=n {
            for sol in solve_all(&BetheInstance::aba(&spec, k)?, &cfg).solutions {
                let psi = bethe_vector_full(&spec, &sol.roots)?;
                let ev: C64 = sol.roots.iter().map(|&v| one() - x * v).product();
                eig = eig.max((q.matrix() * &psi - &psi * ev).norm() / psi.norm());
            }
        }
    }
    Ok(Outcome::new(eig, 1e-7)
        .note(format!("n<=5, worst commutator {comm:.2e} (tol 1e-9)"))
        .require(comm < 1e-9, "exterior powers do not commute with T(u)"))
}

fn operator_identities(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for _ in 0..3 {
            let spec = ChainSpec::random(n, r);
            let res = operator_identity_residuals(&spec, spec.z(), rand_u(r))?;
            worst = worst.max(res.tq_plus).max(res.tq_minus).max(res.wronskian);
        }
    }
    Ok(Outcome::new(worst, 1e-8).note("TQ(+), TQ(-), Wronskian, n<=4"))
}

fn vertex_vs_bethe(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let d = 3;
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        for k in 1..=2.min(n - 1) {
            let spec = ChainSpec::random(n, r);
            let inst = BetheInstance::saddle(&spec, k)?;
            for p in block_basis(n, k) {
                let pt = FixedPoint::new(&spec, p.clone())?;
                let roots = perturbative_roots(&inst, &p, d)?;
                for l in 1..=k {
                    let tau = SchurInsertion::Elementary(l);
                    let lim = eigenvalue_limit(&spec, &pt, &tau, d)?;
                    let bet = bethe_symmetric_series(&pt, &tau, &roots)?;
                    for m in 0..=d {
                        let c = bet.coeff(m);
                        worst = worst.max((lim.coeff(m) - c).norm() / c.norm().max(1.0));
                    }
                }
            }
        }
    }
    Ok(Outcome::new(worst, 1e-3).note("n<=4, k<=2, tau=e_l, through z^3, relative to max(1,|c_m|)"))
}

fn saddle_dictionary(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=6 {
        let spec = ChainSpec::random(n, r);
        for k in 1..=n.min(3) {
            let aba = BetheInstance::aba(&spec, k)?;
            let sad = BetheInstance::saddle(&spec, k)?;
            for sol in solve_all(&aba, &HomotopyConfig::default()).solutions {
                worst = worst.max(sad.relative_residual(&sol.roots)?);
                count += 1;
            }
        }
    }
    Ok(Outcome::new(worst, 1e-10).note(format!("{count} ABA solutions")))
}

fn sl2_qq(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut qq: f64 = 0.0;
    let mut bethe: f64 = 0.0;
    let mut count = 0;
    while count < 50 {
        let n = 2 + count % 4;
        let spec = ChainSpec::random(n, r);
        for k in 0..=n {
            for sol in solve_all(&BetheInstance::aba(&spec, k)?, &HomotopyConfig::default()).solutions {
                let (inst, hbar) = qq_from_bethe(&spec, &sol.roots)?;
                qq = qq.max(qq_residual(&inst, hbar)?[0].max_abs_coeff());
                bethe = bethe.max(max_norm(&qq_to_bethe_residual(&inst, hbar)?));
                count += 1;
            }
        }
    }
    Ok(Outcome::new(qq, 1e-10)
        .note(format!("{count} instances, worst QQ->Bethe {bethe:.2e} (tol 1e-9)"))
        .require(bethe < 1e-9, "QQ->Bethe residual too large"))
}

fn points(r: &mut ChaCha8Rng, count: usize) -> Vec<C64> {
    (0..count).map(|_| random_annulus(r, 0.4, 2.5)).collect()
}

fn twist_and_backlund(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut twist: f64 = 0.0;
    let mut back: f64 = 0.0;
    for _ in 0..5 {
        let spec = ChainSpec::random(3, r);
        let sol = solve_all(&BetheInstance::aba(&spec, 1)?, &HomotopyConfig::default())
            .solutions
            .remove(0);
        let (inst, hbar) = qq_from_bethe(&spec, &sol.roots)?;
        let conn = miura_connection(&inst, hbar)?;
        let z = [inst.zeta[0], one() / inst.zeta[0]];
        twist = twist.max(z_twist_verify(&conn, &z, &sl2_gauge(&inst), &points(r, 20))?);
        back = back.max(backlund_residual(&conn, 0, &points(r, 20))?);
    }
    for degrees in [[1, 1], [2, 1], [1, 2], [2, 2]] {
        let hbar = random_annulus(r, 0.3, 0.7);
        let zeta = vec![random_annulus(r, 0.5, 1.5), random_annulus(r, 0.5, 1.5)];
        let inst = random_qq_instance(CartanData::a_type(2)?, &degrees, zeta, hbar, r)?;
        let conn = miura_connection(&inst, hbar)?;
        for res in miura_plucker_residuals(&conn, &points(r, 20))? {
            twist = twist.max(res);
        }
        for i in 0..2 {
            back = back.max(backlund_residual(&conn, i, &points(r, 20))?);
        }
    }
    Ok(Outcome::new(twist.max(back), 1e-9).note(format!("r=1,2: Z-twist blocks {twist:.2e}, Backlund {back:.2e}")))
}

fn wronskian_trs(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut flag: f64 = 0.0;
    let mut sym: f64 = 0.0;
    let mut printed: f64 = 0.0;
    for n in 2..=3 {
        for _ in 0..5 {
            let a: Vec<C64> = (0..n).map(|_| rand_u(r)).collect();
            let mut xi: Vec<C64> = (0..n).map(|_| rand_u(r)).collect();
            let g = xi.iter().product::<C64>().powf(1.0 / n as f64);
            xi.iter_mut().for_each(|x| *x /= g);
            let hbar = random_annulus(r, 0.3, 0.7);
            let data = solve_flag_sections(&a, &xi, hbar, r)?;
            flag = flag.max(flag_residual(&data)?);
            let trs = trs_from_sections(&data)?;
            sym = sym.max(max_norm(&lagrangian_residual_with(
                &trs,
                &a,
                TrsNormalization::Symmetric,
            )?));
            printed = printed.max(max_norm(&lagrangian_residual(&trs, &a)?));
        }
    }
    Ok(Outcome::new(sym, 1e-8)
        .note(format!(
            "n=2,3, symmetric tRS normalization; flag residual {flag:.2e} (tol 1e-10); printed normalization gives {printed:.2e}"
        ))
        .require(flag < 1e-10, "flag sections residual too large"))
}

fn qkz_holonomy(r: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 1..=4 {
        for _ in 0..5 {
            let spec = ChainSpec::random(n, r);
            let hs: Vec<Operator> = (1..=n).map(|i| qkz_operator(&spec, one(), i)).collect::<Result<_>>()?;
            for i in 0..n {
                for j in i + 1..n {
                    worst = worst.max(relative_commutator(&hs[i], &hs[j])?);
                }
            }
        }
    }
    Ok(Outcome::new(worst, 1e-9).note("n<=4, q=1"))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "transfer commutativity",
            limit: Duration::from_secs(30),
            run: transfer_commutativity,
        },
        Criterion {
            id: 2,
            name: "Yang-Baxter",
            limit: Duration::from_secs(5),
            run: yang_baxter,
        },
        Criterion {
            id: 3,
            name: "Bethe eigenpairs",
            limit: Duration::from_secs(120),
            run: bethe_eigenpairs,
        },
        Criterion {
            id: 4,
            name: "Q-operator",
            limit: Duration::from_secs(60),
            run: q_operator_checks,
        },
        Criterion {
            id: 5,
            name: "TQ and quantum Wronskian",
            limit: Duration::from_secs(60),
            run: operator_identities,
        },
        Criterion {
            id: 6,
            name: "vertex = Bethe algebra",
            limit: Duration::from_secs(300),
            run: vertex_vs_bethe,
        },
        Criterion {
            id: 7,
            name: "saddle/ABA dictionary",
            limit: Duration::from_secs(10),
            run: saddle_dictionary,
        },
        Criterion {
            id: 8,
            name: "SL(2) QQ <-> Bethe",
            limit: Duration::from_secs(30),
            run: sl2_qq,
        },
        Criterion {
            id: 9,
            name: "Z-twist and Backlund",
            limit: Duration::from_secs(30),
            run: twist_and_backlund,
        },
        Criterion {
            id: 10,
            name: "quantum Wronskian / tRS duality",
            limit: Duration::from_secs(30),
            run: wronskian_trs,
        },
        Criterion {
            id: 11,
            name: "qKZ holonomy",
            limit: Duration::from_secs(30),
            run: qkz_holonomy,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let mut r = rng(1000 + u64::from(c.id));
        let start = Instant::now();
        let outcome = (c.run)(&mut r);
        let secs = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(o) => {
                let in_time = secs <= c.limit;
                let mut d = format!("worst {:.2e} < {:.0e}", o.worst, o.tol);
                if !o.note.is_empty() {
                    d.push_str(&format!("; {}", o.note));
                }
                if !in_time {
                    d.push_str("; over the runtime limit");
                }
                (o.ok && in_time, d)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {}: {} [{:.2}s, limit {}s]",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            detail,
            secs.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
