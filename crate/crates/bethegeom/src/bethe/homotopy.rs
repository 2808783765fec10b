use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::linalg::solve_dense;
use crate::numerics::scalar::{c64, rel_dist, Cdd, Field, Precision, C64};
use crate::spinchain::{binomial, combinations, SpinBasisIndex};

use super::instance::BetheInstance;
use super::system::ClearedSystem;

/// Step control and tolerances for path tracking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HomotopyConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Relative Newton update size at which a corrector run stops.
    pub newton_tolerance: f64,
    /// Cap on Newton iterations per step, and for the final polish.
    pub max_newton_iterations: usize,
    /// Relative gap under which two tracked roots count as colliding.
    pub collision_gap: f64,
    /// Detour retries after a collision.
    pub detour_retries: usize,
    /// Certificate threshold on max_i |LHS_i/RHS_i - 1|.
    pub residual_tolerance: f64,
    pub precision: Precision,
    /// Seed for detour arcs.
    pub seed: u64,
}

impl Default for HomotopyConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.02,
            min_step: 1e-9,
            max_step: 0.1,
            newton_tolerance: 1e-12,
            max_newton_iterations: 50,
            collision_gap: 1e-6,
            detour_retries: 1,
            residual_tolerance: 1e-9,
            precision: Precision::Std,
            seed: 0,
        }
    }
}

/// Bethe roots tracked from a fixed point.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<C64>,
    pub residual: f64,
    pub origin_subset: SpinBasisIndex,
    /// Accepted predictor-corrector steps.
    pub steps: usize,
    /// Whether the detour arc was needed.
    pub detoured: bool,
}

/// s(t) = s_target · t · (1 + γ(1 - t)); γ = 0 is the straight ray.
#[derive(Debug, Clone, Copy)]
struct Path {
    target: C64,
    gamma: C64,
}

impl Path {
    fn s(&self, t: f64) -> C64 {
        self.target * t * (self.gamma * (1.0 - t) + 1.0)
    }
    fn ds(&self, t: f64) -> C64 {
        self.target * (self.gamma * (1.0 - 2.0 * t) + 1.0)
    }
}

fn norm<F: Field>(v: &[F]) -> f64 {
    v.iter().map(|x| x.modulus().powi(2)).sum::<f64>().sqrt()
}

fn min_gap<F: Field>(v: &[F]) -> f64 {
    let c: Vec<C64> = v.iter().map(|x| x.to_c64()).collect();
    let mut g = f64::INFINITY;
    for i in 0..c.len() {
        for j in 0..i {
            g = g.min(rel_dist(c[i], c[j]));
        }
    }
    g
}

/// dv/dt = -J^{-1} · H(v) · s'(t).
fn tangent<F: Field>(sys: &ClearedSystem, v: &[F], s: F, ds: F) -> Option<Vec<F>> {
    let jac = sys.jacobian(v, s);
    let rhs: Vec<F> = sys.ds(v).into_iter().map(|h| -(h * ds)).collect();
    solve_dense(jac, rhs)
}

enum Corrected<F> {
    Converged(Vec<F>, usize),
    Failed,
}

fn newton<F: Field>(
    sys: &ClearedSystem,
    mut v: Vec<F>,
    s: F,
    tol: f64,
    max_iter: usize,
    first_cap: f64,
) -> Corrected<F> {
    let mut prev = f64::INFINITY;
    for it in 0..max_iter {
        let f: Vec<F> = sys.eval(&v, s).into_iter().map(|x| -x).collect();
        let Some(dv) = solve_dense(sys.jacobian(&v, s), f) else {
            return Corrected::Failed;
        };
        let scale = 1.0 + norm(&v);
        let step = norm(&dv) / scale;
        if !step.is_finite() || (it == 0 && step > first_cap) || (it > 0 && step > 0.5 * prev && step > tol) {
            return Corrected::Failed;
        }
        for (x, d) in v.iter_mut().zip(dv) {
            *x = *x + d;
        }
        if step <= tol {
            return Corrected::Converged(v, it + 1);
        }
        prev = step;
    }
    Corrected::Failed
}

fn track<F: Field>(sys: &ClearedSystem, start: &[C64], path: Path, cfg: &HomotopyConfig) -> Result<(Vec<C64>, usize)> {
    let mut v: Vec<F> = start.iter().map(|&x| F::from_c64(x)).collect();
    let scale0 = 1.0 + norm(&v);
    let mut t = 0.0f64;
    let mut h = cfg.initial_step;
    let mut steps = 0usize;
    let step_tol = cfg.newton_tolerance.max(1e-14) * 1e2;
    while t < 1.0 {
        h = h.min(1.0 - t);
        let s_of = |tt: f64| F::from_c64(path.s(tt));
        let ds_of = |tt: f64| F::from_c64(path.ds(tt));
        // Runge-Kutta predictor.
        let hf = F::from_c64(c64(h, 0.0));
        let half = F::from_c64(c64(0.5, 0.0));
        let predicted = (|| {
            let k1 = tangent(sys, &v, s_of(t), ds_of(t))?;
            let v2: Vec<F> = v.iter().zip(&k1).map(|(x, k)| *x + half * hf * *k).collect();
            let k2 = tangent(sys, &v2, s_of(t + h / 2.0), ds_of(t + h / 2.0))?;
            let v3: Vec<F> = v.iter().zip(&k2).map(|(x, k)| *x + half * hf * *k).collect();
            let k3 = tangent(sys, &v3, s_of(t + h / 2.0), ds_of(t + h / 2.0))?;
            let v4: Vec<F> = v.iter().zip(&k3).map(|(x, k)| *x + hf * *k).collect();
            let k4 = tangent(sys, &v4, s_of(t + h), ds_of(t + h))?;
            let sixth = F::from_c64(c64(1.0 / 6.0, 0.0));
            let two = F::from_c64(c64(2.0, 0.0));
            Some(
                (0..v.len())
                    .map(|i| v[i] + hf * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]))
                    .collect::<Vec<F>>(),
            )
        })();
        let outcome = match predicted {
            Some(p) => newton(sys, p, s_of(t + h), step_tol, 8, 1e-2),
            None => Corrected::Failed,
        };
        match outcome {
            Corrected::Converged(nv, iters) => {
                t += h;
                v = nv;
                steps += 1;
                if norm(&v) > 1e8 * scale0 {
                    return Err(Error::PathDivergence {
                        t,
                        reason: "roots escaped to infinity".into(),
                    });
                }
                let gap = min_gap(&v);
                if gap < cfg.collision_gap {
                    return Err(Error::PathCollision { t, gap });
                }
                if iters <= 3 {
                    h = (h * 1.6).min(cfg.max_step);
                }
            }
            Corrected::Failed => {
                h *= 0.5;
                if h < cfg.min_step {
                    return Err(Error::PathDivergence {
                        t,
                        reason: format!("step size fell below {:e}", cfg.min_step),
                    });
                }
            }
        }
    }
    // Final polish at the target.
    let s1 = F::from_c64(path.s(1.0));
    let polish_tol = match cfg.precision {
        Precision::Std => cfg.newton_tolerance,
        Precision::Extended => cfg.newton_tolerance.min(1e-26),
    };
    for _ in 0..cfg.max_newton_iterations {
        let f: Vec<F> = sys.eval(&v, s1).into_iter().map(|x| -x).collect();
        let Some(dv) = solve_dense(sys.jacobian(&v, s1), f) else {
            break;
        };
        let step = norm(&dv) / (1.0 + norm(&v));
        for (x, d) in v.iter_mut().zip(dv) {
            *x = *x + d;
        }
        if !(step > polish_tol) {
            break;
        }
    }
    Ok((v.into_iter().map(|x| x.to_c64()).collect(), steps))
}

/// Tracks the branch starting at the a-values of p along ζ²(t) = tζ² (ABA)
/// or z(t) = tz (SADDLE), then certifies the endpoint residual.
pub fn solve_from_subset(inst: &BetheInstance, p: &SpinBasisIndex, cfg: &HomotopyConfig) -> Result<RootSet> {
    if p.len() != inst.k() {
        return Err(Error::DimensionMismatch(format!(
            "subset of size {} for k = {}",
            p.len(),
            inst.k()
        )));
    }
    if p.sites().iter().any(|&i| i > inst.n()) {
        return Err(Error::IndexOutOfRange(format!("{p:?} outside 1..={}", inst.n())));
    }
    let start: Vec<C64> = p.sites().iter().map(|&i| inst.a()[i - 1]).collect();
    let target = inst.path_parameter();
    let certify = |roots: Vec<C64>, steps: usize, detoured: bool| -> Result<RootSet> {
        let residual = if roots.is_empty() {
            0.0
        } else {
            inst.relative_residual(&roots)?
        };
        if !(residual < cfg.residual_tolerance) {
            return Err(Error::PathDivergence {
                t: 1.0,
                reason: format!("endpoint residual {residual:e} above tolerance"),
            });
        }
        Ok(RootSet {
            roots,
            residual,
            origin_subset: p.clone(),
            steps,
            detoured,
        })
    };
    if target.norm() == 0.0 || inst.k() == 0 {
        return Ok(RootSet {
            roots: start,
            residual: 0.0,
            origin_subset: p.clone(),
            steps: 0,
            detoured: false,
        });
    }
    let sys = ClearedSystem::new(inst);
    let attempt = |path: Path, detoured: bool| -> Result<RootSet> {
        let (roots, steps) = match cfg.precision {
            Precision::Std => track::<C64>(&sys, &start, path, cfg),
            Precision::Extended => track::<Cdd>(&sys, &start, path, cfg),
        }?;
        certify(roots, steps, detoured)
    };
    let straight = Path {
        target,
        gamma: c64(0.0, 0.0),
    };
    match attempt(straight, false) {
        // an endpoint on a pole is a spurious root of the cleared system
        Err(first @ (Error::PathCollision { .. } | Error::PathDivergence { .. } | Error::PoleCollision(_))) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ subset_hash(p));
            let mut last = first;
            for _ in 0..cfg.detour_retries {
                let gamma = C64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..std::f64::consts::TAU));
                match attempt(Path { target, gamma }, true) {
                    Ok(rs) => return Ok(rs),
                    Err(e) => last = e,
                }
            }
            Err(last)
        }
        other => other,
    }
}

fn subset_hash(p: &SpinBasisIndex) -> u64 {
    p.sites().iter().fold(0xcbf29ce484222325u64, |h, &i| {
        (h ^ i as u64).wrapping_mul(0x100000001b3)
    })
}

/// Distance between two root multisets: minimum over matchings of the
/// largest relative difference.
pub fn multiset_distance(x: &[C64], y: &[C64]) -> f64 {
    if x.len() != y.len() {
        return f64::INFINITY;
    }
    let k = x.len();
    if k == 0 {
        return 0.0;
    }
    if k <= 7 {
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            let d = (0..k).map(|i| rel_dist(x[i], y[p[i]])).fold(0.0, f64::max);
            best = best.min(d);
        });
        return best;
    }
    let mut used = vec![false; k];
    let mut worst: f64 = 0.0;
    for &xi in x {
        let (j, d) = (0..k)
            .filter(|&j| !used[j])
            .map(|j| (j, rel_dist(xi, y[j])))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut dyn FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

/// Outcome of tracking every fixed point.
#[derive(Debug, Clone)]
pub struct SolveAllReport {
    pub solutions: Vec<RootSet>,
    pub failures: Vec<(SpinBasisIndex, Error)>,
    pub expected: usize,
    pub distinct: usize,
    /// Smallest multiset distance between two reported solutions.
    pub min_pairwise_distance: f64,
}

impl SolveAllReport {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty() && self.distinct == self.expected
    }
}

pub fn solve_all(inst: &BetheInstance, cfg: &HomotopyConfig) -> SolveAllReport {
    let n = inst.n();
    let k = inst.k();
    let mut solutions = Vec::new();
    let mut failures = Vec::new();
    for p in combinations(n, k) {
        let p = SpinBasisIndex::new(p, n).expect("combinations are valid subsets");
        match solve_from_subset(inst, &p, cfg) {
            Ok(rs) => solutions.push(rs),
            Err(e) => failures.push((p, e)),
        }
    }
    let mut distinct = 0;
    let mut min_pairwise = f64::INFINITY;
    for i in 0..solutions.len() {
        let mut new = true;
        for j in 0..i {
            let d = multiset_distance(&solutions[i].roots, &solutions[j].roots);
            min_pairwise = min_pairwise.min(d);
            if d <= 1e-6 {
                new = false;
            }
        }
        if new {
            distinct += 1;
        }
    }
    SolveAllReport {
        solutions,
        failures,
        expected: binomial(n, k),
        distinct,
        min_pairwise_distance: min_pairwise,
    }
}
