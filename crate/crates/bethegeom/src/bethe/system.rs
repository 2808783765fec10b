//! Bethe equations with denominators cleared, F_i(v; s) = G_i(v) + s·H_i(v),
//! where G_i and H_i are products of affine factors.

use crate::numerics::scalar::{c64, Field, QuarterPowers, C64};
use crate::numerics::series::TruncatedSeries;

use super::instance::{BetheInstance, Convention};

/// c_self·v_i + c_other·v_j + c_0 inside equation i.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Factor {
    c_self: C64,
    other: Option<(usize, C64)>,
    c0: C64,
}

impl Factor {
    fn eval<F: Field>(&self, i: usize, v: &[F]) -> F {
        let mut x = F::from_c64(self.c_self) * v[i] + F::from_c64(self.c0);
        if let Some((j, cj)) = self.other {
            x = x + F::from_c64(cj) * v[j];
        }
        x
    }

    /// ∂/∂v_m.
    fn deriv(&self, i: usize, m: usize) -> C64 {
        let mut d = c64(0.0, 0.0);
        if m == i {
            d += self.c_self;
        }
        if let Some((j, cj)) = self.other {
            if j == m {
                d += cj;
            }
        }
        d
    }

    fn eval_series(&self, i: usize, v: &[TruncatedSeries]) -> TruncatedSeries {
        let mut x = v[i].scale(self.c_self).add_scalar(self.c0);
        if let Some((j, cj)) = self.other {
            x = &x + &v[j].scale(cj);
        }
        x
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Product {
    scale: C64,
    factors: Vec<Factor>,
}

impl Product {
    fn eval<F: Field>(&self, i: usize, v: &[F]) -> F {
        self.factors
            .iter()
            .fold(F::from_c64(self.scale), |acc, f| acc * f.eval(i, v))
    }

    /// Gradient by prefix/suffix products, so vanishing factors are fine.
    fn grad<F: Field>(&self, i: usize, v: &[F], out: &mut [F]) {
        let vals: Vec<F> = self.factors.iter().map(|f| f.eval(i, v)).collect();
        let l = vals.len();
        let mut suffix = vec![F::one(); l + 1];
        for t in (0..l).rev() {
            suffix[t] = suffix[t + 1] * vals[t];
        }
        let mut prefix = F::from_c64(self.scale);
        for t in 0..l {
            let rest = prefix * suffix[t + 1];
            for (m, o) in out.iter_mut().enumerate() {
                let d = self.factors[t].deriv(i, m);
                if d != c64(0.0, 0.0) {
                    *o = *o + F::from_c64(d) * rest;
                }
            }
            prefix = prefix * vals[t];
        }
    }

    fn eval_series(&self, i: usize, v: &[TruncatedSeries]) -> TruncatedSeries {
        let order = v.first().map_or(0, |s| s.order());
        self.factors
            .iter()
            .fold(TruncatedSeries::constant(self.scale, order), |acc, f| {
                &acc * &f.eval_series(i, v)
            })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct ClearedSystem {
    g: Vec<Product>,
    h: Vec<Product>,
}

impl ClearedSystem {
    pub fn new(inst: &BetheInstance) -> Self {
        let k = inst.k();
        let q = QuarterPowers::new(inst.hbar());
        let (hp, hm) = (q.pow(2), q.pow(-2));
        let one = c64(1.0, 0.0);
        let zero = c64(0.0, 0.0);
        let hb = inst.hbar();
        let n = inst.n() as i32;
        let mut g = Vec::with_capacity(k);
        let mut h = Vec::with_capacity(k);
        for i in 0..k {
            let others: Vec<usize> = (0..k).filter(|&j| j != i).collect();
            let f = |cs: C64, other: Option<(usize, C64)>, c0: C64| Factor { c_self: cs, other, c0 };
            match inst.convention() {
                Convention::Aba => {
                    let mut gf: Vec<Factor> = inst.a().iter().map(|&a| f(one, None, -a)).collect();
                    gf.extend(others.iter().map(|&j| f(hp, Some((j, -hm)), zero)));
                    let mut hf: Vec<Factor> = inst.a().iter().map(|&a| f(hp, None, -hm * a)).collect();
                    hf.extend(others.iter().map(|&j| f(hm, Some((j, -hp)), zero)));
                    g.push(Product {
                        scale: -one,
                        factors: gf,
                    });
                    h.push(Product {
                        scale: one,
                        factors: hf,
                    });
                }
                Convention::Saddle => {
                    let mut gf: Vec<Factor> = others.iter().map(|&j| f(one, Some((j, -hb)), zero)).collect();
                    gf.extend(inst.a().iter().map(|&a| f(one, None, -a)));
                    let mut hf: Vec<Factor> = others.iter().map(|&j| f(hb, Some((j, -one)), zero)).collect();
                    hf.extend(inst.a().iter().map(|&a| f(-one, None, hb * a)));
                    g.push(Product {
                        scale: one,
                        factors: gf,
                    });
                    h.push(Product {
                        scale: -q.pow(-2 * n),
                        factors: hf,
                    });
                }
            }
        }
        Self { g, h }
    }

    pub fn k(&self) -> usize {
        self.g.len()
    }

    pub fn eval<F: Field>(&self, v: &[F], s: F) -> Vec<F> {
        (0..self.k())
            .map(|i| self.g[i].eval(i, v) + s * self.h[i].eval(i, v))
            .collect()
    }

    /// ∂F/∂s = H(v).
    pub fn ds<F: Field>(&self, v: &[F]) -> Vec<F> {
        (0..self.k()).map(|i| self.h[i].eval(i, v)).collect()
    }

    /// Row-major Jacobian ∂F_i/∂v_m.
    pub fn jacobian<F: Field>(&self, v: &[F], s: F) -> Vec<Vec<F>> {
        let k = self.k();
        let mut jac = vec![vec![F::zero(); k]; k];
        for i in 0..k {
            let mut gg = vec![F::zero(); k];
            let mut hh = vec![F::zero(); k];
            self.g[i].grad(i, v, &mut gg);
            self.h[i].grad(i, v, &mut hh);
            for m in 0..k {
                jac[i][m] = gg[m] + s * hh[m];
            }
        }
        jac
    }

    /// F evaluated on series arguments with s = z (the series variable).
    pub fn eval_series(&self, v: &[TruncatedSeries]) -> Vec<TruncatedSeries> {
        let order = v.first().map_or(0, |s| s.order());
        let z = TruncatedSeries::variable(order);
        (0..self.k())
            .map(|i| &self.g[i].eval_series(i, v) + &(&z * &self.h[i].eval_series(i, v)))
            .collect()
    }
}
