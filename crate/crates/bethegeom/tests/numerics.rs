use bethegeom::numerics::*;
use bethegeom::vertex::SchurInsertion;
use bethegeom::Error;
use proptest::prelude::*;

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

fn cplx(rmin: f64, rmax: f64) -> impl Strategy<Value = C64> {
    (rmin..rmax, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

// Independent product evaluation of the Pochhammer ratio in the bracket.
fn bracket_direct(x: C64, d: i64, q: C64, hbar: C64) -> C64 {
    let one = c64(1.0, 0.0);
    let mut acc = one;
    if d >= 0 {
        for i in 0..d {
            acc *= (one - hbar / x * q.powi(i as i32)) / (one - q / x * q.powi(i as i32));
        }
    } else {
        for i in 1..=(-d) {
            acc *= (one - q / x * q.powi(-i as i32)) / (one - hbar / x * q.powi(-i as i32));
        }
    }
    acc * (-q.sqrt() / hbar.sqrt()).powi(d as i32)
}

#[test]
fn qpoch_examples() {
    let x = c64(0.3, -0.7);
    let q = c64(0.9, 0.1);
    assert_eq!(qpoch_finite(x, q, 0).unwrap(), c64(1.0, 0.0));
    assert_eq!(qpoch_finite(c64(0.0, 0.0), q, 5).unwrap(), c64(1.0, 0.0));
    let two = (c64(1.0, 0.0) - x) * (c64(1.0, 0.0) - q * x);
    assert!(close(qpoch_finite(x, q, 2).unwrap(), two, 1e-15));
    // 1 - x q^{-1} = 0
    assert!(matches!(qpoch_finite(q, q, -1), Err(Error::DegenerateFactor(_))));
}

#[test]
fn bracket_examples() {
    let x = c64(1.7, 0.4);
    let q = c64(0.8, 0.05);
    let h = c64(1.3, -0.2);
    assert_eq!(bracket_function(x, 0, q, h).unwrap(), c64(1.0, 0.0));
    let one = c64(1.0, 0.0);
    let d1 = (one - h / x) / (one - q / x) * (-q.sqrt() / h.sqrt());
    assert!(close(bracket_function(x, 1, q, h).unwrap(), d1, 1e-14));
    for d in 0..=8 {
        let v = bracket_function(x, d, q, q).unwrap();
        let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
        assert!(close(v, c64(sign, 0.0), 1e-13), "d={d} {v}");
    }
}

#[test]
fn elementary_symmetric_examples() {
    let a = c64(0.2, 1.0);
    let b = c64(-3.0, 0.5);
    assert_eq!(elementary_symmetric(&[a, b], 1).unwrap(), a + b);
    assert_eq!(elementary_symmetric(&[a, b], 0).unwrap(), c64(1.0, 0.0));
    assert_eq!(elementary_symmetric(&[], 0).unwrap(), c64(1.0, 0.0));
    let v = [c64(2.0, 0.0), c64(3.0, 0.0), c64(5.0, 0.0)];
    assert_eq!(elementary_symmetric(&v, 2).unwrap(), c64(31.0, 0.0));
    assert!(matches!(elementary_symmetric(&v, 4), Err(Error::IndexOutOfRange(_))));
}

#[test]
fn dilation_examples() {
    let p = Polynomial::new(vec![c64(1.0, 2.0), c64(-0.5, 0.0), c64(3.0, 1.0)]);
    assert_eq!(poly_dilate(&p, c64(1.0, 0.0)), p);
    let a = c64(0.4, -1.1);
    let l = c64(2.0, 0.5);
    let got = poly_dilate(&Polynomial::linear_root(a), l);
    assert_eq!(got, Polynomial::new(vec![-a, l]));
    let sq = Polynomial::new(vec![c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0)]);
    let want = Polynomial::new(vec![c64(0.0, 0.0), c64(2.0, 0.0), c64(4.0, 0.0)]);
    assert_eq!(poly_dilate(&sq, c64(2.0, 0.0)), want);
}

#[test]
fn series_inversion_examples() {
    let one = TruncatedSeries::constant(c64(1.0, 0.0), 4);
    assert_eq!(series_invert(&one).unwrap(), one);
    let s = TruncatedSeries::new(vec![c64(1.0, 0.0), c64(-1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    let inv = series_invert(&s).unwrap();
    assert_eq!(inv.coeffs(), &[c64(1.0, 0.0); 4]);
    let t = TruncatedSeries::new(vec![c64(2.0, 0.0), c64(1.0, 0.0)]);
    let inv = series_invert(&t).unwrap();
    assert_eq!(inv.coeffs(), &[c64(0.5, 0.0), c64(-0.25, 0.0)]);
    let back = &t * &inv;
    assert_eq!(back.coeffs(), &[c64(1.0, 0.0), c64(0.0, 0.0)]);
    let zero = TruncatedSeries::variable(3);
    assert!(matches!(series_invert(&zero), Err(Error::ZeroConstantTerm)));
}

#[test]
fn series_orders_combine_to_the_minimum() {
    let a = TruncatedSeries::constant(c64(1.0, 0.0), 5);
    let b = TruncatedSeries::variable(2);
    assert_eq!((&a * &b).order(), 2);
    assert_eq!((&a + &b).order(), 2);
    assert_eq!((&b - &a).order(), 2);
}

#[test]
fn richardson_examples() {
    let c = c64(0.7, -2.0);
    let e = richardson_extrapolate(&[(0.1, c), (0.05, c), (0.025, c)]).unwrap();
    assert!((e.value - c).norm() < 1e-15);
    let lin = |x: f64| c64(1.0 + x, 0.0);
    let e = richardson_extrapolate(&[(0.1, lin(0.1)), (0.05, lin(0.05))]).unwrap();
    assert!((e.value - c64(1.0, 0.0)).norm() < 1e-14);
    let quad = |x: f64| c64(1.0 + x + x * x, 0.0);
    let nodes = [0.2, 0.1, 0.05];
    let s: Vec<_> = nodes.iter().map(|&x| (x, quad(x))).collect();
    let e = richardson_extrapolate(&s).unwrap();
    assert!((e.value - c64(1.0, 0.0)).norm() < 1e-12);
    assert!(matches!(
        richardson_extrapolate(&[(0.1, c)]),
        Err(Error::InsufficientSamples { needed: 2, got: 1 })
    ));
}

#[test]
fn polynomial_invariants() {
    let p = Polynomial::new(vec![c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    assert_eq!(p.degree(), Some(0));
    assert_eq!(Polynomial::zero().degree(), None);
    assert!(Polynomial::zero().coeffs().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn qpoch_recurrence(x in cplx(0.1, 3.0), q in cplx(0.2, 1.5), d in 0i64..12) {
        let lhs = qpoch_finite(x, q, d + 1).unwrap();
        let rhs = qpoch_finite(x, q, d).unwrap() * (c64(1.0, 0.0) - q.powi(d as i32) * x);
        prop_assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn qpoch_reflection(x in cplx(0.1, 3.0), q in cplx(0.5, 1.5), d in 0i64..10) {
        let Ok(neg) = qpoch_finite(x, q, -d) else { return Ok(()) };
        let pos = qpoch_finite(x * q.powi(-d as i32), q, d).unwrap();
        prop_assert!(close(neg * pos, c64(1.0, 0.0), 1e-10));
    }

    #[test]
    fn bracket_matches_direct_product(
        x in cplx(0.3, 3.0),
        q in cplx(0.7, 1.3),
        h in cplx(0.5, 2.0),
        d in -10i64..=10,
    ) {
        let Ok(v) = bracket_function(x, d, q, h) else { return Ok(()) };
        let w = bracket_direct(x, d, q, h);
        prop_assert!((v - w).norm() <= 1e-12 * w.norm().max(1e-300), "{v} vs {w}");
    }

    #[test]
    fn series_inverse_round_trip(
        c0 in cplx(0.5, 2.0),
        rest in prop::collection::vec(cplx(0.0, 1.0), 0..8),
    ) {
        let mut c = vec![c0];
        c.extend(rest);
        let s = TruncatedSeries::new(c);
        let prod = &s * &series_invert(&s).unwrap();
        prop_assert!((prod.coeff(0) - c64(1.0, 0.0)).norm() < 1e-13);
        for m in 1..=prod.order() {
            prop_assert!(prod.coeff(m).norm() < 1e-13, "m={m} {}", prod.coeff(m));
        }
    }

    #[test]
    fn elementary_symmetric_matches_expansion(v in prop::collection::vec(cplx(0.1, 2.0), 0..7)) {
        // ∏(t + v_i) with t as the variable: coefficient of t^{len-l} is e_l.
        let p = v.iter().fold(Polynomial::one(), |acc, &x| {
            &acc * &Polynomial::new(vec![x, c64(1.0, 0.0)])
        });
        let n = v.len();
        for l in 0..=n {
            let e = elementary_symmetric(&v, l).unwrap();
            prop_assert!(close(e, p.coeff(n - l), 1e-12));
        }
    }

    #[test]
    fn dilation_preserves_degree_and_composes(
        c in prop::collection::vec(cplx(0.1, 2.0), 1..6),
        l1 in cplx(0.5, 2.0),
        l2 in cplx(0.5, 2.0),
        u in cplx(0.1, 2.0),
    ) {
        let p = Polynomial::new(c);
        let d = poly_dilate(&p, l1);
        prop_assert_eq!(d.degree(), p.degree());
        prop_assert!(close(d.eval(u), p.eval(l1 * u), 1e-12));
        let dd = poly_dilate(&d, l2);
        prop_assert!(dd.max_coeff_diff(&poly_dilate(&p, l1 * l2)) < 1e-12 * (1.0 + p.max_abs_coeff()) * 40.0);
    }

    #[test]
    fn schur_insertions_are_symmetric(
        v in prop::collection::vec(cplx(0.2, 2.0), 1..5),
        shift in 0usize..4,
    ) {
        let mut w = v.clone();
        let len = w.len();
        w.rotate_left(shift % len);
        w.reverse();
        let taus = [
            SchurInsertion::Elementary(len.min(2)),
            SchurInsertion::PowerSum(3),
            SchurInsertion::Monomial(vec![2, 1]),
        ];
        for t in &taus {
            prop_assert!(close(t.eval(&v), t.eval(&w), 1e-12));
        }
    }
}
