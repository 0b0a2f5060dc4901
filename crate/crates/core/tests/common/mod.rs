//! Randomised invariants shared by the property tests and the acceptance
//! harness. Every runner uses a fixed seed so failures reproduce.

#![allow(dead_code)]

use adelab::algfun;
use adelab::arith::{reduce_mod, Modulus, Monomial, PolyMatrix, QPoly, Residue, Ring, SparsePoly, TruncSeries, Q};
use adelab::ode::{self, Curvature, OdeSystem};
use adelab::vfield::{self, Derivation};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

pub type Property = (&'static str, fn() -> Result<(), String>);

pub const PROPERTIES: &[Property] = &[
    ("polynomial ring laws", ring_laws),
    ("reduce_mod is a ring morphism", reduce_morphism),
    ("division with remainder", division),
    ("series truncation commutes with products", truncation),
    ("bracket acts as the commutator", bracket_identity),
    ("v^p is a derivation", vp_derivation),
    ("v^p agrees with p-fold application", vp_iteration),
    ("commuting fields: (v + w)^p = v^p + w^p", vp_additive),
    ("cleared recursion matches direct iteration", cleared_recursion),
    ("cleared iterates mod p match curvature_test", cleared_mod_p),
    ("algebraic series certificate bounds", certificate_bounds),
    ("one-variable linearization", linearize_one),
    ("two-variable linearization", linearize_two),
];

fn runner(seed: u64, cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        ..Config::default()
    })
}

fn finish(r: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn small_q() -> impl Strategy<Value = Q> {
    (-6i64..7, 1i64..5).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn qpoly(nvars: usize, terms: usize, deg: u32) -> impl Strategy<Value = QPoly> {
    prop::collection::vec((prop::collection::vec(0..=deg, nvars), small_q()), 0..=terms).prop_map(move |ts| {
        QPoly::from_terms(nvars, &(), ts.into_iter().map(|(e, c)| (Monomial::from_exps(&e), c)))
    })
}

fn fp_poly(m: Modulus, nvars: usize, terms: usize, deg: u32) -> impl Strategy<Value = SparsePoly<Residue>> {
    prop::collection::vec((prop::collection::vec(0..=deg, nvars), -20i64..20), 0..=terms).prop_map(move |ts| {
        SparsePoly::from_terms(nvars, &m, ts.into_iter().map(|(e, c)| (Monomial::from_exps(&e), m.residue(c))))
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![5u64, 7, 11])
}

fn field(m: Modulus, nvars: usize) -> impl Strategy<Value = Derivation<Residue>> {
    prop::collection::vec(fp_poly(m, nvars, 3, 2), nvars).prop_map(|c| Derivation::from_components(c).unwrap())
}

fn apply_n(v: &Derivation<Residue>, f: &SparsePoly<Residue>, n: u64) -> SparsePoly<Residue> {
    (0..n).fold(f.clone(), |g, _| v.apply(&g))
}

pub fn ring_laws() -> Result<(), String> {
    let s = (qpoly(2, 4, 3), qpoly(2, 4, 3), qpoly(2, 4, 3));
    finish(runner(1, 128).run(&s, |(a, b, c)| {
        check(a.mul(&b) == b.mul(&a), "commutative")?;
        check(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), "associative")?;
        check(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), "distributive")?;
        check(a.add(&a.neg()).is_zero(), "additive inverse")?;
        check(a.mul(&QPoly::one(2, &())) == a, "unit")?;
        check(a.pow(3) == a.mul(&a).mul(&a), "power")?;
        let d = a.mul(&b).derivative(0);
        check(d == a.derivative(0).mul(&b).add(&a.mul(&b.derivative(0))), "Leibniz")
    }))
}

pub fn reduce_morphism() -> Result<(), String> {
    let s = (small_q(), small_q(), qpoly(2, 3, 2), qpoly(2, 3, 2), prime(), 1u32..4);
    finish(runner(2, 128).run(&s, |(x, y, f, g, p, k)| {
        // small_q denominators are below 5, hence units for every sampled p
        let m = Modulus::new(p, k).unwrap();
        let r = |q: &Q| reduce_mod(q, p, k).unwrap();
        check(r(&(&x + &y)) == r(&x).add(&r(&y)), "sum")?;
        check(r(&(&x * &y)) == r(&x).mul(&r(&y)), "product")?;
        check(r(&<Q as One>::one()) == m.residue(1), "unit")?;
        let red = |h: &QPoly| h.reduce(m).unwrap();
        check(red(&f.mul(&g)) == red(&f).mul(&red(&g)), "poly product")?;
        check(red(&f.add(&g)) == red(&f).add(&red(&g)), "poly sum")
    }))
}

pub fn division() -> Result<(), String> {
    let s = (qpoly(1, 5, 6), qpoly(1, 4, 4));
    finish(runner(3, 128).run(&s, |(f, g)| {
        prop_assume!(!g.is_zero());
        let (q, r) = f.div_rem(&g).unwrap();
        check(q.mul(&g).add(&r) == f, "f = q g + r")?;
        check(r.is_zero() || r.degree_in(0) < g.degree_in(0), "deg r < deg g")?;
        check(f.mul(&g).divide_exact(&g).unwrap() == f, "exact quotient")
    }))
}

pub fn truncation() -> Result<(), String> {
    let s = (qpoly(1, 6, 8), qpoly(1, 6, 8), 1u32..8);
    finish(runner(4, 128).run(&s, |(a, b, n)| {
        let big = 20;
        let (sa, sb) = (TruncSeries::new(a.clone(), big), TruncSeries::new(b.clone(), big));
        let lhs = sa.mul(&sb).truncate(n);
        let rhs = sa.truncate(n).mul(&sb.truncate(n));
        check(lhs == rhs, "product")?;
        check(lhs == TruncSeries::new(a.mul(&b), n), "agrees with polynomial product")?;
        if !Zero::is_zero(&a.constant_term()) {
            let inv = sa.truncate(n).inverse().unwrap();
            check(inv.mul(&sa.truncate(n)) == TruncSeries::one(1, &(), n), "inverse")?;
        }
        Ok(())
    }))
}

pub fn bracket_identity() -> Result<(), String> {
    let m = Modulus::prime(101).unwrap();
    let s = (field(m, 2), field(m, 2), field(m, 2), fp_poly(m, 2, 4, 3));
    finish(runner(5, 96).run(&s, |(u, v, w, f)| {
        let b = u.bracket(&v);
        check(b.apply(&f) == u.apply(&v.apply(&f)).sub(&v.apply(&u.apply(&f))), "[u,v] f")?;
        let jac = u.bracket(&v.bracket(&w)).add(&v.bracket(&w.bracket(&u))).add(&w.bracket(&u.bracket(&v)));
        check(jac.is_zero(), "Jacobi")?;
        check(u.bracket(&v).add(&v.bracket(&u)).is_zero(), "antisymmetry")
    }))
}

pub fn vp_derivation() -> Result<(), String> {
    let s = prime().prop_flat_map(|p| {
        let m = Modulus::prime(p).unwrap();
        (Just(p), field(m, 2), fp_poly(m, 2, 3, 2), fp_poly(m, 2, 3, 2))
    });
    finish(runner(6, 64).run(&s, |(p, v, f, g)| {
        let lhs = apply_n(&v, &f.mul(&g), p);
        let rhs = f.mul(&apply_n(&v, &g, p)).add(&g.mul(&apply_n(&v, &f, p)));
        check(lhs == rhs, "Leibniz for v^p")
    }))
}

pub fn vp_iteration() -> Result<(), String> {
    let s = prime().prop_flat_map(|p| {
        let m = Modulus::prime(p).unwrap();
        (Just(p), field(m, 2), fp_poly(m, 2, 3, 2))
    });
    finish(runner(7, 64).run(&s, |(p, v, f)| {
        let w = vfield::frobenius_power(&v, p);
        check(w.apply(&f) == apply_n(&v, &f, p), "components of v^p act as v^p")
    }))
}

pub fn vp_additive() -> Result<(), String> {
    let s = prime().prop_flat_map(|p| {
        let m = Modulus::prime(p).unwrap();
        (Just(p), field(m, 1), field(m, 2))
    });
    finish(runner(8, 64).run(&s, |(p, v, w)| {
        let lhs = vfield::frobenius_power(&v.product(&w), p);
        let rhs = vfield::frobenius_power(&v, p).product(&vfield::frobenius_power(&w, p));
        check(lhs.components() == rhs.components(), "additivity on commuting summands")
    }))
}

fn lame_params() -> impl Strategy<Value = (Q, Q, Q, Q)> {
    (small_q(), small_q(), small_q(), small_q().prop_filter("g3 != 0", |q| !Zero::is_zero(q)))
}

pub fn cleared_recursion() -> Result<(), String> {
    finish(runner(9, 32).run(&lame_params(), |(n, b, g2, g3)| {
        let sys = OdeSystem::lame(&n, &b, &g2, &g3);
        let it = ode::cleared_iterates(&sys, 6).unwrap();
        let d = sys.delta();
        let dd = d.derivative(0);
        let b1 = sys.b1();
        check(&it.b[0] == b1, "B_1")?;
        for k in 1..it.b.len() {
            let bk = &it.b[k - 1];
            let kq = QPoly::constant(Q::from_integer((k as i64).into()), 1);
            // B_{k+1} = Δ B_k' - k Δ' B_k + B_k B_1, from A_{k+1} = A_k' + A_k A
            let next = bk.derivative(0).scale(d).sub(&bk.scale(&dd.mul(&kq))).add(&bk.mul(b1));
            check(next == it.b[k], "recursion step")?;
        }
        Ok(())
    }))
}

pub fn cleared_mod_p() -> Result<(), String> {
    let s = (lame_params(), prime());
    finish(runner(10, 32).run(&s, |((n, b, g2, g3), p)| {
        let sys = OdeSystem::lame(&n, &b, &g2, &g3);
        let c = ode::curvature_test(&sys, p, 1).unwrap();
        prop_assume!(c != Curvature::RingPrime);
        let it = ode::cleared_iterates(&sys, p).unwrap();
        let m = Modulus::prime(p).unwrap();
        let bp: PolyMatrix<Q> = it.b[p as usize - 1].clone();
        let zero = bp.entries().iter().all(|e| e.reduce(m).unwrap().is_zero());
        check(zero == (c == Curvature::Zero), "mod-p vanishing agrees")
    }))
}

pub fn certificate_bounds() -> Result<(), String> {
    let int_poly = prop::collection::vec((0u32..3, 0u32..3, -4i64..5), 1..5);
    let s = (int_poly, -2i64..3, 1i64..4);
    finish(runner(11, 64).run(&s, |(ts, y0, lin)| {
        let mut p = QPoly::from_terms(
            2,
            &(),
            ts.into_iter().map(|(a, b, c)| (Monomial::from_exps(&[a, b]), Q::from_integer(c.into()))),
        );
        // add lin*(y - y0), then force P(0, y0) = 0
        let y = QPoly::var(1, 2, &());
        p = p.add(&y.sub(&QPoly::constant(Q::from_integer(y0.into()), 2)).scale(&Q::from_integer(lin.into())));
        let at = p.eval(&[<Q as Zero>::zero(), Q::from_integer(y0.into())]);
        p = p.sub(&QPoly::constant(at, 2));
        let dp = p.derivative(1).eval(&[<Q as Zero>::zero(), Q::from_integer(y0.into())]);
        prop_assume!(!Ring::is_zero(&dp));
        let cert = algfun::taylor_algebraic(&p, 0, y0, 7).unwrap();
        check(cert.residual().is_zero(), "P(z, y(z)) = O(z^8)")?;
        check(cert.bounds_hold(), "exponent bound 2n - 1")?;
        check(cert.power_bound_integral(), "Δ^(2n-1) y_n integral")
    }))
}

pub fn linearize_one() -> Result<(), String> {
    let s = prime().prop_flat_map(|p| (Just(p), 1..p, prop::collection::vec(0..p, 6)));
    finish(runner(12, 48).run(&s, |(p, lam, cs)| {
        let m = Modulus::prime(p).unwrap();
        let order = 7;
        // φ = q + c_2 q^2 + ..., a = λ φ / φ′ so that φ linearizes a d/dq
        let mut coeffs = vec![m.residue(0), m.residue(1)];
        coeffs.extend(cs.iter().map(|&c| m.residue(c as i64)));
        let phi = TruncSeries::from_coeffs(&m, &coeffs, order);
        let lam = m.residue(lam as i64);
        let a = phi.scale(&lam).mul(&phi.derivative_keep(0).inverse().unwrap());
        let f = vfield::linearize_1d(&a, lam, order).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let v = Derivation::from_components(vec![a.poly().clone()]).unwrap();
        check(v.apply_series(&f) == f.scale(&lam), "v(f) = λ f")?;
        check(f.coeff(&[0]).is_zero() && f.coeff(&[1]) == m.residue(1), "f = q + O(q^2)")
    }))
}

pub fn linearize_two() -> Result<(), String> {
    let s = prime().prop_flat_map(|p| (Just(p), 1..p, 1..p, 2u32..5, 1..p));
    finish(runner(13, 48).run(&s, |(p, l1, l2, k, c)| {
        let m = Modulus::prime(p).unwrap();
        let r = |x: u64| m.residue(x as i64);
        let (l1, l2, c) = (r(l1), r(l2), r(c));
        let order = 8;
        let x = SparsePoly::var(0, 2, &m);
        let y = SparsePoly::var(1, 2, &m);
        let yk = y.pow(k as u64);
        // pushforward of λ1 x ∂x + λ2 y ∂y under (x, y) -> (x + c y^k, y)
        let kl2 = r(k as u64).mul(&l2);
        let v = Derivation::from_components(vec![
            x.scale(&l1).add(&yk.scale(&c.mul(&kl2.sub(&l1)))),
            y.scale(&l2),
        ])
        .unwrap();
        let a = vec![vec![l1, r(0)], vec![r(0), l2]];
        let f = vfield::linearize_nd(&v, &a, order).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let resonant = kl2 == l1;
        let f1 = if resonant { x.clone() } else { x.sub(&yk.scale(&c)) };
        check(f[0] == TruncSeries::new(f1, order), "first coordinate")?;
        check(f[1] == TruncSeries::new(y.clone(), order), "second coordinate")
    }))
}
