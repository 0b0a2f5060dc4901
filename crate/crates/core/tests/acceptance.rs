//! Acceptance suite: one PASS/FAIL line per criterion. A criterion passes
//! when its checks hold and it finishes inside its time budget.
//!
//! Run with `cargo test -p adelab --test acceptance`; pass criterion numbers
//! after `--` to run a subset.

mod common;

use std::collections::BTreeMap;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adelab::arith::{primes_between, primes_up_to, rat, Monomial, QPoly, Q};
use adelab::elliptic::{self, WeierstrassCurve};
use adelab::hodge::{self, DeformationIndexSet};
use adelab::modular;
use adelab::ode::{self, Curvature, OdeSystem, PrimeClass};
use adelab::par::Schedule;
use adelab::vfield::{self, Collinearity};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn i(n: i64) -> Q {
    rat(n, 1)
}

fn lame(n: Q, b: Q, g2: Q, g3: Q) -> OdeSystem {
    OdeSystem::lame(&n, &b, &g2, &g3)
}

fn bad(sys: &OdeSystem, pmax: u64) -> Result<Vec<u64>, String> {
    Ok(ode::bad_prime_scan_with(sys, pmax, 1, None, Schedule::Parallel).map_err(e)?.bad())
}

fn c1() -> Outcome {
    let s = lame(rat(1, 6), i(0), i(0), i(1));
    let a = ode::curvature_test(&s, 5, 1).map_err(e)?;
    let b = ode::curvature_test(&s, 5, 6).map_err(e)?;
    ensure(a == Curvature::Zero, format!("(5,1) gave {a:?}"))?;
    ensure(b == Curvature::NonZero, format!("(5,6) gave {b:?}"))?;
    Ok("(5,1) zero, (5,6) nonzero".into())
}

fn c2() -> Outcome {
    let tuples = [
        ([rat(1, 4), i(0), i(0), i(1)], vec![3]),
        ([rat(3, 4), rat(3, 8), i(-168), i(622)], vec![5]),
        ([rat(1, 6), i(0), i(1), i(0)], vec![]),
        ([rat(5, 6), i(0), i(1), i(0)], vec![5]),
        ([rat(1, 6), rat(1, 6), i(60), i(90)], vec![5]),
        ([rat(1, 10), i(0), i(0), i(1)], vec![3]),
        ([rat(3, 10), rat(3, 100), i(3), rat(5, 4)], vec![2]),
        ([rat(7, 10), i(0), i(0), i(1)], vec![3, 7]),
        ([rat(7, 4), i(0), i(0), i(1)], vec![3, 7]),
    ];
    for ([n, b, g2, g3], want) in tuples {
        let got = bad(&lame(n.clone(), b, g2, g3), 100)?;
        ensure(got == want, format!("n = {n}: bad {got:?}, want {want:?}"))?;
    }
    Ok("nine lists match".into())
}

fn c3() -> Outcome {
    let a = bad(&lame(rat(12, 89), i(0), i(0), i(1)), 150)?;
    ensure(a == [83, 107, 113, 127, 149], format!("12/89: {a:?}"))?;
    let b = bad(&lame(rat(5, 87), i(0), i(0), i(1)), 150)?;
    ensure(b == [17, 97, 107, 109, 113, 127, 131, 137], format!("5/87: {b:?}"))?;
    Ok("both lists match".into())
}

fn c4() -> Outcome {
    let s = lame(rat(7, 4), i(0), i(0), i(1));
    let mut n = 0;
    for p in primes_up_to(23).into_iter().filter(|p| ![2, 3, 7].contains(p)) {
        for k in 1..=6 {
            let c = ode::curvature_test(&s, p, k).map_err(e)?;
            ensure(c == Curvature::Zero, format!("p = {p}, k = {k}: {c:?}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} (p, k) pairs zero"))
}

fn c5() -> Outcome {
    let s = OdeSystem::hypergeometric(&rat(1, 2), &rat(1, 2), &i(1));
    let r = ode::bad_prime_scan_with(&s, 100, 1, None, Schedule::Parallel).map_err(e)?;
    for en in r.entries.iter().filter(|x| x.p > 2) {
        ensure(en.class == PrimeClass::Bad, format!("p = {} is {:?}", en.p, en.class))?;
    }
    Ok(format!("{} odd primes nonzero", r.bad().len()))
}

fn c6() -> Outcome {
    let s = OdeSystem::rank_one_quadratic(2).map_err(e)?;
    let r = ode::bad_prime_scan_with(&s, 10_000, 1, None, Schedule::Parallel).map_err(e)?;
    for en in &r.entries {
        let oracle = match en.p {
            2 => PrimeClass::RingPrime,
            p if p % 8 == 1 || p % 8 == 7 => PrimeClass::Good,
            _ => PrimeClass::Bad,
        };
        ensure(en.class == oracle, format!("p = {}: {:?}, oracle {oracle:?}", en.p, en.class))?;
    }
    let (g, b) = (r.good().len() as f64, r.bad().len() as f64);
    let d = g / (g + b);
    ensure((d - 0.5).abs() <= 0.02, format!("density {d:.4}"))?;
    Ok(format!("density {d:.4}, {} primes match the residue oracle", r.entries.len()))
}

fn c7() -> Outcome {
    for p in primes_up_to(100) {
        ensure(ode::mpk(p, 1) == p && ode::mpk(p, 2) == 2 * p, format!("p = {p}"))?;
        for k in 1..=8u32 {
            let m = ode::mpk(p, k);
            let k = k as u64;
            ensure((p - 1) * k <= m && m <= p * k, format!("bounds at p = {p}, k = {k}"))?;
        }
    }
    Ok("grid and bounds hold for p <= 100".into())
}

fn c8() -> Outcome {
    let cases = [
        (lame(rat(1, 6), i(0), i(0), i(1)), 5),
        (lame(rat(1, 6), i(0), i(0), i(1)), 13),
        (lame(rat(1, 4), i(0), i(0), i(1)), 5),
        (lame(rat(7, 4), i(0), i(0), i(1)), 5),
        (lame(rat(7, 4), i(0), i(0), i(1)), 11),
    ];
    for (s, p) in &cases {
        ensure(ode::frobenius_u_check(s, *p, &i(1)).map_err(e)?, format!("false at p = {p}"))?;
    }
    Ok(format!("{} pairs", cases.len()))
}

fn w(c: &[Q]) -> QPoly {
    QPoly::from_terms(1, &(), c.iter().enumerate().map(|(k, x)| (Monomial::from_exps(&[k as u32]), x.clone())))
}

fn c9() -> Outcome {
    let n = rat(1, 6);
    let nn = &n * (&n + i(1));
    let s3 = [w(&[-nn.clone()]), w(&[i(-6), i(42)]), w(&[i(0), i(-9), i(36)])];
    let s2 = [w(&[-nn]), w(&[i(-3), i(20)]), w(&[i(0), i(-4), i(16)])];
    let a = ode::pullback_check(&lame(n.clone(), i(0), i(0), i(1)), &s3, 3).map_err(e)?;
    let b = ode::pullback_check(&lame(n, i(0), i(1), i(0)), &s2, 2).map_err(e)?;
    ensure(a, "s = 3 display")?;
    ensure(b, "s = 2 display")?;
    Ok("both pullbacks hold".into())
}

fn classes(name: &str, params: &BTreeMap<String, Q>, pmax: u64) -> Result<Vec<(u64, Collinearity)>, String> {
    let v = vfield::catalog(name, params).map_err(e)?;
    Ok(vfield::pclosed_scan(&v, pmax, Schedule::Parallel)
        .map_err(e)?
        .into_iter()
        .map(|r| (r.p, r.class))
        .collect())
}

fn c10() -> Outcome {
    let none = BTreeMap::new();
    for (p, c) in classes("ramanujan-e", &none, 50)? {
        ensure(p <= 3 || c == Collinearity::NotCollinear, format!("ramanujan-e p = {p}: {c:?}"))?;
    }
    for (p, c) in classes("modular4", &none, 50)? {
        ensure(p <= 3 || c == Collinearity::NotCollinear, format!("modular4 p = {p}: {c:?}"))?;
    }
    let lc = classes("limitcycle", &none, 100)?;
    let col: Vec<u64> = lc.iter().filter(|x| x.1 == Collinearity::Collinear).map(|x| x.0).collect();
    ensure(col == [3], format!("limitcycle collinear at {col:?}"))?;
    let mut lp = BTreeMap::new();
    lp.insert("sigma".to_string(), i(10));
    lp.insert("rho".to_string(), i(28));
    lp.insert("beta".to_string(), rat(8, 3));
    let lz = classes("lorenz", &lp, 60)?;
    let classified: Vec<_> = lz.iter().filter(|x| x.1 != Collinearity::RingPrime).collect();
    ensure(!classified.is_empty(), "lorenz: nothing classifiable")?;
    for (p, c) in &classified {
        ensure(*c == Collinearity::NotCollinear, format!("lorenz p = {p}: {c:?}"))?;
    }
    Ok(format!("four scans as expected; lorenz classified at {} primes", classified.len()))
}

fn c11() -> Outcome {
    for p in [5, 7, 11] {
        ensure(vfield::bianchini_check(p).map_err(e)?, format!("bianchini p = {p}"))?;
    }
    let v = vfield::catalog("ramanujan-e", &BTreeMap::new()).map_err(e)?;
    for p in [5, 7, 11, 13] {
        let m = adelab::arith::Modulus::prime(p).map_err(e)?;
        let f = vfield::ramanujan_first_integral(p).map_err(e)?;
        ensure(vfield::first_integral_check(&v.reduce(m).map_err(e)?, &f), format!("first integral p = {p}"))?;
    }
    let va = vfield::catalog("ramanujan-a", &BTreeMap::new()).map_err(e)?;
    for p in [5, 7] {
        let m = adelab::arith::Modulus::prime(p).map_err(e)?;
        let vp = va.reduce(m).map_err(e)?;
        let pow = vfield::frobenius_power(&vp, p);
        let (elim, g) = vfield::lopes_ideal(p).map_err(e)?;
        for t in 0..3 {
            let f = pow.components()[t].sub(&vp.components()[t]);
            let r = vfield::reduce_by_principal(&f, std::slice::from_ref(&elim), &g).map_err(e)?;
            ensure(r.is_divisible(), format!("ideal membership p = {p}, t{}", t + 1))?;
        }
    }
    Ok("closed formula, first integral and ideal membership hold".into())
}

fn c12() -> Outcome {
    for w in (4..=24).step_by(2) {
        let m = modular::numerator_multiplier(w).map_err(e)?;
        ensure(m == modular::bernoulli_ratio_numerator(w), format!("weight {w}: {m}"))?;
    }
    for (w, v) in [(12, 691), (16, 3617), (18, 43867)] {
        ensure(modular::numerator_multiplier(w).map_err(e)? == BigInt::from(v), format!("weight {w}"))?;
    }
    for p in primes_between(5, 97) {
        ensure(modular::ep_congruence_check(p, 30).map_err(e)?, format!("E_(p±1) congruence p = {p}"))?;
    }
    ensure(modular::ramanujan_solution_check(20).map_err(e)?, "Eisenstein triple solves the system")?;
    let sol = modular::ramanujan_recursion_solve(20, &[5, 7, 11, 13]).map_err(e)?;
    let eis = modular::ramanujan_eisenstein_solution(20).map_err(e)?;
    ensure(sol.t == eis, "recursion differs from the Eisenstein triple")?;
    for (p, v) in &sol.integrality {
        ensure(v.is_none_or(|v| v >= 0), format!("not {p}-integral: {v:?}"))?;
    }
    Ok("multipliers, congruences and recursion agree".into())
}

fn c13() -> Outcome {
    let ps = primes_between(5, 97);
    let res = adelab::par::map_ordered(Schedule::Parallel, &ps, |&p| elliptic::ab_congruence_check(p));
    for (p, r) in ps.iter().zip(res) {
        ensure(r.map_err(e)?, format!("ab congruence p = {p}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let mut curves = 0;
    while curves < 100 {
        let p = ps[rng.gen_range(0..ps.len())];
        let (t2, t3) = (rng.gen_range(0..p as i64), rng.gen_range(0..p as i64));
        let Ok(c) = WeierstrassCurve::numeric(p, t2, t3) else { continue };
        curves += 1;
        let a = c.hasse_witt_value().map_err(e)?;
        let b = c.hasse_witt_recursion().constant_term();
        let trace = p as i64 + 1 - c.point_count().map_err(e)? as i64;
        ensure(a == b, format!("HW disagree p = {p}, ({t2}, {t3})"))?;
        ensure(
            (trace - a.value() as i64).rem_euclid(p as i64) == 0,
            format!("HW != trace p = {p}, ({t2}, {t3})"),
        )?;
    }
    let mut sums = 0;
    for p in [7u64, 11, 13, 17] {
        for t2 in 0..p as i64 {
            for t3 in 0..p as i64 {
                let Ok(c) = WeierstrassCurve::numeric(p, t2, t3) else { continue };
                ensure(c.power_sum_check((p - 1) / 2).map_err(e)?, format!("power sums p = {p}, ({t2}, {t3})"))?;
                sums += 1;
            }
        }
    }
    for p in primes_between(5, 37) {
        ensure(elliptic::exact_form_congruence_check(p).map_err(e)?, format!("exact form p = {p}"))?;
    }
    Ok(format!("{} symbolic primes, {curves} random curves, {sums} power-sum curves", ps.len()))
}

fn c14() -> Outcome {
    let cv = |n, m| hodge::codim_vz(n, 3, m).map_err(e);
    ensure(cv(6, 0)? == BigInt::from(8), "codim(6, 3, 0)")?;
    ensure(cv(8, 1)? == BigInt::from(20), "codim(8, 3, 1)")?;
    for k in 3..=12i64 {
        let c = cv(2 * k as u32, k - 3)?;
        ensure(Q::from_integer(c) == hodge::cubic_closed_form(k), format!("closed form k = {k}"))?;
    }
    // n, dimT, L, M, lower bound
    let table = [(4, 20, 1, 1, 1), (6, 56, 4, 7, 4), (8, 120, 10, 19, 10), (10, 220, 20, 38, 20), (12, 364, 35, 65, 35)];
    let rows = hodge::table_repro();
    ensure(rows.len() == table.len(), "row count")?;
    for (r, (n, dt, l, m, lo)) in rows.iter().zip(table) {
        let b = |x: i64| BigInt::from(x);
        ensure(
            r.n == n && r.dim_t == b(dt) && r.l == b(l) && r.m == b(m) && r.min_codim == b(lo),
            format!("table row n = {n}"),
        )?;
    }
    let all = DeformationIndexSet::all(2, 4);
    let sets = [
        DeformationIndexSet::new(2, 4, vec![vec![1, 1, 1, 1]]).map_err(e)?,
        DeformationIndexSet::new(2, 4, vec![vec![1, 1, 1, 1], vec![2, 0, 2, 0], vec![0, 2, 0, 2]]).map_err(e)?,
        DeformationIndexSet::new(2, 4, all.alphas()[..10].to_vec()).map_err(e)?,
    ];
    for (k, s) in sets.iter().enumerate() {
        let trunc = if s.len() > 5 { 3 } else { 6 };
        ensure(hodge::quartic_specialization_check(s, trunc).map_err(e)?, format!("quartic set {k}"))?;
    }
    let one = hodge::period_series(2, 4, &[0, 0, 0, 0], &sets[0], 3).map_err(e)?;
    ensure(one.coeff(&[1]) == i(1), format!("t_(1,1,1,1) coefficient {}", one.coeff(&[1])))?;
    let configs: [(u32, u32, Vec<Q>); 3] = [
        (3, 0, vec![i(0), i(0), i(0)]),
        (3, 0, vec![rat(1, 100), i(0), i(0)]),
        (4, 1, vec![rat(1, 100), rat(1, 200), i(0), rat(-1, 100)]),
    ];
    let mut worst: f64 = 0.0;
    for (d, beta, t) in &configs {
        let r = hodge::balegh_numeric_check(*d, *beta, (0, 1), 6, t).map_err(e)?;
        ensure(r < 1e-8, format!("balegh d = {d}, beta = {beta}: residual {r:e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("codimensions, table, specialization, balegh (worst {worst:.1e})"))
}

fn c15() -> Outcome {
    for (name, prop) in common::PROPERTIES {
        prop().map_err(|m| format!("{name}: {m}"))?;
    }
    Ok(format!("{} property suites", common::PROPERTIES.len()))
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, name: "Lamé (1/6,0,0,1) at (5,1) and (5,6)", budget: secs(10), run: c1 },
    Criterion { id: 2, name: "nine Lamé bad-prime lists, p <= 100", budget: secs(600), run: c2 },
    Criterion { id: 3, name: "Lamé 12/89 and 5/87 bad primes, p <= 150", budget: secs(900), run: c3 },
    Criterion { id: 4, name: "Lamé 7/4 m_{p,k}-curvature, k <= 6", budget: secs(1200), run: c4 },
    Criterion { id: 5, name: "hypergeometric (1/2,1/2,1) nonzero, p <= 100", budget: secs(300), run: c5 },
    Criterion { id: 6, name: "rank-one sqrt(2) density and residue oracle", budget: secs(60), run: c6 },
    Criterion { id: 7, name: "m_{p,k} grid and bounds", budget: Duration::from_millis(1000), run: c7 },
    Criterion { id: 8, name: "Frobenius splitting identity", budget: secs(60), run: c8 },
    Criterion { id: 9, name: "pullback displays s = 3 and s = 2", budget: secs(1), run: c9 },
    Criterion { id: 10, name: "vector-field collinearity scans", budget: secs(1800), run: c10 },
    Criterion { id: 11, name: "Ramanujan field identities", budget: secs(600), run: c11 },
    Criterion { id: 12, name: "modular forms suite", budget: secs(300), run: c12 },
    Criterion { id: 13, name: "elliptic curves suite", budget: secs(1200), run: c13 },
    Criterion { id: 14, name: "Hodge suite", budget: secs(120), run: c14 },
    Criterion { id: 15, name: "property suites", budget: secs(300), run: c15 },
];

fn main() -> ExitCode {
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    let mut ran = 0;
    for c in CRITERIA.iter().filter(|c| wanted.is_empty() || wanted.contains(&c.id)) {
        ran += 1;
        let start = Instant::now();
        let res = panic::catch_unwind(c.run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        let timing = format!("{:.2}s / {}s", t.as_secs_f64(), c.budget.as_secs_f64());
        let (tag, detail) = match res {
            Ok(d) if t <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("over budget; {d}")),
            Err(m) => ("FAIL", m),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} {:>2}  {:<46} [{timing}]  {detail}", c.id, c.name);
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
