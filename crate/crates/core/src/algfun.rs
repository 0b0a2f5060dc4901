//! Taylor expansions of algebraic functions with certified denominators,
//! and the binomial values [a]_k.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::primes::trial_factor;
use crate::arith::{Monomial, QPoly, Ring, SparsePoly, TruncSeries, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgFunError {
    #[error("defining polynomial must have integer coefficients")]
    NonIntegral,
    #[error("expected {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("P(z0, y0) = {0}, the point is not on the curve")]
    NotOnCurve(String),
    #[error("dP/dy vanishes at the expansion point")]
    SingularBranch,
    #[error("coefficient {index:?} has a denominator prime not dividing Δ")]
    CertificateFailed { index: Vec<u32> },
    #[error("[a]_k needs a > 0")]
    NonPositive,
}

/// Expansion of the branch y(z) through (z0, y0) of P(z, y) = 0, in the
/// local variables w = z - z0, with certified exponents e_n such that
/// Δ^{e_n} y_n is an integer.
#[derive(Clone, Debug)]
pub struct AlgebraicSeriesCertificate {
    pub poly: QPoly,
    pub z0: Vec<i64>,
    pub y0: i64,
    pub delta: BigInt,
    pub series: TruncSeries<Q>,
    pub exponents: BTreeMap<Vec<u32>, u32>,
}

impl AlgebraicSeriesCertificate {
    /// Univariate coefficient list y_0..y_order.
    pub fn coeffs(&self) -> Vec<Q> {
        self.series.coeffs()
    }

    /// e_n <= 2|n| - 1 for every nonconstant index.
    pub fn bounds_hold(&self) -> bool {
        self.exponents
            .iter()
            .all(|(n, &e)| {
                let d: u32 = n.iter().sum();
                d == 0 || e < 2 * d
            })
    }

    /// Δ^{2|n|-1} y_n is integral for every coefficient.
    pub fn power_bound_integral(&self) -> bool {
        self.series.poly().terms().iter().all(|(m, c)| {
            let d = m.degree();
            if d == 0 {
                return c.is_integer();
            }
            let scaled = c * Q::from_integer(self.delta.pow(2 * d - 1));
            scaled.is_integer()
        })
    }

    /// P(z0 + w, y(w)) truncated to the series order.
    pub fn residual(&self) -> TruncSeries<Q> {
        evaluate_shifted(&self.poly, &self.z0, &self.series)
    }
}

fn check_integral(p: &QPoly) -> Result<(), AlgFunError> {
    if p.terms().iter().all(|(_, c)| c.is_integer()) {
        Ok(())
    } else {
        Err(AlgFunError::NonIntegral)
    }
}

/// P(z0 + w, Y(w)) with Y a truncated series in the a variables w.
fn evaluate_shifted(p: &QPoly, z0: &[i64], y: &TruncSeries<Q>) -> TruncSeries<Q> {
    let a = z0.len();
    let order = y.order();
    let yvar = a;
    let ws: Vec<QPoly> = (0..a)
        .map(|i| QPoly::var(i, a, &()).add(&QPoly::from_i64(z0[i], a, &())))
        .collect();
    let coeffs = p.coefficients_in(yvar);
    let mut acc = TruncSeries::zero(a, &(), order);
    for cj in coeffs.iter().rev() {
        // cj lives in a+1 variables with y-exponent zero; drop y and shift.
        let mut images = ws.clone();
        images.push(QPoly::zero(a, &()));
        let shifted = cj.compose(&images);
        acc = acc.mul(y).add(&TruncSeries::new(shifted, order));
    }
    acc
}

/// Smallest e with Δ^e c integral, given the prime (or unfactored) blocks of Δ.
fn exponent_for(c: &Q, blocks: &[(BigInt, u32)]) -> Option<u32> {
    let mut den = c.denom().clone();
    let mut e = 0u32;
    for (q, vd) in blocks {
        let mut v = 0u32;
        loop {
            let (quo, r) = den.div_rem(q);
            if !r.is_zero() {
                break;
            }
            den = quo;
            v += 1;
        }
        if v > 0 {
            e = e.max(v.div_ceil(*vd));
        }
    }
    den.is_one().then_some(e)
}

/// Branch of P(z_1..z_a, y) = 0 through (z0, y0); P has a+1 variables with y last.
pub fn taylor_algebraic_multi(
    p: &QPoly,
    z0: &[i64],
    y0: i64,
    order: u32,
) -> Result<AlgebraicSeriesCertificate, AlgFunError> {
    let a = z0.len();
    if p.nvars() != a + 1 {
        return Err(AlgFunError::Arity {
            expected: a + 1,
            got: p.nvars(),
        });
    }
    check_integral(p)?;
    let mut point: Vec<Q> = z0.iter().map(|&v| Q::from_integer(v.into())).collect();
    point.push(Q::from_integer(y0.into()));
    let value = p.eval(&point);
    if !Ring::is_zero(&value) {
        return Err(AlgFunError::NotOnCurve(value.to_string()));
    }
    let dp = p.derivative(a).eval(&point);
    if Ring::is_zero(&dp) {
        return Err(AlgFunError::SingularBranch);
    }
    let delta = dp.numer().clone();
    let mdelta_inv = Ring::inv(&dp).unwrap().neg();
    let mut y = TruncSeries::new(QPoly::from_i64(y0, a, &()), order);
    for n in 1..=order {
        let f = evaluate_shifted(p, z0, &y.truncate(n)).truncate(n);
        let new_terms: Vec<(Monomial, Q)> = f
            .poly()
            .terms()
            .iter()
            .filter(|(m, _)| m.degree() == n)
            .map(|(m, c)| (m.clone(), c * &mdelta_inv))
            .collect();
        let step = SparsePoly::from_terms(a, &(), new_terms);
        y = TruncSeries::new(y.poly().add(&step), order);
    }
    let (fac, rest) = trial_factor(&delta, 1 << 20);
    let mut blocks: Vec<(BigInt, u32)> = fac.into_iter().map(|(p, e)| (BigInt::from(p), e)).collect();
    if !rest.is_one() {
        blocks.push((rest, 1));
    }
    let mut exponents = BTreeMap::new();
    for (m, c) in y.poly().terms() {
        let e = exponent_for(c, &blocks).ok_or_else(|| AlgFunError::CertificateFailed {
            index: m.exps().to_vec(),
        })?;
        exponents.insert(m.exps().to_vec(), e);
    }
    Ok(AlgebraicSeriesCertificate {
        poly: p.clone(),
        z0: z0.to_vec(),
        y0,
        delta,
        series: y,
        exponents,
    })
}

/// Branch of P(z, y) = 0 through (z0, y0).
pub fn taylor_algebraic(p: &QPoly, z0: i64, y0: i64, order: u32) -> Result<AlgebraicSeriesCertificate, AlgFunError> {
    taylor_algebraic_multi(p, &[z0], y0, order)
}

/// Values [a]_k = a(a-1)...(a-k+1)/k! with their denominators.
#[derive(Clone, Debug)]
pub struct BinomRing {
    pub a: Q,
    pub values: Vec<Q>,
    pub denominators: Vec<BigInt>,
    pub support: BTreeSet<u64>,
}

pub fn binom_ring_denominators(a: &Q, kmax: u32) -> Result<BinomRing, AlgFunError> {
    if !a.is_positive() {
        return Err(AlgFunError::NonPositive);
    }
    let mut values = Vec::with_capacity(kmax as usize + 1);
    let mut cur = Q::from_integer(1.into());
    values.push(cur.clone());
    for k in 1..=kmax {
        cur = cur * (a - Q::from_integer((k - 1).into())) / Q::from_integer(k.into());
        values.push(cur.clone());
    }
    let denominators: Vec<BigInt> = values.iter().map(|v| v.denom().clone()).collect();
    let mut support = BTreeSet::new();
    let mut lcm = BigInt::one();
    for d in &denominators {
        lcm = lcm.lcm(d);
    }
    let (fac, _) = trial_factor(&lcm, 1 << 20);
    support.extend(fac.into_iter().map(|(p, _)| p));
    Ok(BinomRing {
        a: a.clone(),
        values,
        denominators,
        support,
    })
}
