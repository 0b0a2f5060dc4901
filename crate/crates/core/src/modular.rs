//! Eisenstein series, isobaric decomposition into E4 and E6, the A and B
//! polynomials attached to E_{p-1} and E_{p+1}, and the Ramanujan system.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::arith::{
    bernoulli, is_prime, padic_valuation, ArithError, Monomial, QPoly, Ring, SparsePoly, TruncSeries, Q,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModularError {
    #[error("weight {0} is not an even integer >= 2")]
    BadWeight(u32),
    #[error("q-order {have} cannot certify a weight {weight} decomposition (need {need})")]
    InsufficientPrecision { weight: u32, have: u32, need: u32 },
    #[error("series is not a modular form of weight {0}")]
    NotModular(u32),
    #[error("p = {0} must be a prime >= 5")]
    BadPrime(u64),
    #[error("linear system at q-order {0} is singular")]
    SingularStep(u32),
    #[error("order must be at least {0}")]
    OrderTooSmall(u32),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A q-expansion with its weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: u32,
    pub series: TruncSeries<Q>,
}

impl QExpansion {
    pub fn order(&self) -> u32 {
        self.series.order()
    }

    pub fn coeffs(&self) -> Vec<Q> {
        self.series.coeffs()
    }
}

static EIS_CACHE: OnceLock<RwLock<HashMap<u32, Vec<Q>>>> = OnceLock::new();

fn sigma(k: u32, n: u64) -> BigInt {
    let mut s = BigInt::from(0);
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                s += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// E_w = 1 - (2w / B_w) sum sigma_{w-1}(n) q^n, to q^order.
pub fn eisenstein_q(weight: u32, order: u32) -> Result<QExpansion, ModularError> {
    if weight < 2 || weight % 2 == 1 {
        return Err(ModularError::BadWeight(weight));
    }
    let cache = EIS_CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    let need = order as usize + 1;
    let cached = cache
        .read()
        .expect("eisenstein cache poisoned")
        .get(&weight)
        .filter(|v| v.len() >= need)
        .map(|v| v[..need].to_vec());
    let coeffs = match cached {
        Some(c) => c,
        None => {
            let factor = -Q::from_integer((2 * weight).into()) / bernoulli(weight as usize);
            let mut c = vec![<Q as One>::one()];
            for n in 1..need as u64 {
                c.push(&factor * Q::from_integer(sigma(weight - 1, n)));
            }
            let mut w = cache.write().expect("eisenstein cache poisoned");
            let slot = w.entry(weight).or_default();
            if slot.len() < c.len() {
                *slot = c.clone();
            }
            c
        }
    };
    Ok(QExpansion {
        weight,
        series: TruncSeries::from_coeffs(&(), &coeffs, order),
    })
}

/// Polynomial in Q = E4 (weight 4) and R = E6 (weight 6).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsobaricPoly {
    pub weight: u32,
    pub poly: QPoly,
}

impl IsobaricPoly {
    /// q-expansion of P(E4, E6).
    pub fn expand(&self, order: u32) -> Result<TruncSeries<Q>, ModularError> {
        let e4 = eisenstein_q(4, order)?.series;
        let e6 = eisenstein_q(6, order)?.series;
        let p = TruncSeries::new(self.poly.clone(), u32::MAX);
        Ok(p.compose(&[e4, e6]))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.poly.is_weighted_homogeneous(&[4, 6], self.weight as u64)
    }
}

fn e4e6_exponents(w: u32) -> (u32, u32) {
    let b = if w % 4 == 2 { 1 } else { 0 };
    ((w - 6 * b) / 4, b)
}

/// Number of Δ-divisions the decomposition of weight w performs.
fn division_steps(w: u32) -> u32 {
    if w < 12 {
        0
    } else {
        1 + division_steps(w - 12)
    }
}

/// Writes a weight-w modular form as an isobaric polynomial in E4, E6,
/// dividing cusp forms by Δ = (E4³ - E6²)/1728 at each step.
pub fn isobaric_decompose(f: &QExpansion) -> Result<IsobaricPoly, ModularError> {
    let w = f.weight;
    if w < 4 || w % 2 == 1 {
        return Err(ModularError::BadWeight(w));
    }
    let need = division_steps(w) + 1;
    if f.order() < need {
        return Err(ModularError::InsufficientPrecision {
            weight: w,
            have: f.order(),
            need,
        });
    }
    let order = f.order();
    let e4 = eisenstein_q(4, order)?.series;
    let e6 = eisenstein_q(6, order)?.series;
    let disc = e4
        .pow(3)
        .sub(&e6.pow(2))
        .scale(&Q::new(1.into(), 1728.into()));
    let poly = decompose_rec(&f.series, w, &e4, &e6, &disc)?;
    let result = IsobaricPoly {
        weight: w,
        poly: poly.with_weights(&[4, 6]),
    };
    if result.expand(order)? != f.series {
        return Err(ModularError::NotModular(w));
    }
    Ok(result)
}

fn decompose_rec(
    f: &TruncSeries<Q>,
    w: u32,
    e4: &TruncSeries<Q>,
    e6: &TruncSeries<Q>,
    disc: &TruncSeries<Q>,
) -> Result<QPoly, ModularError> {
    let order = f.order();
    if w == 0 {
        let c = f.coeff(&[0]);
        let rest = f.sub(&TruncSeries::new(QPoly::constant(c.clone(), 1), order));
        if !rest.is_zero() {
            return Err(ModularError::NotModular(w));
        }
        return Ok(QPoly::constant(c, 2));
    }
    if w == 2 || w < 4 {
        if f.is_zero() {
            return Ok(QPoly::zero(2, &()));
        }
        return Err(ModularError::NotModular(w));
    }
    let (a, b) = e4e6_exponents(w);
    let f0 = f.coeff(&[0]);
    let basis = e4.pow(a as u64).mul(&e6.pow(b as u64)).truncate(order);
    let cusp = f.sub(&basis.scale(&f0));
    let lead = QPoly::monomial(f0, &[a, b]);
    if w < 12 {
        if !cusp.is_zero() {
            return Err(ModularError::NotModular(w));
        }
        return Ok(lead);
    }
    // cusp = Δ h: shift out the factor q and divide by Δ/q.
    if !Ring::is_zero(&cusp.coeff(&[0])) {
        return Err(ModularError::NotModular(w));
    }
    let shift_down = |s: &TruncSeries<Q>| {
        let terms = s
            .poly()
            .terms()
            .iter()
            .map(|(m, c)| (Monomial::from_exps(&[m.exps()[0] - 1]), c.clone()));
        TruncSeries::new(SparsePoly::from_terms(1, &(), terms), s.order().saturating_sub(1))
    };
    let h = shift_down(&cusp).mul(&shift_down(disc).inverse()?);
    let inner = decompose_rec(&h, w - 12, e4, e6, disc)?;
    let q = QPoly::var(0, 2, &());
    let r = QPoly::var(1, 2, &());
    let disc_poly = q.pow(3).sub(&r.pow(2)).scale(&Q::new(1.into(), 1728.into()));
    Ok(lead.add(&disc_poly.mul(&inner)))
}

fn certified_order(w: u32) -> u32 {
    division_steps(w) + 4
}

/// A(t2, t3) and B(t2, t3) with E_{p-1} = A(E4/12, -E6/216) and
/// E_{p+1} = B(E4/12, -E6/216). Weighted degrees p-1 and p+1 for
/// weights (4, 6).
pub fn ab_polynomials(p: u64) -> Result<(QPoly, QPoly), ModularError> {
    if p < 5 || !is_prime(p) {
        return Err(ModularError::BadPrime(p));
    }
    let sub = |w: u32| -> Result<QPoly, ModularError> {
        let e = eisenstein_q(w, certified_order(w))?;
        let iso = isobaric_decompose(&e)?;
        let t2 = QPoly::var(0, 2, &()).scale(&Q::from_integer(12.into()));
        let t3 = QPoly::var(1, 2, &()).scale(&Q::from_integer((-216).into()));
        Ok(iso.poly.compose(&[t2, t3]).with_weights(&[4, 6]))
    };
    Ok((sub(p as u32 - 1)?, sub(p as u32 + 1)?))
}

/// Isobaric polynomials of E_{p-1} and E_{p+1} in (E4, E6) without the
/// (12, -216) rescaling.
pub fn ab_isobaric(p: u64) -> Result<(QPoly, QPoly), ModularError> {
    if p < 5 || !is_prime(p) {
        return Err(ModularError::BadPrime(p));
    }
    let iso = |w: u32| -> Result<QPoly, ModularError> {
        Ok(isobaric_decompose(&eisenstein_q(w, certified_order(w))?)?.poly)
    };
    Ok((iso(p as u32 - 1)?, iso(p as u32 + 1)?))
}

/// E_{p-1} ≡ 1 and E_{p+1} ≡ E_2 coefficientwise mod p up to q^order.
pub fn ep_congruence_check(p: u64, order: u32) -> Result<bool, ModularError> {
    if p < 5 || !is_prime(p) {
        return Err(ModularError::BadPrime(p));
    }
    let one = TruncSeries::one(1, &(), order);
    let a = eisenstein_q(p as u32 - 1, order)?.series.sub(&one);
    let b = eisenstein_q(p as u32 + 1, order)?
        .series
        .sub(&eisenstein_q(2, order)?.series);
    for s in [a, b] {
        for (_, c) in s.poly().terms() {
            if padic_valuation(c, p)?.is_some_and(|v| v < 1) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// LCM of the coefficient denominators of the isobaric form of E_{2k}.
pub fn numerator_multiplier(weight: u32) -> Result<BigInt, ModularError> {
    if weight < 4 || weight % 2 == 1 {
        return Err(ModularError::BadWeight(weight));
    }
    let e = eisenstein_q(weight, certified_order(weight))?;
    let iso = isobaric_decompose(&e)?;
    Ok(iso
        .poly
        .terms()
        .iter()
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom())))
}

/// Scaling of the Ramanujan vector field.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Convention {
    /// Solved by (-E2/12, E4/12, -E6/216).
    A,
    /// Solved by (E2, E4, E6) with d/dτ normalised to q d/dq.
    E,
}

/// Components of the Ramanujan vector field in (t1, t2, t3).
pub fn ramanujan_field(conv: Convention) -> [QPoly; 3] {
    let t = |i| QPoly::var(i, 3, &());
    let c = |n: i64, d: i64| Q::new(n.into(), d.into());
    match conv {
        Convention::A => [
            t(0).pow(2).sub(&t(1).scale(&c(1, 12))),
            t(0).mul(&t(1)).scale(&c(4, 1)).sub(&t(2).scale(&c(6, 1))),
            t(0).mul(&t(2)).scale(&c(6, 1)).sub(&t(1).pow(2).scale(&c(1, 3))),
        ],
        Convention::E => [
            t(0).pow(2).sub(&t(1)).scale(&c(1, 12)),
            t(0).mul(&t(1)).sub(&t(2)).scale(&c(1, 3)),
            t(0).mul(&t(2)).sub(&t(1).pow(2)).scale(&c(1, 2)),
        ],
    }
}

/// The a-convention solution (-E2/12, E4/12, -E6/216).
pub fn ramanujan_eisenstein_solution(order: u32) -> Result<[TruncSeries<Q>; 3], ModularError> {
    let c = |n: i64, d: i64| Q::new(n.into(), d.into());
    Ok([
        eisenstein_q(2, order)?.series.scale(&c(-1, 12)),
        eisenstein_q(4, order)?.series.scale(&c(1, 12)),
        eisenstein_q(6, order)?.series.scale(&c(-1, 216)),
    ])
}

/// -q dt_i/dq - v_i(t) for the a-convention field.
pub fn ramanujan_residual(t: &[TruncSeries<Q>; 3]) -> [TruncSeries<Q>; 3] {
    let v = ramanujan_field(Convention::A);
    let order = t.iter().map(|s| s.order()).min().unwrap_or(0);
    let lhs = |s: &TruncSeries<Q>| {
        let terms = s
            .poly()
            .terms()
            .iter()
            .map(|(m, c)| (m.clone(), c * Q::from_integer((-(m.exps()[0] as i64)).into())));
        TruncSeries::new(SparsePoly::from_terms(1, &(), terms), order)
    };
    std::array::from_fn(|i| {
        let vi = TruncSeries::new(v[i].clone(), u32::MAX).compose(t);
        lhs(&t[i]).sub(&vi)
    })
}

/// Checks that the Eisenstein triple solves the a-convention Ramanujan system.
pub fn ramanujan_solution_check(order: u32) -> Result<bool, ModularError> {
    if order < 2 {
        return Err(ModularError::OrderTooSmall(2));
    }
    let t = ramanujan_eisenstein_solution(order)?;
    Ok(ramanujan_residual(&t).iter().all(|s| s.is_zero()))
}

#[derive(Clone, Debug)]
pub struct RamanujanSolution {
    pub t: [TruncSeries<Q>; 3],
    /// Minimum valuation over all coefficients of the three series.
    pub integrality: BTreeMap<u64, Option<i64>>,
}

/// Solves (J + nI) t_n = -[v(t_{<n})]_n order by order, seeded by
/// t_0 = (-1/12, 1/12, -1/216) and t_{1,1} = 2 at the rank-deficient step.
pub fn ramanujan_recursion_solve(order: u32, primes: &[u64]) -> Result<RamanujanSolution, ModularError> {
    if order < 1 {
        return Err(ModularError::OrderTooSmall(1));
    }
    let v = ramanujan_field(Convention::A);
    let t0 = vec![
        Q::new((-1).into(), 12.into()),
        Q::new(1.into(), 12.into()),
        Q::new((-1).into(), 216.into()),
    ];
    let jac: Vec<Vec<Q>> = v
        .iter()
        .map(|vi| (0..3).map(|j| vi.derivative(j).eval(&t0)).collect())
        .collect();
    let mut coeffs: Vec<Vec<Q>> = vec![t0];
    for n in 1..=order {
        let partial: [TruncSeries<Q>; 3] =
            std::array::from_fn(|i| series_from(&coeffs.iter().map(|c| c[i].clone()).collect::<Vec<_>>(), n));
        let rhs: Vec<Q> = v
            .iter()
            .map(|vi| -TruncSeries::new(vi.clone(), u32::MAX).compose(&partial).coeff(&[n]))
            .collect();
        let mut m = jac.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += Q::from_integer(n.into());
        }
        let tn = if n == 1 {
            // Fix the first coordinate and solve for the remaining two.
            let seed = Q::from_integer(2.into());
            let reduced: Vec<Vec<Q>> = m.iter().map(|row| row[1..].to_vec()).collect();
            let b: Vec<Q> = m.iter().zip(&rhs).map(|(row, r)| r - &row[0] * &seed).collect();
            let rest = solve_overdetermined(reduced, b).ok_or(ModularError::SingularStep(1))?;
            let mut out = vec![seed];
            out.extend(rest);
            out
        } else {
            solve_square(m, rhs).ok_or(ModularError::SingularStep(n))?
        };
        coeffs.push(tn);
    }
    let t: [TruncSeries<Q>; 3] =
        std::array::from_fn(|i| series_from(&coeffs.iter().map(|c| c[i].clone()).collect::<Vec<_>>(), order));
    let mut integrality = BTreeMap::new();
    for &p in primes {
        let mut best: Option<i64> = None;
        for s in &t {
            for (_, c) in s.poly().terms() {
                if let Some(v) = padic_valuation(c, p)? {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        integrality.insert(p, best);
    }
    Ok(RamanujanSolution { t, integrality })
}

fn series_from(c: &[Q], order: u32) -> TruncSeries<Q> {
    TruncSeries::from_coeffs(&(), c, order)
}

/// Gaussian elimination for a consistent system with full column rank.
fn solve_overdetermined(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut piv_row = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let pr = (piv_row..rows).find(|&r| !Ring::is_zero(&a[r][col]))?;
        a.swap(piv_row, pr);
        b.swap(piv_row, pr);
        let inv = Ring::inv(&a[piv_row][col]).unwrap();
        for r in 0..rows {
            if r != piv_row && !Ring::is_zero(&a[r][col]) {
                let f = &a[r][col] * &inv;
                let pivot = a[piv_row].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
                let t = &f * &b[piv_row];
                b[r] -= t;
            }
        }
        pivots.push((piv_row, col));
        piv_row += 1;
    }
    if (piv_row..rows).any(|r| !Ring::is_zero(&b[r])) {
        return None;
    }
    let mut x = vec![Q::from_integer(0.into()); cols];
    for (r, c) in pivots {
        x[c] = &b[r] / &a[r][c];
    }
    Some(x)
}

fn solve_square(a: Vec<Vec<Q>>, b: Vec<Q>) -> Option<Vec<Q>> {
    solve_overdetermined(a, b)
}

/// |numerator(B_w / w)|.
pub fn bernoulli_ratio_numerator(weight: u32) -> BigInt {
    let r = bernoulli(weight as usize) / Q::from_integer(weight.into());
    r.numer().abs()
}
