//! Linear systems dy/dz = A y over Q(z), stored as Δ and B1 = Δ·A, and
//! their p-curvature and m_{p,k}-curvature.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

use crate::arith::{
    fmt_rational, is_prime, padic_valuation, primes_up_to, ArithError, Modulus, PolyMatrix, QPoly,
    QuadCtx, QuadResidue, Residue, Ring, SparsePoly, TruncSeries, UPoly, Q,
};
use crate::par::{self, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OdeError {
    #[error("leading coefficient of the operator is zero")]
    ZeroLeadingCoefficient,
    #[error("operator needs order at least 1")]
    EmptyOperator,
    #[error("coefficients must be univariate polynomials in z")]
    NotUnivariate,
    #[error("matrix must be square")]
    NotSquare,
    #[error("radicand {0} must be a non-square integer")]
    BadRadicand(i64),
    #[error("no classifiable prime up to {0}")]
    EmptyScan(u64),
    #[error("z0 = {0} is a singular point")]
    SingularPoint(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("operation needs a system built from a scalar operator")]
    NotScalar,
    #[error("operation not available for systems over a quadratic ring")]
    QuadraticUnsupported,
    #[error("pmax must be at least 2")]
    PmaxTooSmall,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// dy/dz = A y with A = B1/Δ. Δ is a primitive integer polynomial with
/// positive leading coefficient. An optional radicand d means
/// B1 = b1 + sqrt(d)·b1_sqrt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdeSystem {
    delta: QPoly,
    b1: PolyMatrix<Q>,
    sqrt_part: Option<(i64, PolyMatrix<Q>)>,
    denominators: BigInt,
    scalar: Option<Vec<QPoly>>,
}

fn univariate(p: &QPoly) -> Result<(), OdeError> {
    if p.nvars() == 1 {
        Ok(())
    } else {
        Err(OdeError::NotUnivariate)
    }
}

/// Positive rational c with p/c a primitive integer polynomial.
fn content(p: &QPoly) -> Q {
    let mut num = BigInt::from(0);
    let mut den = BigInt::from(1);
    for (_, c) in p.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    BigRational::new(num, den)
}

impl OdeSystem {
    /// Companion system of c_r y^(r) + ... + c_1 y' + c_0 y = 0 with state
    /// (y, y', ..., y^(r-1)).
    pub fn from_scalar(coeffs: &[QPoly]) -> Result<Self, OdeError> {
        if coeffs.len() < 2 {
            return Err(OdeError::EmptyOperator);
        }
        for c in coeffs {
            univariate(c)?;
        }
        let r = coeffs.len() - 1;
        let lead = &coeffs[r];
        if lead.is_zero() {
            return Err(OdeError::ZeroLeadingCoefficient);
        }
        let mut lambda = content(lead);
        if lead.leading().unwrap().1.is_negative() {
            lambda = -lambda;
        }
        let lam_inv = Ring::inv(&lambda).expect("content is nonzero");
        let delta = lead.scale(&lam_inv);
        let zero = QPoly::zero(1, &());
        let mut rows = vec![vec![zero.clone(); r]; r];
        for (i, row) in rows.iter_mut().enumerate().take(r - 1) {
            row[i + 1] = delta.clone();
        }
        for (j, c) in coeffs[..r].iter().enumerate() {
            rows[r - 1][j] = c.scale(&(-&lam_inv));
        }
        let mut sys = Self::build(delta, PolyMatrix::from_rows(rows), None);
        sys.scalar = Some(coeffs.to_vec());
        Ok(sys)
    }

    /// System with the given denominator and numerator matrix; both are
    /// rescaled so that Δ is primitive integral.
    pub fn from_matrix(delta: QPoly, b1: PolyMatrix<Q>) -> Result<Self, OdeError> {
        univariate(&delta)?;
        if b1.rows() != b1.cols() || b1.rows() == 0 {
            return Err(OdeError::NotSquare);
        }
        if b1.entries().iter().any(|e| e.nvars() != 1) {
            return Err(OdeError::NotUnivariate);
        }
        if delta.is_zero() {
            return Err(OdeError::ZeroLeadingCoefficient);
        }
        let mut lambda = content(&delta);
        if delta.leading().unwrap().1.is_negative() {
            lambda = -lambda;
        }
        let lam_inv = SparsePoly::constant(Ring::inv(&lambda).unwrap(), 1);
        Ok(Self::build(delta.mul(&lam_inv), b1.scale(&lam_inv), None))
    }

    fn build(delta: QPoly, b1: PolyMatrix<Q>, sqrt_part: Option<(i64, PolyMatrix<Q>)>) -> Self {
        let mut den = BigInt::from(1);
        let mats = std::iter::once(&b1).chain(sqrt_part.iter().map(|(_, m)| m));
        for m in mats {
            for e in m.entries() {
                for (_, c) in e.terms() {
                    den = den.lcm(c.denom());
                }
            }
        }
        for (_, c) in delta.terms() {
            den = den.lcm(c.denom());
        }
        if let Some((d, _)) = &sqrt_part {
            den = den.lcm(&(BigInt::from(2) * BigInt::from(*d)).abs());
        }
        OdeSystem {
            delta,
            b1,
            sqrt_part,
            denominators: den,
            scalar: None,
        }
    }

    /// Lamé operator P y'' + P'/2 y' - (n(n+1) z + B) y with P = 4z³ - g2 z - g3.
    pub fn lame(n: &Q, b: &Q, g2: &Q, g3: &Q) -> Self {
        let disc = g2.pow(3) - Q::from_integer(27.into()) * g3 * g3;
        if Ring::is_zero(&disc) {
            log::warn!("Lamé curve with g2^3 = 27 g3^2 is singular");
        }
        let z = QPoly::var(0, 1, &());
        let c = |v: &Q| QPoly::constant(v.clone(), 1);
        let p = z.pow(3).scale(&Q::from_integer(4.into())) - z.scale(g2) - c(g3);
        let half = Q::new(1.into(), 2.into());
        let c1 = p.derivative(0).scale(&half);
        let nn = n * (n + Q::from_integer(1.into()));
        let c0 = z.scale(&nn).neg() - c(b);
        Self::from_scalar(&[c0, c1, p]).expect("Lamé operator has nonzero leading term")
    }

    /// z(1-z) y'' + (c - (a+b+1) z) y' - ab y.
    pub fn hypergeometric(a: &Q, b: &Q, c: &Q) -> Self {
        let z = QPoly::var(0, 1, &());
        let k = |v: Q| QPoly::constant(v, 1);
        let one = Q::from_integer(1.into());
        let c2 = &z - &z.pow(2);
        let c1 = k(c.clone()) - z.scale(&(a + b + &one));
        let c0 = k(-(a * b));
        Self::from_scalar(&[c0, c1, c2]).expect("hypergeometric operator has nonzero leading term")
    }

    /// y' = (sqrt(d)/z) y over Z[sqrt(d)].
    pub fn rank_one_quadratic(d: i64) -> Result<Self, OdeError> {
        if d == 0 || (d > 0 && (d as f64).sqrt().round().powi(2) as i64 == d) {
            return Err(OdeError::BadRadicand(d));
        }
        let z = QPoly::var(0, 1, &());
        let zero = PolyMatrix::from_rows(vec![vec![QPoly::zero(1, &())]]);
        let one = PolyMatrix::from_rows(vec![vec![QPoly::one(1, &())]]);
        Ok(Self::build(z, zero, Some((d, one))))
    }

    pub fn rank(&self) -> usize {
        self.b1.rows()
    }

    pub fn delta(&self) -> &QPoly {
        &self.delta
    }

    pub fn b1(&self) -> &PolyMatrix<Q> {
        &self.b1
    }

    pub fn radicand(&self) -> Option<i64> {
        self.sqrt_part.as_ref().map(|(d, _)| *d)
    }

    pub fn scalar_coeffs(&self) -> Option<&[QPoly]> {
        self.scalar.as_deref()
    }

    /// p cannot be reduced: it divides a coefficient denominator (or 2d).
    pub fn is_ring_prime(&self, p: u64) -> bool {
        (&self.denominators % BigInt::from(p)) == BigInt::from(0)
    }

    /// Ring primes up to `bound`.
    pub fn ring_primes(&self, bound: u64) -> Vec<u64> {
        primes_up_to(bound)
            .into_iter()
            .filter(|&p| self.is_ring_prime(p))
            .collect()
    }

    fn dense_over<C: Ring>(&self, ctx: &C::Ctx, sqrt: Option<&C>) -> Option<DenseSystem<C>> {
        let red = |p: &QPoly| -> Option<UPoly<C>> {
            let s = p.try_map_coeffs::<C, ()>(ctx, |c| C::from_rational(c, ctx).ok_or(()));
            s.ok().map(|s| UPoly::from_sparse(&s))
        };
        let n = self.rank();
        let delta = red(&self.delta)?;
        let mut b1 = Vec::with_capacity(n * n);
        for (i, e) in self.b1.entries().iter().enumerate() {
            let mut v = red(e)?;
            if let (Some((_, sp)), Some(s)) = (&self.sqrt_part, sqrt) {
                v = v.add(&red(&sp.entries()[i])?.scale(s));
            }
            b1.push(v);
        }
        Some(DenseSystem::new(n, delta, b1))
    }

    fn over_q(&self) -> Result<DenseSystem<Q>, OdeError> {
        if self.sqrt_part.is_some() {
            return Err(OdeError::QuadraticUnsupported);
        }
        Ok(self.dense_over::<Q>(&(), None).expect("rationals always reduce"))
    }
}

/// B1 and Δ as dense polynomials over a coefficient ring.
#[derive(Clone, Debug)]
struct DenseSystem<C: Ring> {
    n: usize,
    delta: UPoly<C>,
    ddelta: UPoly<C>,
    b1: Vec<UPoly<C>>,
}

impl<C: Ring> DenseSystem<C> {
    fn new(n: usize, delta: UPoly<C>, b1: Vec<UPoly<C>>) -> Self {
        let ddelta = delta.derivative();
        DenseSystem { n, delta, ddelta, b1 }
    }

    fn identity(&self) -> Vec<UPoly<C>> {
        let ctx = self.delta.ctx();
        (0..self.n * self.n)
            .map(|i| {
                if i % (self.n + 1) == 0 {
                    UPoly::one(ctx)
                } else {
                    UPoly::zero(ctx)
                }
            })
            .collect()
    }

    /// B_{m+1} = Δ B_m' - m Δ' B_m + B_m B_1.
    fn step(&self, bm: &[UPoly<C>], m: u64) -> Vec<UPoly<C>> {
        let n = self.n;
        let ctx = self.delta.ctx();
        let mm = C::from_i64(m as i64, ctx).neg();
        let mut out = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let e = &bm[r * n + c];
                let mut acc = Accum::new(ctx);
                if !e.is_zero() {
                    acc.add_product(&self.delta, &e.derivative());
                    acc.add_product(&self.ddelta.scale(&mm), e);
                }
                for l in 0..n {
                    acc.add_product(&bm[r * n + l], &self.b1[l * n + c]);
                }
                out.push(acc.finish());
            }
        }
        out
    }

    /// B_1, ..., B_m.
    fn iterates(&self, m: u64) -> Vec<Vec<UPoly<C>>> {
        let mut out = Vec::with_capacity(m as usize);
        if m == 0 {
            return out;
        }
        out.push(self.b1.clone());
        for j in 1..m {
            let next = self.step(out.last().unwrap(), j);
            out.push(next);
        }
        out
    }

    /// Whether B_m vanishes. Stops early once an iterate is zero, since the
    /// recursion is linear in B_j.
    fn vanishes_at(&self, m: u64) -> bool {
        let mut b = self.b1.clone();
        for j in 1..m {
            if b.iter().all(|e| e.is_zero()) {
                return true;
            }
            b = self.step(&b, j);
        }
        b.iter().all(|e| e.is_zero())
    }
}

struct Accum<C: Ring> {
    ctx: C::Ctx,
    c: Vec<C>,
}

impl<C: Ring> Accum<C> {
    fn new(ctx: &C::Ctx) -> Self {
        Accum {
            ctx: ctx.clone(),
            c: Vec::new(),
        }
    }

    fn add_product(&mut self, a: &UPoly<C>, b: &UPoly<C>) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let need = a.coeffs().len() + b.coeffs().len() - 1;
        if self.c.len() < need {
            self.c.resize(need, C::zero(&self.ctx));
        }
        for (i, x) in a.coeffs().iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs().iter().enumerate() {
                if !y.is_zero() {
                    self.c[i + j].add_assign(&x.mul(y));
                }
            }
        }
    }

    fn finish(self) -> UPoly<C> {
        UPoly::from_coeffs(&self.ctx, self.c)
    }
}

/// Cleared iterates B_m = Δ^m A_m over Q.
#[derive(Clone, Debug)]
pub struct ClearedIterates {
    pub system: OdeSystem,
    /// B_1, ..., B_M.
    pub b: Vec<PolyMatrix<Q>>,
}

pub fn cleared_iterates(sys: &OdeSystem, m: u64) -> Result<ClearedIterates, OdeError> {
    let dense = sys.over_q()?;
    let n = dense.n;
    let b = dense
        .iterates(m)
        .into_iter()
        .map(|bm| {
            let rows = (0..n)
                .map(|r| (0..n).map(|c| bm[r * n + c].to_sparse()).collect())
                .collect();
            PolyMatrix::from_rows(rows)
        })
        .collect();
    Ok(ClearedIterates {
        system: sys.clone(),
        b,
    })
}

/// Smallest m with ord_p(m!) >= k.
pub fn mpk(p: u64, k: u32) -> u64 {
    assert!(p >= 2, "mpk needs p >= 2");
    let legendre = |m: u64| {
        let mut s = 0u64;
        let mut q = m / p;
        while q > 0 {
            s += q;
            q /= p;
        }
        s
    };
    let mut m = p;
    while legendre(m) < k as u64 {
        m += p;
    }
    m
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Curvature {
    RingPrime,
    Zero,
    NonZero,
}

/// Tests whether B_m ≡ 0 mod p^k for m = m_{p,k}, working in (Z/p^k)[z].
pub fn curvature_test(sys: &OdeSystem, p: u64, k: u32) -> Result<Curvature, OdeError> {
    let modulus = Modulus::new(p, k)?;
    if sys.is_ring_prime(p) {
        return Ok(Curvature::RingPrime);
    }
    let m = mpk(p, k);
    let zero = match &sys.sqrt_part {
        None => sys
            .dense_over::<Residue>(&modulus, None)
            .map(|d| d.vanishes_at(m)),
        Some((d, _)) => {
            let ctx = QuadCtx { modulus, d: *d };
            let s = QuadResidue::sqrt_d(&ctx);
            sys.dense_over::<QuadResidue>(&ctx, Some(&s))
                .map(|d| d.vanishes_at(m))
        }
    };
    Ok(match zero {
        None => Curvature::RingPrime,
        Some(true) => Curvature::Zero,
        Some(false) => Curvature::NonZero,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum PrimeClass {
    RingPrime,
    Good,
    Bad,
}

impl PrimeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            PrimeClass::RingPrime => "ring",
            PrimeClass::Good => "good",
            PrimeClass::Bad => "bad",
        }
    }
}

impl From<Curvature> for PrimeClass {
    fn from(c: Curvature) -> Self {
        match c {
            Curvature::RingPrime => PrimeClass::RingPrime,
            Curvature::Zero => PrimeClass::Good,
            Curvature::NonZero => PrimeClass::Bad,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeEntry {
    pub p: u64,
    pub class: PrimeClass,
    pub m: u64,
}

#[derive(Clone, Debug)]
pub struct PrimeScanReport {
    pub pmax: u64,
    pub k: u32,
    pub entries: Vec<PrimeEntry>,
    /// Set when a bad-prime limit cut the scan short.
    pub truncated: bool,
    pub elapsed: Duration,
}

impl PrimeScanReport {
    fn with_class(&self, c: PrimeClass) -> Vec<u64> {
        self.entries.iter().filter(|e| e.class == c).map(|e| e.p).collect()
    }
    pub fn bad(&self) -> Vec<u64> {
        self.with_class(PrimeClass::Bad)
    }
    pub fn good(&self) -> Vec<u64> {
        self.with_class(PrimeClass::Good)
    }
    pub fn ring(&self) -> Vec<u64> {
        self.with_class(PrimeClass::RingPrime)
    }
}

pub fn bad_prime_scan(
    sys: &OdeSystem,
    pmax: u64,
    k: u32,
    maxbad: Option<usize>,
) -> Result<PrimeScanReport, OdeError> {
    bad_prime_scan_with(sys, pmax, k, maxbad, Schedule::default())
}

/// Classifies every prime up to `pmax`. With `maxbad`, stops right after the
/// prime at which the bad count first exceeds the limit.
pub fn bad_prime_scan_with(
    sys: &OdeSystem,
    pmax: u64,
    k: u32,
    maxbad: Option<usize>,
    schedule: Schedule,
) -> Result<PrimeScanReport, OdeError> {
    if pmax < 2 {
        return Err(OdeError::PmaxTooSmall);
    }
    let start = Instant::now();
    let primes = primes_up_to(pmax);
    // Validate the modulus range once rather than per worker.
    for &p in &primes {
        Modulus::new(p, k)?;
    }
    let classify = |&p: &u64| PrimeEntry {
        p,
        class: curvature_test(sys, p, k).expect("modulus checked").into(),
        m: mpk(p, k),
    };
    let mut entries = Vec::new();
    let mut truncated = false;
    match maxbad {
        None => entries = par::map_ordered(schedule, &primes, classify),
        Some(limit) => {
            let chunk = (par::current_threads() * 2).max(1);
            let mut bad = 0usize;
            'outer: for block in primes.chunks(chunk) {
                for e in par::map_ordered(schedule, block, classify) {
                    if e.class == PrimeClass::Bad {
                        bad += 1;
                    }
                    entries.push(e);
                    if bad > limit {
                        truncated = entries.len() < primes.len();
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(PrimeScanReport {
        pmax,
        k,
        entries,
        truncated,
        elapsed: start.elapsed(),
    })
}

pub fn curvature_density(sys: &OdeSystem, pmax: u64) -> Result<Q, OdeError> {
    curvature_density_with(sys, pmax, Schedule::default())
}

/// Share of good primes among classifiable primes up to `pmax`.
pub fn curvature_density_with(sys: &OdeSystem, pmax: u64, schedule: Schedule) -> Result<Q, OdeError> {
    let report = bad_prime_scan_with(sys, pmax, 1, None, schedule)?;
    let good = report.good().len();
    let bad = report.bad().len();
    if good + bad == 0 {
        return Err(OdeError::EmptyScan(pmax));
    }
    Ok(Q::new(good.into(), (good + bad).into()))
}

fn shifted(sys: &DenseSystem<Q>, z0: &Q) -> (UPoly<Q>, Vec<UPoly<Q>>) {
    (
        sys.delta.shift(z0),
        sys.b1.iter().map(|e| e.shift(z0)).collect(),
    )
}

/// Power series solution around z0 with y(z0) = y0. The returned series are
/// in the local variable w = z - z0.
pub fn dsolve_formal(sys: &OdeSystem, z0: &Q, y0: &[Q], order: u32) -> Result<Vec<TruncSeries<Q>>, OdeError> {
    let dense = sys.over_q()?;
    let n = dense.n;
    if y0.len() != n {
        return Err(OdeError::PreconditionFailed(format!(
            "initial vector has length {}, rank is {n}",
            y0.len()
        )));
    }
    if Ring::is_zero(&dense.delta.eval(z0)) {
        return Err(OdeError::SingularPoint(fmt_rational(z0)));
    }
    let (delta, b1) = shifted(&dense, z0);
    let dinv = TruncSeries::new(delta.to_sparse(), order)
        .inverse()
        .map_err(OdeError::Arith)?;
    // a[j][r*n+c] = coefficient of w^j in A_{rc}.
    let a_entries: Vec<Vec<Q>> = b1
        .iter()
        .map(|e| dinv.mul_poly(&e.to_sparse()).coeffs())
        .collect();
    let mut y: Vec<Vec<Q>> = vec![y0.to_vec()];
    for m in 0..order as usize {
        // (m+1) y_{m+1} = sum_{i<=m} A_{m-i} y_i
        let mut next = vec![Q::from_integer(0.into()); n];
        for (i, yi) in y.iter().enumerate() {
            let j = m - i;
            for r in 0..n {
                for c in 0..n {
                    let a = &a_entries[r * n + c][j];
                    if !Ring::is_zero(a) {
                        next[r] += a * &yi[c];
                    }
                }
            }
        }
        let scale = Q::new(1.into(), ((m + 1) as i64).into());
        y.push(next.into_iter().map(|v| v * &scale).collect());
    }
    Ok((0..n)
        .map(|r| {
            let coeffs: Vec<Q> = y.iter().map(|v| v[r].clone()).collect();
            TruncSeries::from_coeffs(&(), &coeffs, order)
        })
        .collect())
}

/// Δ(z0+w) y' - B1(z0+w) y for series in w, exact to order - 1.
pub fn formal_residual(sys: &OdeSystem, z0: &Q, y: &[TruncSeries<Q>]) -> Result<Vec<TruncSeries<Q>>, OdeError> {
    let dense = sys.over_q()?;
    let n = dense.n;
    let (delta, b1) = shifted(&dense, z0);
    let order = y.iter().map(|s| s.order()).min().unwrap_or(0).saturating_sub(1);
    let mut out = Vec::with_capacity(n);
    for r in 0..n {
        let mut acc = y[r].derivative(0).mul_poly(&delta.to_sparse()).truncate(order);
        for c in 0..n {
            acc = acc.sub(&y[c].mul_poly(&b1[r * n + c].to_sparse()).truncate(order));
        }
        out.push(acc);
    }
    Ok(out)
}

/// Polynomial identity Δ W' + Δ' W + W B1 ≡ 0 mod p for the Δ-cleared
/// truncated splitting matrix W = Δ^{p-1} U, without checking that the
/// p-curvature vanishes.
pub fn frobenius_u_identity(sys: &OdeSystem, p: u64, z0: &Q) -> Result<bool, OdeError> {
    if sys.sqrt_part.is_some() {
        return Err(OdeError::QuadraticUnsupported);
    }
    let m = Modulus::prime(p)?;
    let dense = sys
        .dense_over::<Residue>(&m, None)
        .ok_or_else(|| OdeError::PreconditionFailed(format!("{p} is a ring prime")))?;
    let z0r = m
        .reduce(z0)
        .ok_or_else(|| OdeError::PreconditionFailed(format!("{p} divides the denominator of z0")))?;
    if dense.delta.eval(&z0r).is_zero() {
        return Err(OdeError::PreconditionFailed(format!("Δ(z0) vanishes mod {p}")));
    }
    let n = dense.n;
    let mut bs = vec![dense.identity()];
    bs.extend(dense.iterates(p - 1));
    let lin = UPoly::linear(&z0r);
    let mut w = vec![UPoly::zero(&m); n * n];
    let mut lin_pow = UPoly::one(&m);
    let mut fact = Residue::one(&m);
    let dpows: Vec<UPoly<Residue>> = {
        let mut v = vec![UPoly::one(&m)];
        for i in 1..p as usize {
            let next = v[i - 1].mul(&dense.delta);
            v.push(next);
        }
        v
    };
    for (mi, bm) in bs.iter().enumerate() {
        if mi > 0 {
            fact = fact.mul(&m.residue(mi as i64));
            lin_pow = lin_pow.mul(&lin);
        }
        let mut coef = fact.inv().expect("m < p");
        if mi % 2 == 1 {
            coef = coef.neg();
        }
        let factor = lin_pow.mul(&dpows[p as usize - 1 - mi]).scale(&coef);
        for (wi, e) in w.iter_mut().zip(bm) {
            *wi = wi.add(&factor.mul(e));
        }
    }
    for r in 0..n {
        for c in 0..n {
            let e = &w[r * n + c];
            let mut acc = dense.delta.mul(&e.derivative()).add(&dense.ddelta.mul(e));
            for l in 0..n {
                acc = acc.add(&w[r * n + l].mul(&dense.b1[l * n + c]));
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Verifies U' = -U A for the truncated splitting matrix at a prime with
/// vanishing p-curvature.
pub fn frobenius_u_check(sys: &OdeSystem, p: u64, z0: &Q) -> Result<bool, OdeError> {
    match curvature_test(sys, p, 1)? {
        Curvature::Zero => frobenius_u_identity(sys, p, z0),
        Curvature::NonZero => Err(OdeError::PreconditionFailed(format!(
            "p-curvature is nonzero at p = {p}"
        ))),
        Curvature::RingPrime => Err(OdeError::PreconditionFailed(format!("{p} is a ring prime"))),
    }
}

/// Whether the scalar operator of `target` is, up to a factor c·z^e, the
/// pullback of the operator with coefficients `source` (in w, lowest order
/// first) along w = z^s.
pub fn pullback_check(target: &OdeSystem, source: &[QPoly], s: u32) -> Result<bool, OdeError> {
    let tc = target.scalar_coeffs().ok_or(OdeError::NotScalar)?;
    if tc.len() != 3 || source.len() != 3 {
        return Err(OdeError::PreconditionFailed("both operators must have order 2".into()));
    }
    for c in source {
        univariate(c)?;
    }
    if s == 0 {
        return Err(OdeError::PreconditionFailed("s must be positive".into()));
    }
    let z = QPoly::var(0, 1, &());
    let ds = z.pow(s as u64 - 1).scale(&Q::from_integer(s.into()));
    // y^(j) = sum_i g[j][i] u^(i)(z^s)
    let r = tc.len() - 1;
    let zero = QPoly::zero(1, &());
    let mut g: Vec<Vec<QPoly>> = vec![vec![QPoly::one(1, &())]];
    for j in 0..r {
        let mut next = vec![zero.clone(); j + 2];
        for (i, gi) in g[j].iter().enumerate() {
            next[i] = next[i].add(&gi.derivative(0));
            next[i + 1] = next[i + 1].add(&gi.mul(&ds));
        }
        g.push(next);
    }
    let mut h = vec![zero.clone(); r + 1];
    for (j, cj) in tc.iter().enumerate() {
        for (i, gji) in g[j].iter().enumerate() {
            h[i] = h[i].add(&cj.mul(gji));
        }
    }
    let zs = z.pow(s as u64);
    let pulled: Vec<QPoly> = source.iter().map(|c| c.substitute(0, &zs)).collect();
    let Some(i0) = pulled.iter().position(|p| !p.is_zero()) else {
        return Ok(false);
    };
    let factor = match h[i0].divide_exact(&pulled[i0]) {
        Ok(f) if f.nterms() == 1 => f,
        _ => return Ok(false),
    };
    Ok(h.iter().zip(&pulled).all(|(hi, pi)| *hi == factor.mul(pi)))
}

/// Minimum p-adic valuation of the coefficients of a series, per prime.
/// `None` stands for +infinity (zero series).
pub fn p_integrality_report(
    series: &TruncSeries<Q>,
    primes: &[u64],
) -> Result<BTreeMap<u64, Option<i64>>, OdeError> {
    let mut out = BTreeMap::new();
    for &p in primes {
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p).into());
        }
        let mut best: Option<i64> = None;
        for (_, c) in series.poly().terms() {
            let v = padic_valuation(c, p)?.expect("stored coefficients are nonzero");
            best = Some(best.map_or(v, |b| b.min(v)));
        }
        out.insert(p, best);
    }
    Ok(out)
}

impl std::fmt::Display for Curvature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Curvature::RingPrime => "ring",
            Curvature::Zero => "zero",
            Curvature::NonZero => "nonzero",
        })
    }
}

/// Convenience for integer-valued rationals in tables and tests.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}
