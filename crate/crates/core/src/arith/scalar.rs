use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ArithError;

/// Commutative ring with unit. Elements carry enough context to build
/// constants of the same ring (for residues, the modulus).
pub trait Ring: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(n: i64, ctx: &Self::Ctx) -> Self;
    /// Image of a rational, or `None` if its denominator is not a unit.
    fn from_rational(r: &BigRational, ctx: &Self::Ctx) -> Option<Self>;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn add_assign(&mut self, other: &Self) {
        *self = self.add(other);
    }

    fn mul_i64(&self, n: i64) -> Self {
        self.mul(&Self::from_i64(n, &self.ctx()))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Ring for BigRational {
    type Ctx = ();

    fn ctx(&self) {}
    fn zero(_: &()) -> Self {
        Zero::zero()
    }
    fn one(_: &()) -> Self {
        One::one()
    }
    fn from_i64(n: i64, _: &()) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(r: &BigRational, _: &()) -> Option<Self> {
        Some(r.clone())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
}

/// The modulus p^k of a residue ring Z/p^k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Modulus {
    p: u64,
    k: u32,
    pk: u64,
}

impl Modulus {
    /// Largest supported p^k; keeps sums below 2^63.
    pub const MAX: u64 = 1 << 62;

    pub fn new(p: u64, k: u32) -> Result<Self, ArithError> {
        if !super::primes::is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        if k == 0 {
            return Err(ArithError::ZeroPrecision);
        }
        let mut pk: u64 = 1;
        for _ in 0..k {
            pk = pk
                .checked_mul(p)
                .filter(|&v| v <= Self::MAX)
                .ok_or(ArithError::ModulusTooLarge { p, k })?;
        }
        Ok(Modulus { p, k, pk })
    }

    pub fn prime(p: u64) -> Result<Self, ArithError> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn value(&self) -> u64 {
        self.pk
    }

    pub fn residue(&self, v: i64) -> Residue {
        let m = self.pk as i128;
        let r = (v as i128).rem_euclid(m) as u64;
        Residue { v: r, m: *self }
    }

    pub fn reduce_bigint(&self, n: &BigInt) -> Residue {
        let m = BigInt::from(self.pk);
        let r = n.mod_floor(&m);
        Residue {
            v: r.to_u64().expect("reduced below modulus"),
            m: *self,
        }
    }

    pub fn reduce(&self, r: &BigRational) -> Option<Residue> {
        let num = self.reduce_bigint(r.numer());
        let den = self.reduce_bigint(r.denom());
        den.inv().map(|d| num.mul(&d))
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.k)
        }
    }
}

/// Element of Z/p^k stored as its least non-negative representative.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Residue {
    v: u64,
    m: Modulus,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.v
    }
    pub fn modulus(&self) -> Modulus {
        self.m
    }
    /// Representative in (-p^k/2, p^k/2].
    pub fn signed(&self) -> i128 {
        let v = self.v as i128;
        let m = self.m.pk as i128;
        if 2 * v > m {
            v - m
        } else {
            v
        }
    }

    #[inline]
    fn check(&self, other: &Self) {
        assert_eq!(self.m, other.m, "mixed moduli {} and {}", self.m, other.m);
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Ring for Residue {
    type Ctx = Modulus;

    fn ctx(&self) -> Modulus {
        self.m
    }
    fn zero(m: &Modulus) -> Self {
        Residue { v: 0, m: *m }
    }
    fn one(m: &Modulus) -> Self {
        Residue { v: 1 % m.pk, m: *m }
    }
    fn from_i64(n: i64, m: &Modulus) -> Self {
        m.residue(n)
    }
    fn from_rational(r: &BigRational, m: &Modulus) -> Option<Self> {
        m.reduce(r)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    #[inline]
    fn add(&self, o: &Self) -> Self {
        self.check(o);
        let s = self.v + o.v;
        Residue {
            v: if s >= self.m.pk { s - self.m.pk } else { s },
            m: self.m,
        }
    }
    #[inline]
    fn sub(&self, o: &Self) -> Self {
        self.check(o);
        let v = if self.v >= o.v {
            self.v - o.v
        } else {
            self.v + self.m.pk - o.v
        };
        Residue { v, m: self.m }
    }
    #[inline]
    fn mul(&self, o: &Self) -> Self {
        self.check(o);
        let v = ((self.v as u128 * o.v as u128) % self.m.pk as u128) as u64;
        Residue { v, m: self.m }
    }
    fn neg(&self) -> Self {
        Residue {
            v: if self.v == 0 { 0 } else { self.m.pk - self.v },
            m: self.m,
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.v.is_multiple_of(self.m.p) {
            return None;
        }
        let (g, x, _) = ext_gcd(self.v as i128, self.m.pk as i128);
        debug_assert_eq!(g, 1);
        let v = x.rem_euclid(self.m.pk as i128) as u64;
        Some(Residue { v, m: self.m })
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

/// Context for `QuadResidue`: modulus and the radicand reduced mod p^k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuadCtx {
    pub modulus: Modulus,
    pub d: i64,
}

/// Element a + b*sqrt(d) of (Z/p^k)[s]/(s^2 - d).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuadResidue {
    pub a: Residue,
    pub b: Residue,
    d: i64,
}

impl QuadResidue {
    pub fn new(a: Residue, b: Residue, d: i64) -> Self {
        assert_eq!(a.modulus(), b.modulus(), "mixed moduli");
        QuadResidue { a, b, d }
    }

    pub fn sqrt_d(ctx: &QuadCtx) -> Self {
        QuadResidue {
            a: Residue::zero(&ctx.modulus),
            b: Residue::one(&ctx.modulus),
            d: ctx.d,
        }
    }

    fn dres(&self) -> Residue {
        self.a.modulus().residue(self.d)
    }

    fn norm(&self) -> Residue {
        self.a.mul(&self.a).sub(&self.dres().mul(&self.b.mul(&self.b)))
    }
}

impl fmt::Display for QuadResidue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
    }
}

impl Ring for QuadResidue {
    type Ctx = QuadCtx;

    fn ctx(&self) -> QuadCtx {
        QuadCtx {
            modulus: self.a.modulus(),
            d: self.d,
        }
    }
    fn zero(c: &QuadCtx) -> Self {
        QuadResidue::new(Residue::zero(&c.modulus), Residue::zero(&c.modulus), c.d)
    }
    fn one(c: &QuadCtx) -> Self {
        QuadResidue::new(Residue::one(&c.modulus), Residue::zero(&c.modulus), c.d)
    }
    fn from_i64(n: i64, c: &QuadCtx) -> Self {
        QuadResidue::new(c.modulus.residue(n), Residue::zero(&c.modulus), c.d)
    }
    fn from_rational(r: &BigRational, c: &QuadCtx) -> Option<Self> {
        c.modulus
            .reduce(r)
            .map(|a| QuadResidue::new(a, Residue::zero(&c.modulus), c.d))
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        assert_eq!(self.d, o.d, "mixed radicands");
        QuadResidue::new(self.a.add(&o.a), self.b.add(&o.b), self.d)
    }
    fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.d, o.d, "mixed radicands");
        QuadResidue::new(self.a.sub(&o.a), self.b.sub(&o.b), self.d)
    }
    fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.d, o.d, "mixed radicands");
        let a = self.a.mul(&o.a).add(&self.dres().mul(&self.b.mul(&o.b)));
        let b = self.a.mul(&o.b).add(&self.b.mul(&o.a));
        QuadResidue::new(a, b, self.d)
    }
    fn neg(&self) -> Self {
        QuadResidue::new(self.a.neg(), self.b.neg(), self.d)
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        Some(QuadResidue::new(self.a.mul(&n), self.b.neg().mul(&n), self.d))
    }
}

/// Which ring an `ExactScalar` lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ScalarCtx {
    Rational,
    Residue(Modulus),
}

/// A value that is either an exact rational or a residue mod p^k.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExactScalar {
    Rational(BigRational),
    Residue(Residue),
}

impl ExactScalar {
    pub fn rational(n: i64, d: i64) -> Self {
        ExactScalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactScalar::Rational(r) => Some(r),
            ExactScalar::Residue(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<Residue> {
        match self {
            ExactScalar::Residue(r) => Some(*r),
            ExactScalar::Rational(_) => None,
        }
    }

    /// Reduction to Z/p^k; residues must already share the modulus.
    pub fn reduce(&self, m: Modulus) -> Result<Residue, ArithError> {
        match self {
            ExactScalar::Rational(r) => reduce_mod(r, m.p(), m.k()),
            ExactScalar::Residue(r) if r.modulus() == m => Ok(*r),
            ExactScalar::Residue(r) => Err(ArithError::MixedModuli(r.modulus(), m)),
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => write!(f, "{}", fmt_rational(r)),
            ExactScalar::Residue(r) => write!(f, "{} mod {}", r.value(), r.modulus()),
        }
    }
}

impl Ring for ExactScalar {
    type Ctx = ScalarCtx;

    fn ctx(&self) -> ScalarCtx {
        match self {
            ExactScalar::Rational(_) => ScalarCtx::Rational,
            ExactScalar::Residue(r) => ScalarCtx::Residue(r.modulus()),
        }
    }
    fn zero(c: &ScalarCtx) -> Self {
        Self::from_i64(0, c)
    }
    fn one(c: &ScalarCtx) -> Self {
        Self::from_i64(1, c)
    }
    fn from_i64(n: i64, c: &ScalarCtx) -> Self {
        match c {
            ScalarCtx::Rational => ExactScalar::Rational(BigRational::from_integer(n.into())),
            ScalarCtx::Residue(m) => ExactScalar::Residue(m.residue(n)),
        }
    }
    fn from_rational(r: &BigRational, c: &ScalarCtx) -> Option<Self> {
        match c {
            ScalarCtx::Rational => Some(ExactScalar::Rational(r.clone())),
            ScalarCtx::Residue(m) => m.reduce(r).map(ExactScalar::Residue),
        }
    }
    fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => Zero::is_zero(r),
            ExactScalar::Residue(r) => r.is_zero(),
        }
    }
    fn add(&self, o: &Self) -> Self {
        binop(self, o, |a, b| a + b, |a, b| a.add(b))
    }
    fn sub(&self, o: &Self) -> Self {
        binop(self, o, |a, b| a - b, |a, b| a.sub(b))
    }
    fn mul(&self, o: &Self) -> Self {
        binop(self, o, |a, b| a * b, |a, b| a.mul(b))
    }
    fn neg(&self) -> Self {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(-r),
            ExactScalar::Residue(r) => ExactScalar::Residue(r.neg()),
        }
    }
    fn inv(&self) -> Option<Self> {
        match self {
            ExactScalar::Rational(r) => Ring::inv(r).map(ExactScalar::Rational),
            ExactScalar::Residue(r) => r.inv().map(ExactScalar::Residue),
        }
    }
}

fn binop(
    a: &ExactScalar,
    b: &ExactScalar,
    fq: impl Fn(&BigRational, &BigRational) -> BigRational,
    fr: impl Fn(&Residue, &Residue) -> Residue,
) -> ExactScalar {
    match (a, b) {
        (ExactScalar::Rational(x), ExactScalar::Rational(y)) => ExactScalar::Rational(fq(x, y)),
        (ExactScalar::Residue(x), ExactScalar::Residue(y)) => ExactScalar::Residue(fr(x, y)),
        _ => panic!("mixed rational and residue operands"),
    }
}

/// Canonical text for a rational: `n` for integers, `n/d` otherwise.
pub fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Parses `a`, `-a`, or `a/b`.
pub fn parse_rational(s: &str) -> Result<BigRational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// p-adic valuation of a rational; `None` stands for +infinity (x = 0).
pub fn padic_valuation(x: &BigRational, p: u64) -> Result<Option<i64>, ArithError> {
    if !super::primes::is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if Zero::is_zero(x) {
        return Ok(None);
    }
    Ok(Some(
        bigint_valuation(x.numer(), p) as i64 - bigint_valuation(x.denom(), p) as i64,
    ))
}

pub(crate) fn bigint_valuation(n: &BigInt, p: u64) -> u64 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Image of x in Z/p^k. Fails when p divides the denominator.
pub fn reduce_mod(x: &BigRational, p: u64, k: u32) -> Result<Residue, ArithError> {
    let m = Modulus::new(p, k)?;
    m.reduce(x).ok_or_else(|| ArithError::DenominatorNotUnit {
        value: fmt_rational(x),
        p,
    })
}

/// Rising Pochhammer symbol (x)_m = x (x+1) ... (x+m-1).
pub fn pochhammer_rising(x: &BigRational, m: u64) -> BigRational {
    let mut acc = <BigRational as One>::one();
    let mut t = x.clone();
    for _ in 0..m {
        acc *= &t;
        t += <BigRational as One>::one();
    }
    acc
}

/// Integer part, fractional part and the bracket <r> = ({r})_[r].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FractionalBracket {
    pub floor: BigInt,
    pub frac: BigRational,
    pub bracket: BigRational,
}

/// Splits r into floor and fractional part and evaluates <r>.
/// Only defined for r >= 0, where the Pochhammer length is non-negative.
pub fn fractional_bracket(r: &BigRational) -> Result<FractionalBracket, ArithError> {
    if r.is_negative() {
        return Err(ArithError::NegativeBracket(fmt_rational(r)));
    }
    let floor = r.floor().to_integer();
    let frac = r - BigRational::from_integer(floor.clone());
    let len = floor.to_u64().ok_or(ArithError::Overflow)?;
    let bracket = pochhammer_rising(&frac, len);
    Ok(FractionalBracket {
        floor,
        frac,
        bracket,
    })
}

/// Numerator and denominator content helpers for rationals.
pub fn lcm_denominators<'a>(it: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_inverse_and_units() {
        let m = Modulus::new(7, 3).unwrap();
        let x = m.residue(10);
        let y = x.inv().unwrap();
        assert!(x.mul(&y).is_one());
        assert!(m.residue(14).inv().is_none());
        assert_eq!(m.residue(-1).value(), 342);
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn mixed_moduli_panic() {
        let a = Modulus::new(5, 1).unwrap().residue(1);
        let b = Modulus::new(7, 1).unwrap().residue(1);
        let _ = a.add(&b);
    }

    #[test]
    fn modulus_rejects_composites_and_overflow() {
        assert!(matches!(Modulus::new(9, 1), Err(ArithError::NotPrime(9))));
        assert!(Modulus::new(2, 62).is_ok());
        assert!(Modulus::new(2, 63).is_err());
    }

    #[test]
    fn reduce_fails_on_denominator() {
        assert!(reduce_mod(&rat(1, 6), 3, 2).is_err());
        let r = reduce_mod(&rat(1, 6), 5, 1).unwrap();
        assert_eq!(r.value(), 1);
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_valuation(&rat(50, 3), 5).unwrap(), Some(2));
        assert_eq!(padic_valuation(&rat(50, 3), 3).unwrap(), Some(-1));
        assert_eq!(padic_valuation(&int(0), 3).unwrap(), None);
        assert!(padic_valuation(&int(3), 4).is_err());
    }

    #[test]
    fn bracket_examples() {
        let b = fractional_bracket(&rat(7, 3)).unwrap();
        assert_eq!(b.floor, BigInt::from(2));
        assert_eq!(b.frac, rat(1, 3));
        assert_eq!(b.bracket, rat(4, 9));
        assert_eq!(fractional_bracket(&rat(1, 2)).unwrap().bracket, int(1));
    }

    #[test]
    fn quad_residue_arith() {
        let ctx = QuadCtx {
            modulus: Modulus::new(11, 2).unwrap(),
            d: 3,
        };
        let s = QuadResidue::sqrt_d(&ctx);
        assert_eq!(s.mul(&s), QuadResidue::from_i64(3, &ctx));
        let x = s.add(&QuadResidue::from_i64(2, &ctx));
        assert!(x.mul(&x.inv().unwrap()).is_one());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(fmt_rational(&rat(4, 2)), "2");
        assert_eq!(fmt_rational(&rat(-1, 2)), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
