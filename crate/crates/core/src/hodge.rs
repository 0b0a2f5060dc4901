//! Taylor series of periods of linear cycles in deformed Fermat
//! hypersurfaces, codimension formulas for cubic Hodge loci, and the
//! one-variable root-difference series checked numerically.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::primes::trial_factor;
use crate::arith::{fractional_bracket, ArithError, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HodgeError {
    #[error("n = {0} must be even")]
    OddDimension(u32),
    #[error("k = sum (beta_i + 1)/d = {0} is not a positive integer")]
    NotIntegralK(String),
    #[error("beta entry {0} outside 0..=d-2")]
    BetaOutOfRange(u32),
    #[error("exponent vector {0:?} has wrong length or does not sum to d")]
    BadExponent(Vec<u32>),
    #[error("duplicate exponent vector {0:?}")]
    Duplicate(Vec<u32>),
    #[error("cannot parse index set line {0:?}")]
    Parse(String),
    #[error("m = {m} outside -1..={max}")]
    BadM { m: i64, max: i64 },
    #[error("Newton iteration did not converge from root {0}")]
    NewtonDivergence(usize),
    #[error("branch index {0} outside 0..d")]
    BadBranch(usize),
    #[error("t has {got} entries, expected {want}")]
    SampleArity { got: usize, want: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Exponent vectors α in N0^{n+2} with |α| = d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationIndexSet {
    pub n: u32,
    pub d: u32,
    alphas: Vec<Vec<u32>>,
}

impl DeformationIndexSet {
    pub fn new(n: u32, d: u32, alphas: Vec<Vec<u32>>) -> Result<Self, HodgeError> {
        if n % 2 == 1 {
            return Err(HodgeError::OddDimension(n));
        }
        let mut seen = BTreeSet::new();
        for a in &alphas {
            if a.len() != n as usize + 2 || a.iter().sum::<u32>() != d {
                return Err(HodgeError::BadExponent(a.clone()));
            }
            if !seen.insert(a.clone()) {
                return Err(HodgeError::Duplicate(a.clone()));
            }
        }
        Ok(DeformationIndexSet { n, d, alphas })
    }

    /// One comma-separated exponent vector per line; blank lines and lines
    /// starting with # are skipped.
    pub fn parse(n: u32, d: u32, text: &str) -> Result<Self, HodgeError> {
        let mut alphas = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v = line
                .split(',')
                .map(|s| s.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| HodgeError::Parse(line.to_string()))?;
            alphas.push(v);
        }
        Self::new(n, d, alphas)
    }

    /// All monomials of degree d in n+2 variables.
    pub fn all(n: u32, d: u32) -> Self {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n as usize + 2];
        compositions_exact(&mut cur, 0, d, &mut out);
        out.reverse();
        DeformationIndexSet { n, d, alphas: out }
    }

    pub fn alphas(&self) -> &[Vec<u32>] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }
}

fn compositions_exact(cur: &mut Vec<u32>, i: usize, rest: u32, out: &mut Vec<Vec<u32>>) {
    if i + 1 == cur.len() {
        cur[i] = rest;
        out.push(cur.clone());
        return;
    }
    for v in 0..=rest {
        cur[i] = v;
        compositions_exact(cur, i + 1, rest - v, out);
    }
    cur[i] = 0;
}

/// All a in N0^len with |a| <= bound, in lexicographic order.
pub fn bounded_compositions(len: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, i: usize, rest: u32, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..=rest {
            cur[i] = v;
            rec(cur, i + 1, rest - v, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(&mut vec![0; len], 0, bound, &mut out);
    out
}

fn factorial(n: u32) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, i| a * i)
}

fn a_factorial(a: &[u32]) -> BigInt {
    a.iter().fold(BigInt::one(), |acc, &x| acc * factorial(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSeries {
    pub index_set: DeformationIndexSet,
    pub beta: Vec<u32>,
    pub k: u32,
    pub trunc: u32,
    /// Multi-index a (one entry per α) to nonzero coefficient.
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl PeriodSeries {
    pub fn coeff(&self, a: &[u32]) -> Q {
        self.terms.get(a).cloned().unwrap_or_else(Q::zero)
    }

    /// β̌ = β + Σ a_α α.
    pub fn beta_check(&self, a: &[u32]) -> Vec<u32> {
        beta_check(&self.beta, &self.index_set, a)
    }

    /// Re-checks the fractional condition on every stored term.
    pub fn all_terms_admissible(&self) -> bool {
        let d = self.index_set.d;
        self.terms
            .keys()
            .all(|a| fractional_condition(&self.beta_check(a), d) && !self.terms[a].is_zero())
    }
}

fn beta_check(beta: &[u32], set: &DeformationIndexSet, a: &[u32]) -> Vec<u32> {
    let mut b = beta.to_vec();
    for (alpha, &ai) in set.alphas.iter().zip(a) {
        for (bi, &x) in b.iter_mut().zip(alpha) {
            *bi += ai * x;
        }
    }
    b
}

/// {(b_{2e}+1)/d} + {(b_{2e+1}+1)/d} = 1 for every e.
pub fn fractional_condition(b: &[u32], d: u32) -> bool {
    b.chunks(2).all(|pair| {
        let (r0, r1) = ((pair[0] + 1) % d, (pair[1] + 1) % d);
        r0 != 0 && r1 != 0 && r0 + r1 == d
    })
}

/// Σ_a (-1)^E D / a! t^a restricted to |a| <= trunc.
pub fn period_series(
    n: u32,
    d: u32,
    beta: &[u32],
    set: &DeformationIndexSet,
    trunc: u32,
) -> Result<PeriodSeries, HodgeError> {
    if n % 2 == 1 {
        return Err(HodgeError::OddDimension(n));
    }
    if beta.len() != n as usize + 2 || set.n != n || set.d != d {
        return Err(HodgeError::BadExponent(beta.to_vec()));
    }
    if let Some(&b) = beta.iter().find(|&&b| b + 2 > d) {
        return Err(HodgeError::BetaOutOfRange(b));
    }
    let total: u32 = beta.iter().map(|b| b + 1).sum();
    if !total.is_multiple_of(d) {
        return Err(HodgeError::NotIntegralK(format!("{total}/{d}")));
    }
    let dq = Q::from_integer(d.into());
    let mut terms = BTreeMap::new();
    for a in bounded_compositions(set.len(), trunc) {
        let b = beta_check(beta, set, &a);
        if !fractional_condition(&b, d) {
            continue;
        }
        let mut dprod = Q::one();
        let mut e = BigInt::zero();
        for (i, &bi) in b.iter().enumerate() {
            let x = Q::from_integer((bi + 1).into()) / &dq;
            let fb = fractional_bracket(&x)?;
            dprod *= fb.bracket;
            if i % 2 == 0 {
                e += fb.floor;
            }
        }
        if e.is_odd() {
            dprod = -dprod;
        }
        let c = dprod / Q::from_integer(a_factorial(&a));
        if !c.is_zero() {
            terms.insert(a, c);
        }
    }
    Ok(PeriodSeries {
        index_set: set.clone(),
        beta: beta.to_vec(),
        k: total / d,
        trunc,
        terms,
    })
}

/// <r> = (r-1)(r-2)...{r} for r > 0 not an integer; 1 when 0 < r < 1.
fn bracket_descending(r: &Q) -> Q {
    let mut acc = Q::one();
    let mut x = r - Q::one();
    while x.is_positive() {
        acc *= &x;
        x -= Q::one();
    }
    acc
}

/// Surface quartic series coded directly from its own display and compared
/// term by term with [`period_series`] at n = 2, d = 4, β = 0.
pub fn quartic_specialization_check(set: &DeformationIndexSet, trunc: u32) -> Result<bool, HodgeError> {
    if set.n != 2 || set.d != 4 {
        return Err(HodgeError::BadExponent(vec![set.n, set.d]));
    }
    let general = period_series(2, 4, &[0, 0, 0, 0], set, trunc)?;
    let mut direct = BTreeMap::new();
    for a in bounded_compositions(set.len(), trunc) {
        let mut b = [Q::zero(), Q::zero(), Q::zero(), Q::zero()];
        for (i, bi) in b.iter_mut().enumerate() {
            let s: u32 = set.alphas.iter().zip(&a).map(|(al, &x)| al[i] * x).sum();
            *bi = Q::new((s + 1).into(), 4.into());
        }
        if b.iter().any(|x| x.is_integer()) || !(&b[0] + &b[1]).is_integer() || !(&b[2] + &b[3]).is_integer() {
            continue;
        }
        let sign = (b[0].floor().to_integer() + b[2].floor().to_integer()).is_odd();
        let mut c = b.iter().map(bracket_descending).fold(Q::one(), |x, y| x * y);
        c /= Q::from_integer(a_factorial(&a));
        if sign {
            c = -c;
        }
        if !c.is_zero() {
            direct.insert(a, c);
        }
    }
    Ok(direct == general.terms)
}

/// Per total degree: factorization of the LCM of coefficient denominators.
pub fn denominator_report(series: &PeriodSeries) -> BTreeMap<u32, Vec<(u64, u32)>> {
    let mut lcms: BTreeMap<u32, BigInt> = BTreeMap::new();
    for (a, c) in &series.terms {
        let deg: u32 = a.iter().sum();
        let e = lcms.entry(deg).or_insert_with(BigInt::one);
        *e = e.lcm(c.denom());
    }
    lcms.into_iter()
        .map(|(deg, l)| {
            let (f, rest) = trial_factor(&l, 1 << 20);
            debug_assert!(rest.is_one());
            (deg, f)
        })
        .collect()
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// C_ā = binom(n+1+d, n+1) - Σ_{k>=1} (-1)^{k-1} Σ_{|S|=k, ΣS<=d} binom(n+1+d-ΣS, n+1),
/// S running over k-element sub-multisets of positions in ā.
pub fn codim_c(n: u32, d: u32, a: &[u32]) -> BigInt {
    // group equal values; choose c_v of the m_v copies of each value v
    let mut groups: BTreeMap<u32, u32> = BTreeMap::new();
    for &x in a {
        *groups.entry(x).or_default() += 1;
    }
    let groups: Vec<(u32, u32)> = groups.into_iter().collect();
    let n1 = n as i64 + 1;
    let d = d as i64;
    let mut total = binom(n1 + d, n1);
    #[allow(clippy::too_many_arguments)]
    fn rec(
        groups: &[(u32, u32)],
        i: usize,
        size: i64,
        sum: i64,
        mult: BigInt,
        n1: i64,
        d: i64,
        total: &mut BigInt,
    ) {
        if sum > d {
            return;
        }
        if i == groups.len() {
            if size > 0 {
                let term = &mult * binom(n1 + d - sum, n1);
                if size % 2 == 1 {
                    *total -= term;
                } else {
                    *total += term;
                }
            }
            return;
        }
        let (v, m) = groups[i];
        for c in 0..=m as i64 {
            rec(groups, i + 1, size + c, sum + c * v as i64, &mult * binom(m as i64, c), n1, d, total);
        }
    }
    rec(&groups, 0, 0, 0, BigInt::one(), n1, d, &mut total);
    total
}

fn seq(ones: u32, top: u32, tops: u32) -> Vec<u32> {
    let mut v = vec![1; ones as usize];
    v.extend(std::iter::repeat_n(top, tops as usize));
    v
}

/// 2 C_{1^{n/2+1},(d-1)^{n/2+1}} - C_{1^{n-m+1},(d-1)^{m+1}}.
pub fn codim_vz(n: u32, d: u32, m: i64) -> Result<BigInt, HodgeError> {
    if n % 2 == 1 {
        return Err(HodgeError::OddDimension(n));
    }
    let max = n as i64 / 2 - 1;
    if m < -1 || m > max {
        return Err(HodgeError::BadM { m, max });
    }
    let h = n / 2 + 1;
    let first = codim_c(n, d, &seq(h, d - 1, h));
    let second = codim_c(n, d, &seq((n as i64 - m + 1) as u32, d - 1, (m + 1) as u32));
    Ok(BigInt::from(2) * first - second)
}

/// k³/6 + 3k²/2 - 14k/3 + 4.
pub fn cubic_closed_form(k: i64) -> Q {
    let k = Q::from_integer(k.into());
    let c = |a: i64, b: i64| Q::new(a.into(), b.into());
    &k * &k * &k * c(1, 6) + &k * &k * c(3, 2) - &k * c(14, 3) + c(4, 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimRow {
    pub n: u32,
    pub dim_t: BigInt,
    pub min_codim: BigInt,
    pub l: BigInt,
    pub m: BigInt,
}

/// Rows n = 4, 6, ..., 12 for cubics.
pub fn table_repro() -> Vec<CodimRow> {
    (2..=6)
        .map(|k| {
            let n = 2 * k;
            let h = n / 2 + 1;
            CodimRow {
                n,
                dim_t: binom(n as i64 + 2, 3),
                min_codim: binom(h as i64, 3),
                l: codim_c(n, 3, &seq(h, 2, h)),
                m: codim_vz(n, 3, k as i64 - 3).expect("m in range") - 1,
            }
        })
        .collect()
}

/// Roots of x^d + 1 at t = 0: ζ_j = exp(iπ(2j+1)/d).
pub fn unit_roots(d: u32) -> Vec<Complex64> {
    (0..d)
        .map(|j| Complex64::from_polar(1.0, std::f64::consts::PI * (2 * j + 1) as f64 / d as f64))
        .collect()
}

/// f = x^d + 1 + t_1 x^{d-1} + ... + t_d and f′.
fn deformed(d: u32, t: &[f64], x: Complex64) -> (Complex64, Complex64) {
    // coefficients of x^d, x^{d-1}, ..., x^0
    let mut c = vec![1.0; d as usize + 1];
    for (i, ti) in t.iter().enumerate() {
        c[i + 1] = *ti;
    }
    c[d as usize] += 1.0;
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for ci in &c {
        df = df * x + f;
        f = f * x + ci;
    }
    (f, df)
}

fn newton(d: u32, t: &[f64], start: Complex64, branch: usize) -> Result<Complex64, HodgeError> {
    let mut x = start;
    for _ in 0..200 {
        let (f, df) = deformed(d, t, x);
        let step = f / df;
        x -= step;
        if !x.re.is_finite() || !x.im.is_finite() {
            break;
        }
        if step.norm() < 1e-14 {
            if (x - start).norm() < (std::f64::consts::PI / d as f64).sin() {
                return Ok(x);
            }
            break;
        }
    }
    Err(HodgeError::NewtonDivergence(branch))
}

/// Series for x_2^β/f′(x_2) - x_1^β/f′(x_1) at a numeric t, compared with
/// Newton-refined roots; returns |series - direct|.
pub fn balegh_numeric_check(
    d: u32,
    beta: u32,
    branches: (usize, usize),
    trunc: u32,
    t: &[Q],
) -> Result<f64, HodgeError> {
    if beta + 2 > d {
        return Err(HodgeError::BetaOutOfRange(beta));
    }
    if t.len() != d as usize {
        return Err(HodgeError::SampleArity {
            got: t.len(),
            want: d as usize,
        });
    }
    let roots = unit_roots(d);
    let (i1, i2) = branches;
    for i in [i1, i2] {
        if i >= d as usize {
            return Err(HodgeError::BadBranch(i));
        }
    }
    let tf: Vec<f64> = t.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect();
    let (z1, z2) = (roots[i1], roots[i2]);
    let x1 = newton(d, &tf, z1, i1)?;
    let x2 = newton(d, &tf, z2, i2)?;
    let direct = x2.powu(beta) / deformed(d, &tf, x2).1 - x1.powu(beta) / deformed(d, &tf, x1).1;
    let series = balegh_series_eval(d, beta, z1, z2, trunc, &tf)?;
    Ok((series - direct).norm())
}

fn balegh_series_eval(
    d: u32,
    beta: u32,
    z1: Complex64,
    z2: Complex64,
    trunc: u32,
    t: &[f64],
) -> Result<Complex64, HodgeError> {
    let dq = Q::from_integer(d.into());
    let mut sum = Complex64::new(0.0, 0.0);
    for a in bounded_compositions(d as usize, trunc) {
        // a[i-1] is the exponent of t_i
        let weighted: i64 = a.iter().enumerate().map(|(i, &x)| (i as i64 + 1) * x as i64).sum();
        if (beta as i64 + 1 - weighted).rem_euclid(d as i64) == 0 {
            continue;
        }
        let m: i64 = beta as i64 + 1 + a.iter().enumerate().map(|(i, &x)| (d as i64 - i as i64 - 1) * x as i64).sum::<i64>();
        let r1 = Q::from_integer((d as i64 - 1 - beta as i64 + weighted).into()) / &dq;
        let r2 = Q::from_integer(m.into()) / &dq;
        let dd = fractional_bracket(&r1)?.bracket * fractional_bracket(&r2)?.bracket;
        let mbar = m.rem_euclid(d as i64) as u32;
        let pa = (z2.powu(mbar) - z1.powu(mbar)) * (-1.0 / d as f64);
        let mut coeff = dd / Q::from_integer(a_factorial(&a));
        if a.iter().sum::<u32>() % 2 == 1 {
            coeff = -coeff;
        }
        let mut mono = Complex64::new(coeff.to_f64().unwrap_or(f64::NAN), 0.0);
        for (ti, &ai) in t.iter().zip(&a) {
            mono *= ti.powi(ai as i32);
        }
        sum += mono * pa;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn line_set() -> DeformationIndexSet {
        DeformationIndexSet::new(2, 4, vec![vec![1, 1, 1, 1]]).unwrap()
    }

    #[test]
    fn quartic_example() {
        let s = period_series(2, 4, &[0, 0, 0, 0], &line_set(), 3).unwrap();
        assert_eq!(s.coeff(&[1]), int(1));
        assert!(!s.terms.contains_key(&vec![0]));
        assert!(s.all_terms_admissible());
        assert!(quartic_specialization_check(&line_set(), 3).unwrap());
        assert!(matches!(
            period_series(2, 4, &[1, 0, 0, 0], &line_set(), 1),
            Err(HodgeError::NotIntegralK(_))
        ));
        assert!(matches!(
            period_series(2, 4, &[3, 3, 3, 2], &line_set(), 1),
            Err(HodgeError::BetaOutOfRange(3))
        ));
    }

    #[test]
    fn codims() {
        assert_eq!(codim_vz(6, 3, 0).unwrap(), BigInt::from(8));
        assert_eq!(codim_vz(8, 3, 1).unwrap(), BigInt::from(20));
        for k in 3..=12 {
            assert_eq!(Q::from_integer(codim_vz(2 * k, 3, k as i64 - 3).unwrap()), cubic_closed_form(k as i64));
        }
        let t = table_repro();
        let col = |f: fn(&CodimRow) -> &BigInt| t.iter().map(|r| f(r).to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(col(|r| &r.dim_t), vec![20, 56, 120, 220, 364]);
        assert_eq!(col(|r| &r.l), vec![1, 4, 10, 20, 35]);
        assert_eq!(col(|r| &r.min_codim), vec![1, 4, 10, 20, 35]);
        assert_eq!(col(|r| &r.m), vec![1, 7, 19, 38, 65]);
    }

    #[test]
    fn balegh() {
        let zero = vec![int(0); 3];
        assert!(balegh_numeric_check(3, 0, (0, 1), 4, &zero).unwrap() < 1e-12);
        let t = vec![rat(1, 100), int(0), int(0)];
        assert!(balegh_numeric_check(3, 0, (0, 1), 6, &t).unwrap() < 1e-8);
        let t4 = vec![rat(1, 100), rat(-1, 200), rat(1, 300), rat(1, 150)];
        assert!(balegh_numeric_check(4, 1, (0, 2), 6, &t4).unwrap() < 1e-8);
    }
}
