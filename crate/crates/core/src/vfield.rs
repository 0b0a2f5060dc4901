//! Polynomial derivations over Q and F_p: Frobenius powers, p-closedness,
//! first integrals, membership in principal ideals, the Bianchini identity
//! and linearization in characteristic p.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::arith::{
    is_prime, primes_up_to, ArithError, Modulus, QPoly, Residue, Ring, SparsePoly, TruncSeries, Q,
};
use crate::modular::{self, Convention, ModularError};
use crate::par::{map_ordered, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VfError {
    #[error("unknown vector field {0:?}")]
    UnknownName(String),
    #[error("{comps} components for {vars} variables")]
    Arity { vars: usize, comps: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("point has {got} coordinates, expected {want}")]
    PointArity { got: usize, want: usize },
    #[error("point is not p-integral for p = {0}")]
    PointNotIntegral(u64),
    #[error("v^p differs from v within the truncation")]
    NotIdempotent,
    #[error("linear part is not admissible: {0}")]
    BadLinearPart(String),
    #[error("eigenvalue must be a nonzero residue")]
    ZeroEigenvalue,
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

/// A derivation v given by its values on the coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation<C: Ring> {
    vars: Vec<String>,
    comps: Vec<SparsePoly<C>>,
}

impl<C: Ring> Derivation<C> {
    pub fn new(vars: Vec<String>, comps: Vec<SparsePoly<C>>) -> Result<Self, VfError> {
        if vars.len() != comps.len() || comps.iter().any(|c| c.nvars() != vars.len()) {
            return Err(VfError::Arity {
                vars: vars.len(),
                comps: comps.len(),
            });
        }
        Ok(Derivation { vars, comps })
    }

    /// Default variable names x1..xn.
    pub fn from_components(comps: Vec<SparsePoly<C>>) -> Result<Self, VfError> {
        let vars = (1..=comps.len()).map(|i| format!("x{i}")).collect();
        Self::new(vars, comps)
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn components(&self) -> &[SparsePoly<C>] {
        &self.comps
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// v(f) = sum_i v_i df/dx_i.
    pub fn apply(&self, f: &SparsePoly<C>) -> SparsePoly<C> {
        let mut acc = SparsePoly::zero(f.nvars(), f.ctx());
        for (i, vi) in self.comps.iter().enumerate() {
            let d = f.derivative(i);
            if !d.is_zero() && !vi.is_zero() {
                acc = acc.add(&d.mul(vi));
            }
        }
        acc
    }

    /// v applied to a truncated series; exact to the series order when v has
    /// no constant term.
    pub fn apply_series(&self, f: &TruncSeries<C>) -> TruncSeries<C> {
        let mut acc = TruncSeries::zero(f.nvars(), f.ctx(), f.order());
        for (i, vi) in self.comps.iter().enumerate() {
            acc = acc.add(&f.derivative_keep(i).mul_poly(vi));
        }
        acc
    }

    /// Components v^k(x_i). Only a derivation when k is the characteristic.
    pub fn iterate(&self, k: u64) -> Vec<SparsePoly<C>> {
        let n = self.nvars();
        let ctx = self.comps.first().map(|c| c.ctx().clone());
        (0..n)
            .map(|i| {
                let Some(ctx) = &ctx else { unreachable!() };
                let mut f = SparsePoly::var(i, n, ctx);
                for _ in 0..k {
                    f = self.apply(&f);
                    if f.is_zero() {
                        break;
                    }
                }
                f
            })
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        Derivation {
            vars: self.vars.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Derivation {
            vars: self.vars.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    /// f·v.
    pub fn scale(&self, f: &SparsePoly<C>) -> Self {
        Derivation {
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// [v, w](x_i) = v(w_i) - w(v_i).
    pub fn bracket(&self, o: &Self) -> Self {
        Derivation {
            vars: self.vars.clone(),
            comps: (0..self.nvars())
                .map(|i| self.apply(&o.comps[i]).sub(&o.apply(&self.comps[i])))
                .collect(),
        }
    }

    /// Field on the product of the two coordinate spaces acting by v on the
    /// first factor and by o on the second.
    pub fn product(&self, o: &Self) -> Self {
        let n = self.nvars() + o.nvars();
        let left: Vec<usize> = (0..self.nvars()).collect();
        let right: Vec<usize> = (self.nvars()..n).collect();
        let mut comps: Vec<_> = self.comps.iter().map(|c| c.embed(n, &left)).collect();
        comps.extend(o.comps.iter().map(|c| c.embed(n, &right)));
        let mut vars = self.vars.clone();
        vars.extend(o.vars.iter().map(|v| format!("{v}'")));
        Derivation { vars, comps }
    }

    /// The same field with its coefficients thought of in n variables via
    /// the coordinate embedding `map`.
    pub fn embed(&self, n: usize, map: &[usize]) -> Self {
        let ctx = self.comps[0].ctx().clone();
        let mut comps = vec![SparsePoly::zero(n, &ctx); n];
        for (i, c) in self.comps.iter().enumerate() {
            comps[map[i]] = c.embed(n, map);
        }
        let vars = (1..=n).map(|i| format!("x{i}")).collect();
        Derivation { vars, comps }
    }
}

impl<C: Ring> fmt::Display for Derivation<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.var_names();
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c.fmt_with(&names))?;
        }
        Ok(())
    }
}

impl Derivation<Q> {
    /// LCM of all coefficient denominators.
    pub fn denominators(&self) -> BigInt {
        self.comps
            .iter()
            .flat_map(|c| c.terms().iter().map(|(_, q)| q.denom().clone()))
            .fold(BigInt::one(), |a, d| a.lcm(&d))
    }

    pub fn is_ring_prime(&self, p: u64) -> bool {
        (self.denominators() % BigInt::from(p)) == BigInt::from(0)
    }

    pub fn reduce(&self, m: Modulus) -> Result<Derivation<Residue>, VfError> {
        Ok(Derivation {
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|c| c.reduce(m)).collect::<Result<_, _>>()?,
        })
    }

    pub fn fmt_rational(&self) -> Vec<String> {
        let names = self.var_names();
        self.comps.iter().map(|c| c.fmt_rational_with(&names)).collect()
    }
}

/// Catalog fields by name. `params` overrides the Lorenz parameters
/// sigma, rho, beta (defaults 10, 28, 8/3).
pub fn catalog(name: &str, params: &BTreeMap<String, Q>) -> Result<Derivation<Q>, VfError> {
    let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let c = |n: i64, d: i64| Q::new(n.into(), d.into());
    match name {
        "ramanujan-a" => Derivation::new(
            names(&["t1", "t2", "t3"]),
            modular::ramanujan_field(Convention::A).to_vec(),
        ),
        "ramanujan-e" => Derivation::new(
            names(&["t1", "t2", "t3"]),
            modular::ramanujan_field(Convention::E).to_vec(),
        ),
        "lorenz" => {
            let get = |k: &str, d: Q| params.get(k).cloned().unwrap_or(d);
            let (s, r, b) = (get("sigma", c(10, 1)), get("rho", c(28, 1)), get("beta", c(8, 3)));
            let v = |i| QPoly::var(i, 3, &());
            let k = |q: &Q| QPoly::constant(q.clone(), 3);
            Derivation::new(
                names(&["x", "y", "z"]),
                vec![
                    v(1).sub(&v(0)).scale(&s),
                    v(0).mul(&k(&r).sub(&v(2))).sub(&v(1)),
                    v(0).mul(&v(1)).sub(&v(2).scale(&b)),
                ],
            )
        }
        "modular4" => {
            let v = |i| QPoly::var(i, 4, &());
            let half = |a: usize, b: usize, sa: usize| {
                // 2a - 6b + (1/6)(a - sa) a  and  3b - (1/3)a^2 + (1/4)(a - sa) b
                let d = v(a).sub(&v(sa));
                let first = v(a)
                    .scale(&c(2, 1))
                    .sub(&v(b).scale(&c(6, 1)))
                    .add(&d.mul(&v(a)).scale(&c(1, 6)));
                let second = v(b)
                    .scale(&c(3, 1))
                    .sub(&v(a).pow(2).scale(&c(1, 3)))
                    .add(&d.mul(&v(b)).scale(&c(1, 4)));
                (first, second)
            };
            let (x2, x3) = half(0, 1, 2);
            let (y2, y3) = half(2, 3, 0);
            Derivation::new(names(&["x2", "x3", "y2", "y3"]), vec![x2, x3, y2.neg(), y3.neg()])
        }
        "limitcycle" => {
            let v = |i| QPoly::var(i, 2, &());
            Derivation::new(
                names(&["x", "y"]),
                vec![
                    v(1).scale(&c(2, 1)).add(&v(0).pow(2).scale(&c(1, 2))),
                    v(0)
                        .pow(2)
                        .scale(&c(3, 1))
                        .sub(&QPoly::constant(c(3, 1), 2))
                        .add(&v(1).scale(&c(9, 10))),
                ],
            )
        }
        other => Err(VfError::UnknownName(other.to_string())),
    }
}

pub const CATALOG: &[&str] = &["ramanujan-a", "ramanujan-e", "lorenz", "modular4", "limitcycle"];

/// v^p for a derivation over F_p, by p-fold application to each coordinate.
pub fn frobenius_power(v: &Derivation<Residue>, p: u64) -> Derivation<Residue> {
    Derivation {
        vars: v.vars.clone(),
        comps: v.iterate(p),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Collinearity {
    RingPrime,
    /// v^p and v are collinear (p-closed).
    Collinear,
    NotCollinear,
}

impl Collinearity {
    pub fn as_str(self) -> &'static str {
        match self {
            Collinearity::RingPrime => "ring",
            Collinearity::Collinear => "collinear",
            Collinearity::NotCollinear => "not-collinear",
        }
    }
}

impl fmt::Display for Collinearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Nonzero minor v_i w_j - v_j w_i (a constant when evaluated at a point).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub minor: SparsePoly<Residue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollinearityReport {
    pub p: u64,
    pub class: Collinearity,
    pub witness: Option<Witness>,
}

/// All coordinate minors v_i w_j - v_j w_i, i < j.
pub fn minors<C: Ring>(v: &Derivation<C>, w: &Derivation<C>) -> Vec<(usize, usize, SparsePoly<C>)> {
    let n = v.nvars();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = v.comps[i].mul(&w.comps[j]).sub(&v.comps[j].mul(&w.comps[i]));
            out.push((i, j, m));
        }
    }
    out
}

/// Collinearity of v and v^p mod p, identically or at a rational point.
pub fn is_pclosed(v: &Derivation<Q>, p: u64, point: Option<&[Q]>) -> Result<CollinearityReport, VfError> {
    if !is_prime(p) {
        return Err(VfError::NotPrime(p));
    }
    if let Some(pt) = point {
        if pt.len() != v.nvars() {
            return Err(VfError::PointArity {
                got: pt.len(),
                want: v.nvars(),
            });
        }
    }
    let ring = CollinearityReport {
        p,
        class: Collinearity::RingPrime,
        witness: None,
    };
    if v.is_ring_prime(p) {
        return Ok(ring);
    }
    let m = Modulus::prime(p)?;
    let vp = v.reduce(m)?;
    let w = frobenius_power(&vp, p);
    let pt: Option<Vec<Residue>> = match point {
        Some(pt) => Some(
            pt.iter()
                .map(|x| m.reduce(x).ok_or(VfError::PointNotIntegral(p)))
                .collect::<Result<_, _>>()?,
        ),
        None => None,
    };
    for (i, j, minor) in minors(&vp, &w) {
        let minor = match &pt {
            Some(pt) => SparsePoly::constant(minor.eval(pt), v.nvars()),
            None => minor,
        };
        if !minor.is_zero() {
            return Ok(CollinearityReport {
                p,
                class: Collinearity::NotCollinear,
                witness: Some(Witness { i, j, minor }),
            });
        }
    }
    Ok(CollinearityReport {
        p,
        class: Collinearity::Collinear,
        witness: None,
    })
}

/// One report per prime p <= pmax.
pub fn pclosed_scan(v: &Derivation<Q>, pmax: u64, schedule: Schedule) -> Result<Vec<CollinearityReport>, VfError> {
    let primes = primes_up_to(pmax);
    map_ordered(schedule, &primes, |&p| is_pclosed(v, p, None))
        .into_iter()
        .collect()
}

/// v(f) == 0.
pub fn first_integral_check(v: &Derivation<Residue>, f: &SparsePoly<Residue>) -> bool {
    v.apply(f).is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership<C: Ring> {
    Divisible(SparsePoly<C>),
    Remainder(SparsePoly<C>),
}

impl<C: Ring> Membership<C> {
    pub fn is_divisible(&self) -> bool {
        matches!(self, Membership::Divisible(_))
    }
}

/// Substitutes each (variable, replacement) in turn, then divides by g.
pub fn reduce_by_principal<C: Ring>(
    f: &SparsePoly<C>,
    eliminations: &[(usize, SparsePoly<C>)],
    g: &SparsePoly<C>,
) -> Result<Membership<C>, VfError> {
    let mut h = f.clone();
    for (var, rep) in eliminations {
        h = h.substitute(*var, rep);
    }
    let (q, r) = h.div_rem(g)?;
    Ok(if r.is_zero() {
        Membership::Divisible(q)
    } else {
        Membership::Remainder(r)
    })
}

/// A and B mod p embedded in (t1, t2, t3), depending only on t2, t3.
pub fn ab_mod_p(p: u64, substituted: bool) -> Result<(SparsePoly<Residue>, SparsePoly<Residue>), VfError> {
    let (a, b) = if substituted {
        modular::ab_polynomials(p)?
    } else {
        modular::ab_isobaric(p)?
    };
    let m = Modulus::prime(p)?;
    Ok((a.embed(3, &[1, 2]).reduce(m)?, b.embed(3, &[1, 2]).reduce(m)?))
}

/// Variable index and its replacement.
pub type Elimination = (usize, SparsePoly<Residue>);

/// The ideal <A - 1, B + 12 t1> mod p as (elimination t1 -> -B/12, A - 1).
pub fn lopes_ideal(p: u64) -> Result<(Elimination, SparsePoly<Residue>), VfError> {
    let (a, b) = ab_mod_p(p, true)?;
    let m = Modulus::prime(p)?;
    let inv12 = m.residue(12).inv().ok_or(VfError::NotPrime(p))?;
    let elim = (0, b.scale(&inv12).neg());
    Ok((elim, a.sub(&SparsePoly::one(3, &m))))
}

/// v^p = A² v + (B/12 + t1 A)² ∂/∂t1 - A (B/12 + t1 A) h for the
/// a-convention Ramanujan field, h the weighted Euler field. The same
/// identity with both signs flipped holds for -v.
pub fn bianchini_check(p: u64) -> Result<bool, VfError> {
    if p < 5 || !is_prime(p) {
        return Err(VfError::NotPrime(p));
    }
    let m = Modulus::prime(p)?;
    let v = catalog("ramanujan-a", &BTreeMap::new())?.reduce(m)?;
    let vp = frobenius_power(&v, p);
    let (a, b) = ab_mod_p(p, true)?;
    let t = |i| SparsePoly::var(i, 3, &m);
    let inv12 = m.residue(12).inv().unwrap();
    let c = b.scale(&inv12).add(&t(0).mul(&a));
    let a2 = a.mul(&a);
    let ac = a.mul(&c);
    let c2 = c.mul(&c);
    for i in 0..3 {
        let h = t(i).scale(&m.residue(2 * (i as i64 + 1)));
        let mut rhs = a2.mul(&v.comps[i]).sub(&ac.mul(&h));
        if i == 0 {
            rhs = rhs.add(&c2);
        }
        if rhs != vp.comps[i] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first integral B - t1 A of the Eisenstein-normalised field mod p.
pub fn ramanujan_first_integral(p: u64) -> Result<SparsePoly<Residue>, VfError> {
    let (a, b) = ab_mod_p(p, false)?;
    let m = Modulus::prime(p)?;
    Ok(b.sub(&SparsePoly::var(0, 3, &m).mul(&a)))
}

/// Coordinate f = q + O(q²) with v(f) = λ f for v = a(q) d/dq over F_p.
pub fn linearize_1d(a: &TruncSeries<Residue>, lambda: Residue, order: u32) -> Result<TruncSeries<Residue>, VfError> {
    if lambda.is_zero() {
        return Err(VfError::ZeroEigenvalue);
    }
    let m = lambda.modulus();
    let p = m.p();
    let a = a.truncate(order);
    if !a.coeff(&[0]).is_zero() || a.coeff(&[1]) != lambda {
        return Err(VfError::BadLinearPart(format!("a must be {}q + O(q^2)", lambda.signed())));
    }
    let v = Derivation::from_components(vec![a.poly().clone()])?;
    let q = TruncSeries::var(0, 1, &m, order);
    let mut it = q.clone();
    for _ in 0..p {
        it = v.apply_series(&it);
    }
    if it != a {
        return Err(VfError::NotIdempotent);
    }
    let linv = lambda.inv().ok_or(VfError::ZeroEigenvalue)?;
    let mut acc = TruncSeries::zero(1, &m, order);
    let mut cur = q;
    for _ in 1..p {
        cur = v.apply_series(&cur).scale(&linv);
        acc = acc.add(&cur);
    }
    let f = acc.neg();
    debug_assert!(v.apply_series(&f) == f.scale(&lambda));
    Ok(f)
}

/// Linearizing coordinates f with v(f) = A f and linear part the identity,
/// for v over F_p with linear part A x and A^{p-1} = I.
pub fn linearize_nd(
    v: &Derivation<Residue>,
    a: &[Vec<Residue>],
    order: u32,
) -> Result<Vec<TruncSeries<Residue>>, VfError> {
    let n = v.nvars();
    let m = *v.comps[0].ctx();
    let p = m.p();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(VfError::BadLinearPart("matrix shape".into()));
    }
    let matmul = |x: &[Vec<Residue>], y: &[Vec<Residue>]| -> Vec<Vec<Residue>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).fold(Residue::zero(&m), |s, k| s.add(&x[i][k].mul(&y[k][j]))))
                    .collect()
            })
            .collect()
    };
    let id: Vec<Vec<Residue>> = (0..n)
        .map(|i| (0..n).map(|j| m.residue((i == j) as i64)).collect())
        .collect();
    let mut pw = id.clone();
    for _ in 0..p - 1 {
        pw = matmul(&pw, a);
    }
    if pw != id {
        return Err(VfError::BadLinearPart("A^(p-1) != I".into()));
    }
    for (i, c) in v.comps.iter().enumerate() {
        if !c.constant_term().is_zero() {
            return Err(VfError::BadLinearPart("nonzero constant term".into()));
        }
        for j in 0..n {
            let mut e = vec![0u32; n];
            e[j] = 1;
            if c.coeff(&e) != a[i][j] {
                return Err(VfError::BadLinearPart(format!("component {i} has wrong linear part")));
            }
        }
    }
    // iterates[k][i] = v^k(x_i)
    let mut iterates: Vec<Vec<TruncSeries<Residue>>> = vec![(0..n).map(|i| TruncSeries::var(i, n, &m, order)).collect()];
    for k in 1..=p as usize {
        let next = iterates[k - 1].iter().map(|s| v.apply_series(s)).collect();
        iterates.push(next);
    }
    if iterates[p as usize] != iterates[1] {
        return Err(VfError::NotIdempotent);
    }
    let apply_mat = |mat: &[Vec<Residue>], vec: &[TruncSeries<Residue>]| -> Vec<TruncSeries<Residue>> {
        (0..n)
            .map(|i| {
                (0..n).fold(TruncSeries::zero(n, &m, order), |s, j| s.add(&vec[j].scale(&mat[i][j])))
            })
            .collect()
    };
    let mut acc: Vec<TruncSeries<Residue>> = (0..n).map(|_| TruncSeries::zero(n, &m, order)).collect();
    let mut ak = id;
    for k in 0..=(p as usize - 2) {
        let term = apply_mat(&ak, &iterates[p as usize - 1 - k]);
        acc = acc.iter().zip(&term).map(|(x, y)| x.add(y)).collect();
        ak = matmul(&ak, a);
    }
    let f: Vec<_> = acc.iter().map(|s| s.neg()).collect();
    let vf: Vec<_> = f.iter().map(|s| v.apply_series(s)).collect();
    if vf != apply_mat(a, &f) {
        return Err(VfError::NotIdempotent);
    }
    Ok(f)
}

/// Weighted degrees of the components of v^p for the Ramanujan fields, or
/// None when a component is not weighted homogeneous.
pub fn weighted_degrees(comps: &[SparsePoly<Residue>], w: &[u32]) -> Vec<Option<u64>> {
    comps
        .iter()
        .map(|c| {
            let mut degs = c.terms().iter().map(|(m, _)| m.weighted_degree(w));
            let first = degs.next()?;
            degs.all(|d| d == first).then_some(first)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn no_params() -> BTreeMap<String, Q> {
        BTreeMap::new()
    }

    #[test]
    fn trivial_powers() {
        let m = Modulus::prime(5).unwrap();
        let d = Derivation::from_components(vec![SparsePoly::one(1, &m)]).unwrap();
        assert!(frobenius_power(&d, 5).is_zero());
        let e = Derivation::from_components(vec![SparsePoly::var(0, 1, &m)]).unwrap();
        assert_eq!(frobenius_power(&e, 5), e);
    }

    #[test]
    fn catalog_shapes() {
        let e = catalog("ramanujan-e", &no_params()).unwrap();
        assert_eq!(e.fmt_rational()[0], "1/12*t1^2 - 1/12*t2");
        let l = catalog("lorenz", &no_params()).unwrap();
        assert_eq!(l.denominators(), BigInt::from(3));
        let c = catalog("limitcycle", &no_params()).unwrap();
        assert_eq!(c.denominators(), BigInt::from(10));
        let m4 = catalog("modular4", &no_params()).unwrap();
        assert_eq!(m4.denominators(), BigInt::from(12));
        assert!(matches!(catalog("nope", &no_params()), Err(VfError::UnknownName(_))));
    }

    #[test]
    fn small_pclosed() {
        let e = catalog("ramanujan-e", &no_params()).unwrap();
        let r = is_pclosed(&e, 7, None).unwrap();
        assert_eq!(r.class, Collinearity::NotCollinear);
        assert!(r.witness.is_some());
        let c = catalog("limitcycle", &no_params()).unwrap();
        assert_eq!(is_pclosed(&c, 3, None).unwrap().class, Collinearity::Collinear);
        assert_eq!(is_pclosed(&c, 7, None).unwrap().class, Collinearity::NotCollinear);
        let l = catalog("lorenz", &no_params()).unwrap();
        assert_eq!(is_pclosed(&l, 3, None).unwrap().class, Collinearity::RingPrime);
        let at = is_pclosed(&e, 7, Some(&[rat(1, 1), rat(2, 1), rat(5, 1)])).unwrap();
        assert_ne!(at.class, Collinearity::RingPrime);
    }

    #[test]
    fn first_integrals_and_bianchini() {
        for p in [5, 7] {
            let m = Modulus::prime(p).unwrap();
            let v = catalog("ramanujan-e", &no_params()).unwrap().reduce(m).unwrap();
            assert!(first_integral_check(&v, &ramanujan_first_integral(p).unwrap()));
            assert!(!first_integral_check(&v, &SparsePoly::var(0, 3, &m)));
            assert!(bianchini_check(p).unwrap());
        }
    }

    #[test]
    fn lopes_membership() {
        let p = 5;
        let m = Modulus::prime(p).unwrap();
        let (elim, g) = lopes_ideal(p).unwrap();
        let v = catalog("ramanujan-a", &no_params()).unwrap().reduce(m).unwrap();
        let vp = frobenius_power(&v, p);
        for i in 0..3 {
            let f = vp.components()[i].sub(&v.components()[i]);
            assert!(reduce_by_principal(&f, std::slice::from_ref(&elim), &g).unwrap().is_divisible());
        }
        let t2 = SparsePoly::var(1, 3, &m);
        assert!(!reduce_by_principal(&t2, &[elim], &g).unwrap().is_divisible());
    }

    #[test]
    fn linearize_examples() {
        let m = Modulus::prime(5).unwrap();
        let one = m.residue(1);
        let q = TruncSeries::var(0, 1, &m, 8);
        assert_eq!(linearize_1d(&q, one, 8).unwrap(), q);
        let a = q.add(&q.mul(&q));
        let f = linearize_1d(&a, one, 8).unwrap();
        assert_eq!(f.coeff(&[1]), one);
        assert!(matches!(
            linearize_1d(&q.mul(&q), m.residue(0), 8),
            Err(VfError::ZeroEigenvalue)
        ));

        // (X - 3Y^2) d/dX - Y d/dY is conjugate to diag(1, -1).
        let x = SparsePoly::var(0, 2, &m);
        let y = SparsePoly::var(1, 2, &m);
        let v = Derivation::from_components(vec![x.sub(&y.mul(&y).scale(&m.residue(3))), y.neg()]).unwrap();
        let a = vec![vec![m.residue(1), m.residue(0)], vec![m.residue(0), m.residue(-1)]];
        let f = linearize_nd(&v, &a, 6).unwrap();
        assert_eq!(f[0].poly(), &x.sub(&y.mul(&y)));
        assert_eq!(f[1].poly(), &y);
        let bad = vec![vec![m.residue(1), m.residue(0)], vec![m.residue(0), m.residue(0)]];
        assert!(matches!(linearize_nd(&v, &bad, 6), Err(VfError::BadLinearPart(_))));
    }
}
