use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::scalar::{fmt_rational, Modulus, Residue, Ring};
use super::ArithError;

/// Exponent vector, ordered by total degree and then lexicographically
/// with the first variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(SmallVec<[u32; 4]>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(SmallVec::from_elem(0, nvars))
    }

    pub fn from_exps(e: &[u32]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }

    pub fn var(i: usize, nvars: usize) -> Self {
        let mut m = Self::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, w: &[u32]) -> u64 {
        self.0.iter().zip(w).map(|(&e, &w)| e as u64 * w as u64).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    /// o / self, assuming `self.divides(o)`.
    pub fn quotient_of(&self, o: &Self) -> Self {
        Monomial(o.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse multivariate polynomial. Terms are kept in strictly decreasing
/// monomial order with no zero coefficients, so equality is structural.
/// Weights are advisory and ignored by equality.
#[derive(Clone, Debug)]
pub struct SparsePoly<C: Ring> {
    nvars: usize,
    ctx: C::Ctx,
    weights: Option<Vec<u32>>,
    terms: Vec<(Monomial, C)>,
}

impl<C: Ring> SparsePoly<C> {
    pub fn zero(nvars: usize, ctx: &C::Ctx) -> Self {
        SparsePoly {
            nvars,
            ctx: ctx.clone(),
            weights: None,
            terms: Vec::new(),
        }
    }

    pub fn constant(c: C, nvars: usize) -> Self {
        let ctx = c.ctx();
        Self::from_terms(nvars, &ctx, [(Monomial::one(nvars), c)])
    }

    pub fn one(nvars: usize, ctx: &C::Ctx) -> Self {
        Self::constant(C::one(ctx), nvars)
    }

    pub fn from_i64(n: i64, nvars: usize, ctx: &C::Ctx) -> Self {
        Self::constant(C::from_i64(n, ctx), nvars)
    }

    pub fn var(i: usize, nvars: usize, ctx: &C::Ctx) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::from_terms(nvars, ctx, [(Monomial::var(i, nvars), C::one(ctx))])
    }

    pub fn monomial(c: C, exps: &[u32]) -> Self {
        let ctx = c.ctx();
        Self::from_terms(exps.len(), &ctx, [(Monomial::from_exps(exps), c)])
    }

    /// Builds a polynomial, merging repeated monomials and dropping zeros.
    pub fn from_terms(
        nvars: usize,
        ctx: &C::Ctx,
        terms: impl IntoIterator<Item = (Monomial, C)>,
    ) -> Self {
        let mut map: FxHashMap<Monomial, C> = FxHashMap::default();
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity mismatch");
            match map.get_mut(&m) {
                Some(v) => v.add_assign(&c),
                None => {
                    map.insert(m, c);
                }
            }
        }
        Self::from_map(nvars, ctx, map)
    }

    fn from_map(nvars: usize, ctx: &C::Ctx, map: FxHashMap<Monomial, C>) -> Self {
        let mut terms: Vec<(Monomial, C)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        SparsePoly {
            nvars,
            ctx: ctx.clone(),
            weights: None,
            terms,
        }
    }

    /// Attaches variable weights used by the homogeneity helpers.
    pub fn with_weights(mut self, w: &[u32]) -> Self {
        assert_eq!(w.len(), self.nvars, "weight arity mismatch");
        self.weights = Some(w.to_vec());
        self
    }

    pub fn weights(&self) -> Option<&[u32]> {
        self.weights.as_deref()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.0[var]).max()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        let m = Monomial::from_exps(exps);
        self.terms
            .binary_search_by(|(t, _)| m.cmp(t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| C::zero(&self.ctx))
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.degree() == 0)
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.nvars, o.nvars, "polynomial arity mismatch");
    }

    fn rebuild(&self, terms: Vec<(Monomial, C)>) -> Self {
        SparsePoly {
            nvars: self.nvars,
            ctx: self.ctx.clone(),
            weights: self.weights.clone(),
            terms,
        }
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        self.check(o);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate { cb.neg() } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca.sub(cb) } else { ca.add(cb) };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            o.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { c.neg() } else { c.clone() })),
        );
        let mut r = self.rebuild(out);
        if r.weights.is_none() {
            r.weights = o.weights.clone();
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    pub fn neg(&self) -> Self {
        self.rebuild(self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect())
    }

    pub fn scale(&self, s: &C) -> Self {
        if s.is_zero() {
            return self.rebuild(Vec::new());
        }
        self.rebuild(
            self.terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul(s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }

    pub fn mul_term(&self, mono: &Monomial, s: &C) -> Self {
        self.rebuild(
            self.terms
                .iter()
                .map(|(m, c)| (m.mul(mono), c.mul(s)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.mul_filtered(o, |_| true)
    }

    /// Product keeping only monomials accepted by `keep`.
    pub(crate) fn mul_filtered(&self, o: &Self, keep: impl Fn(&Monomial) -> bool) -> Self {
        self.check(o);
        if self.is_zero() || o.is_zero() {
            return self.rebuild(Vec::new());
        }
        if o.terms.len() == 1 {
            let (m, c) = &o.terms[0];
            let mut r = self.mul_term(m, c);
            r.terms.retain(|(m, _)| keep(m));
            return r;
        }
        let mut map: FxHashMap<Monomial, C> =
            FxHashMap::with_capacity_and_hasher(self.terms.len() + o.terms.len(), Default::default());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                if !keep(&m) {
                    continue;
                }
                let c = ca.mul(cb);
                match map.get_mut(&m) {
                    Some(v) => v.add_assign(&c),
                    None => {
                        map.insert(m, c);
                    }
                }
            }
        }
        let mut r = Self::from_map(self.nvars, &self.ctx, map);
        r.weights = self.weights.clone().or_else(|| o.weights.clone());
        r
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars, &self.ctx);
        acc.weights = self.weights.clone();
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

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .filter_map(|(m, c)| {
                let e = m.0[var];
                let mut m2 = m.clone();
                m2.0[var] -= 1;
                let c2 = c.mul_i64(e as i64);
                (!c2.is_zero()).then_some((m2, c2))
            })
            .collect::<Vec<_>>();
        // Lowering one exponent preserves the relative order of survivors.
        self.rebuild(terms)
    }

    /// Replaces variable `var` by the polynomial `g` (same arity).
    pub fn substitute(&self, var: usize, g: &Self) -> Self {
        self.check(g);
        let maxe = self.degree_in(var).unwrap_or(0) as usize;
        let mut powers = vec![Self::one(self.nvars, &self.ctx)];
        for i in 1..=maxe {
            let next = powers[i - 1].mul(g);
            powers.push(next);
        }
        let mut out = Self::zero(self.nvars, &self.ctx);
        let mut groups: FxHashMap<u32, Vec<(Monomial, C)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2.0[var], 0);
            groups.entry(e).or_default().push((m2, c.clone()));
        }
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort_unstable();
        for e in keys {
            let part = Self::from_terms(self.nvars, &self.ctx, groups.remove(&e).unwrap());
            out = out.add(&part.mul(&powers[e as usize]));
        }
        out.weights = self.weights.clone();
        out
    }

    /// Simultaneous substitution of every variable: x_i -> images[i].
    /// The images may live in a different number of variables.
    pub fn compose(&self, images: &[SparsePoly<C>]) -> SparsePoly<C> {
        assert_eq!(images.len(), self.nvars, "compose arity mismatch");
        let target = images.first().map(|g| g.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<SparsePoly<C>>> = images
            .iter()
            .map(|g| vec![SparsePoly::one(g.nvars, &self.ctx), g.clone()])
            .collect();
        let mut out = SparsePoly::zero(target, &self.ctx);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(c.clone(), target);
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                t = t.mul(&cache[i][e as usize]);
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluates at a point given for every variable.
    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars, "evaluation arity mismatch");
        let mut acc = C::zero(&self.ctx);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t = t.mul(&x.pow(e as u64));
                }
            }
            acc.add_assign(&t);
        }
        acc
    }

    /// Changes the variable set: variable i of `self` becomes `map[i]` of a
    /// polynomial in `nvars` variables.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars, "embedding arity mismatch");
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = Monomial::one(nvars);
            for (i, &x) in m.0.iter().enumerate() {
                e.0[map[i]] += x;
            }
            (e, c.clone())
        });
        Self::from_terms(nvars, &self.ctx, terms)
    }

    pub fn map_coeffs<D: Ring>(&self, ctx: &D::Ctx, f: impl Fn(&C) -> D) -> SparsePoly<D> {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), f(c)));
        let mut r = SparsePoly::from_terms(self.nvars, ctx, terms);
        r.weights = self.weights.clone();
        r
    }

    pub fn try_map_coeffs<D: Ring, E>(
        &self,
        ctx: &D::Ctx,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<SparsePoly<D>, E> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c)?));
        }
        let mut r = SparsePoly::from_terms(self.nvars, ctx, terms);
        r.weights = self.weights.clone();
        Ok(r)
    }

    /// Weighted degree of every term if they agree, using attached weights.
    pub fn weighted_homogeneous_degree(&self) -> Result<Option<u64>, ArithError> {
        let w = self.weights.as_ref().ok_or(ArithError::MissingWeights)?;
        let mut deg = None;
        for (m, _) in &self.terms {
            let d = m.weighted_degree(w);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(ArithError::NotHomogeneous),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Checks weighted homogeneity of the given degree. The zero polynomial
    /// is homogeneous of every degree.
    pub fn is_weighted_homogeneous(&self, w: &[u32], degree: u64) -> bool {
        self.terms.iter().all(|(m, _)| m.weighted_degree(w) == degree)
    }

    /// Univariate coefficient list [c_0, c_1, ...] with respect to `var`,
    /// each coefficient a polynomial in the remaining variables (same arity).
    pub fn coefficients_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var).unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = std::mem::replace(&mut m2.0[var], 0);
            buckets[e as usize].push((m2, c.clone()));
        }
        buckets
            .into_iter()
            .map(|t| {
                let mut p = Self::from_terms(self.nvars, &self.ctx, t);
                p.weights = self.weights.clone();
                p
            })
            .collect()
    }

    /// Division with remainder by a single divisor in the monomial order.
    /// Returns (q, r) with self = q g + r and no term of r divisible by lt(g).
    pub fn div_rem(&self, g: &Self) -> Result<(Self, Self), ArithError> {
        self.check(g);
        let (lm, lc) = g.leading().ok_or(ArithError::DivisionByZeroPoly)?.clone();
        let lc_inv = lc.inv().ok_or(ArithError::NonInvertibleLeadingCoeff)?;
        let mut rem = self.clone();
        let mut q = Vec::new();
        let mut r = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = c.mul(&lc_inv);
                rem = rem.sub(&g.mul_term(&qm, &qc));
                q.push((qm, qc));
            } else {
                rem.terms.remove(0);
                r.push((m, c));
            }
        }
        Ok((
            Self::from_terms(self.nvars, &self.ctx, q),
            Self::from_terms(self.nvars, &self.ctx, r),
        ))
    }

    /// Exact quotient self / g, failing with the remainder when not exact.
    pub fn divide_exact(&self, g: &Self) -> Result<Self, ArithError> {
        let (q, r) = self.div_rem(g)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(ArithError::NotDivisible {
                remainder: r.to_string(),
            })
        }
    }

    pub fn fmt_with(&self, names: &[&str]) -> String {
        fmt_terms(&self.terms, names, |c| c.to_string())
    }
}

impl SparsePoly<BigRational> {
    /// Reduction of every coefficient into Z/p^k.
    pub fn reduce(&self, m: Modulus) -> Result<SparsePoly<Residue>, ArithError> {
        self.try_map_coeffs(&m, |c| {
            m.reduce(c).ok_or_else(|| ArithError::DenominatorNotUnit {
                value: fmt_rational(c),
                p: m.p(),
            })
        })
    }

    pub fn fmt_rational_with(&self, names: &[&str]) -> String {
        fmt_terms(&self.terms, names, fmt_rational)
    }
}

fn fmt_terms<C: Ring>(terms: &[(Monomial, C)], names: &[&str], coeff: impl Fn(&C) -> String) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (m, c)) in terms.iter().enumerate() {
        let mut cs = coeff(c);
        let neg = cs.starts_with('-');
        if neg {
            cs.remove(0);
        }
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let vars: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, &e)| {
                let n = names.get(j).map(|s| s.to_string()).unwrap_or_else(|| format!("x{j}"));
                if e == 1 {
                    n
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        if vars.is_empty() {
            s.push_str(&cs);
        } else if cs == "1" {
            s.push_str(&vars.join("*"));
        } else {
            s.push_str(&cs);
            s.push('*');
            s.push_str(&vars.join("*"));
        }
    }
    s
}

impl<C: Ring> PartialEq for SparsePoly<C> {
    fn eq(&self, o: &Self) -> bool {
        self.nvars == o.nvars && self.terms == o.terms
    }
}

impl<C: Ring> Eq for SparsePoly<C> {}

impl<C: Ring> std::hash::Hash for SparsePoly<C> {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.nvars.hash(h);
        self.terms.hash(h);
    }
}

impl<C: Ring> fmt::Display for SparsePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_terms(&self.terms, &[], |c| c.to_string()))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<C: Ring> std::ops::$tr<&SparsePoly<C>> for &SparsePoly<C> {
            type Output = SparsePoly<C>;
            fn $m(self, o: &SparsePoly<C>) -> SparsePoly<C> {
                SparsePoly::$m(self, o)
            }
        }
        impl<C: Ring> std::ops::$tr<SparsePoly<C>> for SparsePoly<C> {
            type Output = SparsePoly<C>;
            fn $m(self, o: SparsePoly<C>) -> SparsePoly<C> {
                SparsePoly::$m(&self, &o)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<C: Ring> std::ops::Neg for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn neg(self) -> SparsePoly<C> {
        SparsePoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scalar::{int, rat};

    type P = SparsePoly<BigRational>;

    fn x() -> P {
        P::var(0, 2, &())
    }
    fn y() -> P {
        P::var(1, 2, &())
    }

    #[test]
    fn ordering_is_graded_lex() {
        let p = &(&x() * &y()) + &(&x() + &(&y() * &y()));
        let lead = p.leading().unwrap();
        assert_eq!(lead.0.exps(), &[1, 1]);
        assert_eq!(p.fmt_rational_with(&["x", "y"]), "x*y + y^2 + x");
    }

    #[test]
    fn mul_derivative_substitute() {
        let p = (&x() + &y()).pow(3);
        assert_eq!(p.coeff(&[2, 1]), int(3));
        let dp = p.derivative(0);
        assert_eq!(dp, (&x() + &y()).pow(2).scale(&int(3)));
        let s = p.substitute(1, &x().neg());
        assert!(s.is_zero());
    }

    #[test]
    fn division() {
        let g = &x() - &P::one(2, &());
        let f = &g * &(&(&x() * &y()) + &P::from_i64(2, 2, &()));
        assert_eq!(f.divide_exact(&g).unwrap(), &(&x() * &y()) + &P::from_i64(2, 2, &()));
        let h = &f + &y();
        assert!(h.divide_exact(&g).is_err());
        let (q, r) = h.div_rem(&g).unwrap();
        assert_eq!(&(&q * &g) + &r, h);
    }

    #[test]
    fn homogeneity() {
        let p = (&x().pow(3) + &y().pow(2).scale(&rat(1, 2))).with_weights(&[2, 3]);
        assert_eq!(p.weighted_homogeneous_degree().unwrap(), Some(6));
        assert!(p.is_weighted_homogeneous(&[2, 3], 6));
        let q = (&x() + &y()).with_weights(&[2, 3]);
        assert!(q.weighted_homogeneous_degree().is_err());
    }

    #[test]
    fn reduce_to_residues() {
        let p = &x().scale(&rat(1, 3)) + &y();
        let m = Modulus::new(5, 1).unwrap();
        let r = p.reduce(m).unwrap();
        assert_eq!(r.coeff(&[1, 0]).value(), 2);
        assert!(p.reduce(Modulus::new(3, 1).unwrap()).is_err());
    }

    #[test]
    fn compose_changes_arity() {
        let p = &x() * &y();
        let t = SparsePoly::<BigRational>::var(0, 1, &());
        let c = p.compose(&[t.clone(), &t + &P::one(1, &())]);
        assert_eq!(c, &t.pow(2) + &t);
    }
}
