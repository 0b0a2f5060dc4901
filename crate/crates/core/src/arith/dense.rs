use super::poly::SparsePoly;
use super::scalar::Ring;

/// Dense univariate polynomial, coefficient of z^i at index i. Used by the
/// inner loops of the modular scans.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UPoly<C: Ring> {
    ctx: C::Ctx,
    c: Vec<C>,
}

impl<C: Ring> UPoly<C> {
    pub fn zero(ctx: &C::Ctx) -> Self {
        UPoly {
            ctx: ctx.clone(),
            c: Vec::new(),
        }
    }

    pub fn constant(v: C) -> Self {
        let ctx = v.ctx();
        Self::from_coeffs(&ctx, vec![v])
    }

    pub fn one(ctx: &C::Ctx) -> Self {
        Self::constant(C::one(ctx))
    }

    /// z - a
    pub fn linear(a: &C) -> Self {
        let ctx = a.ctx();
        Self::from_coeffs(&ctx, vec![a.neg(), C::one(&ctx)])
    }

    pub fn from_coeffs(ctx: &C::Ctx, c: Vec<C>) -> Self {
        let mut p = UPoly { ctx: ctx.clone(), c };
        p.trim();
        p
    }

    pub fn from_sparse(p: &SparsePoly<C>) -> Self {
        assert_eq!(p.nvars(), 1, "dense form needs a univariate polynomial");
        let d = p.degree_in(0).unwrap_or(0) as usize;
        let mut c = vec![C::zero(p.ctx()); d + 1];
        for (m, v) in p.terms() {
            c[m.exps()[0] as usize] = v.clone();
        }
        Self::from_coeffs(p.ctx(), c)
    }

    pub fn to_sparse(&self) -> SparsePoly<C> {
        SparsePoly::from_terms(
            1,
            &self.ctx,
            self.c
                .iter()
                .enumerate()
                .map(|(i, v)| (super::poly::Monomial::from_exps(&[i as u32]), v.clone())),
        )
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|v| v.is_zero()) {
            self.c.pop();
        }
    }

    pub fn ctx(&self) -> &C::Ctx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[C] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> C {
        self.c.get(i).cloned().unwrap_or_else(|| C::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = C::zero(&self.ctx);
        let c = (0..n)
            .map(|i| self.c.get(i).unwrap_or(&z).add(o.c.get(i).unwrap_or(&z)))
            .collect();
        Self::from_coeffs(&self.ctx, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = C::zero(&self.ctx);
        let c = (0..n)
            .map(|i| self.c.get(i).unwrap_or(&z).sub(o.c.get(i).unwrap_or(&z)))
            .collect();
        Self::from_coeffs(&self.ctx, c)
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(&self.ctx, self.c.iter().map(|v| v.neg()).collect())
    }

    pub fn scale(&self, s: &C) -> Self {
        Self::from_coeffs(&self.ctx, self.c.iter().map(|v| v.mul(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(&self.ctx);
        }
        let mut c = vec![C::zero(&self.ctx); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j].add_assign(&a.mul(b));
                }
            }
        }
        Self::from_coeffs(&self.ctx, c)
    }

    /// self*a + o*b accumulated in one pass.
    pub fn mul_add(&self, a: &Self, o: &Self, b: &Self) -> Self {
        let n1 = if self.is_zero() || a.is_zero() { 0 } else { self.c.len() + a.c.len() - 1 };
        let n2 = if o.is_zero() || b.is_zero() { 0 } else { o.c.len() + b.c.len() - 1 };
        let mut c = vec![C::zero(&self.ctx); n1.max(n2)];
        for (x, y) in [(self, a), (o, b)] {
            for (i, u) in x.c.iter().enumerate() {
                if u.is_zero() {
                    continue;
                }
                for (j, v) in y.c.iter().enumerate() {
                    if !v.is_zero() {
                        c[i + j].add_assign(&u.mul(v));
                    }
                }
            }
        }
        Self::from_coeffs(&self.ctx, c)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, v)| v.mul_i64(i as i64))
            .collect();
        Self::from_coeffs(&self.ctx, c)
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![C::zero(&self.ctx); k];
        c.extend(self.c.iter().cloned());
        UPoly { ctx: self.ctx.clone(), c }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero(&self.ctx);
        for v in self.c.iter().rev() {
            acc = acc.mul(x).add(v);
        }
        acc
    }

    /// Taylor shift: coefficients of self(x0 + w) in w.
    pub fn shift(&self, x0: &C) -> Self {
        let mut out = Self::zero(&self.ctx);
        let lin = Self::from_coeffs(&self.ctx, vec![x0.clone(), C::one(&self.ctx)]);
        for v in self.c.iter().rev() {
            out = out.mul(&lin).add(&Self::constant(v.clone()));
        }
        out
    }

    /// Remainder of division by a monic-able divisor; `None` if the leading
    /// coefficient of `d` is not a unit.
    pub fn rem(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lead_inv = d.c[dd].inv()?;
        let mut r = self.c.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let q = r[top].mul(&lead_inv);
            if !q.is_zero() {
                for (i, v) in d.c.iter().enumerate() {
                    let t = v.mul(&q);
                    r[top - dd + i] = r[top - dd + i].sub(&t);
                }
            }
            r.pop();
        }
        Some(Self::from_coeffs(&self.ctx, r))
    }
}
