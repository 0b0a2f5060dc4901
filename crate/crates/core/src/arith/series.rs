use super::poly::{Monomial, SparsePoly};
use super::scalar::Ring;
use super::ArithError;

/// Multivariate power series truncated at total degree `order`
/// (terms of degree > order are discarded).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries<C: Ring> {
    poly: SparsePoly<C>,
    order: u32,
}

impl<C: Ring> TruncSeries<C> {
    pub fn new(poly: SparsePoly<C>, order: u32) -> Self {
        let mut s = TruncSeries { poly, order };
        s.truncate_in_place();
        s
    }

    pub fn zero(nvars: usize, ctx: &C::Ctx, order: u32) -> Self {
        TruncSeries {
            poly: SparsePoly::zero(nvars, ctx),
            order,
        }
    }

    pub fn one(nvars: usize, ctx: &C::Ctx, order: u32) -> Self {
        Self::new(SparsePoly::one(nvars, ctx), order)
    }

    pub fn var(i: usize, nvars: usize, ctx: &C::Ctx, order: u32) -> Self {
        Self::new(SparsePoly::var(i, nvars, ctx), order)
    }

    /// Univariate series from coefficients c_0, c_1, ...
    pub fn from_coeffs(ctx: &C::Ctx, coeffs: &[C], order: u32) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::from_exps(&[i as u32]), c.clone()));
        Self::new(SparsePoly::from_terms(1, ctx, terms), order)
    }

    fn truncate_in_place(&mut self) {
        let order = self.order;
        if self.poly.total_degree().is_some_and(|d| d > order) {
            let terms: Vec<_> = self
                .poly
                .terms()
                .iter()
                .filter(|(m, _)| m.degree() <= order)
                .cloned()
                .collect();
            self.poly = SparsePoly::from_terms(self.poly.nvars(), self.poly.ctx(), terms);
        }
    }

    pub fn truncate(&self, order: u32) -> Self {
        Self::new(self.poly.clone(), order.min(self.order))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn poly(&self) -> &SparsePoly<C> {
        &self.poly
    }

    pub fn into_poly(self) -> SparsePoly<C> {
        self.poly
    }

    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }

    pub fn ctx(&self) -> &C::Ctx {
        self.poly.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.poly.coeff(exps)
    }

    /// Univariate coefficient list c_0..=c_order.
    pub fn coeffs(&self) -> Vec<C> {
        assert_eq!(self.nvars(), 1, "coefficient list needs a univariate series");
        (0..=self.order).map(|i| self.poly.coeff(&[i])).collect()
    }

    fn order_with(&self, o: &Self) -> u32 {
        self.order.min(o.order)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.poly.add(&o.poly), self.order_with(o))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.poly.sub(&o.poly), self.order_with(o))
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            poly: self.poly.neg(),
            order: self.order,
        }
    }

    pub fn scale(&self, s: &C) -> Self {
        TruncSeries {
            poly: self.poly.scale(s),
            order: self.order,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order_with(o);
        TruncSeries {
            poly: self.poly.mul_filtered(&o.poly, |m| m.degree() <= order),
            order,
        }
    }

    pub fn mul_poly(&self, p: &SparsePoly<C>) -> Self {
        let order = self.order;
        TruncSeries {
            poly: self.poly.mul_filtered(p, |m| m.degree() <= order),
            order,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.nvars(), self.ctx(), self.order);
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

    /// Formal derivative. The result is exact to order - 1.
    pub fn derivative(&self, var: usize) -> Self {
        TruncSeries {
            poly: self.poly.derivative(var),
            order: self.order.saturating_sub(1),
        }
    }

    /// Derivative keeping the nominal order; valid when the caller knows the
    /// discarded top-degree terms were exact.
    pub fn derivative_keep(&self, var: usize) -> Self {
        TruncSeries {
            poly: self.poly.derivative(var),
            order: self.order,
        }
    }

    /// Multiplicative inverse; needs an invertible constant term.
    pub fn inverse(&self) -> Result<Self, ArithError> {
        let c0 = self.poly.constant_term();
        let c0_inv = c0.inv().ok_or(ArithError::NonInvertibleLeadingCoeff)?;
        let n = self.nvars();
        let ctx = self.ctx().clone();
        // 1/f = c0^{-1} * sum_i g^i with g = 1 - f/c0.
        let g = Self::one(n, &ctx, self.order).sub(&self.scale(&c0_inv));
        let mut acc = Self::one(n, &ctx, self.order);
        let mut pw = acc.clone();
        for _ in 0..self.order {
            pw = pw.mul(&g);
            if pw.is_zero() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Substitutes series for each variable; the images must have zero
    /// constant term for the truncation to be meaningful.
    pub fn compose(&self, images: &[TruncSeries<C>]) -> Self {
        let order = images.iter().map(|s| s.order).min().unwrap_or(self.order).min(self.order);
        let target = images.first().map(|s| s.nvars()).unwrap_or(0);
        let ctx = self.ctx().clone();
        let mut out = Self::zero(target, &ctx, order);
        let mut cache: Vec<Vec<TruncSeries<C>>> = images
            .iter()
            .map(|g| vec![Self::one(target, &ctx, order), g.truncate(order)])
            .collect();
        for (m, c) in self.poly.terms() {
            let mut t = Self::new(SparsePoly::constant(c.clone(), target), order);
            for (i, &e) in m.exps().iter().enumerate() {
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
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::scalar::{int, rat};
    use num_rational::BigRational;

    #[test]
    fn geometric_inverse() {
        let one_minus_z = TruncSeries::from_coeffs(&(), &[int(1), int(-1)], 6);
        let inv = one_minus_z.inverse().unwrap();
        assert_eq!(inv.coeffs(), vec![int(1); 7]);
        let back = inv.mul(&one_minus_z);
        assert_eq!(back, TruncSeries::one(1, &(), 6));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let z = TruncSeries::<BigRational>::var(0, 1, &(), 3);
        assert!(z.pow(4).is_zero());
        let e = TruncSeries::from_coeffs(&(), &[int(1), int(1), rat(1, 2), rat(1, 6)], 3);
        assert_eq!(e.derivative(0).coeffs(), vec![int(1), int(1), rat(1, 2)]);
    }
}
