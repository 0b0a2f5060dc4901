//! Curves y² = 4x³ - t2 x - t3 over F_p: half-power coefficients, the
//! Hasse–Witt invariant, point counts, power sums, the Cartier matrix and
//! the exact-form reduction of x^n dx/y.

use num_traits::Zero;

use crate::arith::{is_prime, ArithError, Modulus, QPoly, Residue, Ring, SparsePoly, UPoly, Q};
use crate::modular::{self, ModularError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EllipticError {
    #[error("characteristic {0} is not a prime >= 5")]
    BadCharacteristic(u64),
    #[error("curve is singular: 27 t3^2 - t2^3 = 0 mod {0}")]
    SingularCurve(u64),
    #[error("operation needs a numeric curve")]
    NeedsNumeric,
    #[error("j = {j} outside 1..={max}")]
    BadIndex { j: u64, max: u64 },
    #[error("n = {0} must be at least 2")]
    BadExponent(u64),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Modular(#[from] ModularError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveMode {
    Numeric { t2: Residue, t3: Residue },
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeierstrassCurve {
    pub p: u64,
    pub modulus: Modulus,
    pub mode: CurveMode,
}

fn check_char(p: u64) -> Result<Modulus, EllipticError> {
    if p < 5 || !is_prime(p) {
        return Err(EllipticError::BadCharacteristic(p));
    }
    Ok(Modulus::prime(p)?)
}

impl WeierstrassCurve {
    pub fn numeric(p: u64, t2: i64, t3: i64) -> Result<Self, EllipticError> {
        let m = check_char(p)?;
        let (t2, t3) = (m.residue(t2), m.residue(t3));
        let disc = m.residue(27).mul(&t3).mul(&t3).sub(&t2.pow(3));
        if disc.is_zero() {
            return Err(EllipticError::SingularCurve(p));
        }
        Ok(WeierstrassCurve {
            p,
            modulus: m,
            mode: CurveMode::Numeric { t2, t3 },
        })
    }

    pub fn symbolic(p: u64) -> Result<Self, EllipticError> {
        Ok(WeierstrassCurve {
            p,
            modulus: check_char(p)?,
            mode: CurveMode::Symbolic,
        })
    }

    fn numeric_params(&self) -> Result<(Residue, Residue), EllipticError> {
        match self.mode {
            CurveMode::Numeric { t2, t3 } => Ok((t2, t3)),
            CurveMode::Symbolic => Err(EllipticError::NeedsNumeric),
        }
    }

    /// P = 4x³ - t2 x - t3 in (x, t2, t3); t2, t3 are constants in numeric mode.
    pub fn cubic(&self) -> SparsePoly<Residue> {
        let m = &self.modulus;
        let x = SparsePoly::var(0, 3, m);
        let (t2, t3) = match self.mode {
            CurveMode::Numeric { t2, t3 } => (SparsePoly::constant(t2, 3), SparsePoly::constant(t3, 3)),
            CurveMode::Symbolic => (SparsePoly::var(1, 3, m), SparsePoly::var(2, 3, m)),
        };
        x.pow(3).scale(&m.residue(4)).sub(&t2.mul(&x)).sub(&t3)
    }

    /// P as a dense polynomial in x (numeric mode).
    pub fn cubic_dense(&self) -> Result<UPoly<Residue>, EllipticError> {
        let (t2, t3) = self.numeric_params()?;
        let m = self.modulus;
        Ok(UPoly::from_coeffs(&m, vec![t3.neg(), t2.neg(), m.residue(0), m.residue(4)]))
    }

    pub fn half_power_coeffs(&self) -> HalfPowerCoeffs {
        let m = self.modulus;
        let pw = self.cubic().pow((self.p - 1) / 2);
        let proj = [SparsePoly::one(2, &m), SparsePoly::var(0, 2, &m), SparsePoly::var(1, 2, &m)];
        let coeffs = pw
            .coefficients_in(0)
            .into_iter()
            .map(|c| c.compose(&proj).with_weights(&[4, 6]))
            .collect();
        HalfPowerCoeffs { p: self.p, coeffs }
    }

    /// c_{p-1}.
    pub fn hasse_witt(&self) -> SparsePoly<Residue> {
        self.half_power_coeffs().c(self.p as usize - 1)
    }

    pub fn hasse_witt_value(&self) -> Result<Residue, EllipticError> {
        self.numeric_params()?;
        Ok(self.hasse_witt().constant_term())
    }

    /// Coefficient of x in V_{p-1} as a polynomial in (t2, t3).
    pub fn hasse_witt_recursion(&self) -> SparsePoly<Residue> {
        let m = self.modulus;
        let proj = [SparsePoly::zero(2, &m), SparsePoly::var(0, 2, &m), SparsePoly::var(1, 2, &m)];
        // a supersingular V_{p-1} may have no x term at all
        match hasse_witt_recursion(self.p, &self.cubic()).get(1) {
            Some(c) => c.compose(&proj),
            None => SparsePoly::zero(2, &m),
        }
    }

    pub fn point_count(&self) -> Result<u64, EllipticError> {
        Ok(1 + self.affine_fibres()?.iter().map(|(_, k)| k).sum::<u64>())
    }

    /// Affine points as (x, number of y).
    fn affine_fibres(&self) -> Result<Vec<(Residue, u64)>, EllipticError> {
        let (t2, t3) = self.numeric_params()?;
        let m = self.modulus;
        Ok((0..self.p)
            .map(|x| {
                let xr = m.residue(x as i64);
                let f = m.residue(4).mul(&xr.pow(3)).sub(&t2.mul(&xr)).sub(&t3);
                (xr, (1 + legendre(&f, self.p)) as u64)
            })
            .collect())
    }

    /// Pairs (Σ_{P ≠ O} x(P)^{j-1}, -c_{p-j}) for j = 1..=jmax.
    pub fn power_sums(&self, jmax: u64) -> Result<Vec<(Residue, Residue)>, EllipticError> {
        let max = (self.p - 1) / 2;
        if jmax < 1 || jmax > max {
            return Err(EllipticError::BadIndex { j: jmax, max });
        }
        let fibres = self.affine_fibres()?;
        let c = self.half_power_coeffs();
        let m = self.modulus;
        Ok((1..=jmax)
            .map(|j| {
                let lhs = fibres
                    .iter()
                    .fold(m.residue(0), |s, (x, k)| s.add(&x.pow(j - 1).mul_i64(*k as i64)));
                (lhs, c.c((self.p - j) as usize).constant_term().neg())
            })
            .collect())
    }

    /// Σ_{P ≠ O} x(P)^{j-1} ≡ -c_{p-j} for j = 1..=jmax.
    pub fn power_sum_check(&self, jmax: u64) -> Result<bool, EllipticError> {
        Ok(self.power_sums(jmax)?.iter().all(|(l, r)| l == r))
    }

    /// [[c_{p-1}, c_{p-2}], [0, 0]].
    pub fn cartier_matrix(&self) -> Result<[[Residue; 2]; 2], EllipticError> {
        self.numeric_params()?;
        let c = self.half_power_coeffs();
        let z = self.modulus.residue(0);
        let p = self.p as usize;
        Ok([
            [c.c(p - 1).constant_term(), c.c(p - 2).constant_term()],
            [z, z],
        ])
    }

    /// v^p = HW·v for v = y ∂/∂x + ½P′ ∂/∂y on the coordinate ring.
    pub fn hw_field_identity_check(&self) -> Result<bool, EllipticError> {
        let p = self.cubic_dense()?;
        let m = self.modulus;
        let hw = self.hasse_witt_value()?;
        let half = m.residue(2).inv().unwrap();
        let dp_half = p.derivative().scale(&half);
        // a + b y  ->  (b' P + ½P' b) + a' y
        let apply = |(a, b): &(UPoly<Residue>, UPoly<Residue>)| {
            (b.derivative().mul(&p).add(&dp_half.mul(b)), a.derivative())
        };
        let zero = UPoly::zero(&m);
        let one = UPoly::one(&m);
        let x = UPoly::from_coeffs(&m, vec![m.residue(0), m.residue(1)]);
        for (start, vx) in [((x, zero.clone()), (zero.clone(), one.clone())), ((zero.clone(), one), (dp_half.clone(), zero))] {
            let mut cur = start;
            for _ in 0..self.p {
                cur = apply(&cur);
            }
            if cur.0 != vx.0.scale(&hw) || cur.1 != vx.1.scale(&hw) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Legendre symbol of a residue: -1, 0 or 1.
pub fn legendre(a: &Residue, p: u64) -> i64 {
    if a.is_zero() {
        return 0;
    }
    if a.pow((p - 1) / 2).is_one() {
        1
    } else {
        -1
    }
}

/// Coefficients c_i of (4x³ - t2 x - t3)^{(p-1)/2}, as polynomials in (t2, t3).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPowerCoeffs {
    pub p: u64,
    pub coeffs: Vec<SparsePoly<Residue>>,
}

impl HalfPowerCoeffs {
    pub fn c(&self, i: usize) -> SparsePoly<Residue> {
        match self.coeffs.get(i) {
            Some(c) => c.clone(),
            None => SparsePoly::zero(2, self.coeffs[0].ctx()),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// V_0 = x, V_{2n+2} = P V'' + ½P′ V′ up to V_{p-1}; returns the x-coefficients
/// of V_{p-1}, x being variable 0 of P.
pub fn hasse_witt_recursion(p: u64, cubic: &SparsePoly<Residue>) -> Vec<SparsePoly<Residue>> {
    let m = *cubic.ctx();
    let half = m.residue(2).inv().expect("odd characteristic");
    let dp_half = cubic.derivative(0).scale(&half);
    let mut v = SparsePoly::var(0, cubic.nvars(), &m);
    for _ in 0..(p - 1) / 2 {
        let d1 = v.derivative(0);
        v = cubic.mul(&d1.derivative(0)).add(&dp_half.mul(&d1));
    }
    v.coefficients_in(0)
}

/// c_{p-1} ≡ A and c_{p-2} ≡ B/12 in F_p[t2, t3].
pub fn ab_congruence_check(p: u64) -> Result<bool, EllipticError> {
    let curve = WeierstrassCurve::symbolic(p)?;
    let m = curve.modulus;
    let (a, b) = modular::ab_polynomials(p)?;
    let (a, b) = (a.reduce(m)?, b.reduce(m)?);
    let c = curve.half_power_coeffs();
    let inv12 = m.residue(12).inv().unwrap();
    Ok(c.c(p as usize - 1) == a && c.c(p as usize - 2) == b.scale(&inv12))
}

/// (2n-1) x^n dx/y = A0 dx/y + A1 x dx/y + d(y Q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactForm {
    pub n: u64,
    /// In (t2, t3).
    pub a0: QPoly,
    pub a1: QPoly,
    /// In (x, t2, t3).
    pub q: QPoly,
}

impl ExactForm {
    /// (2n-1) x^n - (A0 + A1 x + P Q' + ½P′ Q), identically zero when valid.
    pub fn residual(&self) -> QPoly {
        let x = QPoly::var(0, 3, &());
        let t2 = QPoly::var(1, 3, &());
        let t3 = QPoly::var(2, 3, &());
        let c = |n: i64, d: i64| Q::new(n.into(), d.into());
        let p = x.pow(3).scale(&c(4, 1)).sub(&t2.mul(&x)).sub(&t3);
        let lift = |f: &QPoly| f.embed(3, &[1, 2]);
        let lhs = x.pow(self.n).scale(&c(2 * self.n as i64 - 1, 1));
        let exact = p
            .mul(&self.q.derivative(0))
            .add(&p.derivative(0).mul(&self.q).scale(&c(1, 2)));
        lhs.sub(&lift(&self.a0)).sub(&lift(&self.a1).mul(&x)).sub(&exact)
    }

    pub fn is_valid(&self) -> bool {
        self.residual().is_zero()
    }
}

/// Reduces (2n-1) x^n down the degree ladder
/// x^i -> ((i - 3/2) t2 x^{i-2} + (i - 2) t3 x^{i-3}) / (4i - 2) + exact part.
pub fn exact_form_reduce(n: u64) -> Result<ExactForm, EllipticError> {
    if n < 2 {
        return Err(EllipticError::BadExponent(n));
    }
    let x = |e: u32| QPoly::monomial(Q::from_integer(1.into()), &[e, 0, 0]);
    let t2 = QPoly::var(1, 3, &());
    let t3 = QPoly::var(2, 3, &());
    // coefficients of x^i as polynomials in (t2, t3) living in 3 variables
    let mut r: Vec<QPoly> = vec![QPoly::zero(3, &()); n as usize + 1];
    r[n as usize] = QPoly::constant(Q::from_integer((2 * n as i64 - 1).into()), 3);
    let mut q = QPoly::zero(3, &());
    for i in (2..=n as usize).rev() {
        let c = std::mem::replace(&mut r[i], QPoly::zero(3, &()));
        if c.is_zero() {
            continue;
        }
        let denom = Q::from_integer((4 * i as i64 - 2).into());
        let ci = c.scale(&(Q::from_integer(1.into()) / &denom));
        q = q.add(&ci.mul(&x(i as u32 - 2)));
        let a = Q::new((2 * i as i64 - 3).into(), 2.into());
        r[i - 2] = r[i - 2].add(&ci.mul(&t2).scale(&a));
        if i >= 3 {
            let b = Q::from_integer((i as i64 - 2).into());
            if !Zero::is_zero(&b) {
                r[i - 3] = r[i - 3].add(&ci.mul(&t3).scale(&b));
            }
        }
    }
    let proj = [QPoly::zero(2, &()), QPoly::var(0, 2, &()), QPoly::var(1, 2, &())];
    Ok(ExactForm {
        n,
        a0: r[0].compose(&proj).with_weights(&[4, 6]),
        a1: r[1].compose(&proj).with_weights(&[4, 6]),
        q,
    })
}

/// At n = (p+1)/2: A1 ≡ A and A0 ≡ -B/12 mod p.
pub fn exact_form_congruence_check(p: u64) -> Result<bool, EllipticError> {
    let m = check_char(p)?;
    let f = exact_form_reduce(p.div_ceil(2))?;
    let (a, b) = modular::ab_polynomials(p)?;
    let inv12 = m.residue(12).inv().unwrap();
    let (Ok(a0), Ok(a1)) = (f.a0.reduce(m), f.a1.reduce(m)) else {
        return Ok(false);
    };
    Ok(a1 == a.reduce(m)? && a0 == b.reduce(m)?.scale(&inv12).neg())
}
