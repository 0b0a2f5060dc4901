//! Exact arithmetic: rationals, residues mod p^k, sparse polynomials,
//! truncated power series and polynomial matrices.

pub mod bernoulli;
pub mod dense;
pub mod matrix;
pub mod poly;
pub mod primes;
pub mod scalar;
pub mod series;

pub use bernoulli::bernoulli;
pub use dense::UPoly;
pub use matrix::PolyMatrix;
pub use poly::{Monomial, SparsePoly};
pub use primes::{is_prime, primes_between, primes_up_to};
pub use scalar::{
    fmt_rational, fractional_bracket, int, padic_valuation, parse_rational, pochhammer_rising, rat,
    reduce_mod, ExactScalar, FractionalBracket, Modulus, QuadCtx, QuadResidue, Residue, Ring,
    ScalarCtx,
};
pub use series::TruncSeries;

use num_rational::BigRational;

pub type Q = BigRational;
pub type QPoly = SparsePoly<BigRational>;
pub type FpPoly = SparsePoly<Residue>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision k must be at least 1")]
    ZeroPrecision,
    #[error("modulus {p}^{k} exceeds the supported range")]
    ModulusTooLarge { p: u64, k: u32 },
    #[error("{p} divides the denominator of {value}")]
    DenominatorNotUnit { value: String, p: u64 },
    #[error("residues modulo {0} and {1} cannot be combined")]
    MixedModuli(Modulus, Modulus),
    #[error("division by zero")]
    DivisionByZeroPoly,
    #[error("leading coefficient is not invertible")]
    NonInvertibleLeadingCoeff,
    #[error("not divisible; remainder {remainder}")]
    NotDivisible { remainder: String },
    #[error("polynomial has no weights attached")]
    MissingWeights,
    #[error("polynomial is not weighted homogeneous")]
    NotHomogeneous,
    #[error("bracket <r> needs r >= 0, got {0}")]
    NegativeBracket(String),
    #[error("integer overflow")]
    Overflow,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// Exact division of polynomials, the `poly_divide_exact` operation.
pub fn poly_divide_exact<C: Ring>(f: &SparsePoly<C>, g: &SparsePoly<C>) -> Result<SparsePoly<C>, ArithError> {
    f.divide_exact(g)
}
