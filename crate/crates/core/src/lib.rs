//! Exact computations modulo primes: p-curvature of linear differential
//! equations, p-closedness of polynomial vector fields, congruences for
//! Eisenstein series and Weierstrass curves, and period series of Fermat
//! type hypersurfaces.

pub mod algfun;
pub mod arith;
pub mod elliptic;
pub mod hodge;
pub mod modular;
pub mod ode;
pub mod par;
pub mod vfield;
