//! Moments of the cotangent function,
//!
//! ```text
//! C(m) = 1/m! * integral_0^pi (theta^m / 2) cot(theta / 2) dtheta
//! ```
//!
//! evaluated by four independent routes (Dirichlet eta closed form,
//! double-exponential quadrature, central factorial series and nested
//! harmonic series), together with the exact combinatorics behind them:
//! central factorial numbers, recursive harmonic numbers, Bernoulli and
//! Euler zigzag numbers, and the cycle index of the symmetric group.

pub mod cfn;
pub mod error;
pub mod exact;
pub mod hp;
pub mod moments;
pub mod quadrature;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
pub use exact::BigRational;
pub use hp::{HpReal, Tolerance};
pub use report::{Check, VerificationReport};
