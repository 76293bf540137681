//! Kotz-Riesz and Riesz matrix-variate distributions over the real, complex
//! and quaternion division algebras.
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: scalars, matrices and Hermitian factorizations over ℝ, ℂ, ℍ.
//! * [`special`]: partitions, generalized powers `q_κ`, Pochhammer symbols and
//!   multivariate gamma functions (log space, sign tracked).
//! * [`jack`]: Jack polynomials in the C-normalization and `₀F₁` of matrix argument.
//! * [`distributions`]: log densities of the Kotz-Riesz and Riesz families.
//! * [`samplers`]: reproducible Stiefel, triangular-factor and Kotz-Riesz draws.
//! * [`validation`]: moment and characteristic-function oracles, quadrature,
//!   Kolmogorov-Smirnov tests and the validation suites.

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod distributions;
pub mod error;
pub mod jack;
pub mod samplers;
pub mod special;
pub mod validation;

pub use algebra::{AlgebraMatrix, DivisionAlgebra, HermitianPD, Scalar};
pub use error::{Error, Result, Violation};
pub use special::{Partition, SignedLog};
