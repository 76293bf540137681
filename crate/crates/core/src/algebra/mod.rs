//! Scalar and matrix arithmetic over the real, complex and quaternion
//! division algebras, together with the factorizations the rest of the
//! crate relies on (Cholesky, positive square root, Hermitian spectra,
//! leading principal minors).
//!
//! The octonions are deliberately absent: they are not associative, so the
//! usual matrix factorizations do not exist for them.

mod embedding;
mod hermitian;
mod matrix;
mod scalar;

pub use embedding::{from_complex_embedding, moore_determinant, quaternion_complex_embedding};
pub use hermitian::{
    cholesky_lower, hermitian_eigen, hermitian_eigenvalues, leading_minor_dets,
    leading_minor_log_dets, lower_triangular_inverse, pd_sqrt, HermitianPD,
};
pub use matrix::{conj_transpose, AlgebraMatrix};
pub use scalar::Scalar;

use crate::error::{Error, Result};

/// One of the associative real normed division algebras, labelled by its
/// real dimension β.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisionAlgebra {
    Real,
    Complex,
    Quaternion,
}

impl DivisionAlgebra {
    pub const ALL: [DivisionAlgebra; 3] = [
        DivisionAlgebra::Real,
        DivisionAlgebra::Complex,
        DivisionAlgebra::Quaternion,
    ];

    pub fn from_beta(beta: u32) -> Result<Self> {
        match beta {
            1 => Ok(DivisionAlgebra::Real),
            2 => Ok(DivisionAlgebra::Complex),
            4 => Ok(DivisionAlgebra::Quaternion),
            other => Err(Error::InvalidAlgebra(other)),
        }
    }

    pub fn beta(self) -> u32 {
        match self {
            DivisionAlgebra::Real => 1,
            DivisionAlgebra::Complex => 2,
            DivisionAlgebra::Quaternion => 4,
        }
    }

    pub fn beta_f64(self) -> f64 {
        f64::from(self.beta())
    }

    /// Zeroes the components that do not belong to this algebra.
    pub fn project(self, s: Scalar) -> Scalar {
        match self {
            DivisionAlgebra::Real => Scalar::real(s.re),
            DivisionAlgebra::Complex => Scalar::complex(s.re, s.i),
            DivisionAlgebra::Quaternion => s,
        }
    }
}

impl std::fmt::Display for DivisionAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            DivisionAlgebra::Real => "real",
            DivisionAlgebra::Complex => "complex",
            DivisionAlgebra::Quaternion => "quaternion",
        };
        write!(f, "{name} (beta = {})", self.beta())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_round_trip_and_rejection() {
        for alg in DivisionAlgebra::ALL {
            assert_eq!(DivisionAlgebra::from_beta(alg.beta()).unwrap(), alg);
        }
        for bad in [0, 3, 5, 8] {
            assert!(
                matches!(DivisionAlgebra::from_beta(bad), Err(Error::InvalidAlgebra(b)) if b == bad)
            );
        }
    }
}
