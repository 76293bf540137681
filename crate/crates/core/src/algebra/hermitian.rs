use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::embedding::{from_complex_embedding, to_complex};
use super::{AlgebraMatrix, DivisionAlgebra, Scalar};
use crate::error::{Error, Result};

/// Relative tolerance for accepting a matrix as self-adjoint.
pub const SELF_ADJOINT_RTOL: f64 = 1e-12;

fn check_self_adjoint(m: &AlgebraMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let defect = m.self_adjoint_defect();
    if defect > SELF_ADJOINT_RTOL * m.max_abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NotHermitian(defect));
    }
    Ok(())
}

/// Lower Cholesky factor of a self-adjoint matrix (only the lower triangle is read).
fn cholesky_factor(a: &AlgebraMatrix) -> Result<AlgebraMatrix> {
    let n = a.rows();
    let mut l = AlgebraMatrix::zeros(a.algebra(), n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        let ljj = d.sqrt();
        l[(j, j)] = Scalar::real(ljj);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s.scale(1.0 / ljj);
        }
    }
    Ok(l)
}

/// Inverse of a lower-triangular matrix with real nonzero diagonal.
pub fn lower_triangular_inverse(l: &AlgebraMatrix) -> AlgebraMatrix {
    let n = l.rows();
    let mut x = AlgebraMatrix::zeros(l.algebra(), n, n);
    for j in 0..n {
        for i in j..n {
            let mut s = if i == j { Scalar::ONE } else { Scalar::ZERO };
            for k in j..i {
                s -= l[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s.scale(1.0 / l[(i, i)].re);
        }
    }
    x
}

/// A positive definite self-adjoint matrix together with its lower Cholesky factor.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianPD {
    matrix: AlgebraMatrix,
    chol: AlgebraMatrix,
}

impl HermitianPD {
    /// Accepts `m` if it is self-adjoint to relative 1e-12 and positive
    /// definite. The stored matrix is the symmetrized `(m + m*) / 2`.
    pub fn new(m: AlgebraMatrix) -> Result<Self> {
        check_self_adjoint(&m)?;
        let matrix = m.symmetrized();
        let chol = cholesky_factor(&matrix)?;
        Ok(HermitianPD { matrix, chol })
    }

    pub fn identity(algebra: DivisionAlgebra, n: usize) -> Self {
        let id = AlgebraMatrix::identity(algebra, n);
        HermitianPD {
            matrix: id.clone(),
            chol: id,
        }
    }

    /// `L L*` for a lower-triangular `L` with positive real diagonal.
    pub fn from_lower_factor(l: &AlgebraMatrix) -> Result<Self> {
        HermitianPD::new(l.mul_adjoint(l))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn algebra(&self) -> DivisionAlgebra {
        self.matrix.algebra()
    }

    pub fn matrix(&self) -> &AlgebraMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> AlgebraMatrix {
        self.matrix
    }

    pub fn cholesky(&self) -> &AlgebraMatrix {
        &self.chol
    }

    /// `log |P_p|` for p = 1..m, from the Cholesky diagonal.
    pub fn leading_minor_log_dets(&self) -> Vec<f64> {
        let mut acc = 0.0;
        (0..self.dim())
            .map(|i| {
                acc += 2.0 * self.chol[(i, i)].re.ln();
                acc
            })
            .collect()
    }

    pub fn log_det(&self) -> f64 {
        *self.leading_minor_log_dets().last().expect("nonempty")
    }

    pub fn det(&self) -> f64 {
        self.log_det().exp()
    }

    pub fn inverse(&self) -> HermitianPD {
        let linv = lower_triangular_inverse(&self.chol);
        HermitianPD::new(linv.adjoint_mul(&linv)).expect("inverse of a PD matrix is PD")
    }

    pub fn sqrt(&self) -> HermitianPD {
        let root = hermitian_apply(&self.matrix, |x| x.max(0.0).sqrt());
        HermitianPD::new(root).expect("square root of a PD matrix is PD")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        spectrum(&self.matrix)
    }

    /// `c · P` for c > 0.
    pub fn scaled(&self, c: f64) -> HermitianPD {
        assert!(c > 0.0);
        HermitianPD {
            matrix: self.matrix.scale(c),
            chol: self.chol.scale(c.sqrt()),
        }
    }
}

/// Lower-triangular `L` with real positive diagonal and `L L* = P`.
pub fn cholesky_lower(p: &HermitianPD) -> AlgebraMatrix {
    p.cholesky().clone()
}

/// The unique positive definite `S` with `S S = P`.
pub fn pd_sqrt(p: &HermitianPD) -> HermitianPD {
    p.sqrt()
}

/// `(|P_1|, ..., |P_m|)`, the leading principal minor determinants.
pub fn leading_minor_dets(p: &HermitianPD) -> Vec<f64> {
    p.leading_minor_log_dets()
        .into_iter()
        .map(f64::exp)
        .collect()
}

pub fn leading_minor_log_dets(p: &HermitianPD) -> Vec<f64> {
    p.leading_minor_log_dets()
}

fn complex_eigen(m: &AlgebraMatrix) -> SymmetricEigen<Complex64, nalgebra::Dyn> {
    SymmetricEigen::new(to_complex(m))
}

/// Descending eigenvalues of an already-checked self-adjoint matrix.
fn spectrum(m: &AlgebraMatrix) -> Vec<f64> {
    let n = m.rows();
    if n == 1 {
        return vec![m[(0, 0)].re];
    }
    if m.algebra() == DivisionAlgebra::Real {
        let r = DMatrix::from_fn(n, n, |i, j| m[(i, j)].re);
        let mut ev: Vec<f64> = r.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        return ev;
    }
    let mut ev: Vec<f64> = complex_eigen(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    if m.algebra() == DivisionAlgebra::Quaternion {
        // every eigenvalue of the embedding appears twice
        ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
    } else {
        ev
    }
}

/// Real eigenvalues of a self-adjoint matrix, in descending order.
pub fn hermitian_eigenvalues(m: &AlgebraMatrix) -> Result<Vec<f64>> {
    check_self_adjoint(m)?;
    Ok(spectrum(&m.symmetrized()))
}

/// Descending eigenvalues together with the unitary eigenvector matrix of the
/// complex representation (`2m x 2m` for quaternions).
pub fn hermitian_eigen(m: &AlgebraMatrix) -> Result<(Vec<f64>, DMatrix<Complex64>)> {
    check_self_adjoint(m)?;
    let eig = complex_eigen(&m.symmetrized());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(eig.eigenvectors.nrows(), order.len(), |r, c| {
        eig.eigenvectors[(r, order[c])]
    });
    Ok((values, vectors))
}

/// `f(M)` through the spectral decomposition of a self-adjoint matrix.
fn hermitian_apply(m: &AlgebraMatrix, f: impl Fn(f64) -> f64) -> AlgebraMatrix {
    let eig = complex_eigen(m);
    let v = &eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(f(x), 0.0)));
    let fm = v * d * v.adjoint();
    from_complex_embedding(m.algebra(), &fm)
        .expect("shape preserved")
        .symmetrized()
}
