use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{AlgebraMatrix, DivisionAlgebra, Scalar};
use crate::error::{Error, Result};

// q = z1 + z2·j with z1 = re + i·i, z2 = j + k·i  ↦  [[z1, z2], [-conj(z2), conj(z1)]]
fn embed_scalar(q: Scalar) -> [[Complex64; 2]; 2] {
    let z1 = Complex64::new(q.re, q.i);
    let z2 = Complex64::new(q.j, q.k);
    [[z1, z2], [-z2.conj(), z1.conj()]]
}

/// The complex representation χ of a quaternion matrix: an `n x m` matrix
/// maps to a `2n x 2m` complex matrix, with χ(AB) = χ(A)χ(B) and
/// χ(A*) = χ(A)*.
pub fn quaternion_complex_embedding(m: &AlgebraMatrix) -> Result<DMatrix<Complex64>> {
    if m.algebra() != DivisionAlgebra::Quaternion {
        return Err(Error::WrongAlgebra);
    }
    Ok(embed_quaternion(m))
}

fn embed_quaternion(m: &AlgebraMatrix) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(2 * m.rows(), 2 * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let b = embed_scalar(m[(i, j)]);
            for (r, row) in b.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    out[(2 * i + r, 2 * j + c)] = *v;
                }
            }
        }
    }
    out
}

/// Complex matrix carrying the same spectral information: the matrix itself
/// for β ∈ {1, 2}, the χ embedding for quaternions.
pub(crate) fn to_complex(m: &AlgebraMatrix) -> DMatrix<Complex64> {
    match m.algebra() {
        DivisionAlgebra::Quaternion => embed_quaternion(m),
        _ => DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
            Complex64::new(m[(i, j)].re, m[(i, j)].i)
        }),
    }
}

/// Inverse of [`to_complex`]. For quaternions the redundant blocks are
/// averaged, which is the orthogonal projection onto the image of χ.
pub fn from_complex_embedding(
    algebra: DivisionAlgebra,
    c: &DMatrix<Complex64>,
) -> Result<AlgebraMatrix> {
    match algebra {
        DivisionAlgebra::Quaternion => {
            if !c.nrows().is_multiple_of(2) || !c.ncols().is_multiple_of(2) {
                return Err(Error::DimensionMismatch(
                    "quaternion embedding needs even dimensions".into(),
                ));
            }
            let (rows, cols) = (c.nrows() / 2, c.ncols() / 2);
            let mut data = Vec::with_capacity(rows * cols);
            for i in 0..rows {
                for j in 0..cols {
                    let z1 = (c[(2 * i, 2 * j)] + c[(2 * i + 1, 2 * j + 1)].conj()) * 0.5;
                    let z2 = (c[(2 * i, 2 * j + 1)] - c[(2 * i + 1, 2 * j)].conj()) * 0.5;
                    data.push(Scalar::new(z1.re, z1.im, z2.re, z2.im));
                }
            }
            AlgebraMatrix::from_scalars(algebra, rows, cols, data)
        }
        DivisionAlgebra::Complex => {
            let data = c
                .transpose()
                .iter()
                .map(|z| Scalar::complex(z.re, z.im))
                .collect();
            AlgebraMatrix::from_scalars(algebra, c.nrows(), c.ncols(), data)
        }
        DivisionAlgebra::Real => {
            let data = c.transpose().iter().map(|z| Scalar::real(z.re)).collect();
            AlgebraMatrix::from_scalars(algebra, c.nrows(), c.ncols(), data)
        }
    }
}

/// Determinant of a self-adjoint matrix through its complex representation.
/// For quaternions this is the Moore determinant, the square root of the
/// (nonnegative real) determinant of the embedding.
pub fn moore_determinant(m: &AlgebraMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(
            "determinant of a non-square matrix".into(),
        ));
    }
    let det = to_complex(m).determinant();
    match m.algebra() {
        DivisionAlgebra::Quaternion => Ok(det.re.max(0.0).sqrt()),
        _ => Ok(det.re),
    }
}
