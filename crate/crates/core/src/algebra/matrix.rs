use std::ops::{Add, Index, IndexMut, Mul, Sub};

use super::{DivisionAlgebra, Scalar};
use crate::error::{Error, Result};

/// A dense row-major matrix with entries in one of the division algebras.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraMatrix {
    algebra: DivisionAlgebra,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl AlgebraMatrix {
    pub fn zeros(algebra: DivisionAlgebra, rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        AlgebraMatrix {
            algebra,
            rows,
            cols,
            data: vec![Scalar::ZERO; rows * cols],
        }
    }

    pub fn identity(algebra: DivisionAlgebra, n: usize) -> Self {
        let mut m = Self::zeros(algebra, n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::ONE;
        }
        m
    }

    pub fn diag_real(algebra: DivisionAlgebra, diag: &[f64]) -> Self {
        let mut m = Self::zeros(algebra, diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Scalar::real(d);
        }
        m
    }

    /// Real matrix from row-major values.
    pub fn from_real(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        let data = values.iter().map(|&v| Scalar::real(v)).collect();
        Self::from_scalars(DivisionAlgebra::Real, rows, cols, data)
    }

    /// Builds a matrix from row-major scalars, rejecting components that do
    /// not belong to `algebra`.
    pub fn from_scalars(
        algebra: DivisionAlgebra,
        rows: usize,
        cols: usize,
        data: Vec<Scalar>,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(
                "matrix dimensions must be positive".into(),
            ));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|s| algebra.project(**s) != **s) {
            return Err(Error::AlgebraMismatch(format!(
                "entry {bad:?} has components outside the {algebra} algebra"
            )));
        }
        Ok(AlgebraMatrix {
            algebra,
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from row-major entries given as `beta` reals each.
    pub fn from_components(
        algebra: DivisionAlgebra,
        rows: usize,
        cols: usize,
        entries: &[Vec<f64>],
    ) -> Result<Self> {
        let beta = algebra.beta() as usize;
        if let Some((idx, e)) = entries.iter().enumerate().find(|(_, e)| e.len() != beta) {
            return Err(Error::DimensionMismatch(format!(
                "entry {idx} has {} components, expected {beta}",
                e.len()
            )));
        }
        let data = entries.iter().map(|e| Scalar::from_components(e)).collect();
        Self::from_scalars(algebra, rows, cols, data)
    }

    /// Row-major entries as `beta` reals each.
    pub fn to_components(&self) -> Vec<Vec<f64>> {
        let beta = self.algebra.beta() as usize;
        self.data
            .iter()
            .map(|s| s.components()[..beta].to_vec())
            .collect()
    }

    pub fn algebra(&self) -> DivisionAlgebra {
        self.algebra
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.algebra, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        AlgebraMatrix {
            data: self.data.iter().map(|x| x.scale(s)).collect(),
            ..self.clone()
        }
    }

    /// Real part of the trace. For self-adjoint matrices this is the whole trace.
    pub fn trace_re(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|s| s.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &AlgebraMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from self-adjointness, `max |A_ij - conj(A_ji)|`.
    pub fn self_adjoint_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(A + A*) / 2`.
    pub fn symmetrized(&self) -> Self {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] = Scalar::real(self[(i, i)].re);
            for j in (i + 1)..self.cols {
                let v = (self[(i, j)] + self[(j, i)].conj()).scale(0.5);
                out[(i, j)] = v;
                out[(j, i)] = v.conj();
            }
        }
        out
    }

    /// The leading `p x p` block.
    pub fn leading_block(&self, p: usize) -> Self {
        assert!(p >= 1 && p <= self.rows && p <= self.cols);
        let mut out = Self::zeros(self.algebra, p, p);
        for i in 0..p {
            for j in 0..p {
                out[(i, j)] = self[(i, j)];
            }
        }
        out
    }

    /// Matrix product; panics on a shape or algebra mismatch.
    pub fn matmul(&self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in product");
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ in product");
        let mut out = Self::zeros(self.algebra, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Scalar::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// `self * rhs*` without materialising the conjugate transpose.
    pub fn mul_adjoint(&self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in product");
        assert_eq!(self.cols, rhs.cols, "inner dimensions differ in product");
        let mut out = Self::zeros(self.algebra, self.rows, rhs.rows);
        for i in 0..self.rows {
            for j in 0..rhs.rows {
                let mut acc = Scalar::ZERO;
                for k in 0..self.cols {
                    acc += self[(i, k)] * rhs[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `self* * rhs` without materialising the conjugate transpose.
    pub fn adjoint_mul(&self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch in product");
        assert_eq!(self.rows, rhs.rows, "inner dimensions differ in product");
        let mut out = Self::zeros(self.algebra, self.cols, rhs.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)].conj();
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    fn zip_with(&self, rhs: &AlgebraMatrix, f: impl Fn(Scalar, Scalar) -> Scalar) -> AlgebraMatrix {
        assert_eq!(self.algebra, rhs.algebra, "algebra mismatch");
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch"
        );
        AlgebraMatrix {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(*a, *b))
                .collect(),
            ..self.clone()
        }
    }
}

/// Conjugate transpose `M*`.
pub fn conj_transpose(m: &AlgebraMatrix) -> AlgebraMatrix {
    m.conj_transpose()
}

impl Index<(usize, usize)> for AlgebraMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for AlgebraMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &AlgebraMatrix {
    type Output = AlgebraMatrix;
    fn mul(self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        self.matmul(rhs)
    }
}

impl Add for &AlgebraMatrix {
    type Output = AlgebraMatrix;
    fn add(self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &AlgebraMatrix {
    type Output = AlgebraMatrix;
    fn sub(self, rhs: &AlgebraMatrix) -> AlgebraMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}
