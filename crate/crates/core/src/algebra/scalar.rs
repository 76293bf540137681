use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// An element of ℝ, ℂ or ℍ stored as a quaternion `re + i·i + j·j + k·k`.
///
/// Real and complex values simply keep the unused components at zero; the
/// Hamilton product restricted to those subspaces is ordinary real/complex
/// multiplication, so one representation serves all three algebras.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Scalar {
    pub re: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl Scalar {
    pub const ZERO: Scalar = Scalar {
        re: 0.0,
        i: 0.0,
        j: 0.0,
        k: 0.0,
    };
    pub const ONE: Scalar = Scalar {
        re: 1.0,
        i: 0.0,
        j: 0.0,
        k: 0.0,
    };

    pub const fn new(re: f64, i: f64, j: f64, k: f64) -> Self {
        Scalar { re, i, j, k }
    }

    pub const fn real(re: f64) -> Self {
        Scalar {
            re,
            i: 0.0,
            j: 0.0,
            k: 0.0,
        }
    }

    pub const fn complex(re: f64, im: f64) -> Self {
        Scalar {
            re,
            i: im,
            j: 0.0,
            k: 0.0,
        }
    }

    /// Builds a scalar from up to four components, real part first.
    pub fn from_components(c: &[f64]) -> Self {
        let get = |n: usize| c.get(n).copied().unwrap_or(0.0);
        Scalar::new(get(0), get(1), get(2), get(3))
    }

    pub fn components(&self) -> [f64; 4] {
        [self.re, self.i, self.j, self.k]
    }

    pub fn conj(self) -> Self {
        Scalar::new(self.re, -self.i, -self.j, -self.k)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Scalar::new(self.re * s, self.i * s, self.j * s, self.k * s)
    }

    pub fn inv(self) -> Self {
        self.conj().scale(1.0 / self.norm_sqr())
    }

    /// Largest absolute value among the imaginary components.
    pub fn imag_max(self) -> f64 {
        self.i.abs().max(self.j.abs()).max(self.k.abs())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar::new(self.re + o.re, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = *self + o;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        Scalar::new(self.re - o.re, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self = *self - o;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.i, -self.j, -self.k)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    // Hamilton product; not commutative once j or k are nonzero.
    fn mul(self, o: Scalar) -> Scalar {
        let (a1, b1, c1, d1) = (self.re, self.i, self.j, self.k);
        let (a2, b2, c2, d2) = (o.re, o.i, o.j, o.k);
        Scalar::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Mul<f64> for Scalar {
    type Output = Scalar;
    fn mul(self, s: f64) -> Scalar {
        self.scale(s)
    }
}

impl From<f64> for Scalar {
    fn from(re: f64) -> Self {
        Scalar::real(re)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_units() {
        let i = Scalar::new(0.0, 1.0, 0.0, 0.0);
        let j = Scalar::new(0.0, 0.0, 1.0, 0.0);
        let k = Scalar::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * i, -k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, Scalar::real(-1.0));
        assert_eq!(i * j * k, Scalar::real(-1.0));
    }

    #[test]
    fn conjugation_negates_imaginary_parts() {
        let q = Scalar::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(q.conj(), Scalar::new(1.0, -2.0, -3.0, -4.0));
        assert!((q * q.inv() - Scalar::ONE).norm() < 1e-15);
    }

    #[test]
    fn complex_subalgebra_is_closed() {
        let a = Scalar::complex(1.5, -0.5);
        let b = Scalar::complex(-2.0, 3.0);
        let p = a * b;
        assert_eq!(
            p,
            Scalar::complex(1.5 * -2.0 + 0.5 * 3.0, 1.5 * 3.0 + 0.5 * 2.0)
        );
        assert_eq!(a * b, b * a);
    }
}
