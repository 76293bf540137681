//! Globally adaptive Gauss-Kronrod (7, 15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Target accuracy of the 1-d oracles.
pub const ORACLE_TOLERANCE: f64 = 1e-9;

const MAX_INTERVALS: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadSpec {
    pub rel: f64,
    pub abs: f64,
}

impl QuadSpec {
    pub fn relative(rel: f64) -> Self {
        QuadSpec { rel, abs: 0.0 }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.error.total_cmp(&o.error) == Ordering::Equal
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error.total_cmp(&o.error)
    }
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for k in 0..7 {
        let dx = h * XGK[k];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[k] * s;
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).abs();
    Piece {
        a,
        b,
        value,
        error: if value.is_finite() {
            error
        } else {
            f64::INFINITY
        },
    }
}

/// `∫_a^b f`, subdividing the worst interval until the summed error estimate
/// is below `max(spec.abs, spec.rel |I|)`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, spec: QuadSpec) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    heap.push(gk15(&f, a, b));
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let target = spec.abs.max(spec.rel * value.abs());
        if value.is_finite() && error <= target {
            return Ok(value);
        }
        if heap.len() >= MAX_INTERVALS || !error.is_finite() {
            return Err(Error::QuadratureFailure {
                tolerance: target,
                estimate: error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureFailure {
                tolerance: target,
                estimate: error,
            });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
    }
}

/// `∫_a^∞ f` through `x = a + t/(1-t)`.
pub fn integrate_to_infinity(f: impl Fn(f64) -> f64, a: f64, spec: QuadSpec) -> Result<f64> {
    integrate(
        |t| {
            let s = 1.0 - t;
            let v = f(a + t / s);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        spec,
    )
}

/// `∫_{-∞}^∞ f`.
pub fn integrate_real_line(f: impl Fn(f64) -> f64, spec: QuadSpec) -> Result<f64> {
    let right = integrate_to_infinity(&f, 0.0, spec)?;
    let left = integrate_to_infinity(|x| f(-x), 0.0, spec)?;
    Ok(left + right)
}

/// `∫_0^∞ h` where `h(r)` behaves like `r^{s-1}` near the origin. For `s < 1`
/// the piece on `[0, 1]` is integrated in `u = r^s`, which removes the
/// singularity.
pub fn integrate_power_origin(h: impl Fn(f64) -> f64, s: f64, spec: QuadSpec) -> Result<f64> {
    let head = if s < 1.0 {
        integrate(
            |u| {
                let r = u.powf(1.0 / s);
                let v = h(r);
                if v == 0.0 {
                    0.0
                } else {
                    v * r / (s * u)
                }
            },
            0.0,
            1.0,
            spec,
        )?
    } else {
        integrate(&h, 0.0, 1.0, spec)?
    };
    let tail = integrate_to_infinity(&h, 1.0, spec)?;
    Ok(head + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const SPEC: QuadSpec = QuadSpec {
        rel: 1e-12,
        abs: 0.0,
    };

    #[test]
    fn polynomial_and_trig() {
        let v = integrate(|x| x.powi(3) - x, 0.0, 2.0, SPEC).unwrap();
        assert!((v - 2.0).abs() < 1e-14);
        let v = integrate(f64::sin, 0.0, PI, SPEC).unwrap();
        assert!((v - 2.0).abs() < 1e-13);
    }

    #[test]
    fn infinite_ranges() {
        let v = integrate_real_line(|x| (-x * x).exp(), SPEC).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-12);
        let v = integrate_to_infinity(|x| 1.0 / (1.0 + x * x), 0.0, SPEC).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn singular_origin() {
        // Γ(0.3) via the u = r^s substitution
        let v = integrate_power_origin(|r| r.powf(-0.7) * (-r).exp(), 0.3, SPEC).unwrap();
        assert!((v / statrs::function::gamma::gamma(0.3) - 1.0).abs() < 1e-11);
    }

    #[test]
    fn nonintegrable_reports_failure() {
        let r = integrate(|x| 1.0 / x, 0.0, 1.0, SPEC);
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
