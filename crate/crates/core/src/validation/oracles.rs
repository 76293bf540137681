//! One-dimensional quadrature of the integral identities at m = 1.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use super::quadrature::{
    integrate_power_origin, integrate_to_infinity, QuadSpec, ORACLE_TOLERANCE,
};
use crate::error::{Error, Result};

/// Which identity to integrate, with its scalar parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OracleKind {
    /// `∫₀^∞ e^{-x} x^{a+k-1} dx = Γ_1[a, (k)] = Γ(a+k)`.
    GammaWeightedPlus { a: f64, k: u32 },
    /// `∫₀^∞ e^{-x} x^{a-1} x^{-k} dx = Γ_1[a, -(k)] = Γ(a-k)`.
    GammaWeightedMinus { a: f64, k: u32 },
    /// `∫_{ℝ^{nβ}} f(|y|²) dy = π^{nβ/2}/Γ(nβ/2) ∫₀^∞ r^{nβ/2-1} f(r) dr` with
    /// `f(r) = e^{-c r}/(1+r)`; the left side by nested Cartesian quadrature.
    WishartPolar { n: usize, beta: u32, c: f64 },
    /// `∫₀^∞ f(zx) x^{a-1} (xu)^t dx = J(1) z^{-a} (u/z)^t` with `f = e^{-x}`
    /// and `J(1) = ∫₀^∞ f(x) x^{a-1+t} dx`.
    LaplaceScaling { a: f64, t: u32, z: f64, u: f64 },
}

/// Quadrature of the left side next to the closed-form right side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleValue {
    pub quadrature: f64,
    pub closed_form: f64,
}

impl OracleValue {
    pub fn relative_error(&self) -> f64 {
        ((self.quadrature - self.closed_form) / self.closed_form).abs()
    }
}

/// Largest Cartesian dimension handled by nested quadrature.
pub const MAX_CARTESIAN_DIM: usize = 3;

fn spec() -> QuadSpec {
    QuadSpec::relative(ORACLE_TOLERANCE * 1e-2)
}

/// Nested quadrature of `∫_{[0,∞)^d} g(|y|²) dy`, `g` decreasing.
fn orthant_integral(g: &(dyn Fn(f64) -> f64 + Sync), d: usize, r0: f64) -> Result<f64> {
    if d == 0 {
        return Ok(g(r0));
    }
    let inner_err = std::cell::Cell::new(None);
    let v = integrate_to_infinity(
        |y| match orthant_integral(g, d - 1, r0 + y * y) {
            Ok(v) => v,
            Err(e) => {
                inner_err.set(Some(e));
                f64::NAN
            }
        },
        0.0,
        QuadSpec::relative(1e-12),
    );
    if let Some(e) = inner_err.take() {
        return Err(e);
    }
    v
}

pub fn quadrature_oracle_1d(kind: OracleKind) -> Result<OracleValue> {
    match kind {
        OracleKind::GammaWeightedPlus { a, k } => {
            let s = a + f64::from(k);
            if !(a > 0.0) {
                return Err(Error::DomainViolation(format!(
                    "plus-weighted gamma integral at m = 1 needs a > 0, got {a}"
                )));
            }
            let q = integrate_power_origin(|x| ((s - 1.0) * x.ln() - x).exp(), s, spec())?;
            Ok(OracleValue {
                quadrature: q,
                closed_form: ln_gamma(s).exp(),
            })
        }
        OracleKind::GammaWeightedMinus { a, k } => {
            let s = a - f64::from(k);
            if !(s > 0.0) {
                return Err(Error::DomainViolation(format!(
                    "minus-weighted gamma integral at m = 1 needs a > k, got a = {a}, k = {k}"
                )));
            }
            let q = integrate_power_origin(
                |x| ((a - 1.0) * x.ln() - f64::from(k) * x.ln() - x).exp(),
                s,
                spec(),
            )?;
            Ok(OracleValue {
                quadrature: q,
                closed_form: ln_gamma(s).exp(),
            })
        }
        OracleKind::WishartPolar { n, beta, c } => {
            let d = n * beta as usize;
            if d == 0 || d > MAX_CARTESIAN_DIM {
                return Err(Error::DomainViolation(format!(
                    "Cartesian quadrature covers 1 to {MAX_CARTESIAN_DIM} real dimensions, got n*beta = {d}"
                )));
            }
            if !(c > 0.0) {
                return Err(Error::DomainViolation(format!(
                    "kernel rate must be positive, got {c}"
                )));
            }
            let f = move |r: f64| (-c * r).exp() / (1.0 + r);
            let lhs = orthant_integral(&f, d, 0.0)? * 2f64.powi(d as i32);
            let h = d as f64 / 2.0;
            let radial = integrate_power_origin(|r| r.powf(h - 1.0) * f(r), h, spec())?;
            let rhs = (h * PI.ln() - ln_gamma(h)).exp() * radial;
            Ok(OracleValue {
                quadrature: lhs,
                closed_form: rhs,
            })
        }
        OracleKind::LaplaceScaling { a, t, z, u } => {
            if !(a > 0.0 && z > 0.0) {
                return Err(Error::DomainViolation(format!(
                    "Laplace scaling at m = 1 needs a > 0 and z > 0, got a = {a}, z = {z}"
                )));
            }
            let tf = f64::from(t);
            let lhs = integrate_power_origin(
                |x| (-(z * x) + (a - 1.0) * x.ln()).exp() * (x * u).powi(t as i32),
                a + tf,
                spec(),
            )?;
            let j =
                integrate_power_origin(|x| (-x + (a - 1.0 + tf) * x.ln()).exp(), a + tf, spec())?;
            Ok(OracleValue {
                quadrature: lhs,
                closed_form: j * z.powf(-a) * (u / z).powi(t as i32),
            })
        }
    }
}
