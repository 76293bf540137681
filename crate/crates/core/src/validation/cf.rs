//! Characteristic function of the type I Kotz-Riesz law,
//! `φ(T) = E exp(i Re tr(X T*))`.
//!
//! With `X = μ + Θ^{1/2} H₁ T_b G*` and `S = Θ^{1/2} T G`, averaging over the
//! Stiefel frame gives `₀F₁(nβ/2; -T_b S*S T_b* / 4)`, and the average over the
//! triangular factor is done degree by degree on the Bartlett grid:
//!
//! `φ(T) = e^{i Re tr μT*} Σ_t (-1/4)^t / t! Σ_{τ⊢t} E[C_τ(T_b B T_b*)] / [nβ/2]_τ`,
//! `B = S*S`.

use super::mean_se;
use super::moments::{congruence_eigenvalues, BartlettGrid};
use crate::algebra::AlgebraMatrix;
use crate::distributions::{KotzRiesz, KotzRieszParams, Variant};
use crate::error::{Error, Result};
use crate::jack::{ln_factorial, series_from_degrees, JackTable};
use crate::samplers::{draw_many, sample_kr_one, RngStream};
use crate::special::{gen_pochhammer, log_mv_gamma_weighted, GammaDomain, GammaSign, Partition};

#[derive(Clone, Debug)]
pub struct CfQuery {
    pub params: KotzRieszParams,
    pub t: AlgebraMatrix,
    pub t_max: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CfValue {
    pub re: f64,
    pub im: f64,
    /// Magnitude of the last retained degree.
    pub tail: f64,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McCf {
    pub re: f64,
    pub im: f64,
    pub se_re: f64,
    pub se_im: f64,
}

/// `Re tr(X T*)`, the real inner product of the components.
pub fn real_inner(x: &AlgebraMatrix, t: &AlgebraMatrix) -> f64 {
    x.as_slice()
        .iter()
        .zip(t.as_slice())
        .map(|(a, b)| {
            a.components()
                .iter()
                .zip(b.components())
                .map(|(p, q)| p * q)
                .sum::<f64>()
        })
        .sum()
}

struct Prepared {
    dist: KotzRiesz,
    table: &'static JackTable,
    /// `B = S*S`
    b: AlgebraMatrix,
    phase: f64,
}

fn prepare(q: &CfQuery) -> Result<Prepared> {
    let p = &q.params;
    if p.variant != Variant::I {
        return Err(Error::UnsupportedVariant);
    }
    if q.t.rows() != p.n || q.t.cols() != p.m {
        return Err(Error::DimensionMismatch(format!(
            "T is {}x{}, expected {}x{}",
            q.t.rows(),
            q.t.cols(),
            p.n,
            p.m
        )));
    }
    if q.t.algebra() != p.algebra {
        return Err(Error::AlgebraMismatch(format!(
            "T is over {}, parameters over {}",
            q.t.algebra(),
            p.algebra
        )));
    }
    let table = JackTable::shared(p.algebra.beta())?;
    if q.t_max > table.degree_max() {
        return Err(Error::DegreeTooLarge {
            degree: q.t_max,
            max: table.degree_max(),
        });
    }
    let dist = p.clone().validate()?;
    let s = (dist.theta_sqrt() * &q.t).matmul(dist.sigma_factor());
    let b = s.adjoint_mul(&s).symmetrized();
    let phase = real_inner(&p.mu, &q.t);
    Ok(Prepared {
        dist,
        table,
        b,
        phase,
    })
}

fn finish(terms: &[f64], phase: f64) -> CfValue {
    let s = series_from_degrees(terms);
    CfValue {
        re: s.value * phase.cos(),
        im: s.value * phase.sin(),
        tail: s.tail,
        converged: s.converged,
    }
}

fn inverse_pochhammers(
    table: &JackTable,
    a: f64,
    m: usize,
    t_max: usize,
) -> Result<Vec<Vec<(Partition, f64)>>> {
    (0..=t_max)
        .map(|t| {
            table
                .eval_degree(t, &vec![0.0; m])?
                .into_iter()
                .map(|(tau, _)| {
                    let poch = gen_pochhammer(a, &tau, table.beta());
                    if poch.is_zero() {
                        return Err(Error::PochhammerZero(tau.to_string()));
                    }
                    Ok((tau, f64::from(poch.sign) * (-poch.log_abs).exp()))
                })
                .collect()
        })
        .collect()
}

/// Truncated series for `φ(T)`, with the triangular-factor expectations
/// evaluated exactly.
pub fn cf_kr1(q: &CfQuery) -> Result<CfValue> {
    let prep = prepare(q)?;
    let p = prep.dist.params();
    let a = p.n as f64 * p.beta() / 2.0;
    let inv = inverse_pochhammers(prep.table, a, p.m, q.t_max)?;
    let grid = BartlettGrid::new(a, &p.kappa, p.m, p.algebra, q.t_max)?;
    let expectations = grid.expectation(q.t_max + 1, |tb| {
        let eigs = congruence_eigenvalues(tb, &prep.b)?;
        (0..=q.t_max)
            .map(|t| {
                let c = prep.table.eval_degree(t, &eigs)?;
                Ok(c.iter().zip(&inv[t]).map(|((_, v), (_, w))| v * w).sum())
            })
            .collect()
    })?;
    let terms: Vec<f64> = expectations
        .iter()
        .enumerate()
        .map(|(t, e)| (-0.25f64).powi(t as i32) * (-ln_factorial(t as u32)).exp() * e)
        .collect();
    Ok(finish(&terms, prep.phase))
}

/// The closed product form
/// `Σ_t (-1/4)^t/t! Σ_τ β^{-t} (Γ_m[a, κ+τ]/Γ_m[a, κ]) C_τ(B) / [a]_τ`, `a = nβ/2`.
/// It agrees with [`cf_kr1`] when m = 1 or κ has equal parts.
pub fn cf_kr1_product(q: &CfQuery) -> Result<CfValue> {
    let prep = prepare(q)?;
    let p = prep.dist.params();
    let beta = p.beta();
    let a = p.n as f64 * beta / 2.0;
    let inv = inverse_pochhammers(prep.table, a, p.m, q.t_max)?;
    let eigs = crate::algebra::hermitian_eigenvalues(&prep.b)?;
    let log_base = log_mv_gamma_weighted(&GammaDomain::new(
        a,
        p.m,
        beta,
        p.kappa.clone(),
        GammaSign::Plus,
    ))?;
    let mut terms = Vec::with_capacity(q.t_max + 1);
    for (t, weights) in inv.iter().enumerate().take(q.t_max + 1) {
        let mut sum = 0.0;
        for ((tau, c), (_, w)) in prep.table.eval_degree(t, &eigs)?.iter().zip(weights) {
            let dom = GammaDomain::new(a, p.m, beta, p.kappa.plus(tau), GammaSign::Plus);
            let ratio = (log_mv_gamma_weighted(&dom)? - log_base - t as f64 * beta.ln()).exp();
            sum += c * w * ratio;
        }
        terms.push((-0.25f64).powi(t as i32) * (-ln_factorial(t as u32)).exp() * sum);
    }
    Ok(finish(&terms, prep.phase))
}

/// Monte Carlo `φ(T)` for several `T` from one set of `count` draws.
pub fn mc_cf_estimates(
    params: &KotzRieszParams,
    ts: &[AlgebraMatrix],
    count: usize,
    rng: &RngStream,
) -> Result<Vec<McCf>> {
    if params.variant != Variant::I {
        return Err(Error::UnsupportedVariant);
    }
    for t in ts {
        if t.rows() != params.n || t.cols() != params.m || t.algebra() != params.algebra {
            return Err(Error::DimensionMismatch(
                "T must match the shape and algebra of X".into(),
            ));
        }
    }
    let dist = params.clone().validate()?;
    let angles = draw_many(rng, count, |r| {
        let x = sample_kr_one(&dist, r)?;
        Ok(ts.iter().map(|t| real_inner(&x, t)).collect::<Vec<f64>>())
    })?;
    Ok((0..ts.len())
        .map(|k| {
            let cos: Vec<f64> = angles.iter().map(|v| v[k].cos()).collect();
            let sin: Vec<f64> = angles.iter().map(|v| v[k].sin()).collect();
            let (re, se_re) = mean_se(&cos);
            let (im, se_im) = mean_se(&sin);
            McCf {
                re,
                im,
                se_re,
                se_im,
            }
        })
        .collect())
}

pub fn mc_cf_estimate(
    params: &KotzRieszParams,
    t: &AlgebraMatrix,
    count: usize,
    rng: &RngStream,
) -> Result<McCf> {
    Ok(mc_cf_estimates(params, std::slice::from_ref(t), count, rng)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{DivisionAlgebra, HermitianPD};
    use crate::samplers::random_hermitian_pd;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn scalar_t(v: f64) -> AlgebraMatrix {
        AlgebraMatrix::from_real(1, 1, &[v]).unwrap()
    }

    #[test]
    fn zero_argument() {
        let params = KotzRieszParams::spherical(Variant::I, p("1,0"), 3, 2, DivisionAlgebra::Real);
        let q = CfQuery {
            params: params.clone(),
            t: AlgebraMatrix::zeros(DivisionAlgebra::Real, 3, 2),
            t_max: 6,
        };
        let v = cf_kr1(&q).unwrap();
        assert!((v.re - 1.0).abs() < 1e-15 && v.im == 0.0);
        let mc = mc_cf_estimate(&params, &q.t, 500, &RngStream::new(1, 1)).unwrap();
        assert_eq!((mc.re, mc.se_re), (1.0, 0.0));
    }

    #[test]
    fn scalar_normal() {
        let params =
            KotzRieszParams::spherical(Variant::I, Partition::zero(), 1, 1, DivisionAlgebra::Real);
        let q = CfQuery {
            params,
            t: scalar_t(0.5),
            t_max: 8,
        };
        let v = cf_kr1(&q).unwrap();
        assert!((v.re - (-0.0625f64).exp()).abs() < 1e-8);
        assert!(v.converged && v.tail < 1e-12);
    }

    #[test]
    fn mean_shift_is_a_phase() {
        let mu = scalar_t(0.7);
        let params =
            KotzRieszParams::spherical(Variant::I, Partition::zero(), 1, 1, DivisionAlgebra::Real)
                .with_mu(mu);
        let v = cf_kr1(&CfQuery {
            params,
            t: scalar_t(0.5),
            t_max: 8,
        })
        .unwrap();
        let m = (-0.0625f64).exp();
        assert!(
            (v.re - m * 0.35f64.cos()).abs() < 1e-10 && (v.im - m * 0.35f64.sin()).abs() < 1e-10
        );
    }

    #[test]
    fn product_form_agrees_at_m1() {
        let params = KotzRieszParams::spherical(Variant::I, p("2"), 3, 1, DivisionAlgebra::Complex)
            .with_sigma(
                HermitianPD::new(AlgebraMatrix::diag_real(DivisionAlgebra::Complex, &[1.7]))
                    .unwrap(),
            );
        let mut r = RngStream::new(3, 0);
        let t = crate::samplers::gaussian_matrix(DivisionAlgebra::Complex, 3, 1, 0.1, &mut r);
        let q = CfQuery {
            params,
            t,
            t_max: 8,
        };
        let (a, b) = (cf_kr1(&q).unwrap(), cf_kr1_product(&q).unwrap());
        assert!((a.re - b.re).abs() < 1e-12, "{} vs {}", a.re, b.re);
    }

    #[test]
    fn series_matches_monte_carlo() {
        let mut r = RngStream::new(9, 0);
        let theta = random_hermitian_pd(DivisionAlgebra::Real, 3, &mut r);
        let sigma = random_hermitian_pd(DivisionAlgebra::Real, 2, &mut r);
        let params = KotzRieszParams::spherical(Variant::I, p("1"), 3, 2, DivisionAlgebra::Real)
            .with_theta(theta)
            .with_sigma(sigma);
        let t = crate::samplers::gaussian_matrix(DivisionAlgebra::Real, 3, 2, 0.09, &mut r);
        let v = cf_kr1(&CfQuery {
            params: params.clone(),
            t: t.clone(),
            t_max: 8,
        })
        .unwrap();
        let mc = mc_cf_estimate(&params, &t, 20_000, &RngStream::new(9, 1)).unwrap();
        assert!(
            (v.re - mc.re).abs() < 4.0 * mc.se_re + v.tail,
            "{} vs {} ± {}",
            v.re,
            mc.re,
            mc.se_re
        );
    }

    #[test]
    fn rejects_type_two_and_large_degree() {
        let params =
            KotzRieszParams::spherical(Variant::II, Partition::zero(), 4, 1, DivisionAlgebra::Real);
        let q = CfQuery {
            params,
            t: AlgebraMatrix::zeros(DivisionAlgebra::Real, 4, 1),
            t_max: 4,
        };
        assert!(matches!(cf_kr1(&q), Err(Error::UnsupportedVariant)));
        let params =
            KotzRieszParams::spherical(Variant::I, Partition::zero(), 1, 1, DivisionAlgebra::Real);
        let q = CfQuery {
            params,
            t: scalar_t(0.1),
            t_max: 9,
        };
        assert!(matches!(cf_kr1(&q), Err(Error::DegreeTooLarge { .. })));
    }
}
