//! Jack-polynomial moments of the type I Riesz law.
//!
//! `Y = T*T` with the triangular factor of [`sample_riesz1_factor`], so any
//! polynomial moment of `Y` is an expectation over independent gamma and
//! Gaussian entries. A tensor Gauss rule (generalized Laguerre in `t_ii²`,
//! Hermite in the off-diagonal components) evaluates it exactly up to
//! rounding.
//!
//! Flipping the sign of a row of `T` leaves `eig(T A T*)` unchanged, so after
//! averaging the off-diagonal entries the integrand is even in each `t_ii` and
//! a polynomial of degree `|τ|` in `t_ii²`.

use rayon::prelude::*;

use super::gauss::{gauss_hermite, gauss_laguerre, GaussRule};
use super::mean_se;
use crate::algebra::{hermitian_eigenvalues, AlgebraMatrix, DivisionAlgebra, HermitianPD, Scalar};
use crate::error::{Error, Result, Violation};
use crate::jack::JackTable;
use crate::samplers::{draw_many, sample_riesz1_factor, RngStream};
use crate::special::{log_mv_gamma_weighted, GammaDomain, GammaSign, Partition};

/// Largest tensor grid the exact moment oracle will walk.
pub const MAX_GRID_POINTS: u64 = 2_000_000;

const GRID_CHUNK: u64 = 2048;

/// `E[C_τ(A Y)]` for `Y ~ Riesz-I(a, κ, I_m)`.
#[derive(Clone, Debug)]
pub struct MomentSpec {
    pub a: f64,
    pub kappa: Partition,
    pub tau: Partition,
    pub a_matrix: HermitianPD,
    pub beta: u32,
}

impl MomentSpec {
    pub fn new(a: f64, kappa: Partition, tau: Partition, a_matrix: HermitianPD) -> Self {
        let beta = a_matrix.algebra().beta();
        MomentSpec {
            a,
            kappa,
            tau,
            a_matrix,
            beta,
        }
    }

    pub fn m(&self) -> usize {
        self.a_matrix.dim()
    }

    pub fn violations(&self) -> Vec<Violation> {
        let m = self.m();
        let mut out = Vec::new();
        if self.beta != self.a_matrix.algebra().beta() {
            out.push(Violation {
                condition: "beta matches the algebra of A".into(),
                detail: format!(
                    "beta = {}, A is over {}",
                    self.beta,
                    self.a_matrix.algebra()
                ),
            });
        }
        for (name, p) in [("kappa", &self.kappa), ("tau", &self.tau)] {
            if !p.fits(m) {
                out.push(Violation {
                    condition: format!("{name} has at most m parts"),
                    detail: format!("{name} = {p}, m = {m}"),
                });
            }
        }
        if out.is_empty() {
            let bound =
                (m - 1) as f64 * f64::from(self.beta) / 2.0 - f64::from(self.kappa.part(m - 1));
            if !(self.a > bound) {
                out.push(Violation {
                    condition: "a > (m-1)*beta/2 - k_m".into(),
                    detail: format!("{} is not greater than {bound}", self.a),
                });
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(v))
        }
    }
}

/// Tensor Gauss rule for the entries of the triangular factor.
#[derive(Clone, Debug)]
pub struct BartlettGrid {
    algebra: DivisionAlgebra,
    m: usize,
    /// Per diagonal position: nodes are `t_ii`, weights are probabilities.
    diag: Vec<GaussRule>,
    /// Shared rule for every off-diagonal real component.
    offdiag: GaussRule,
    n_off: usize,
}

impl BartlettGrid {
    /// Exact for polynomials of degree `degree` in the entries of `T*T`.
    pub fn new(
        a: f64,
        kappa: &Partition,
        m: usize,
        algebra: DivisionAlgebra,
        degree: usize,
    ) -> Result<Self> {
        let beta = algebra.beta_f64();
        if m == 0 || !kappa.fits(m) {
            return Err(Error::DimensionMismatch(format!(
                "kappa = {kappa} does not fit m = {m}"
            )));
        }
        let n_diag = (degree + 1).div_ceil(2);
        let mut diag = Vec::with_capacity(m);
        for i in 0..m {
            let shape = a + f64::from(kappa.part(i)) - i as f64 * beta / 2.0;
            if !(shape > 0.0) {
                return Err(Error::InvalidParams(vec![Violation {
                    condition: "a > (m-1)*beta/2 - k_m".into(),
                    detail: format!("diagonal gamma shape {shape} at position {}", i + 1),
                }]));
            }
            let rule = gauss_laguerre(n_diag, shape - 1.0);
            diag.push(GaussRule {
                nodes: rule.nodes.iter().map(|x| (x / beta).sqrt()).collect(),
                weights: rule.weights,
            });
        }
        let herm = gauss_hermite(degree + 1);
        let scale = 1.0 / beta.sqrt();
        let offdiag = GaussRule {
            nodes: herm.nodes.iter().map(|x| x * scale).collect(),
            weights: herm.weights,
        };
        let n_off = algebra.beta() as usize * m * (m - 1) / 2;
        let grid = BartlettGrid {
            algebra,
            m,
            diag,
            offdiag,
            n_off,
        };
        let size = grid.size();
        if size > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge(size));
        }
        Ok(grid)
    }

    pub fn size(&self) -> u64 {
        let d: u64 = self.diag.iter().map(|r| r.len() as u64).product();
        let o = (self.offdiag.len() as u64).saturating_pow(self.n_off as u32);
        d.saturating_mul(o)
    }

    fn point(&self, mut index: u64) -> (f64, AlgebraMatrix) {
        let mut t = AlgebraMatrix::zeros(self.algebra, self.m, self.m);
        let mut w = 1.0;
        for (i, rule) in self.diag.iter().enumerate() {
            let k = (index % rule.len() as u64) as usize;
            index /= rule.len() as u64;
            t[(i, i)] = Scalar::real(rule.nodes[k]);
            w *= rule.weights[k];
        }
        let bsz = self.algebra.beta() as usize;
        let h = self.offdiag.len() as u64;
        for i in 0..self.m {
            for j in (i + 1)..self.m {
                let mut c = [0.0; 4];
                for x in c.iter_mut().take(bsz) {
                    let k = (index % h) as usize;
                    index /= h;
                    *x = self.offdiag.nodes[k];
                    w *= self.offdiag.weights[k];
                }
                t[(i, j)] = Scalar::from_components(&c);
            }
        }
        (w, t)
    }

    /// `E[f(T)]` componentwise, for `f` returning `len` values. Summation
    /// order is fixed, so the result does not depend on the thread count.
    pub fn expectation<F>(&self, len: usize, f: F) -> Result<Vec<f64>>
    where
        F: Fn(&AlgebraMatrix) -> Result<Vec<f64>> + Sync,
    {
        let size = self.size();
        let chunks = size.div_ceil(GRID_CHUNK);
        let partials: Vec<Result<Vec<f64>>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = vec![0.0; len];
                for index in c * GRID_CHUNK..((c + 1) * GRID_CHUNK).min(size) {
                    let (w, t) = self.point(index);
                    for (a, v) in acc.iter_mut().zip(f(&t)?) {
                        *a += w * v;
                    }
                }
                Ok(acc)
            })
            .collect();
        let mut total = vec![0.0; len];
        for p in partials {
            for (a, v) in total.iter_mut().zip(p?) {
                *a += v;
            }
        }
        Ok(total)
    }
}

/// Eigenvalues of `T A T*`, which are those of `A T*T`.
pub(crate) fn congruence_eigenvalues(t: &AlgebraMatrix, a: &AlgebraMatrix) -> Result<Vec<f64>> {
    hermitian_eigenvalues(&(t * a).mul_adjoint(t).symmetrized())
}

/// `E[C_τ(A Y)]` for `Y ~ Riesz-I(a, κ, I)`, exact by tensor Gauss quadrature.
pub fn riesz_moment_ctau(spec: &MomentSpec) -> Result<f64> {
    spec.check()?;
    let table = JackTable::shared(spec.beta)?;
    let degree = spec.tau.weight() as usize;
    if degree > table.degree_max() {
        return Err(Error::DegreeTooLarge {
            degree,
            max: table.degree_max(),
        });
    }
    if degree == 0 {
        return Ok(1.0);
    }
    let grid = BartlettGrid::new(
        spec.a,
        &spec.kappa,
        spec.m(),
        spec.a_matrix.algebra(),
        degree,
    )?;
    let a = spec.a_matrix.matrix();
    let v = grid.expectation(1, |t| {
        Ok(vec![
            table.jack_c(&spec.tau, &congruence_eigenvalues(t, a)?)?
        ])
    })?;
    Ok(v[0])
}

/// `β^{-|τ|} Γ_m[a, κ+τ] / Γ_m[a, κ] · C_τ(A)`: the closed product form with
/// the leading constant fixed by the scalar gamma moment. Exact for m = 1 and
/// for κ with equal parts; otherwise it disagrees with [`riesz_moment_ctau`].
pub fn riesz_moment_ctau_product(spec: &MomentSpec) -> Result<f64> {
    spec.check()?;
    let m = spec.m();
    let beta = f64::from(spec.beta);
    let sum = spec.kappa.plus(&spec.tau);
    let num = log_mv_gamma_weighted(&GammaDomain::new(spec.a, m, beta, sum, GammaSign::Plus))?;
    let den = log_mv_gamma_weighted(&GammaDomain::new(
        spec.a,
        m,
        beta,
        spec.kappa.clone(),
        GammaSign::Plus,
    ))?;
    let c = JackTable::shared(spec.beta)?.jack_c(&spec.tau, &spec.a_matrix.eigenvalues())?;
    Ok((num - den - f64::from(spec.tau.weight()) * beta.ln()).exp() * c)
}

/// Monte Carlo `E[C_τ(A Y)]` from `count` triangular draws: (mean, standard error).
pub fn riesz_moment_mc(spec: &MomentSpec, count: usize, rng: &RngStream) -> Result<(f64, f64)> {
    spec.check()?;
    let table = JackTable::shared(spec.beta)?;
    let (m, alg) = (spec.m(), spec.a_matrix.algebra());
    let a = spec.a_matrix.matrix();
    let values = draw_many(rng, count, |r| {
        let t = sample_riesz1_factor(spec.a, &spec.kappa, m, alg, r)?;
        table.jack_c(&spec.tau, &congruence_eigenvalues(&t, a)?)
    })?;
    Ok(mean_se(&values))
}
