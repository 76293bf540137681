//! Log densities of the Kotz-Riesz (spherical and elliptical) and Riesz
//! families, types I and II.
//!
//! Kotz-Riesz: `X = μ + Θ^{1/2} Z G*` with `G G* = Σ` and Z spherical, so with
//! `W = G⁻¹ (X-μ)* Θ⁻¹ (X-μ) G⁻*` and `a = nβ/2`,
//!
//! `log f(X) = log c - (mβ/2) log|Θ| - (nβ/2) log|Σ| - β tr W ± |κ| log β + log q_κ(W^{±1})`
//!
//! with `c = β^{am} Γ_m[a] / (π^{am} Γ_m[a, ±κ])`.
//!
//! Riesz: `log f(Y) = log c - β tr(Σ⁻¹Y) + (a - (m-1)β/2 - 1) log|Y| + log q_κ(Y^{±1})`
//! with `c = β^{am+|κ|} / (Γ_m[a,κ] |Σ|^a q_κ(Σ))` for type I and
//! `c = β^{am-|κ|} / (Γ_m[a,-κ] |Σ|^a q_κ(Σ⁻¹))` for type II. The type II
//! constant is the one that makes the kernel integrate to one: substituting
//! `Y = N W N*` with N upper triangular and `N N* = Σ` factors
//! `q_κ(Y⁻¹) = q_κ(Σ⁻¹) q_κ(W⁻¹)`. It equals `q_κ(Σ)` only when the two
//! happen to be reciprocal, e.g. for diagonal Σ.

use std::f64::consts::PI;

use crate::algebra::{lower_triangular_inverse, AlgebraMatrix, DivisionAlgebra, HermitianPD};
use crate::error::{Error, Result, Violation};
use crate::special::{
    log_mv_gamma, log_mv_gamma_weighted, log_q_kappa, log_q_kappa_inverse, GammaDomain, GammaSign,
    Partition,
};

/// Smallest Cholesky pivot accepted for a density argument.
pub const DEGENERATE_PIVOT: f64 = 1e-300;

/// Pivots below this fraction of their diagonal entry are lost to cancellation.
pub const RELATIVE_PIVOT: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    I,
    II,
}

impl Variant {
    fn gamma_sign(self) -> GammaSign {
        match self {
            Variant::I => GammaSign::Plus,
            Variant::II => GammaSign::Minus,
        }
    }

    fn condition(self) -> &'static str {
        match self {
            Variant::I => "(m-1)*beta/2 - k_m",
            Variant::II => "(m-1)*beta/2 + k_1",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Variant::I),
            "II" | "2" => Ok(Variant::II),
            _ => Err(Error::DomainViolation(format!(
                "unknown variant {s:?}; expected I or II"
            ))),
        }
    }
}

/// Which factor `G` of `Σ = G G*` enters `X = μ + Θ^{1/2} Z G*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SigmaFactor {
    /// `G = Σ^{1/2}`.
    SymmetricRoot,
    /// `G` lower triangular; with this choice `X*Θ⁻¹X` is exactly Riesz(nβ/2, κ, Σ).
    #[default]
    CholeskyLower,
}

impl SigmaFactor {
    pub fn name(self) -> &'static str {
        match self {
            SigmaFactor::SymmetricRoot => "symmetric_root",
            SigmaFactor::CholeskyLower => "cholesky_lower",
        }
    }

    /// `G` for the given Σ.
    pub fn factor(self, sigma: &HermitianPD) -> AlgebraMatrix {
        match self {
            SigmaFactor::SymmetricRoot => sigma.sqrt().into_matrix(),
            SigmaFactor::CholeskyLower => sigma.cholesky().clone(),
        }
    }
}

impl std::str::FromStr for SigmaFactor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric_root" => Ok(SigmaFactor::SymmetricRoot),
            "cholesky_lower" => Ok(SigmaFactor::CholeskyLower),
            _ => Err(Error::DomainViolation(format!(
                "unknown sigma factor convention {s:?}; expected symmetric_root or cholesky_lower"
            ))),
        }
    }
}

fn violation(condition: &str, detail: String) -> Violation {
    Violation {
        condition: condition.to_string(),
        detail,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KotzRieszParams {
    pub variant: Variant,
    pub kappa: Partition,
    pub n: usize,
    pub m: usize,
    pub algebra: DivisionAlgebra,
    pub mu: AlgebraMatrix,
    pub theta: HermitianPD,
    pub sigma: HermitianPD,
    pub convention: SigmaFactor,
}

impl KotzRieszParams {
    /// `μ = 0`, `Θ = I_n`, `Σ = I_m`.
    pub fn spherical(
        variant: Variant,
        kappa: Partition,
        n: usize,
        m: usize,
        algebra: DivisionAlgebra,
    ) -> Self {
        KotzRieszParams {
            variant,
            kappa,
            n,
            m,
            algebra,
            mu: AlgebraMatrix::zeros(algebra, n.max(1), m.max(1)),
            theta: HermitianPD::identity(algebra, n.max(1)),
            sigma: HermitianPD::identity(algebra, m.max(1)),
            convention: SigmaFactor::default(),
        }
    }

    pub fn with_mu(mut self, mu: AlgebraMatrix) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_theta(mut self, theta: HermitianPD) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_sigma(mut self, sigma: HermitianPD) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_convention(mut self, convention: SigmaFactor) -> Self {
        self.convention = convention;
        self
    }

    pub fn beta(&self) -> f64 {
        self.algebra.beta_f64()
    }

    /// Every violated condition; empty when the parameters are usable.
    pub fn violations(&self) -> Vec<Violation> {
        let (n, m, beta) = (self.n, self.m, self.beta());
        let mut out = Vec::new();
        if m == 0 {
            out.push(violation("m >= 1", format!("m = {m}")));
        }
        if n < m {
            out.push(violation("n >= m", format!("n = {n}, m = {m}")));
        }
        if (self.mu.rows(), self.mu.cols()) != (n, m) {
            out.push(violation(
                "mu is n x m",
                format!("got {}x{}", self.mu.rows(), self.mu.cols()),
            ));
        }
        if self.theta.dim() != n {
            out.push(violation(
                "Theta is n x n",
                format!("got dimension {}", self.theta.dim()),
            ));
        }
        if self.sigma.dim() != m {
            out.push(violation(
                "Sigma is m x m",
                format!("got dimension {}", self.sigma.dim()),
            ));
        }
        for (name, alg) in [
            ("mu", self.mu.algebra()),
            ("Theta", self.theta.algebra()),
            ("Sigma", self.sigma.algebra()),
        ] {
            if alg != self.algebra {
                out.push(violation(
                    &format!("{name} over the {} algebra", self.algebra),
                    format!("got {alg}"),
                ));
            }
        }
        if !self.kappa.fits(m) {
            out.push(violation(
                "kappa has at most m parts",
                format!("kappa = {}, m = {m}", self.kappa),
            ));
        } else if m > 0 {
            let dom = GammaDomain::new(
                n as f64 * beta / 2.0,
                m,
                beta,
                self.kappa.clone(),
                self.variant.gamma_sign(),
            );
            if !(dom.a > dom.bound()) {
                out.push(violation(
                    &format!("n*beta/2 > {}", self.variant.condition()),
                    format!("{} is not greater than {}", dom.a, dom.bound()),
                ));
            }
        }
        out
    }

    pub fn validate(self) -> Result<KotzRiesz> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(Error::InvalidParams(v));
        }
        KotzRiesz::build(self)
    }
}

/// Validated Kotz-Riesz parameters with the factorizations the density and
/// the sampler need.
#[derive(Clone, Debug)]
pub struct KotzRiesz {
    params: KotzRieszParams,
    theta_chol_inv: AlgebraMatrix,
    theta_sqrt: AlgebraMatrix,
    sigma_factor: AlgebraMatrix,
    sigma_factor_inv_adj: AlgebraMatrix,
    log_norm: f64,
}

impl KotzRiesz {
    fn build(params: KotzRieszParams) -> Result<Self> {
        let (n, m, beta) = (params.n, params.m, params.beta());
        let a = n as f64 * beta / 2.0;
        let weight = f64::from(params.kappa.weight());
        let log_gamma_k = log_mv_gamma_weighted(&GammaDomain::new(
            a,
            m,
            beta,
            params.kappa.clone(),
            params.variant.gamma_sign(),
        ))?;
        let sign = match params.variant {
            Variant::I => 1.0,
            Variant::II => -1.0,
        };
        let log_norm = a * m as f64 * (beta.ln() - PI.ln()) + log_mv_gamma(a, m, beta)?
            - log_gamma_k
            - m as f64 * beta / 2.0 * params.theta.log_det()
            - a * params.sigma.log_det()
            + sign * weight * beta.ln();
        let sigma_factor = params.convention.factor(&params.sigma);
        let sigma_factor_inv_adj = match params.convention {
            SigmaFactor::SymmetricRoot => params.sigma.sqrt().inverse().into_matrix(),
            SigmaFactor::CholeskyLower => lower_triangular_inverse(&sigma_factor).conj_transpose(),
        };
        Ok(KotzRiesz {
            theta_chol_inv: lower_triangular_inverse(params.theta.cholesky()),
            theta_sqrt: params.theta.sqrt().into_matrix(),
            sigma_factor,
            sigma_factor_inv_adj,
            log_norm,
            params,
        })
    }

    pub fn params(&self) -> &KotzRieszParams {
        &self.params
    }

    pub fn theta_sqrt(&self) -> &AlgebraMatrix {
        &self.theta_sqrt
    }

    /// The factor G with `G G* = Σ` selected by the convention.
    pub fn sigma_factor(&self) -> &AlgebraMatrix {
        &self.sigma_factor
    }

    /// Log of the constant in front of the kernel.
    pub fn log_normalizer(&self) -> f64 {
        self.log_norm
    }

    /// `W = G⁻¹ (X-μ)* Θ⁻¹ (X-μ) G⁻*`.
    pub fn standardized_gram(&self, x: &AlgebraMatrix) -> Result<HermitianPD> {
        let u = self.standardized(x)?;
        let w = HermitianPD::new(u.adjoint_mul(&u))?;
        check_pivots(&w)?;
        Ok(w)
    }

    fn standardized(&self, x: &AlgebraMatrix) -> Result<AlgebraMatrix> {
        let p = &self.params;
        if (x.rows(), x.cols()) != (p.n, p.m) {
            return Err(Error::DimensionMismatch(format!(
                "point is {}x{}, expected {}x{}",
                x.rows(),
                x.cols(),
                p.n,
                p.m
            )));
        }
        if x.algebra() != p.algebra {
            return Err(Error::AlgebraMismatch(format!(
                "point is over the {} algebra",
                x.algebra()
            )));
        }
        Ok(&(&self.theta_chol_inv * &(x - &p.mu)) * &self.sigma_factor_inv_adj)
    }

    pub fn log_density(&self, x: &AlgebraMatrix) -> Result<f64> {
        if self.params.kappa.is_zero() {
            // no generalized power: the Gram matrix may be singular
            let u = self.standardized(x)?;
            return Ok(self.log_norm - self.params.beta() * u.frobenius_norm().powi(2));
        }
        let w = self.standardized_gram(x)?;
        let beta = self.params.beta();
        let q = match self.params.variant {
            Variant::I => log_q_kappa(&w, &self.params.kappa)?,
            Variant::II => log_q_kappa_inverse(&w, &self.params.kappa)?,
        };
        Ok(self.log_norm - beta * w.matrix().trace_re() + q)
    }

    /// The Riesz law of `X*Θ⁻¹X` under the lower Cholesky convention.
    pub fn gram_law(&self) -> RieszParams {
        let p = &self.params;
        RieszParams {
            variant: p.variant,
            a: p.n as f64 * p.beta() / 2.0,
            kappa: p.kappa.clone(),
            sigma: p.sigma.clone(),
            algebra: p.algebra,
        }
    }
}

fn check_pivots(p: &HermitianPD) -> Result<()> {
    let l = p.cholesky();
    let m = p.matrix();
    if (0..p.dim()).any(|i| {
        let pivot = l[(i, i)].re * l[(i, i)].re;
        pivot < DEGENERATE_PIVOT || pivot < RELATIVE_PIVOT * m[(i, i)].re
    }) {
        return Err(Error::DomainViolation(
            "matrix argument is numerically singular".into(),
        ));
    }
    Ok(())
}

pub fn log_density_kr(params: &KotzRieszParams, x: &AlgebraMatrix) -> Result<f64> {
    params.clone().validate()?.log_density(x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RieszParams {
    pub variant: Variant,
    pub a: f64,
    pub kappa: Partition,
    pub sigma: HermitianPD,
    pub algebra: DivisionAlgebra,
}

impl RieszParams {
    pub fn new(variant: Variant, a: f64, kappa: Partition, sigma: HermitianPD) -> Self {
        let algebra = sigma.algebra();
        RieszParams {
            variant,
            a,
            kappa,
            sigma,
            algebra,
        }
    }

    pub fn m(&self) -> usize {
        self.sigma.dim()
    }

    pub fn violations(&self) -> Vec<Violation> {
        let m = self.m();
        let beta = self.algebra.beta_f64();
        let mut out = Vec::new();
        if self.sigma.algebra() != self.algebra {
            out.push(violation(
                &format!("Sigma over the {} algebra", self.algebra),
                format!("got {}", self.sigma.algebra()),
            ));
        }
        if !self.a.is_finite() {
            out.push(violation("a is finite", format!("a = {}", self.a)));
        }
        if !self.kappa.fits(m) {
            out.push(violation(
                "kappa has at most m parts",
                format!("kappa = {}, m = {m}", self.kappa),
            ));
        } else {
            let dom = GammaDomain::new(
                self.a,
                m,
                beta,
                self.kappa.clone(),
                self.variant.gamma_sign(),
            );
            if !(dom.a > dom.bound()) {
                out.push(violation(
                    &format!("a > {}", self.variant.condition()),
                    format!("{} is not greater than {}", dom.a, dom.bound()),
                ));
            }
        }
        out
    }

    pub fn validate(self) -> Result<Riesz> {
        let v = self.violations();
        if !v.is_empty() {
            return Err(Error::InvalidParams(v));
        }
        Riesz::build(self)
    }
}

#[derive(Clone, Debug)]
pub struct Riesz {
    params: RieszParams,
    sigma_inv: HermitianPD,
    log_norm: f64,
}

impl Riesz {
    fn build(params: RieszParams) -> Result<Self> {
        let m = params.m();
        let beta = params.algebra.beta_f64();
        let weight = f64::from(params.kappa.weight());
        let log_gamma_k = log_mv_gamma_weighted(&GammaDomain::new(
            params.a,
            m,
            beta,
            params.kappa.clone(),
            params.variant.gamma_sign(),
        ))?;
        let am = params.a * m as f64;
        let log_norm = match params.variant {
            Variant::I => {
                (am + weight) * beta.ln()
                    - log_gamma_k
                    - params.a * params.sigma.log_det()
                    - log_q_kappa(&params.sigma, &params.kappa)?
            }
            Variant::II => {
                (am - weight) * beta.ln()
                    - log_gamma_k
                    - params.a * params.sigma.log_det()
                    - log_q_kappa_inverse(&params.sigma, &params.kappa)?
            }
        };
        Ok(Riesz {
            sigma_inv: params.sigma.inverse(),
            log_norm,
            params,
        })
    }

    pub fn params(&self) -> &RieszParams {
        &self.params
    }

    pub fn log_normalizer(&self) -> f64 {
        self.log_norm
    }

    pub fn log_density(&self, y: &HermitianPD) -> Result<f64> {
        let p = &self.params;
        if y.dim() != p.m() || y.algebra() != p.algebra {
            return Err(Error::DimensionMismatch(format!(
                "point must be {0}x{0} over the {1} algebra",
                p.m(),
                p.algebra
            )));
        }
        check_pivots(y)?;
        let m = p.m() as f64;
        let beta = p.algebra.beta_f64();
        let exponent = p.a - (m - 1.0) * beta / 2.0 - 1.0;
        let trace = (self.sigma_inv.matrix() * y.matrix()).trace_re();
        let q = match p.variant {
            Variant::I => log_q_kappa(y, &p.kappa)?,
            Variant::II => log_q_kappa_inverse(y, &p.kappa)?,
        };
        Ok(self.log_norm - beta * trace + exponent * y.log_det() + q)
    }
}

pub fn log_density_riesz(params: &RieszParams, y: &HermitianPD) -> Result<f64> {
    params.clone().validate()?.log_density(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Scalar;
    use statrs::function::gamma::ln_gamma;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn scalar_matrix(x: f64) -> AlgebraMatrix {
        AlgebraMatrix::from_real(1, 1, &[x]).unwrap()
    }

    #[test]
    fn validation_examples() {
        let alg = DivisionAlgebra::Real;
        assert!(KotzRieszParams::spherical(Variant::I, p(&[1]), 4, 2, alg)
            .validate()
            .is_ok());
        let err = KotzRieszParams::spherical(Variant::I, Partition::zero(), 1, 2, alg).validate();
        match err {
            Err(Error::InvalidParams(v)) => assert!(v.iter().any(|x| x.condition == "n >= m")),
            other => panic!("unexpected {other:?}"),
        }
        let err = KotzRieszParams::spherical(Variant::II, p(&[2]), 3, 2, alg).validate();
        match err {
            Err(Error::InvalidParams(v)) => {
                assert_eq!(v.len(), 1);
                assert!(v[0].condition.contains("k_1"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let riesz = RieszParams::new(Variant::I, 0.2, p(&[1, 1]), HermitianPD::identity(alg, 2));
        assert!(riesz.validate().is_ok());
        let riesz = RieszParams::new(Variant::II, 1.0, p(&[1]), HermitianPD::identity(alg, 2));
        assert!(matches!(riesz.validate(), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn scalar_normal_reduction() {
        for variant in [Variant::I, Variant::II] {
            let kr =
                KotzRieszParams::spherical(variant, Partition::zero(), 1, 1, DivisionAlgebra::Real)
                    .validate()
                    .unwrap();
            for x in [0.3f64, -1.2, 2.5] {
                let expected = -0.5 * PI.ln() - x * x;
                let got = kr.log_density(&scalar_matrix(x)).unwrap();
                assert!((got - expected).abs() < 1e-12 * expected.abs().max(1.0));
            }
        }
    }

    #[test]
    fn scalar_riesz_is_gamma() {
        for (a, k, beta) in [(1.5, 2, 1u32), (0.7, 0, 2), (3.0, 1, 4)] {
            let alg = DivisionAlgebra::from_beta(beta).unwrap();
            let b = f64::from(beta);
            let sigma = HermitianPD::identity(alg, 1);
            let r = RieszParams::new(Variant::I, a, p(&[k]), sigma)
                .validate()
                .unwrap();
            for y in [0.2, 1.0, 3.7] {
                let shape = a + f64::from(k);
                let expected =
                    shape * b.ln() - ln_gamma(shape) + (shape - 1.0) * f64::ln(y) - b * y;
                let point = HermitianPD::new(AlgebraMatrix::diag_real(alg, &[y])).unwrap();
                let got = r.log_density(&point).unwrap();
                assert!(
                    (got - expected).abs() < 1e-12 * expected.abs().max(1.0),
                    "{got} {expected}"
                );
            }
        }
    }

    #[test]
    fn weight_zero_variants_coincide() {
        let alg = DivisionAlgebra::Complex;
        let sigma = HermitianPD::new(
            AlgebraMatrix::from_scalars(
                alg,
                2,
                2,
                vec![
                    Scalar::real(2.0),
                    Scalar::complex(0.3, 0.4),
                    Scalar::complex(0.3, -0.4),
                    Scalar::real(1.0),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let y = HermitianPD::new(AlgebraMatrix::diag_real(alg, &[0.5, 1.5])).unwrap();
        let one = RieszParams::new(Variant::I, 3.0, Partition::zero(), sigma.clone())
            .validate()
            .unwrap();
        let two = RieszParams::new(Variant::II, 3.0, Partition::zero(), sigma)
            .validate()
            .unwrap();
        let (a, b) = (one.log_density(&y).unwrap(), two.log_density(&y).unwrap());
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn conventions_agree_for_equal_parts() {
        let alg = DivisionAlgebra::Real;
        let sigma =
            HermitianPD::new(AlgebraMatrix::from_real(2, 2, &[2.0, 0.7, 0.7, 1.0]).unwrap())
                .unwrap();
        let x =
            AlgebraMatrix::from_real(4, 2, &[0.3, -1.0, 0.8, 0.2, -0.4, 1.1, 0.5, 0.5]).unwrap();
        for variant in [Variant::I, Variant::II] {
            let base = KotzRieszParams::spherical(variant, p(&[1, 1]), 4, 2, alg)
                .with_sigma(sigma.clone());
            let chol = base.clone().validate().unwrap().log_density(&x).unwrap();
            let sym = base
                .with_convention(SigmaFactor::SymmetricRoot)
                .validate()
                .unwrap()
                .log_density(&x)
                .unwrap();
            assert!((chol - sym).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_deficient_point_is_rejected() {
        let kr = KotzRieszParams::spherical(Variant::I, p(&[1]), 2, 2, DivisionAlgebra::Real)
            .validate()
            .unwrap();
        let x = AlgebraMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(kr.log_density(&x).is_err());
    }
}
