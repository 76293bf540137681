//! Partitions, generalized powers, generalized Pochhammer symbols and
//! multivariate gamma functions. Everything that can overflow is returned in
//! log space; quantities that can be negative carry an explicit sign.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use statrs::function::gamma::ln_gamma;

use crate::algebra::{AlgebraMatrix, HermitianPD};
use crate::error::{Error, Result};

/// A non-increasing sequence of nonnegative integers. Trailing zeros are not
/// stored, so `(2, 1, 0)` and `(2, 1)` are the same partition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not non-increasing"
            )));
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn zero() -> Self {
        Partition(Vec::new())
    }

    /// `(p, ..., p)` with `m` parts.
    pub fn constant(p: u32, m: usize) -> Self {
        if p == 0 {
            Partition::zero()
        } else {
            Partition(vec![p; m])
        }
    }

    /// Nonzero parts.
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// `k_{i+1}`, zero past the last nonzero part.
    pub fn part(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn largest(&self) -> u32 {
        self.part(0)
    }

    pub fn fits(&self, m: usize) -> bool {
        self.0.len() <= m
    }

    /// The parts padded with zeros to length `m`.
    pub fn padded(&self, m: usize) -> Result<Vec<u32>> {
        if !self.fits(m) {
            return Err(Error::InvalidPartition(format!(
                "{self} has more than {m} nonzero parts"
            )));
        }
        Ok((0..m).map(|i| self.part(i)).collect())
    }

    /// Elementwise sum `κ + τ`.
    pub fn plus(&self, other: &Partition) -> Partition {
        let n = self.len().max(other.len());
        Partition((0..n).map(|i| self.part(i) + other.part(i)).collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "(0)");
        }
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses comma separated parts such as `3,1` or `(2,1,0)`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s
            .trim()
            .trim_start_matches('(')
            .trim_end_matches(')')
            .trim();
        if trimmed.is_empty() {
            return Ok(Partition::zero());
        }
        let parts = trimmed
            .split(',')
            .map(|p| {
                p.trim().parse::<u32>().map_err(|_| {
                    Error::InvalidPartition(format!("cannot parse part {p:?} in {s:?}"))
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        Partition::new(parts)
    }
}

/// A real number stored as `sign · exp(log_abs)`; zero has sign 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLog {
    pub log_abs: f64,
    pub sign: i8,
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog {
        log_abs: 0.0,
        sign: 1,
    };
    pub const ZERO: SignedLog = SignedLog {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            SignedLog::ZERO
        } else {
            SignedLog {
                log_abs: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn positive(log_abs: f64) -> Self {
        SignedLog { log_abs, sign: 1 }
    }

    pub fn value(self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }
}

impl std::ops::Mul for SignedLog {
    type Output = SignedLog;

    fn mul(self, o: SignedLog) -> SignedLog {
        if self.is_zero() || o.is_zero() {
            return SignedLog::ZERO;
        }
        SignedLog {
            log_abs: self.log_abs + o.log_abs,
            sign: self.sign * o.sign,
        }
    }
}

/// Panics on division by zero.
impl std::ops::Div for SignedLog {
    type Output = SignedLog;

    fn div(self, o: SignedLog) -> SignedLog {
        assert!(!o.is_zero(), "division by a zero SignedLog");
        if self.is_zero() {
            return SignedLog::ZERO;
        }
        SignedLog {
            log_abs: self.log_abs - o.log_abs,
            sign: self.sign * o.sign,
        }
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!(
            "beta must be positive, got {beta}"
        )))
    }
}

/// Rising factorial `(x)_k = x (x+1) ... (x+k-1)`.
pub fn pochhammer(x: f64, k: u32) -> SignedLog {
    let mut acc = SignedLog::ONE;
    for j in 0..k {
        acc = acc * SignedLog::from_value(x + f64::from(j));
    }
    acc
}

/// `[a]_κ = ∏_i (a - (i-1)β/2)_{k_i}`.
pub fn gen_pochhammer(a: f64, kappa: &Partition, beta: f64) -> SignedLog {
    kappa
        .parts()
        .iter()
        .enumerate()
        .fold(SignedLog::ONE, |acc, (i, &k)| {
            acc * pochhammer(a - i as f64 * beta / 2.0, k)
        })
}

fn log_pi_factor(m: usize, beta: f64) -> f64 {
    (m * (m - 1)) as f64 * beta / 4.0 * PI.ln()
}

fn gamma_arg(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 {
        Ok(ln_gamma(x))
    } else {
        Err(Error::DomainViolation(format!(
            "{what}: gamma argument {x} is not positive"
        )))
    }
}

/// `log Γ_m[a] = log π^{m(m-1)β/4} + Σ_i log Γ(a - (i-1)β/2)`, for a > (m-1)β/2.
pub fn log_mv_gamma(a: f64, m: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if m == 0 {
        return Err(Error::DomainViolation("m must be at least 1".into()));
    }
    let bound = (m - 1) as f64 * beta / 2.0;
    if !(a > bound) {
        return Err(Error::DomainViolation(format!(
            "multivariate gamma needs a > (m-1)beta/2 = {bound}, got a = {a}"
        )));
    }
    let mut acc = log_pi_factor(m, beta);
    for i in 0..m {
        acc += gamma_arg(a - i as f64 * beta / 2.0, "multivariate gamma")?;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GammaSign {
    /// `Γ_m[a, κ]`
    Plus,
    /// `Γ_m[a, -κ]`
    Minus,
}

/// Arguments of the weighted multivariate gamma function.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaDomain {
    pub a: f64,
    pub m: usize,
    pub beta: f64,
    pub kappa: Partition,
    pub sign: GammaSign,
}

impl GammaDomain {
    pub fn new(a: f64, m: usize, beta: f64, kappa: Partition, sign: GammaSign) -> Self {
        GammaDomain {
            a,
            m,
            beta,
            kappa,
            sign,
        }
    }

    /// The lower bound on `a`: `(m-1)β/2 - k_m` for `+`, `(m-1)β/2 + k_1` for `-`.
    pub fn bound(&self) -> f64 {
        let base = self.m.saturating_sub(1) as f64 * self.beta / 2.0;
        match self.sign {
            GammaSign::Plus => base - f64::from(self.kappa.part(self.m.saturating_sub(1))),
            GammaSign::Minus => base + f64::from(self.kappa.largest()),
        }
    }

    pub fn check(&self) -> Result<()> {
        check_beta(self.beta)?;
        if self.m == 0 {
            return Err(Error::DomainViolation("m must be at least 1".into()));
        }
        self.kappa.padded(self.m)?;
        if !(self.a > self.bound()) {
            return Err(Error::DomainViolation(format!(
                "weighted gamma with sign {:?} needs a > {}, got a = {}",
                self.sign,
                self.bound(),
                self.a
            )));
        }
        Ok(())
    }
}

/// `log Γ_m[a, ±κ]`.
///
/// `+`: `log π^{m(m-1)β/4} + Σ log Γ(a + k_i - (i-1)β/2)`;
/// `-`: `log π^{m(m-1)β/4} + Σ log Γ(a - k_i - (m-i)β/2)`.
pub fn log_mv_gamma_weighted(dom: &GammaDomain) -> Result<f64> {
    dom.check()?;
    let (m, beta) = (dom.m, dom.beta);
    let mut acc = log_pi_factor(m, beta);
    for i in 0..m {
        let k = f64::from(dom.kappa.part(i));
        let x = match dom.sign {
            GammaSign::Plus => dom.a + k - i as f64 * beta / 2.0,
            GammaSign::Minus => dom.a - k - (m - 1 - i) as f64 * beta / 2.0,
        };
        acc += gamma_arg(x, "weighted multivariate gamma")?;
    }
    Ok(acc)
}

/// `log Vol(V_{m,n}) = log[2^m π^{mnβ/2} / Γ_m(nβ/2)]`.
pub fn stiefel_log_volume(n: usize, m: usize, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    if m == 0 || n < m {
        return Err(Error::DomainViolation(format!(
            "Stiefel manifold needs n >= m >= 1, got n={n}, m={m}"
        )));
    }
    let half = n as f64 * beta / 2.0;
    Ok(m as f64 * 2f64.ln() + m as f64 * half * PI.ln() - log_mv_gamma(half, m, beta)?)
}

fn weighted_minor_sum(log_minors: &[f64], parts: &[u32]) -> f64 {
    let m = parts.len();
    (0..m)
        .map(|p| {
            let next = if p + 1 < m { parts[p + 1] } else { 0 };
            f64::from(parts[p] - next) * log_minors[p]
        })
        .sum()
}

/// `log q_κ(A) = Σ_p (k_p - k_{p+1}) log |A_p|` over the leading minors.
pub fn log_q_kappa(a: &HermitianPD, kappa: &Partition) -> Result<f64> {
    let parts = kappa.padded(a.dim())?;
    Ok(weighted_minor_sum(&a.leading_minor_log_dets(), &parts))
}

pub fn q_kappa(a: &HermitianPD, kappa: &Partition) -> Result<f64> {
    log_q_kappa(a, kappa).map(f64::exp)
}

/// `log` of the determinants of the trailing `r x r` blocks, r = 1..m.
pub fn trailing_minor_log_dets(a: &HermitianPD) -> Vec<f64> {
    let m = a.dim();
    let src = a.matrix();
    let mut rev = AlgebraMatrix::zeros(src.algebra(), m, m);
    for i in 0..m {
        for j in 0..m {
            rev[(i, j)] = src[(m - 1 - i, m - 1 - j)];
        }
    }
    HermitianPD::new(rev)
        .expect("a permutation congruence of a PD matrix is PD")
        .leading_minor_log_dets()
}

/// `log q_κ(A⁻¹)` without forming the inverse: the p-th leading minor of A⁻¹
/// is the trailing `(m-p)` minor of A divided by |A|.
pub fn log_q_kappa_inverse(a: &HermitianPD, kappa: &Partition) -> Result<f64> {
    let m = a.dim();
    let parts = kappa.padded(m)?;
    let trailing = trailing_minor_log_dets(a);
    let log_det = trailing[m - 1];
    let inv_minors: Vec<f64> = (1..=m)
        .map(|p| {
            if p == m {
                -log_det
            } else {
                trailing[m - p - 1] - log_det
            }
        })
        .collect();
    Ok(weighted_minor_sum(&inv_minors, &parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DivisionAlgebra;
    use crate::test_util::pd_from_values;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, rtol: f64) -> bool {
        (a - b).abs() <= rtol * a.abs().max(b.abs())
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn partition_parsing_and_padding() {
        assert_eq!("3,1".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("(2,1,0)".parse::<Partition>().unwrap(), p(&[2, 1]));
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::zero());
        assert!("1,2".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
        assert_eq!(p(&[2, 1]).padded(3).unwrap(), vec![2, 1, 0]);
        assert!(p(&[1, 1, 1]).padded(2).is_err());
        assert_eq!(p(&[2, 1]).plus(&p(&[1, 1, 1])), p(&[3, 2, 1]));
        assert_eq!(p(&[2, 1]).to_string(), "(2,1)");
    }

    #[test]
    fn q_kappa_examples() {
        let a =
            HermitianPD::new(AlgebraMatrix::diag_real(DivisionAlgebra::Real, &[2.0, 3.0])).unwrap();
        assert_eq!(q_kappa(&a, &Partition::zero()).unwrap(), 1.0);
        assert!(close(q_kappa(&a, &p(&[2, 2])).unwrap(), 36.0, 1e-14));

        let d =
            HermitianPD::new(AlgebraMatrix::diag_real(DivisionAlgebra::Real, &[5.0, 2.0])).unwrap();
        assert!(close(q_kappa(&d, &p(&[3, 1])).unwrap(), 250.0, 1e-14));
        assert!(q_kappa(&d, &p(&[1, 1, 1])).is_err());
    }

    #[test]
    fn inverse_is_not_reciprocal_in_general() {
        // leading minors of the inverse are trailing minors over the determinant
        let a = HermitianPD::new(AlgebraMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap())
            .unwrap();
        let k = p(&[1]);
        assert!(close(q_kappa(&a, &k).unwrap(), 2.0, 1e-14));
        let direct = q_kappa(&a.inverse(), &k).unwrap();
        assert!(close(direct, 2.0 / 3.0, 1e-12));
        assert!(close(
            log_q_kappa_inverse(&a, &k).unwrap().exp(),
            direct,
            1e-12
        ));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(gen_pochhammer(1.7, &Partition::zero(), 1.0), SignedLog::ONE);
        assert!(close(
            gen_pochhammer(2.0, &p(&[3]), 1.0).value(),
            24.0,
            1e-14
        ));
        assert!(close(
            gen_pochhammer(3.0, &p(&[2, 1]), 1.0).value(),
            30.0,
            1e-14
        ));
        assert!(gen_pochhammer(-1.0, &p(&[3]), 2.0).is_zero());
        let neg = gen_pochhammer(-0.5, &p(&[1]), 1.0);
        assert_eq!(neg.sign, -1);
    }

    #[test]
    fn gamma_examples() {
        assert!(close(log_mv_gamma(4.0, 1, 1.0).unwrap(), 6f64.ln(), 1e-14));
        let expected = 0.5 * PI.ln() + ln_gamma(2.0) + ln_gamma(1.5);
        assert!(close(log_mv_gamma(2.0, 2, 1.0).unwrap(), expected, 1e-14));
        let expected = PI.ln() + 2f64.ln();
        assert!(close(log_mv_gamma(3.0, 2, 2.0).unwrap(), expected, 1e-14));
        assert!(log_mv_gamma(0.5, 2, 1.0).is_err());

        let plus = GammaDomain::new(3.0, 1, 1.0, p(&[2]), GammaSign::Plus);
        assert!(close(
            log_mv_gamma_weighted(&plus).unwrap(),
            24f64.ln(),
            1e-14
        ));
        let minus = GammaDomain::new(3.0, 1, 1.0, p(&[1]), GammaSign::Minus);
        assert!(log_mv_gamma_weighted(&minus).unwrap().abs() < 1e-14);
        for sign in [GammaSign::Plus, GammaSign::Minus] {
            let zero = GammaDomain::new(2.5, 3, 2.0, Partition::zero(), sign);
            assert!(close(
                log_mv_gamma_weighted(&zero).unwrap(),
                log_mv_gamma(2.5, 3, 2.0).unwrap(),
                1e-14
            ));
        }
        let bad = GammaDomain::new(2.0, 2, 1.0, p(&[2]), GammaSign::Minus);
        assert!(matches!(
            log_mv_gamma_weighted(&bad),
            Err(Error::DomainViolation(_))
        ));
    }

    #[test]
    fn stiefel_volume_examples() {
        assert!(close(
            stiefel_log_volume(1, 1, 1.0).unwrap(),
            2f64.ln(),
            1e-14
        ));
        assert!(close(
            stiefel_log_volume(2, 1, 1.0).unwrap(),
            (2.0 * PI).ln(),
            1e-14
        ));
        assert!(close(
            stiefel_log_volume(1, 1, 2.0).unwrap(),
            (2.0 * PI).ln(),
            1e-14
        ));
        // the 2-sphere has area 4π
        assert!(close(
            stiefel_log_volume(3, 1, 1.0).unwrap(),
            (4.0 * PI).ln(),
            1e-14
        ));
        assert!(stiefel_log_volume(1, 2, 1.0).is_err());
    }

    fn partition_strategy(m: usize) -> impl Strategy<Value = Partition> {
        prop::collection::vec(0u32..4, m).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            Partition::new(v).unwrap()
        })
    }

    fn pd_strategy() -> impl Strategy<Value = HermitianPD> {
        (
            1usize..=4,
            prop::sample::select(DivisionAlgebra::ALL.to_vec()),
        )
            .prop_flat_map(|(m, alg)| {
                prop::collection::vec(-1.0f64..1.0, 4 * m * m)
                    .prop_map(move |v| pd_from_values(alg, m, &v))
            })
    }

    proptest! {
        #[test]
        fn weighted_gamma_equals_pochhammer_times_gamma(
            m in 1usize..=4,
            beta in prop::sample::select(vec![1.0, 2.0, 4.0]),
            kappa in (1usize..=4).prop_flat_map(partition_strategy),
            offset in 0.01f64..6.0,
        ) {
            prop_assume!(kappa.fits(m));
            let a = (m - 1) as f64 * beta / 2.0 + offset;
            let lhs = log_mv_gamma_weighted(&GammaDomain::new(a, m, beta, kappa.clone(), GammaSign::Plus)).unwrap();
            let poch = gen_pochhammer(a, &kappa, beta);
            prop_assert_eq!(poch.sign, 1);
            let rhs = poch.log_abs + log_mv_gamma(a, m, beta).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }

        #[test]
        fn minus_gamma_reflection(
            m in 1usize..=4,
            beta in prop::sample::select(vec![1.0, 2.0, 4.0]),
            kappa in (1usize..=4).prop_flat_map(partition_strategy),
            offset in 0.01f64..6.0,
        ) {
            prop_assume!(kappa.fits(m));
            let base = (m - 1) as f64 * beta / 2.0;
            let a = base + f64::from(kappa.largest()) + offset;
            let minus = log_mv_gamma_weighted(&GammaDomain::new(a, m, beta, kappa.clone(), GammaSign::Minus)).unwrap();
            let poch = gen_pochhammer(-a + base + 1.0, &kappa, beta);
            let expected_sign = if kappa.weight() % 2 == 0 { 1 } else { -1 };
            prop_assert_eq!(poch.sign, expected_sign);
            let lhs = minus + poch.log_abs;
            let rhs = log_mv_gamma(a, m, beta).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
        }

        #[test]
        fn q_kappa_inverse_identity_via_trailing_minors(a in pd_strategy(), k in partition_strategy(4)) {
            prop_assume!(k.fits(a.dim()));
            let direct = log_q_kappa(&a.inverse(), &k).unwrap();
            let via_trailing = log_q_kappa_inverse(&a, &k).unwrap();
            prop_assert!((direct - via_trailing).abs() <= 1e-9 * direct.abs().max(1.0));
        }

        #[test]
        fn q_kappa_multiplicative_in_kappa(a in pd_strategy(), k in partition_strategy(4), t in partition_strategy(4), p in 0u32..3) {
            let m = a.dim();
            prop_assume!(k.fits(m) && t.fits(m));
            let sum = log_q_kappa(&a, &k.plus(&t)).unwrap();
            let parts = log_q_kappa(&a, &k).unwrap() + log_q_kappa(&a, &t).unwrap();
            prop_assert!((sum - parts).abs() <= 1e-10 * sum.abs().max(1.0));
            let shifted = log_q_kappa(&a, &k.plus(&Partition::constant(p, m))).unwrap();
            let expected = f64::from(p) * a.log_det() + log_q_kappa(&a, &k).unwrap();
            prop_assert!((shifted - expected).abs() <= 1e-10 * shifted.abs().max(1.0));
        }

        #[test]
        fn q_kappa_homogeneous(a in pd_strategy(), k in partition_strategy(4), c in 0.1f64..5.0) {
            prop_assume!(k.fits(a.dim()));
            let lhs = log_q_kappa(&a.scaled(c), &k).unwrap();
            let rhs = f64::from(k.weight()) * c.ln() + log_q_kappa(&a, &k).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0));
        }

        #[test]
        fn q_kappa_descending_diagonal(mut d in prop::collection::vec(0.1f64..10.0, 1..=4), k in partition_strategy(4)) {
            d.sort_by(|a, b| b.total_cmp(a));
            prop_assume!(k.fits(d.len()));
            let a = HermitianPD::new(AlgebraMatrix::diag_real(DivisionAlgebra::Real, &d)).unwrap();
            let expected: f64 = d.iter().enumerate().map(|(i, x)| f64::from(k.part(i)) * x.ln()).sum();
            prop_assert!((log_q_kappa(&a, &k).unwrap() - expected).abs() <= 1e-12 * expected.abs().max(1.0));
        }
    }
}
