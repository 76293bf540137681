//! Properties across the algebra, generalized powers and densities.

use proptest::prelude::*;
use riesz_core::algebra::lower_triangular_inverse;
use riesz_core::distributions::{KotzRieszParams, RieszParams, Variant};
use riesz_core::samplers::{
    gaussian_matrix, random_hermitian_pd, random_lower_triangular, RngStream,
};
use riesz_core::special::{log_q_kappa, log_q_kappa_inverse};
use riesz_core::{AlgebraMatrix, DivisionAlgebra, HermitianPD, Partition};

fn algebra() -> impl Strategy<Value = DivisionAlgebra> {
    prop::sample::select(DivisionAlgebra::ALL.to_vec())
}

fn partition(m: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0u32..4, m).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn close(a: f64, b: f64, rtol: f64) -> bool {
    (a - b).abs() <= rtol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cholesky_round_trip(alg in algebra(), m in 1usize..=6, seed in any::<u64>()) {
        let a = random_hermitian_pd(alg, m, &mut RngStream::new(seed, 0));
        let l = a.cholesky();
        prop_assert!(l.mul_adjoint(l).max_abs_diff(a.matrix()) <= 1e-12 * a.matrix().max_abs());
        for i in 0..m {
            prop_assert!(l[(i, i)].re > 0.0);
            prop_assert!(l[(i, i)].components()[1..].iter().all(|&c| c == 0.0));
        }
        let inv = a.inverse();
        let id = a.matrix() * inv.matrix();
        prop_assert!(id.max_abs_diff(&AlgebraMatrix::identity(alg, m)) <= 1e-9);
    }

    #[test]
    fn lower_congruence_is_multiplicative(alg in algebra(), m in 1usize..=4, k in partition(4), seed in any::<u64>()) {
        prop_assume!(k.fits(m));
        let mut r = RngStream::new(seed, 1);
        let a = random_hermitian_pd(alg, m, &mut r);
        let l = random_lower_triangular(alg, m, &mut r);
        let llt = HermitianPD::from_lower_factor(&l).unwrap();
        let lal = HermitianPD::new((&l * a.matrix()).mul_adjoint(&l)).unwrap();
        let lhs = log_q_kappa(&lal, &k).unwrap();
        let rhs = log_q_kappa(&llt, &k).unwrap() + log_q_kappa(&a, &k).unwrap();
        prop_assert!(close(lhs, rhs, 1e-10));
        // on L L* the generalized power is the character Π |l_ii|^{2k_i}
        let diag: f64 = (0..m).map(|i| 2.0 * f64::from(k.part(i)) * l[(i, i)].re.ln()).sum();
        prop_assert!(close(log_q_kappa(&llt, &k).unwrap(), diag, 1e-10));
        // the inverse-argument power transforms with the upper factor L⁻*
        let li = lower_triangular_inverse(&l);
        let upper = li.conj_transpose();
        let uau = HermitianPD::new((&upper * a.matrix()).mul_adjoint(&upper)).unwrap();
        let lhs = log_q_kappa_inverse(&uau, &k).unwrap();
        let rhs = log_q_kappa_inverse(&a, &k).unwrap() + log_q_kappa(&llt, &k).unwrap();
        prop_assert!(close(lhs, rhs, 1e-9));
    }

    #[test]
    fn kotz_riesz_density_is_affine_covariant(
        alg in algebra(),
        variant in prop::sample::select(vec![Variant::I, Variant::II]),
        m in 1usize..=3,
        extra in 0usize..3,
        k in partition(3),
        seed in any::<u64>(),
    ) {
        let n = m + extra + if variant == Variant::II { 4 } else { 0 };
        prop_assume!(k.fits(m));
        let spherical = KotzRieszParams::spherical(variant, k.clone(), n, m, alg);
        prop_assume!(spherical.violations().is_empty());
        let mut r = RngStream::new(seed, 2);
        let params = spherical.clone()
            .with_mu(gaussian_matrix(alg, n, m, 1.0, &mut r))
            .with_theta(random_hermitian_pd(alg, n, &mut r))
            .with_sigma(random_hermitian_pd(alg, m, &mut r));
        let dist = params.clone().validate().unwrap();
        let base = spherical.validate().unwrap();
        let z = gaussian_matrix(alg, n, m, 0.5, &mut r);
        let x = &params.mu + &(dist.theta_sqrt() * &z).mul_adjoint(dist.sigma_factor());
        let beta = alg.beta_f64();
        let jac = m as f64 * beta / 2.0 * params.theta.log_det() + n as f64 * beta / 2.0 * params.sigma.log_det();
        let lhs = dist.log_density(&x).unwrap();
        let rhs = base.log_density(&z).unwrap() - jac;
        prop_assert!(close(lhs, rhs, 1e-9), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn riesz_density_is_congruence_covariant(
        alg in algebra(),
        variant in prop::sample::select(vec![Variant::I, Variant::II]),
        m in 1usize..=3,
        k in partition(3),
        offset in 0.3f64..4.0,
        seed in any::<u64>(),
    ) {
        prop_assume!(k.fits(m));
        let beta = alg.beta_f64();
        let a = (m - 1) as f64 * beta / 2.0 + f64::from(k.largest()) + offset;
        let mut r = RngStream::new(seed, 3);
        let w = random_hermitian_pd(alg, m, &mut r);
        // Y = N W N* with Σ = N N* has the law of W under Σ = I, where N is
        // lower triangular for type I and upper triangular for type II
        let lower = random_lower_triangular(alg, m, &mut r);
        let n = match variant {
            Variant::I => lower,
            Variant::II => lower.conj_transpose(),
        };
        let sigma = HermitianPD::new(n.mul_adjoint(&n)).unwrap();
        let y = HermitianPD::new((&n * w.matrix()).mul_adjoint(&n)).unwrap();
        let scaled = RieszParams::new(variant, a, k.clone(), sigma.clone()).validate().unwrap();
        let unit = RieszParams::new(variant, a, k, HermitianPD::identity(alg, m)).validate().unwrap();
        let jac = ((m - 1) as f64 * beta / 2.0 + 1.0) * sigma.log_det();
        let lhs = scaled.log_density(&y).unwrap();
        let rhs = unit.log_density(&w).unwrap() - jac;
        prop_assert!(close(lhs, rhs, 1e-9), "{} vs {}", lhs, rhs);
    }
}
