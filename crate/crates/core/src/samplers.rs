//! Reproducible random generation.
//!
//! Every draw comes from a [`RngStream`], a ChaCha20 generator keyed by
//! `(seed, stream_id)`. Batches are cut into fixed-size chunks, each with its
//! own derived stream, so results do not depend on how many worker threads
//! process the chunks.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use rayon::prelude::*;

use crate::algebra::{AlgebraMatrix, DivisionAlgebra, HermitianPD, Scalar};
use crate::distributions::{KotzRiesz, KotzRieszParams, Variant};
use crate::error::{Error, Result, Violation};
use crate::special::Partition;

pub const ALGORITHM_ID: &str = "chacha20-splitmix64/1";

/// Draws per derived sub-stream in batch generation.
pub const CHUNK_SIZE: usize = 1000;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Where a batch of draws came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedProvenance {
    pub seed: u64,
    pub stream_id: u64,
    pub algorithm_id: String,
    pub chunk_size: usize,
}

#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha20Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream {
            seed,
            stream_id,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn algorithm_id(&self) -> &'static str {
        ALGORITHM_ID
    }

    /// A fresh stream with the same seed and an id derived from this
    /// stream's id and `index`. Does not advance `self`.
    pub fn substream(&self, index: u64) -> RngStream {
        RngStream::new(
            self.seed,
            splitmix64(self.stream_id ^ splitmix64(index.wrapping_add(1))),
        )
    }

    pub fn provenance(&self) -> SeedProvenance {
        SeedProvenance {
            seed: self.seed,
            stream_id: self.stream_id,
            algorithm_id: ALGORITHM_ID.to_string(),
            chunk_size: CHUNK_SIZE,
        }
    }

    pub fn normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// `count` values of `draw`, chunk `c` using `master.substream(c)`. The output
/// order and values are independent of the rayon thread count.
pub fn draw_many<T, F>(master: &RngStream, count: usize, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T> + Sync,
{
    let chunks = count.div_ceil(CHUNK_SIZE);
    let parts: Vec<Result<Vec<T>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = master.substream(c as u64);
            let len = CHUNK_SIZE.min(count - c * CHUNK_SIZE);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    let mut out = Vec::with_capacity(count);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Matrix whose real components are independent `N(0, variance)`.
pub fn gaussian_matrix(
    algebra: DivisionAlgebra,
    rows: usize,
    cols: usize,
    variance: f64,
    rng: &mut RngStream,
) -> AlgebraMatrix {
    let sd = variance.sqrt();
    let beta = algebra.beta() as usize;
    let data = (0..rows * cols)
        .map(|_| {
            let mut c = [0.0; 4];
            for v in c.iter_mut().take(beta) {
                *v = sd * rng.normal();
            }
            Scalar::from_components(&c)
        })
        .collect();
    AlgebraMatrix::from_scalars(algebra, rows, cols, data).expect("components match the algebra")
}

/// Orthonormalizes the columns of `a` by modified Gram-Schmidt, applied twice.
/// Coefficients multiply the basis vectors on the right, so the implied R
/// factor has a real positive diagonal and the map `a -> Q` is unique.
fn gram_schmidt(a: &AlgebraMatrix) -> Result<AlgebraMatrix> {
    let (n, m) = (a.rows(), a.cols());
    let mut q = a.clone();
    for j in 0..m {
        for _pass in 0..2 {
            for k in 0..j {
                let mut r = Scalar::ZERO;
                for i in 0..n {
                    r += q[(i, k)].conj() * q[(i, j)];
                }
                for i in 0..n {
                    let v = q[(i, k)] * r;
                    q[(i, j)] -= v;
                }
            }
        }
        let norm = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::DomainViolation(
                "rank-deficient Gaussian draw".into(),
            ));
        }
        for i in 0..n {
            q[(i, j)] = q[(i, j)].scale(1.0 / norm);
        }
    }
    Ok(q)
}

/// An `n x m` matrix with orthonormal columns, uniformly distributed on the
/// Stiefel manifold (Haar). For `n = m` this is a Haar unitary.
pub fn sample_stiefel(
    n: usize,
    m: usize,
    algebra: DivisionAlgebra,
    rng: &mut RngStream,
) -> Result<AlgebraMatrix> {
    if m == 0 || n < m {
        return Err(Error::DimensionMismatch(format!(
            "Stiefel frames need n >= m >= 1, got n={n}, m={m}"
        )));
    }
    gram_schmidt(&gaussian_matrix(algebra, n, m, 1.0, rng))
}

fn riesz_factor_violations(a: f64, kappa: &Partition, m: usize, beta: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    if m == 0 {
        out.push(Violation {
            condition: "m >= 1".into(),
            detail: "m = 0".into(),
        });
        return out;
    }
    if !kappa.fits(m) {
        out.push(Violation {
            condition: "kappa has at most m parts".into(),
            detail: format!("kappa = {kappa}, m = {m}"),
        });
        return out;
    }
    let bound = (m - 1) as f64 * beta / 2.0 - f64::from(kappa.part(m - 1));
    if !(a > bound) {
        out.push(Violation {
            condition: "a > (m-1)*beta/2 - k_m".into(),
            detail: format!("{a} is not greater than {bound}"),
        });
    }
    out
}

/// Upper-triangular T with `T*T ~ Riesz-I(a, κ, I)`: independent
/// `t_ii² ~ Gamma(a + k_i - (i-1)β/2, rate β)` and strictly upper entries with
/// real components `N(0, 1/(2β))`.
pub fn sample_riesz1_factor(
    a: f64,
    kappa: &Partition,
    m: usize,
    algebra: DivisionAlgebra,
    rng: &mut RngStream,
) -> Result<AlgebraMatrix> {
    let beta = algebra.beta_f64();
    let v = riesz_factor_violations(a, kappa, m, beta);
    if !v.is_empty() {
        return Err(Error::InvalidParams(v));
    }
    let sd = (1.0 / (2.0 * beta)).sqrt();
    let bsz = algebra.beta() as usize;
    let mut t = AlgebraMatrix::zeros(algebra, m, m);
    for i in 0..m {
        let shape = a + f64::from(kappa.part(i)) - i as f64 * beta / 2.0;
        let gamma =
            Gamma::new(shape, 1.0 / beta).map_err(|e| Error::DomainViolation(e.to_string()))?;
        t[(i, i)] = Scalar::real(gamma.sample(rng).sqrt());
        for j in (i + 1)..m {
            let mut c = [0.0; 4];
            for x in c.iter_mut().take(bsz) {
                *x = sd * rng.normal();
            }
            t[(i, j)] = Scalar::from_components(&c);
        }
    }
    Ok(t)
}

/// `Y = L T*T L*` with `L` the lower Cholesky factor of Σ, a Riesz-I(a, κ, Σ) draw.
pub fn sample_riesz1(
    a: f64,
    kappa: &Partition,
    sigma: &HermitianPD,
    rng: &mut RngStream,
) -> Result<HermitianPD> {
    let t = sample_riesz1_factor(a, kappa, sigma.dim(), sigma.algebra(), rng)?;
    let lt = sigma.cholesky().mul_adjoint(&t);
    HermitianPD::new(lt.mul_adjoint(&lt))
}

/// One spherical draw `Z = H₁ T`.
pub fn sample_spherical_kr1(
    kappa: &Partition,
    n: usize,
    m: usize,
    algebra: DivisionAlgebra,
    rng: &mut RngStream,
) -> Result<AlgebraMatrix> {
    let h = sample_stiefel(n, m, algebra, rng)?;
    let t = sample_riesz1_factor(n as f64 * algebra.beta_f64() / 2.0, kappa, m, algebra, rng)?;
    Ok(&h * &t)
}

/// One draw `X = μ + Θ^{1/2} Z G*` from a validated type I law.
pub fn sample_kr_one(dist: &KotzRiesz, rng: &mut RngStream) -> Result<AlgebraMatrix> {
    let p = dist.params();
    if p.variant != Variant::I {
        return Err(Error::UnsupportedVariant);
    }
    let z = sample_spherical_kr1(&p.kappa, p.n, p.m, p.algebra, rng)?;
    let x = (dist.theta_sqrt() * &z).mul_adjoint(dist.sigma_factor());
    Ok(&p.mu + &x)
}

/// A reproducible batch of matrix draws.
#[derive(Clone, Debug)]
pub struct SampleBatch {
    pub params: KotzRieszParams,
    pub count: usize,
    pub draws: Vec<AlgebraMatrix>,
    pub provenance: SeedProvenance,
}

pub fn sample_kr(params: &KotzRieszParams, count: usize, rng: &RngStream) -> Result<SampleBatch> {
    if params.variant != Variant::I {
        return Err(Error::UnsupportedVariant);
    }
    let dist = params.clone().validate()?;
    let draws = draw_many(rng, count, |r| sample_kr_one(&dist, r))?;
    Ok(SampleBatch {
        params: params.clone(),
        count,
        draws,
        provenance: rng.provenance(),
    })
}

/// `B B* / m + I/4` with `B` standard Gaussian; a well-conditioned random PD matrix.
pub fn random_hermitian_pd(algebra: DivisionAlgebra, m: usize, rng: &mut RngStream) -> HermitianPD {
    let b = gaussian_matrix(algebra, m, m, 1.0 / algebra.beta_f64(), rng);
    let mut p = b.mul_adjoint(&b).scale(1.0 / m as f64);
    for i in 0..m {
        p[(i, i)] += Scalar::real(0.25);
    }
    HermitianPD::new(p).expect("Gram matrix plus a multiple of I is PD")
}

/// Lower triangular with diagonal in `[0.5, 2)` and Gaussian entries below.
pub fn random_lower_triangular(
    algebra: DivisionAlgebra,
    m: usize,
    rng: &mut RngStream,
) -> AlgebraMatrix {
    let mut l = gaussian_matrix(algebra, m, m, 1.0 / algebra.beta_f64(), rng);
    for i in 0..m {
        l[(i, i)] = Scalar::real(0.5 + 1.5 * rng.uniform());
        for j in (i + 1)..m {
            l[(i, j)] = Scalar::ZERO;
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        let mut c = RngStream::new(7, 4);
        let xs: Vec<u64> = (0..5).map(|_| a.next_u64()).collect();
        let ys: Vec<u64> = (0..5).map(|_| b.next_u64()).collect();
        let zs: Vec<u64> = (0..5).map(|_| c.next_u64()).collect();
        assert_eq!(xs, ys);
        assert_ne!(xs, zs);
        assert_ne!(a.substream(0).next_u64(), a.substream(1).next_u64());
    }

    #[test]
    fn batches_do_not_depend_on_thread_count() {
        let master = RngStream::new(42, 0);
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let three = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let f = |r: &mut RngStream| Ok(r.normal());
        let a = one.install(|| draw_many(&master, 2500, f)).unwrap();
        let b = three.install(|| draw_many(&master, 2500, f)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn stiefel_draws_are_orthonormal() {
        let mut rng = RngStream::new(1, 0);
        for alg in DivisionAlgebra::ALL {
            for (n, m) in [(1, 1), (3, 1), (3, 2), (4, 4), (5, 3)] {
                let h = sample_stiefel(n, m, alg, &mut rng).unwrap();
                let defect = h
                    .adjoint_mul(&h)
                    .max_abs_diff(&AlgebraMatrix::identity(alg, m));
                assert!(defect <= 1e-12, "{alg} {n}x{m}: {defect}");
            }
        }
        assert!(sample_stiefel(1, 2, DivisionAlgebra::Real, &mut rng).is_err());
    }

    #[test]
    fn triangular_factor_contract() {
        let mut rng = RngStream::new(2, 0);
        let kappa = Partition::new(vec![2, 1]).unwrap();
        for alg in DivisionAlgebra::ALL {
            let t = sample_riesz1_factor(6.0, &kappa, 3, alg, &mut rng).unwrap();
            for i in 0..3 {
                assert!(t[(i, i)].re > 0.0 && t[(i, i)].imag_max() == 0.0);
                for j in 0..i {
                    assert_eq!(t[(i, j)], Scalar::ZERO);
                }
            }
        }
        let bad = sample_riesz1_factor(
            0.2,
            &Partition::zero(),
            2,
            DivisionAlgebra::Complex,
            &mut rng,
        );
        assert!(matches!(bad, Err(Error::InvalidParams(_))));
    }

    #[test]
    fn type_two_sampling_is_unsupported() {
        let params =
            KotzRieszParams::spherical(Variant::II, Partition::zero(), 3, 1, DivisionAlgebra::Real);
        assert!(matches!(
            sample_kr(&params, 10, &RngStream::new(0, 0)),
            Err(Error::UnsupportedVariant)
        ));
    }

    #[test]
    fn empty_batch() {
        let params =
            KotzRieszParams::spherical(Variant::I, Partition::zero(), 2, 1, DivisionAlgebra::Real);
        let batch = sample_kr(&params, 0, &RngStream::new(0, 0)).unwrap();
        assert_eq!(batch.count, 0);
        assert!(batch.draws.is_empty());
    }
}
