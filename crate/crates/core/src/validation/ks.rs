//! Kolmogorov-Smirnov goodness of fit with the asymptotic p-value.

use crate::error::{Error, Result};

pub const KS_MIN_SAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    /// `n` for one sample, `n₁n₂/(n₁+n₂)` for two.
    pub effective_n: f64,
}

/// What the samples are compared against.
pub enum KsReference<'a> {
    Cdf(&'a dyn Fn(f64) -> f64),
    Samples(&'a [f64]),
}

/// `Q_KS(λ) = 2 Σ_{k≥1} (-1)^{k-1} e^{-2k²λ²}`.
fn kolmogorov_tail(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=200 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += sign * term;
        if term < 1e-17 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn p_value(d: f64, ne: f64) -> f64 {
    let s = ne.sqrt();
    kolmogorov_tail((s + 0.12 + 0.11 / s) * d)
}

fn sorted(samples: &[f64]) -> Result<Vec<f64>> {
    if samples.len() < KS_MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: KS_MIN_SAMPLES,
            got: samples.len(),
        });
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(Error::DomainViolation("NaN in KS sample".into()));
    }
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

pub fn ks_one_sample(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let xs = sorted(samples)?;
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(KsResult {
        statistic: d,
        p_value: p_value(d, n),
        effective_n: n,
    })
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let xa = sorted(a)?;
    let xb = sorted(b)?;
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    Ok(KsResult {
        statistic: d,
        p_value: p_value(d, ne),
        effective_n: ne,
    })
}

pub fn ks_two_way(samples: &[f64], reference: KsReference<'_>) -> Result<KsResult> {
    match reference {
        KsReference::Cdf(cdf) => ks_one_sample(samples, cdf),
        KsReference::Samples(other) => ks_two_sample(samples, other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::RngStream;
    use statrs::distribution::{ContinuousCDF, Normal};

    fn normals(seed: u64, n: usize, shift: f64) -> Vec<f64> {
        let mut rng = RngStream::new(seed, 0);
        (0..n).map(|_| rng.normal() + shift).collect()
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            ks_one_sample(&[], |x| x),
            Err(Error::TooFewSamples { got: 0, .. })
        ));
    }

    #[test]
    fn tail_function_values() {
        // Q_KS(1.36) ≈ 0.049, Q_KS(1.63) ≈ 0.0098
        assert!((kolmogorov_tail(1.36) - 0.0494).abs() < 1e-3);
        assert!((kolmogorov_tail(1.628) - 0.0100).abs() < 3e-4);
    }

    #[test]
    fn self_consistency_rejection_rate() {
        let n01 = Normal::new(0.0, 1.0).unwrap();
        let rejections = (0..100)
            .filter(|&s| {
                ks_one_sample(&normals(s, 1000, 0.0), |x| n01.cdf(x))
                    .unwrap()
                    .p_value
                    < 0.01
            })
            .count();
        assert!(rejections <= 3, "{rejections} rejections");
    }

    #[test]
    fn detects_shift() {
        let a = normals(1, 10_000, 0.0);
        let b = normals(2, 10_000, 1.0);
        assert!(ks_two_sample(&a, &b).unwrap().p_value < 0.01);
        let n01 = Normal::new(0.0, 1.0).unwrap();
        assert!(
            ks_two_way(&b, KsReference::Cdf(&|x| n01.cdf(x)))
                .unwrap()
                .p_value
                < 0.01
        );
        let c = normals(3, 10_000, 0.0);
        assert!(ks_two_way(&a, KsReference::Samples(&c)).unwrap().p_value > 0.01);
    }
}
