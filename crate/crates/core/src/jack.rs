//! Integer partitions, Jack polynomials `C_τ` in the C-normalization
//! (`Σ_{τ⊢t} C_τ(X) = (tr X)^t`) and the `₀F₁` series of matrix argument.
//!
//! Jack polynomials are expanded in monomial symmetric functions. The monic
//! polynomial `P_λ = m_λ + Σ_{μ<λ} u_{λμ} m_μ` is the eigenfunction of
//! Stanley's operator
//!
//! `D(α) = (α/2) Σ x_i² ∂_i² + Σ_{i≠j} x_i² / (x_i - x_j) ∂_i`,  α = 2/β,
//!
//! and the coefficients follow from the triangular recurrence
//! `u_{λμ} (E_λ - E_μ) = Σ_{μ<ν≤λ} u_{λν} d_{νμ}`. The C-normalization
//! constants are then read off from `p_1^t = Σ_μ t!/∏μ_i! m_μ`.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::special::{gen_pochhammer, Partition};

pub const DEFAULT_DEGREE_MAX: usize = 8;

/// All partitions of `degree` with at most `max_parts` nonzero parts.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSet {
    pub degree: usize,
    pub max_parts: usize,
    pub partitions: Vec<Partition>,
}

fn push_partitions(
    rest: u32,
    max_part: u32,
    slots: usize,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Partition>,
) {
    if rest == 0 {
        out.push(Partition::new(prefix.clone()).expect("generated in non-increasing order"));
        return;
    }
    if slots == 0 {
        return;
    }
    for first in (1..=rest.min(max_part)).rev() {
        prefix.push(first);
        push_partitions(rest - first, first, slots - 1, prefix, out);
        prefix.pop();
    }
}

/// Partitions of `t` into at most `m` parts, in reverse lexicographic order.
pub fn enumerate_partitions(t: usize, m: usize) -> PartitionSet {
    let mut partitions = Vec::new();
    push_partitions(t as u32, t as u32, m, &mut Vec::new(), &mut partitions);
    PartitionSet {
        degree: t,
        max_parts: m,
        partitions,
    }
}

/// Monomial symmetric polynomial `m_μ(x)`: the sum of `x^ω` over the distinct
/// rearrangements ω of μ padded to `x.len()`. Zero if μ has too many parts.
pub fn monomial_symmetric(mu: &Partition, x: &[f64]) -> f64 {
    let Ok(exps) = mu.padded(x.len()) else {
        return 0.0;
    };
    // distinct exponents with multiplicities
    let mut distinct: Vec<(u32, usize)> = Vec::new();
    for e in exps {
        match distinct.last_mut() {
            Some((v, c)) if *v == e => *c += 1,
            _ => distinct.push((e, 1)),
        }
    }
    fn rec(x: &[f64], distinct: &mut [(u32, usize)]) -> f64 {
        let Some((&first, rest)) = x.split_first() else {
            return 1.0;
        };
        let mut total = 0.0;
        for d in 0..distinct.len() {
            if distinct[d].1 == 0 {
                continue;
            }
            distinct[d].1 -= 1;
            total += first.powi(distinct[d].0 as i32) * rec(rest, distinct);
            distinct[d].1 += 1;
        }
        total
    }
    rec(x, &mut distinct)
}

fn multinomial(mu: &Partition) -> f64 {
    let t = mu.weight();
    let mut log = ln_factorial(t);
    for &p in mu.parts() {
        log -= ln_factorial(p);
    }
    log.exp().round()
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// Eigenvalue of `D(α)` on `P_λ` in `n` variables.
fn stanley_eigenvalue(lambda: &[u32], alpha: f64, n: usize) -> f64 {
    lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let l = f64::from(l);
            alpha / 2.0 * l * (l - 1.0) + (n - 1 - i) as f64 * l
        })
        .sum()
}

/// Coefficient of `x^μ` in the off-diagonal part of `D m_ν` (n = μ.len() variables).
fn offdiagonal(nu: &[u32], mu: &[u32]) -> f64 {
    let n = mu.len();
    let mut total = 0.0;
    let mut omega = mu.to_vec();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (mu[i], mu[j]);
            let s = a + b;
            let (lo, hi) = (a.min(b), a.max(b));
            // p + q = s with q < lo and p > hi
            for q in 0..lo {
                let p = s - q;
                debug_assert!(p > hi);
                omega[i] = p;
                omega[j] = q;
                let mut sorted = omega.clone();
                sorted.sort_unstable_by(|x, y| y.cmp(x));
                if sorted == nu {
                    total += f64::from(p - q);
                }
            }
            omega[i] = a;
            omega[j] = b;
        }
    }
    total
}

#[derive(Clone, Debug)]
struct DegreeBlock {
    partitions: Vec<Partition>,
    // coeffs[λ][μ]: coefficient of m_μ in C_λ
    coeffs: Vec<Vec<f64>>,
}

impl DegreeBlock {
    fn build(t: usize, beta: f64) -> DegreeBlock {
        let alpha = 2.0 / beta;
        let partitions = enumerate_partitions(t, t.max(1)).partitions;
        let n = t.max(1);
        let padded: Vec<Vec<u32>> = partitions.iter().map(|p| p.padded(n).unwrap()).collect();
        let energy: Vec<f64> = padded
            .iter()
            .map(|p| stanley_eigenvalue(p, alpha, n))
            .collect();
        let len = partitions.len();
        let mut d = vec![vec![0.0; len]; len];
        for (v, nu) in padded.iter().enumerate() {
            for (u, mu) in padded.iter().enumerate().skip(v + 1) {
                d[v][u] = offdiagonal(nu, mu);
            }
        }
        // monic coefficients, triangular in reverse lexicographic order
        let mut monic = vec![vec![0.0; len]; len];
        for l in 0..len {
            monic[l][l] = 1.0;
            for u in (l + 1)..len {
                let s: f64 = (l..u).map(|v| monic[l][v] * d[v][u]).sum();
                if s != 0.0 {
                    monic[l][u] = s / (energy[l] - energy[u]);
                }
            }
        }
        let mut scale = vec![0.0; len];
        for l in 0..len {
            let above: f64 = (0..l).map(|v| scale[v] * monic[v][l]).sum();
            scale[l] = multinomial(&partitions[l]) - above;
        }
        let coeffs = monic
            .iter()
            .zip(&scale)
            .map(|(row, c)| row.iter().map(|x| x * c).collect())
            .collect();
        DegreeBlock { partitions, coeffs }
    }
}

/// Monomial coefficients of `C_τ^β` for every `|τ| ≤ degree_max`. Read-only
/// after construction.
#[derive(Clone, Debug)]
pub struct JackTable {
    beta: f64,
    degree_max: usize,
    blocks: Vec<DegreeBlock>,
}

impl JackTable {
    pub fn new(beta: f64, degree_max: usize) -> Result<JackTable> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::DomainViolation(format!(
                "Jack parameter needs beta > 0, got {beta}"
            )));
        }
        let blocks = (0..=degree_max)
            .map(|t| DegreeBlock::build(t, beta))
            .collect();
        Ok(JackTable {
            beta,
            degree_max,
            blocks,
        })
    }

    /// Process-wide table with the default degree for β ∈ {1, 2, 4}.
    pub fn shared(beta: u32) -> Result<&'static JackTable> {
        static TABLES: [OnceLock<JackTable>; 3] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let slot = match beta {
            1 => 0,
            2 => 1,
            4 => 2,
            other => return Err(Error::InvalidAlgebra(other)),
        };
        Ok(TABLES[slot].get_or_init(|| {
            JackTable::new(f64::from(beta), DEFAULT_DEGREE_MAX).expect("valid beta")
        }))
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn degree_max(&self) -> usize {
        self.degree_max
    }

    fn block(&self, t: usize) -> Result<&DegreeBlock> {
        self.blocks.get(t).ok_or(Error::DegreeTooLarge {
            degree: t,
            max: self.degree_max,
        })
    }

    /// Coefficients `(μ, c_{τμ})` of `C_τ = Σ_μ c_{τμ} m_μ`, over all μ ⊢ |τ|.
    pub fn monomial_coefficients(&self, tau: &Partition) -> Result<Vec<(Partition, f64)>> {
        let block = self.block(tau.weight() as usize)?;
        let row = block
            .partitions
            .iter()
            .position(|p| p == tau)
            .expect("every partition is listed");
        Ok(block
            .partitions
            .iter()
            .cloned()
            .zip(block.coeffs[row].iter().copied())
            .collect())
    }

    /// `C_τ(x)` for every τ ⊢ t with at most `x.len()` parts, in reverse
    /// lexicographic order.
    pub fn eval_degree(&self, t: usize, x: &[f64]) -> Result<Vec<(Partition, f64)>> {
        let block = self.block(t)?;
        let m = x.len();
        // sorting makes the result exactly invariant under permutations of x
        let mut xs = x.to_vec();
        xs.sort_by(|a, b| b.total_cmp(a));
        let monomials: Vec<f64> = block
            .partitions
            .iter()
            .map(|mu| {
                if mu.fits(m) {
                    monomial_symmetric(mu, &xs)
                } else {
                    0.0
                }
            })
            .collect();
        Ok(block
            .partitions
            .iter()
            .zip(&block.coeffs)
            .filter(|(tau, _)| tau.fits(m))
            .map(|(tau, row)| {
                let v = row.iter().zip(&monomials).map(|(c, mm)| c * mm).sum();
                (tau.clone(), v)
            })
            .collect())
    }

    /// `C_τ^β(X)` from the eigenvalues of X.
    pub fn jack_c(&self, tau: &Partition, x: &[f64]) -> Result<f64> {
        let t = tau.weight() as usize;
        self.block(t)?;
        if !tau.fits(x.len()) {
            return Ok(0.0);
        }
        let (_, v) = self
            .eval_degree(t, x)?
            .into_iter()
            .find(|(p, _)| p == tau)
            .expect("τ fits, so it is evaluated");
        Ok(v)
    }

    /// `C_τ(I_m)`.
    pub fn at_identity(&self, tau: &Partition, m: usize) -> Result<f64> {
        self.jack_c(tau, &vec![1.0; m])
    }
}

/// `C_τ^β(X)` for β ∈ {1, 2, 4} from the shared default table.
pub fn jack_c(tau: &Partition, eigs: &[f64], beta: u32) -> Result<f64> {
    JackTable::shared(beta)?.jack_c(tau, eigs)
}

/// A truncated series with the magnitude of its last retained degree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// `|Σ_{τ⊢t_max} term_τ|`, a proxy for the truncation error.
    pub tail: f64,
    /// False when the degree contributions were still growing at `t_max`.
    pub converged: bool,
}

/// Sums the degree contributions `terms[t]` and derives the tail proxy.
pub fn series_from_degrees(terms: &[f64]) -> SeriesValue {
    let value = terms.iter().sum();
    let tail = terms.last().map_or(0.0, |x| x.abs());
    let converged = match terms {
        [.., prev, last] => !(last.abs() > prev.abs() && *prev != 0.0),
        _ => true,
    };
    SeriesValue {
        value,
        tail,
        converged,
    }
}

/// `₀F₁^β(b; X) ≈ Σ_{t ≤ t_max} Σ_{τ⊢t} C_τ(X) / ([b]_τ t!)`.
pub fn hyper_0f1_with(
    table: &JackTable,
    b: f64,
    eigs: &[f64],
    t_max: usize,
) -> Result<SeriesValue> {
    if t_max > table.degree_max() {
        return Err(Error::DegreeTooLarge {
            degree: t_max,
            max: table.degree_max(),
        });
    }
    let mut terms = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        let log_fact = ln_factorial(t as u32);
        let mut sum = 0.0;
        for (tau, c) in table.eval_degree(t, eigs)? {
            let poch = gen_pochhammer(b, &tau, table.beta());
            if poch.is_zero() {
                return Err(Error::PochhammerZero(tau.to_string()));
            }
            sum += c * f64::from(poch.sign) * (-poch.log_abs - log_fact).exp();
        }
        terms.push(sum);
    }
    Ok(series_from_degrees(&terms))
}

pub fn hyper_0f1(b: f64, eigs: &[f64], beta: u32, t_max: usize) -> Result<SeriesValue> {
    hyper_0f1_with(JackTable::shared(beta)?, b, eigs, t_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn brute_force_count(t: u32, m: usize) -> usize {
        // count non-increasing sequences of length m summing to t
        fn rec(rest: u32, max: u32, slots: usize) -> usize {
            if slots == 0 {
                return usize::from(rest == 0);
            }
            (0..=rest.min(max))
                .map(|f| rec(rest - f, f, slots - 1))
                .sum()
        }
        rec(t, t, m)
    }

    #[test]
    fn partition_enumeration_examples() {
        assert_eq!(
            enumerate_partitions(0, 3).partitions,
            vec![Partition::zero()]
        );
        assert_eq!(
            enumerate_partitions(3, 2).partitions,
            vec![p(&[3]), p(&[2, 1])]
        );
        assert_eq!(enumerate_partitions(4, 4).partitions.len(), 5);
        for t in 0..=9 {
            for m in 1..=5 {
                let set = enumerate_partitions(t, m);
                assert_eq!(
                    set.partitions.len(),
                    brute_force_count(t as u32, m),
                    "t={t} m={m}"
                );
                assert!(set.partitions.windows(2).all(|w| w[0] > w[1]));
                assert!(set
                    .partitions
                    .iter()
                    .all(|q| q.weight() == t as u32 && q.fits(m)));
            }
        }
    }

    #[test]
    fn monic_coefficients_match_known_polynomials() {
        // zonal (α = 2): P_(2) = m_2 + 2/3 m_11; Schur (α = 1): P_(2,1) = m_21 + 2 m_111
        let zonal = JackTable::new(1.0, 3).unwrap();
        let c2 = zonal.monomial_coefficients(&p(&[2])).unwrap();
        assert!((c2[1].1 / c2[0].1 - 2.0 / 3.0).abs() < 1e-14);
        let schur = JackTable::new(2.0, 3).unwrap();
        let c21 = schur.monomial_coefficients(&p(&[2, 1])).unwrap();
        assert_eq!(c21[0].1, 0.0);
        assert!((c21[2].1 / c21[1].1 - 2.0).abs() < 1e-14);
        // zonal C_(1,1)(x) = 4/3 x1 x2
        let c11 = zonal.jack_c(&p(&[1, 1]), &[2.0, 3.0]).unwrap();
        assert!((c11 - 8.0).abs() < 1e-13);
    }

    #[test]
    fn jack_examples() {
        for beta in [1, 2, 4] {
            assert!((jack_c(&p(&[1]), &[0.3, 1.7, 2.0], beta).unwrap() - 4.0).abs() < 1e-14);
            assert!((jack_c(&p(&[2]), &[1.7], beta).unwrap() - 1.7f64.powi(2)).abs() < 1e-13);
            let total: f64 = JackTable::shared(beta)
                .unwrap()
                .eval_degree(3, &[1.0, 2.0])
                .unwrap()
                .iter()
                .map(|(_, v)| v)
                .sum();
            assert!((total - 27.0).abs() < 1e-12);
        }
        assert!(matches!(
            jack_c(&p(&[9]), &[1.0], 1),
            Err(Error::DegreeTooLarge { .. })
        ));
        assert_eq!(jack_c(&p(&[1, 1, 1]), &[1.0, 2.0], 1).unwrap(), 0.0);
    }

    #[test]
    fn hyper_examples() {
        let zero = hyper_0f1(1.5, &[0.0, 0.0], 1, 8).unwrap();
        assert_eq!(zero.value, 1.0);
        // classical series Σ x^t / ((b)_t t!)
        let (b, x) = (1.5, 0.3);
        let mut term = 1.0;
        let mut scalar = 1.0;
        for t in 1..30 {
            term *= x / ((b + (t - 1) as f64) * t as f64);
            scalar += term;
        }
        let series = hyper_0f1(b, &[x], 1, 8).unwrap();
        assert!((series.value - scalar).abs() < 1e-12);
        assert!(series.converged && series.tail < 1e-12);
        let degenerate = hyper_0f1(b, &[x, 0.0], 1, 8).unwrap();
        assert!((degenerate.value - series.value).abs() < 1e-14);
        assert!(matches!(
            hyper_0f1(-1.0, &[x], 1, 3),
            Err(Error::PochhammerZero(_))
        ));
    }

    proptest! {
        #[test]
        fn normalization_identity(
            beta in prop::sample::select(vec![1u32, 2, 4]),
            x in prop::collection::vec(-2.0f64..2.0, 1..=4),
            t in 0usize..=8,
        ) {
            let table = JackTable::shared(beta).unwrap();
            let total: f64 = table.eval_degree(t, &x).unwrap().iter().map(|(_, v)| v).sum();
            let expected = x.iter().sum::<f64>().powi(t as i32);
            let scale = x.iter().map(|v| v.abs()).sum::<f64>().powi(t as i32).max(1e-300);
            prop_assert!((total - expected).abs() <= 1e-10 * scale);
        }

        #[test]
        fn homogeneous_and_symmetric(
            beta in prop::sample::select(vec![1u32, 2, 4]),
            x in prop::collection::vec(0.1f64..2.0, 3),
            c in 0.2f64..3.0,
        ) {
            let table = JackTable::shared(beta).unwrap();
            let scaled: Vec<f64> = x.iter().map(|v| v * c).collect();
            let reversed: Vec<f64> = x.iter().rev().copied().collect();
            for (tau, v) in table.eval_degree(4, &x).unwrap() {
                let s = table.jack_c(&tau, &scaled).unwrap();
                prop_assert!((s - c.powi(4) * v).abs() <= 1e-12 * s.abs().max(1e-12));
                prop_assert_eq!(table.jack_c(&tau, &reversed).unwrap(), v);
            }
        }
    }
}
