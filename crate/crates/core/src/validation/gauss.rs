//! Gauss rules from the Golub-Welsch eigenproblem.
//!
//! Weights are normalized to sum to one, so a rule computes an expectation
//! under the corresponding probability law.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and probability weights of an `n`-point rule.
#[derive(Clone, Debug)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn expect(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

fn golub_welsch(diag: &[f64], offdiag: &[f64]) -> GaussRule {
    let n = diag.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = offdiag[i];
            j[(i + 1, i)] = offdiag[i];
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    }
}

/// Rule for the weight `e^{-x²}/√π` on the real line, exact for polynomials
/// of degree `2n - 1`.
pub fn gauss_hermite(n: usize) -> GaussRule {
    assert!(n >= 1, "rule needs at least one node");
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&diag, &off)
}

/// Rule for the weight `x^α e^{-x} / Γ(α+1)` on `(0, ∞)`, `α > -1`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> GaussRule {
    assert!(n >= 1, "rule needs at least one node");
    assert!(alpha > -1.0, "Laguerre parameter must exceed -1");
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..n)
        .map(|k| (k as f64 * (k as f64 + alpha)).sqrt())
        .collect();
    golub_welsch(&diag, &off)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    #[test]
    fn hermite_moments() {
        let rule = gauss_hermite(6);
        // E[x^{2k}] = (2k-1)!! / 2^k under N(0, 1/2)
        let expected = [1.0, 0.5, 0.75, 1.875, 6.5625, 29.53125];
        for (k, e) in expected.iter().enumerate() {
            let got = rule.expect(|x| x.powi(2 * k as i32));
            assert!((got - e).abs() < 1e-12 * e.max(1.0), "k={k}: {got} vs {e}");
        }
        assert!(rule.expect(|x| x.powi(5)).abs() < 1e-13);
    }

    #[test]
    fn laguerre_moments() {
        for &alpha in &[-0.5, 0.0, 2.3] {
            let rule = gauss_laguerre(5, alpha);
            for k in 0..10 {
                let got = rule.expect(|x| x.powi(k));
                let e = gamma(alpha + 1.0 + k as f64) / gamma(alpha + 1.0);
                assert!(
                    (got - e).abs() < 1e-11 * e,
                    "alpha={alpha}, k={k}: {got} vs {e}"
                );
            }
        }
    }
}
