//! Oracles and statistical comparators, and the validation suites built on them.

pub mod cf;
pub mod gauss;
pub mod ks;
pub mod moments;
pub mod oracles;
pub mod quadrature;
pub mod suites;

pub use cf::{cf_kr1, cf_kr1_product, mc_cf_estimate, mc_cf_estimates, CfQuery, CfValue, McCf};
pub use ks::{ks_one_sample, ks_two_sample, ks_two_way, KsReference, KsResult};
pub use moments::{
    riesz_moment_ctau, riesz_moment_ctau_product, riesz_moment_mc, BartlettGrid, MomentSpec,
};
pub use oracles::{quadrature_oracle_1d, OracleKind, OracleValue};
pub use suites::{run_suite, CaseOverride, Suite, SuiteConfig};

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `|observed - expected| <= tolerance`
    Within,
    /// `observed >= expected`, as for a p-value against α.
    AtLeast,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::Within => "within",
            Relation::AtLeast => "at_least",
        }
    }
}

/// One pre-registered comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl Check {
    pub fn within(name: impl Into<String>, observed: f64, expected: f64, tolerance: f64) -> Check {
        let pass = (observed - expected).abs() <= tolerance;
        Check {
            name: name.into(),
            observed,
            expected,
            tolerance,
            relation: Relation::Within,
            pass,
        }
    }

    /// Tolerance `rel · |expected|`.
    pub fn relative(name: impl Into<String>, observed: f64, expected: f64, rel: f64) -> Check {
        Check::within(name, observed, expected, rel * expected.abs())
    }

    pub fn at_least(name: impl Into<String>, observed: f64, bound: f64) -> Check {
        let pass = observed >= bound;
        Check {
            name: name.into(),
            observed,
            expected: bound,
            tolerance: 0.0,
            relation: Relation::AtLeast,
            pass,
        }
    }
}

/// Free-form audit entry attached to a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Note {
    pub name: String,
    pub text: String,
    pub values: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
    pub notes: Vec<Note>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
    }
}

impl From<Vec<Check>> for SuiteReport {
    fn from(checks: Vec<Check>) -> Self {
        SuiteReport {
            checks,
            notes: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_standard_error() {
        let (m, se) = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_se(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn nan_never_passes() {
        assert!(!Check::within("x", f64::NAN, 0.0, 1.0).pass);
        assert!(!Check::at_least("p", f64::NAN, 0.01).pass);
        assert!(Check::relative("r", 1.0 + 1e-13, 1.0, 1e-12).pass);
    }
}
