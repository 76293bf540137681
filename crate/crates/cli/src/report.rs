use riesz_core::validation::{Check, Note, SuiteConfig, SuiteReport};
use serde::Serialize;

use crate::matrix_file::SCHEMA;

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub relation: &'static str,
    pub pass: bool,
}

impl From<&Check> for CheckRecord {
    fn from(c: &Check) -> Self {
        CheckRecord {
            name: c.name.clone(),
            observed: c.observed,
            expected: c.expected,
            tolerance: c.tolerance,
            relation: c.relation.name(),
            pass: c.pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct NoteRecord {
    pub name: String,
    pub text: String,
    pub values: Vec<NamedValue>,
}

impl From<&Note> for NoteRecord {
    fn from(n: &Note) -> Self {
        NoteRecord {
            name: n.name.clone(),
            text: n.text.clone(),
            values: n
                .values
                .iter()
                .map(|(name, value)| NamedValue {
                    name: name.clone(),
                    value: *value,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CaseRecord {
    pub m: usize,
    pub n: usize,
    pub beta: u32,
    pub kappa: String,
}

#[derive(Debug, Serialize)]
pub struct RunParams {
    pub suite: String,
    pub draws: usize,
    pub case: Option<CaseRecord>,
}

#[derive(Debug, Serialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub generator: &'static str,
    /// How each check derives its stream id from the seed.
    pub streams: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub params: RunParams,
    pub seed: SeedRecord,
    pub pass: bool,
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
    pub notes: Vec<NoteRecord>,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn new(
        command: Vec<String>,
        suite: &str,
        cfg: &SuiteConfig,
        report: &SuiteReport,
        wall_time_seconds: f64,
    ) -> Self {
        let passed = report.checks.iter().filter(|c| c.pass).count();
        RunReport {
            schema: SCHEMA,
            command,
            params: RunParams {
                suite: suite.to_string(),
                draws: cfg.draws,
                case: cfg.case.as_ref().map(|c| CaseRecord {
                    m: c.m,
                    n: c.n,
                    beta: c.algebra.beta(),
                    kappa: c.kappa.to_string(),
                }),
            },
            seed: SeedRecord {
                seed: cfg.seed,
                generator: "chacha20",
                streams: "stream id = FNV-1a 64 of the check label; batches split into substreams of 1000 draws",
            },
            pass: report.passed(),
            summary: Summary { checks: report.checks.len(), passed, failed: report.checks.len() - passed },
            checks: report.checks.iter().map(CheckRecord::from).collect(),
            notes: report.notes.iter().map(NoteRecord::from).collect(),
            wall_time_seconds,
        }
    }
}
