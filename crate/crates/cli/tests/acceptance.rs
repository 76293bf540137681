//! One pass/fail line per acceptance criterion. Seed 42 throughout; draws
//! and tolerances are the suites' pre-registered values.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use riesz_core::special::q_kappa;
use riesz_core::validation::suites::{self, DEFAULT_DRAWS, HAAR_DRAWS};
use riesz_core::validation::{Check, SuiteReport};
use riesz_core::{AlgebraMatrix, HermitianPD, Partition};
use serde_json::Value;
use sha2::{Digest, Sha256};

const SEED: u64 = 42;

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_checks(report: &SuiteReport) -> Outcome {
    let failed: Vec<&Check> = report.failures().collect();
    let total = report.checks.len();
    let mut detail = format!("{}/{} checks", total - failed.len(), total);
    for c in failed.iter().take(12) {
        detail.push_str(&format!(
            "\n      FAIL {} observed={:e} expected={:e} tolerance={:e}",
            c.name, c.observed, c.expected, c.tolerance
        ));
    }
    if failed.len() > 12 {
        detail.push_str(&format!("\n      ... {} more", failed.len() - 12));
    }
    Outcome {
        pass: total > 0 && failed.is_empty(),
        detail,
    }
}

fn checks(r: riesz_core::Result<Vec<Check>>) -> Outcome {
    match r {
        Ok(c) => from_checks(&c.into()),
        Err(e) => Outcome {
            pass: false,
            detail: format!("error: {e}"),
        },
    }
}

fn criterion_2() -> Outcome {
    let mut o = checks(suites::q_kappa_properties(SEED));
    // the inverse identity against a hand-checkable 2x2 matrix
    let counterexample = || -> riesz_core::Result<(f64, f64)> {
        let a = HermitianPD::new(AlgebraMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0])?)?;
        let k: Partition = "1".parse()?;
        Ok((q_kappa(&a.inverse(), &k)?, 1.0 / q_kappa(&a, &k)?))
    };
    if let Ok((direct, reciprocal)) = counterexample() {
        o.detail.push_str(&format!(
            "\n      A=[[2,1],[1,2]], kappa=(1): q(A^-1)={direct:.6} vs 1/q(A)={reciprocal:.6}"
        ));
    }
    o
}

fn criterion_6() -> Outcome {
    let mut r = SuiteReport::default();
    for part in [suites::density_normalization(), suites::density_pointwise()] {
        match part {
            Ok(c) => r.extend(c.into()),
            Err(e) => {
                return Outcome {
                    pass: false,
                    detail: format!("error: {e}"),
                }
            }
        }
    }
    from_checks(&r)
}

fn criterion_9() -> Outcome {
    let mut r = match suites::cf_agreement(SEED, DEFAULT_DRAWS) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: format!("error: {e}"),
            }
        }
    };
    match suites::cf_scalar_normal() {
        Ok(c) => r.extend(c.into()),
        Err(e) => {
            return Outcome {
                pass: false,
                detail: format!("error: {e}"),
            }
        }
    }
    let points = r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("cf.series_vs_mc") && c.name.ends_with(".re"))
        .count();
    let mut o = from_checks(&r);
    if points != 15 {
        o.pass = false;
        o.detail.push_str(&format!(
            "; expected 5 points for each of 3 cases, found {points}"
        ));
    }
    o
}

fn criterion_10() -> Outcome {
    let r = match suites::constant_audit(SEED, DEFAULT_DRAWS) {
        Ok(r) => r,
        Err(e) => {
            return Outcome {
                pass: false,
                detail: format!("error: {e}"),
            }
        }
    };
    let mut o = from_checks(&r);
    let sweep = r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("moments.constant.scalar_sweep"))
        .count();
    let documented = [
        "moments.constant.derivation",
        "moments.constant.implied_exponent",
    ]
    .iter()
    .all(|n| {
        r.notes
            .iter()
            .any(|note| note.name == *n && !note.text.is_empty())
    });
    if sweep != 6 || !documented {
        o.pass = false;
        o.detail.push_str(&format!(
            "; sweep points {sweep}, derivation documented: {documented}"
        ));
    }
    if let Some(note) = r
        .notes
        .iter()
        .find(|n| n.name == "moments.constant.implied_exponent")
    {
        let values: Vec<String> = note
            .values
            .iter()
            .map(|(k, v)| format!("{k}={v:.3}"))
            .collect();
        o.detail.push_str(&format!("\n      {}", values.join(" ")));
    }
    o
}

fn kit(args: &[&str]) -> std::io::Result<std::process::Output> {
    Command::new(env!("CARGO_BIN_EXE_riesz-kit"))
        .args(args)
        .output()
}

fn strip_timing(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("wall_time_seconds");
    }
    v
}

fn sample_hash(dir: &Path, name: &str, format: &str) -> std::io::Result<Vec<u8>> {
    let path = dir.join(name);
    let p = path.display().to_string();
    let out = kit(&[
        "sample", "--kappa", "2,1", "--n", "4", "--m", "2", "--beta", "2", "--count", "5000",
        "--seed", "42", "--format", format, "--out", &p,
    ])?;
    if !out.status.success() {
        return Err(std::io::Error::other(
            String::from_utf8_lossy(&out.stderr).to_string(),
        ));
    }
    Ok(Sha256::digest(std::fs::read(path)?).to_vec())
}

fn criterion_11() -> Outcome {
    let run = || -> std::io::Result<Value> {
        let out = kit(&["validate", "all", "--seed", "42", "--draws", "20000"])?;
        serde_json::from_slice(&out.stdout).map_err(std::io::Error::other)
    };
    let body = || -> std::io::Result<(bool, bool, usize)> {
        let (a, b) = (run()?, run()?);
        let checks = a["checks"].as_array().map_or(0, Vec::len);
        let reports_equal = strip_timing(a) == strip_timing(b);
        let dir = tempfile::tempdir()?;
        let mut files_equal = true;
        for format in ["csv", "json"] {
            files_equal &= sample_hash(dir.path(), &format!("a.{format}"), format)?
                == sample_hash(dir.path(), &format!("b.{format}"), format)?;
        }
        Ok((reports_equal, files_equal, checks))
    };
    match body() {
        Ok((reports, files, n)) => Outcome {
            pass: reports && files && n > 0,
            detail: format!("reports identical without timing: {reports} ({n} checks); sample files byte-identical: {files}"),
        },
        Err(e) => Outcome { pass: false, detail: format!("error: {e}") },
    }
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        (
            "weighted multivariate gamma identities",
            Box::new(|| checks(suites::gamma_identities())),
        ),
        ("generalized power properties", Box::new(criterion_2)),
        (
            "m=1 quadrature oracles",
            Box::new(|| checks(suites::quadrature_identities())),
        ),
        (
            "Jack normalization",
            Box::new(|| checks(suites::jack_normalization(SEED))),
        ),
        (
            "unitary-average identity",
            Box::new(|| checks(suites::jack_unitary_average(SEED, HAAR_DRAWS))),
        ),
        (
            "density normalization and scalar closed forms",
            Box::new(criterion_6),
        ),
        (
            "sampler laws",
            Box::new(|| checks(suites::sampler_laws(SEED, DEFAULT_DRAWS))),
        ),
        (
            "pushforward moments",
            Box::new(|| checks(suites::pushforward_moments(SEED, DEFAULT_DRAWS))),
        ),
        ("characteristic function series", Box::new(criterion_9)),
        ("moment constant audit", Box::new(criterion_10)),
        ("determinism", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {status} {name} [{:.1}s]: {}",
            i + 1,
            start.elapsed().as_secs_f64(),
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
