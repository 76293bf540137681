use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use riesz_core::distributions::{KotzRieszParams, RieszParams, SigmaFactor, Variant};
use riesz_core::jack::{hyper_0f1, jack_c};
use riesz_core::samplers::{sample_kr, RngStream};
use riesz_core::special::{
    gen_pochhammer, log_mv_gamma_weighted, log_q_kappa, log_q_kappa_inverse, stiefel_log_volume,
    GammaDomain, GammaSign,
};
use riesz_core::validation::{run_suite, CaseOverride, Suite, SuiteConfig};
use riesz_core::{AlgebraMatrix, DivisionAlgebra, HermitianPD, Partition};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::matrix_file::{load_matrix, load_pd, MatrixFile, SCHEMA};
use crate::report::RunReport;

pub fn parse_algebra(s: &str) -> Result<DivisionAlgebra, String> {
    let beta: u32 = s
        .parse()
        .map_err(|_| format!("beta must be 1, 2 or 4, got {s:?}"))?;
    DivisionAlgebra::from_beta(beta).map_err(|e| e.to_string())
}

fn beta_f(alg: DivisionAlgebra) -> f64 {
    alg.beta_f64()
}

fn log_and_value(log: f64) -> Value {
    json!({ "schema": SCHEMA, "log": log, "value": log.exp() })
}

fn hermitian_arg(matrix: &Option<PathBuf>, eigs: &Option<Vec<f64>>) -> CliResult<Vec<f64>> {
    match (matrix, eigs) {
        (Some(p), None) => {
            let m = load_matrix(p, 0)?;
            Ok(riesz_core::algebra::hermitian_eigenvalues(&m)?)
        }
        (None, Some(e)) => Ok(e.clone()),
        _ => Err(CliError::Usage(
            "give exactly one of --matrix or --eigs".into(),
        )),
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Debug, Subcommand)]
pub enum SpecialCmd {
    /// Generalized power q_κ(A), or q_κ(A⁻¹) with --inverse.
    Qkappa {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        kappa: Partition,
        #[arg(long)]
        inverse: bool,
    },
    /// Generalized gamma Γ_m[a, ±κ].
    Gamma {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = parse_algebra, default_value = "1")]
        beta: DivisionAlgebra,
        #[arg(long, default_value = "0")]
        kappa: Partition,
        #[arg(long, value_enum, default_value = "plus")]
        sign: Sign,
    },
    /// Generalized Pochhammer symbol [a]_κ.
    Pochhammer {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long)]
        kappa: Partition,
        #[arg(long, value_parser = parse_algebra, default_value = "1")]
        beta: DivisionAlgebra,
    },
    /// Volume of the Stiefel manifold of n x m frames.
    Volume {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_parser = parse_algebra, default_value = "1")]
        beta: DivisionAlgebra,
    },
    /// Jack polynomial C_κ at a matrix or at eigenvalues.
    Jack {
        #[arg(long)]
        kappa: Partition,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eigs: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_algebra, default_value = "1")]
        beta: DivisionAlgebra,
    },
    /// Truncated ₀F₁(b; X) series.
    Hyper0f1 {
        #[arg(long, allow_hyphen_values = true)]
        b: f64,
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        eigs: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_algebra, default_value = "1")]
        beta: DivisionAlgebra,
        #[arg(long, default_value_t = 8)]
        t_max: usize,
    },
}

pub fn special(cmd: &SpecialCmd) -> CliResult<Value> {
    match cmd {
        SpecialCmd::Qkappa {
            matrix,
            kappa,
            inverse,
        } => {
            let a = load_pd(matrix)?;
            let log = if *inverse {
                log_q_kappa_inverse(&a, kappa)?
            } else {
                log_q_kappa(&a, kappa)?
            };
            Ok(log_and_value(log))
        }
        SpecialCmd::Gamma {
            a,
            m,
            beta,
            kappa,
            sign,
        } => {
            let sign = match sign {
                Sign::Plus => GammaSign::Plus,
                Sign::Minus => GammaSign::Minus,
            };
            Ok(log_and_value(log_mv_gamma_weighted(&GammaDomain::new(
                *a,
                *m,
                beta_f(*beta),
                kappa.clone(),
                sign,
            ))?))
        }
        SpecialCmd::Pochhammer { a, kappa, beta } => {
            let p = gen_pochhammer(*a, kappa, beta_f(*beta));
            Ok(
                json!({ "schema": SCHEMA, "log_abs": p.log_abs, "sign": p.sign, "value": p.value() }),
            )
        }
        SpecialCmd::Volume { n, m, beta } => {
            Ok(log_and_value(stiefel_log_volume(*n, *m, beta_f(*beta))?))
        }
        SpecialCmd::Jack {
            kappa,
            matrix,
            eigs,
            beta,
        } => {
            let x = hermitian_arg(matrix, eigs)?;
            let v = jack_c(kappa, &x, beta.beta())?;
            let log = if v > 0.0 { Some(v.ln()) } else { None };
            Ok(json!({ "schema": SCHEMA, "log": log, "value": v }))
        }
        SpecialCmd::Hyper0f1 {
            b,
            matrix,
            eigs,
            beta,
            t_max,
        } => {
            let x = hermitian_arg(matrix, eigs)?;
            let s = hyper_0f1(*b, &x, beta.beta(), *t_max)?;
            let log = if s.value > 0.0 {
                Some(s.value.ln())
            } else {
                None
            };
            Ok(
                json!({ "schema": SCHEMA, "log": log, "value": s.value, "tail": s.tail, "converged": s.converged }),
            )
        }
    }
}

/// Kotz-Riesz parameters shared by `density kr` and `sample`.
#[derive(Debug, Args)]
pub struct KrArgs {
    #[arg(long, default_value = "I")]
    pub variant: Variant,
    #[arg(long, default_value = "0")]
    pub kappa: Partition,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_parser = parse_algebra, default_value = "1")]
    pub beta: DivisionAlgebra,
    /// n x m location matrix file (default 0).
    #[arg(long)]
    pub mu: Option<PathBuf>,
    /// n x n scale matrix file (default I).
    #[arg(long)]
    pub theta: Option<PathBuf>,
    /// m x m scale matrix file (default I).
    #[arg(long)]
    pub sigma: Option<PathBuf>,
    #[arg(long, default_value = "cholesky_lower")]
    pub convention: SigmaFactor,
}

impl KrArgs {
    pub fn params(&self) -> CliResult<KotzRieszParams> {
        let mut p =
            KotzRieszParams::spherical(self.variant, self.kappa.clone(), self.n, self.m, self.beta)
                .with_convention(self.convention);
        if let Some(path) = &self.mu {
            p = p.with_mu(load_matrix(path, 0)?);
        }
        if let Some(path) = &self.theta {
            p = p.with_theta(load_pd(path)?);
        }
        if let Some(path) = &self.sigma {
            p = p.with_sigma(load_pd(path)?);
        }
        Ok(p)
    }
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::I => "I",
        Variant::II => "II",
    }
}

#[derive(Debug, Subcommand)]
pub enum DensityCmd {
    /// Kotz-Riesz log density at an n x m point.
    Kr {
        #[command(flatten)]
        params: KrArgs,
        #[arg(long)]
        point: PathBuf,
        /// Which matrix of a list file to use.
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
    /// Riesz log density at an m x m positive definite point.
    Riesz {
        #[arg(long, default_value = "I")]
        variant: Variant,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value = "0")]
        kappa: Partition,
        /// m x m scale matrix file; identity of size --m otherwise.
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_parser = parse_algebra, default_value = "1")]
        beta: DivisionAlgebra,
        #[arg(long)]
        point: PathBuf,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

pub fn density(cmd: &DensityCmd) -> CliResult<Value> {
    match cmd {
        DensityCmd::Kr {
            params,
            point,
            index,
        } => {
            let p = params.params()?;
            let dist = p.clone().validate()?;
            let x = load_matrix(point, *index)?;
            let log = dist.log_density(&x)?;
            Ok(json!({
                "schema": SCHEMA,
                "distribution": "kotz_riesz",
                "variant": variant_name(p.variant),
                "convention": p.convention.name(),
                "log_density": log,
                "density": log.exp(),
            }))
        }
        DensityCmd::Riesz {
            variant,
            a,
            kappa,
            sigma,
            m,
            beta,
            point,
            index,
        } => {
            let sigma = match (sigma, m) {
                (Some(path), _) => load_pd(path)?,
                (None, Some(m)) => HermitianPD::identity(*beta, *m),
                (None, None) => return Err(CliError::Usage("give --sigma or --m".into())),
            };
            let dist = RieszParams::new(*variant, *a, kappa.clone(), sigma).validate()?;
            let y = HermitianPD::new(load_matrix(point, *index)?)?;
            let log = dist.log_density(&y)?;
            Ok(json!({
                "schema": SCHEMA,
                "distribution": "riesz",
                "variant": variant_name(*variant),
                "convention": "leading_minors",
                "log_density": log,
                "density": log.exp(),
            }))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub params: KrArgs,
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

fn number(x: f64) -> String {
    serde_json::to_string(&x).expect("f64 serializes")
}

fn write_csv(
    out: &mut impl Write,
    draws: &[AlgebraMatrix],
    n: usize,
    m: usize,
    beta: usize,
) -> std::io::Result<()> {
    let header: Vec<String> = (0..n)
        .flat_map(|r| (0..m).flat_map(move |c| (0..beta).map(move |k| format!("x_{r}_{c}_{k}"))))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for d in draws {
        let row: Vec<String> = d
            .as_slice()
            .iter()
            .flat_map(|s| {
                s.components()[..beta]
                    .iter()
                    .map(|&v| number(v))
                    .collect::<Vec<_>>()
            })
            .collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn sample(args: &SampleArgs) -> CliResult<Value> {
    let p = args.params.params()?;
    if p.variant != Variant::I {
        return Err(riesz_core::Error::UnsupportedVariant.into());
    }
    let batch = sample_kr(&p, args.count, &RngStream::new(args.seed, args.stream))?;
    let beta = p.algebra.beta() as usize;
    let io_err = |source| CliError::Io {
        path: args.out.display().to_string(),
        source,
    };
    let file = std::fs::File::create(&args.out).map_err(io_err)?;
    let mut out = std::io::BufWriter::new(file);
    match args.format {
        Format::Csv => write_csv(&mut out, &batch.draws, p.n, p.m, beta).map_err(io_err)?,
        Format::Json => {
            let files: Vec<MatrixFile> = batch.draws.iter().map(MatrixFile::from_matrix).collect();
            serde_json::to_writer(&mut out, &files).map_err(|e| io_err(e.into()))?;
            writeln!(out).map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)?;

    let width = p.n * p.m * beta;
    let mut mean = vec![0.0; width];
    for d in &batch.draws {
        for (i, s) in d.as_slice().iter().enumerate() {
            for k in 0..beta {
                mean[i * beta + k] += s.components()[k];
            }
        }
    }
    let mean: Vec<Option<f64>> = if batch.count == 0 {
        vec![None; width]
    } else {
        mean.into_iter()
            .map(|v| Some(v / batch.count as f64))
            .collect()
    };
    let prov = &batch.provenance;
    Ok(json!({
        "schema": SCHEMA,
        "out": args.out.display().to_string(),
        "format": match args.format { Format::Csv => "csv", Format::Json => "json" },
        "count": batch.count,
        "params": {
            "variant": variant_name(p.variant),
            "kappa": p.kappa.to_string(),
            "n": p.n,
            "m": p.m,
            "beta": p.algebra.beta(),
            "convention": p.convention.name(),
        },
        "provenance": {
            "seed": prov.seed,
            "stream": prov.stream_id,
            "algorithm": prov.algorithm_id,
            "chunk_size": prov.chunk_size,
        },
        "mean": mean,
    }))
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// specialfun, jack, densities, samplers, moments, cf or all.
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo draws per randomized check.
    #[arg(long, default_value_t = riesz_core::validation::suites::DEFAULT_DRAWS)]
    pub draws: usize,
    /// Also write the report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Case override for the cf suite.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_parser = parse_algebra)]
    pub beta: Option<DivisionAlgebra>,
    #[arg(long)]
    pub kappa: Option<Partition>,
}

pub fn validate(args: &ValidateArgs, command: Vec<String>) -> CliResult<RunReport> {
    let overridden =
        args.m.is_some() || args.n.is_some() || args.beta.is_some() || args.kappa.is_some();
    if overridden && !matches!(args.suite, Suite::Cf | Suite::All) {
        return Err(CliError::Usage(
            "--m, --n, --beta and --kappa apply to the cf suite".into(),
        ));
    }
    let case = overridden.then(|| {
        let m = args.m.unwrap_or(1);
        CaseOverride {
            m,
            n: args.n.unwrap_or(m),
            algebra: args.beta.unwrap_or(DivisionAlgebra::Real),
            kappa: args.kappa.clone().unwrap_or_else(Partition::zero),
        }
    });
    let cfg = SuiteConfig {
        seed: args.seed,
        draws: args.draws,
        case,
    };
    let start = Instant::now();
    let report = run_suite(args.suite, &cfg)?;
    Ok(RunReport::new(
        command,
        args.suite.name(),
        &cfg,
        &report,
        start.elapsed().as_secs_f64(),
    ))
}

pub fn write_report(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
