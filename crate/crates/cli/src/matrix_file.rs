//! `{"schema", "beta", "rows", "cols", "entries"}`: row-major entries, each a
//! list of exactly `beta` reals.

use std::path::Path;

use riesz_core::{AlgebraMatrix, DivisionAlgebra, HermitianPD, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const SCHEMA: &str = "riesz-kit/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    #[serde(default = "schema")]
    pub schema: String,
    pub beta: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<f64>>,
}

fn schema() -> String {
    SCHEMA.to_string()
}

impl MatrixFile {
    pub fn from_matrix(m: &AlgebraMatrix) -> Self {
        let beta = m.algebra().beta();
        let entries = m
            .as_slice()
            .iter()
            .map(|s| s.components()[..beta as usize].to_vec())
            .collect();
        MatrixFile {
            schema: schema(),
            beta,
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> CliResult<AlgebraMatrix> {
        if self.schema != SCHEMA {
            return Err(CliError::Domain(format!(
                "unsupported schema {:?}, expected {SCHEMA:?}",
                self.schema
            )));
        }
        let alg = DivisionAlgebra::from_beta(self.beta)?;
        if self.entries.len() != self.rows * self.cols {
            return Err(CliError::Domain(format!(
                "{} entries for a {}x{} matrix",
                self.entries.len(),
                self.rows,
                self.cols
            )));
        }
        let mut scalars = Vec::with_capacity(self.entries.len());
        for (i, e) in self.entries.iter().enumerate() {
            if e.len() != self.beta as usize {
                return Err(CliError::Domain(format!(
                    "entry {i} has {} components, expected {}",
                    e.len(),
                    self.beta
                )));
            }
            let mut c = [0.0; 4];
            c[..e.len()].copy_from_slice(e);
            scalars.push(Scalar::new(c[0], c[1], c[2], c[3]));
        }
        Ok(AlgebraMatrix::from_scalars(
            alg, self.rows, self.cols, scalars,
        )?)
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// A single matrix, or element `index` of a list such as `sample --format json` writes.
pub fn load_matrix(path: &Path, index: usize) -> CliResult<AlgebraMatrix> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum OneOrMany {
        One(MatrixFile),
        Many(Vec<MatrixFile>),
    }
    let text = read(path)?;
    let parsed: OneOrMany = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })?;
    let file = match parsed {
        OneOrMany::One(f) if index == 0 => f,
        OneOrMany::One(_) => {
            return Err(CliError::Usage(format!(
                "{}: holds one matrix, index {index} requested",
                path.display()
            )))
        }
        OneOrMany::Many(mut v) => {
            if index >= v.len() {
                return Err(CliError::Usage(format!(
                    "{}: index {index} out of range for {} matrices",
                    path.display(),
                    v.len()
                )));
            }
            v.swap_remove(index)
        }
    };
    file.to_matrix()
}

pub fn load_pd(path: &Path) -> CliResult<HermitianPD> {
    Ok(HermitianPD::new(load_matrix(path, 0)?)?)
}
