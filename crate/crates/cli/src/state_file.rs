//! `{"dims": [d_A, d_B], "matrix": [[[re, im], ...], ...]}`

use std::path::Path;

use naqc_core::qmatrix::{ComplexMatrix, DensityMatrix};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    #[cfg(test)]
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let (da, db) = rho.dims().unwrap_or((rho.dim(), 1));
        Self {
            dims: [da, db],
            matrix: rho
                .matrix()
                .to_rows()
                .into_iter()
                .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_state(&self, tolerance: f64) -> CliResult<DensityMatrix> {
        let [da, db] = self.dims;
        let n = da * db;
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(CliError::Usage(format!(
                "matrix must be {n}×{n} for dims [{da}, {db}]"
            )));
        }
        let rows: Vec<Vec<Complex64>> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
            .collect();
        let mat = ComplexMatrix::from_rows(&rows)?;
        Ok(DensityMatrix::bipartite_with_tolerance(mat, (da, db), tolerance)?)
    }
}

pub fn read_state(path: &Path, tolerance: f64) -> CliResult<DensityMatrix> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: shown,
        message: e.to_string(),
    })?;
    file.to_state(tolerance)
}
