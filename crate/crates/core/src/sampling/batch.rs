use serde::{Deserialize, Serialize};

use super::SeedSpec;
use crate::{Error, Result};

/// Row-major collection of `n` draws of dimension `dim`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    values: Vec<f64>,
    dim: usize,
    labels: Vec<String>,
    provenance: SeedSpec,
}

impl SampleBatch {
    pub fn new(values: Vec<f64>, labels: &[&str], provenance: SeedSpec) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("batch needs at least one coordinate".into()));
        }
        if !values.len().is_multiple_of(dim) {
            return Err(Error::InvalidArgument(format!(
                "{} values do not split into rows of {dim}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sample batch"));
        }
        Ok(SampleBatch {
            values,
            dim,
            labels: labels.iter().map(|s| s.to_string()).collect(),
            provenance,
        })
    }

    pub fn scalar(values: Vec<f64>, label: &str, provenance: SeedSpec) -> Result<Self> {
        Self::new(values, &[label], provenance)
    }

    pub fn n(&self) -> usize {
        self.values.len() / self.dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn provenance(&self) -> SeedSpec {
        self.provenance
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }

    /// Copy of coordinate `j` across all rows.
    pub fn column(&self, j: usize) -> Vec<f64> {
        assert!(j < self.dim, "column {j} out of range for dim {}", self.dim);
        self.rows().map(|r| r[j]).collect()
    }
}
