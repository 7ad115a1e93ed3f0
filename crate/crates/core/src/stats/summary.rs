//! Means, confidence intervals and binned conditional means.

use serde::{Deserialize, Serialize};

use super::report::{Rule, TestReport};
use crate::{Error, Result};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(x: impl IntoIterator<Item = f64>) -> f64 {
    let mut s = NeumaierSum::default();
    for v in x {
        s.add(v);
    }
    s.value()
}

/// Sample mean and standard error, two passes with compensated sums.
pub fn mean_and_se(x: &[f64]) -> Result<(f64, f64)> {
    if x.len() < 2 {
        return Err(Error::InvalidArgument("need at least two values for a standard error".into()));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("mean sample"));
    }
    let n = x.len() as f64;
    let mean = compensated_sum(x.iter().copied()) / n;
    let ss = compensated_sum(x.iter().map(|v| (v - mean) * (v - mean)));
    Ok((mean, (ss / (n - 1.0) / n).sqrt()))
}

/// `mean ± conf_sigma · SE`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanInterval {
    pub n: usize,
    pub mean: f64,
    pub se: f64,
    pub conf_sigma: f64,
}

impl MeanInterval {
    pub fn lo(&self) -> f64 {
        self.mean - self.conf_sigma * self.se
    }

    pub fn hi(&self) -> f64 {
        self.mean + self.conf_sigma * self.se
    }

    /// Report that passes iff the interval contains `target`; the statistic
    /// is the distance to the target in standard errors.
    pub fn against(&self, name: impl Into<String>, target: f64) -> TestReport {
        let z = if self.se > 0.0 {
            (self.mean - target).abs() / self.se
        } else if self.mean == target {
            0.0
        } else {
            f64::INFINITY
        };
        TestReport::new(name, z, self.conf_sigma, Rule::IntervalContains { target })
            .with_interval(self.lo(), self.hi())
            .with_n(&[self.n])
            .with_note(format!("mean {:.6} se {:.3e} target {:.6}", self.mean, self.se, target))
    }
}

pub fn mean_ci(x: &[f64], conf_sigma: f64) -> Result<MeanInterval> {
    if x.len() < 30 {
        return Err(Error::InvalidArgument(format!("mean_ci needs at least 30 values, got {}", x.len())));
    }
    if !(conf_sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("conf_sigma {conf_sigma}")));
    }
    let (mean, se) = mean_and_se(x)?;
    Ok(MeanInterval {
        n: x.len(),
        mean,
        se,
        conf_sigma,
    })
}

/// Minimum occupancy for a bin to count as usable.
pub const MIN_BIN_COUNT: usize = 500;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinMean {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
    pub mean: f64,
    pub se: f64,
    /// Fewer than [`MIN_BIN_COUNT`] points.
    pub flagged: bool,
}

/// Mean and SE of `y` over points with `x` in each `[edges[i], edges[i+1])`.
pub fn binned_conditional_mean(x: &[f64], y: &[f64], edges: &[f64]) -> Result<Vec<BinMean>> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!("unpaired batches: {} vs {}", x.len(), y.len())));
    }
    if edges.len() < 2 || edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("bin edges must be increasing".into()));
    }
    let nb = edges.len() - 1;
    let mut members: Vec<Vec<f64>> = vec![Vec::new(); nb];
    for (&xi, &yi) in x.iter().zip(y) {
        if xi.is_nan() || yi.is_nan() {
            return Err(Error::NonFinite("binned sample"));
        }
        if xi < edges[0] || xi >= edges[nb] {
            continue;
        }
        let b = edges.partition_point(|&e| e <= xi) - 1;
        members[b].push(yi);
    }
    Ok(members
        .into_iter()
        .enumerate()
        .map(|(b, ys)| {
            let (mean, se) = match ys.len() {
                0 => (f64::NAN, f64::NAN),
                1 => (ys[0], f64::NAN),
                _ => mean_and_se(&ys).unwrap_or((f64::NAN, f64::NAN)),
            };
            BinMean {
                lo: edges[b],
                hi: edges[b + 1],
                count: ys.len(),
                mean,
                se,
                flagged: ys.len() < MIN_BIN_COUNT,
            }
        })
        .collect())
}
