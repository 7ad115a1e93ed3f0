use crate::{Error, Result};

/// Process values on the uniform grid `k * dt`, `k = 0..=n_steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid {
    dt: f64,
    values: Vec<f64>,
}

impl PathGrid {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidArgument(format!("grid step {dt}")));
        }
        if values.len() < 2 {
            return Err(Error::InvalidArgument("a path needs at least one step".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("path values"));
        }
        Ok(PathGrid { dt, values })
    }

    pub(crate) fn from_parts_unchecked(dt: f64, values: Vec<f64>) -> Self {
        debug_assert!(dt > 0.0 && values.len() >= 2);
        PathGrid { dt, values }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.values.len() - 1
    }

    pub fn t_end(&self) -> f64 {
        self.n_steps() as f64 * self.dt
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Grid index that sits on time `t`, if any (within `1e-9` of a step).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let k = (t / self.dt).round();
        if k < 0.0 || k as usize > self.n_steps() || (k * self.dt - t).abs() > 1e-9 * self.dt.max(t) {
            None
        } else {
            Some(k as usize)
        }
    }

    /// Linear interpolation at time `t`, clamped to `[0, t_end]`.
    pub fn value_at(&self, t: f64) -> f64 {
        interpolate(&self.values, self.dt, t)
    }

    pub fn same_grid(&self, other_dt: f64, other_len: usize) -> bool {
        self.values.len() == other_len && (self.dt - other_dt).abs() <= 1e-12 * self.dt
    }
}

pub(crate) fn interpolate(values: &[f64], dt: f64, t: f64) -> f64 {
    let n = values.len() - 1;
    let x = (t / dt).clamp(0.0, n as f64);
    let k = (x.floor() as usize).min(n - 1);
    let w = x - k as f64;
    values[k] + w * (values[k + 1] - values[k])
}
