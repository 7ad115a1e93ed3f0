//! Local-time estimators on a discretized path.

use serde::{Deserialize, Serialize};

use super::grid::{interpolate, PathGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalTimeMethod {
    /// `2ε` times the number of completed down-crossings of `[a, a+ε]`.
    Downcrossing,
    /// `(1/2ε)` times the time spent in `[a-ε, a+ε]`, per-step linear paths.
    Occupation,
}

/// Default bandwidth `dt^0.45`, which shrinks slower than the step scale `sqrt(dt)`.
pub fn default_bandwidth(dt: f64) -> f64 {
    dt.powf(0.45)
}

/// Running local-time estimate at one level, fed one step at a time.
#[derive(Debug, Clone)]
pub struct LocalTimeAccumulator {
    level: f64,
    eps: f64,
    method: LocalTimeMethod,
    armed: bool,
    value: f64,
}

impl LocalTimeAccumulator {
    pub fn new(level: f64, method: LocalTimeMethod, eps: f64, start: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidArgument(format!("bandwidth {eps}")));
        }
        Ok(LocalTimeAccumulator {
            level,
            eps,
            method,
            armed: start >= level + eps,
            value: 0.0,
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Advances over one step from `a` to `b` lasting `dt`.
    #[inline]
    pub fn step(&mut self, a: f64, b: f64, dt: f64) -> f64 {
        match self.method {
            LocalTimeMethod::Occupation => {
                let occ = band_occupation(a - self.level, b - self.level, self.eps, dt);
                self.value += occ / (2.0 * self.eps);
            }
            LocalTimeMethod::Downcrossing => {
                if self.armed && b <= self.level {
                    self.value += 2.0 * self.eps;
                    self.armed = false;
                }
                if b >= self.level + self.eps {
                    self.armed = true;
                }
            }
        }
        self.value
    }
}

/// Time spent in `[-eps, eps]` by the straight segment from `a` to `b` over `dt`.
#[inline]
fn band_occupation(a: f64, b: f64, eps: f64, dt: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi < -eps || lo > eps {
        return 0.0;
    }
    let span = hi - lo;
    if span == 0.0 {
        return dt;
    }
    let inside = hi.min(eps) - lo.max(-eps);
    dt * inside / span
}

/// Estimated local time at one level on the grid of its source path.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalTimeCurve {
    dt: f64,
    values: Vec<f64>,
    pub method: LocalTimeMethod,
    pub bandwidth: f64,
    pub level: f64,
}

impl LocalTimeCurve {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn terminal(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn value_at(&self, t: f64) -> f64 {
        interpolate(&self.values, self.dt, t)
    }
}

pub fn local_time_at_level(
    p: &PathGrid,
    level: f64,
    method: LocalTimeMethod,
    eps: f64,
) -> Result<LocalTimeCurve> {
    let x = p.values();
    let dt = p.dt();
    let mut acc = LocalTimeAccumulator::new(level, method, eps, x[0])?;
    let mut values = Vec::with_capacity(x.len());
    values.push(0.0);
    for w in x.windows(2) {
        values.push(acc.step(w[0], w[1], dt));
    }
    Ok(LocalTimeCurve {
        dt,
        values,
        method,
        bandwidth: eps,
        level,
    })
}

pub fn local_time_zero(p: &PathGrid, method: LocalTimeMethod, eps: f64) -> Result<LocalTimeCurve> {
    local_time_at_level(p, 0.0, method, eps)
}

/// Terminal local time only, without keeping the curve.
pub fn terminal_local_time(p: &PathGrid, level: f64, method: LocalTimeMethod, eps: f64) -> Result<f64> {
    let x = p.values();
    let mut acc = LocalTimeAccumulator::new(level, method, eps, x[0])?;
    for w in x.windows(2) {
        acc.step(w[0], w[1], p.dt());
    }
    Ok(acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(values: Vec<f64>, dt: f64) -> PathGrid {
        PathGrid::new(dt, values).unwrap()
    }

    #[test]
    fn far_path_has_zero_local_time() {
        let p = grid(vec![5.0; 101], 0.01);
        for m in [LocalTimeMethod::Occupation, LocalTimeMethod::Downcrossing] {
            let lt = local_time_zero(&p, m, 0.1).unwrap();
            assert!(lt.values().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn rejects_nonpositive_bandwidth() {
        let p = grid(vec![0.0, 1.0], 1.0);
        assert!(local_time_zero(&p, LocalTimeMethod::Occupation, 0.0).is_err());
    }

    #[test]
    fn occupation_of_straight_line() {
        // Line from -1 to 1 over unit time spends 2*eps/2 = eps in the band.
        let p = grid(vec![-1.0, 1.0], 1.0);
        let lt = local_time_zero(&p, LocalTimeMethod::Occupation, 0.25).unwrap();
        assert!((lt.terminal() - 0.25 / 0.5).abs() < 1e-15);
        // Sitting at the level accrues dt / (2 eps).
        let flat = grid(vec![0.0, 0.0, 0.0], 0.5);
        let lt = local_time_zero(&flat, LocalTimeMethod::Occupation, 0.25).unwrap();
        assert_eq!(lt.values(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn downcrossings_are_counted_once_each() {
        let p = grid(vec![0.0, 0.3, 0.05, -0.1, 0.3, 0.2, 0.3, -0.2], 1.0);
        let lt = local_time_zero(&p, LocalTimeMethod::Downcrossing, 0.25).unwrap();
        assert_eq!(lt.values(), &[0.0, 0.0, 0.0, 0.5, 0.5, 0.5, 0.5, 1.0]);
    }

    #[test]
    fn curves_are_nondecreasing() {
        let p = grid((0..200).map(|k| ((k as f64) * 0.37).sin() * 0.4).collect(), 0.01);
        for m in [LocalTimeMethod::Occupation, LocalTimeMethod::Downcrossing] {
            let lt = local_time_zero(&p, m, 0.05).unwrap();
            assert!(lt.values().windows(2).all(|w| w[1] >= w[0]));
            assert_eq!(lt.values()[0], 0.0);
        }
    }
}
