//! Brownian paths run up to their first hitting time of level 1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::brownian::bridge_point;
use super::grid::PathGrid;
use super::Simulated;
use crate::sampling::{normal, t1 as draw_t1};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HittingMethod {
    WalkCapped,
    ExactReversal,
}

/// `(B_t, t ≤ T₁)` on a uniform grid.
///
/// For `WalkCapped` the crossing falls inside the last cell: the grid
/// ends at the first step past 1, and [`HittingPath::value_at`] reads the
/// final segment as the straight line from the last value below 1 to
/// `(T₁, 1)`. For `ExactReversal` the grid ends exactly at `T₁`.
#[derive(Debug, Clone)]
pub struct HittingPath {
    path: PathGrid,
    t1: f64,
    method: HittingMethod,
    // 3-D bridge points, reversed onto the grid of `path`: B_k = 1 - |coords[k]|.
    coords: Option<Vec<[f64; 3]>>,
}

impl HittingPath {
    #[cfg(test)]
    pub(crate) fn from_reversal_unchecked(path: PathGrid, t1: f64) -> Self {
        HittingPath {
            path,
            t1,
            method: HittingMethod::ExactReversal,
            coords: None,
        }
    }

    pub fn path(&self) -> &PathGrid {
        &self.path
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn method(&self) -> HittingMethod {
        self.method
    }

    /// Linear interpolation of `B` at time `t`, clamped to `[0, T₁]`.
    pub fn value_at(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.t1);
        match self.method {
            HittingMethod::ExactReversal => self.path.value_at(t),
            HittingMethod::WalkCapped => {
                let x = self.path.values();
                let last = x.len() - 2;
                let t_last = last as f64 * self.path.dt();
                if t < t_last {
                    self.path.value_at(t)
                } else if self.t1 > t_last {
                    x[last] + (t - t_last) / (self.t1 - t_last) * (1.0 - x[last])
                } else {
                    1.0
                }
            }
        }
    }

    /// Draw of `B_{u T₁}` given the stored grid, exact for reversal paths.
    ///
    /// Between grid points the reversed 3-D motion is a Brownian bridge, so
    /// the value is sampled rather than interpolated. Walk paths fall back
    /// to [`HittingPath::value_at`].
    pub fn sample_exact_at<R: Rng + ?Sized>(&self, u: f64, rng: &mut R) -> f64 {
        match &self.coords {
            Some(c) => {
                let p = bridge_point(c, self.path.dt(), u.clamp(0.0, 1.0) * self.t1, rng);
                1.0 - (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
            }
            None => self.value_at(u * self.t1),
        }
    }
}

/// Euler walk of step `dt` until the first grid value `≥ 1`.
///
/// `T₁` is the linearly interpolated crossing time inside the last step.
/// Paths still below 1 after `cap_steps` steps are discarded.
pub fn simulate_hitting_path_walk<R: Rng + ?Sized>(
    dt: f64,
    cap_steps: usize,
    rng: &mut R,
) -> Result<Simulated<HittingPath>> {
    if !(dt > 0.0) || !dt.is_finite() || cap_steps == 0 {
        return Err(Error::InvalidArgument(format!("walk with dt {dt}, cap {cap_steps}")));
    }
    let sd = dt.sqrt();
    let mut values = vec![0.0];
    let mut x = 0.0;
    for k in 0..cap_steps {
        let next = x + sd * normal(rng);
        if next >= 1.0 {
            let t1 = (k as f64 + (1.0 - x) / (next - x)) * dt;
            values.push(1.0);
            return Ok(Simulated::Done(HittingPath {
                path: PathGrid::from_parts_unchecked(dt, values),
                t1,
                method: HittingMethod::WalkCapped,
                coords: None,
            }));
        }
        x = next;
        values.push(x);
    }
    Ok(Simulated::Discarded { steps: cap_steps })
}

/// Hitting path by Williams reversal: `T₁ = 1/N²`, then
/// `B_{s} = 1 - |X_{T₁ - s}|` for a 3-D Brownian bridge `X` from the origin
/// to `(1, 0, 0)` over `[0, T₁]`.
pub fn simulate_hitting_path_exact<R: Rng + ?Sized>(n_steps: usize, rng: &mut R) -> Result<HittingPath> {
    if n_steps < 2 {
        return Err(Error::InvalidArgument("exact hitting path needs n_steps ≥ 2".into()));
    }
    let t1 = draw_t1(rng);
    let h = t1 / n_steps as f64;
    let sd = h.sqrt();
    let mut w = Vec::with_capacity(n_steps + 1);
    let mut p = [0.0f64; 3];
    w.push(p);
    for _ in 0..n_steps {
        for c in p.iter_mut() {
            *c += sd * normal(rng);
        }
        w.push(p);
    }
    let end = w[n_steps];
    let target = [1.0, 0.0, 0.0];
    let mut coords = vec![[0.0f64; 3]; n_steps + 1];
    let mut values = vec![0.0; n_steps + 1];
    for (k, wk) in w.iter().enumerate() {
        let f = k as f64 / n_steps as f64;
        let mut x = [0.0; 3];
        for i in 0..3 {
            x[i] = wk[i] + f * (target[i] - end[i]);
        }
        if k == 0 {
            x = [0.0; 3];
        } else if k == n_steps {
            x = target;
        }
        let j = n_steps - k;
        coords[j] = x;
        values[j] = 1.0 - (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    }
    values[0] = 0.0;
    values[n_steps] = 1.0;
    Ok(HittingPath {
        path: PathGrid::from_parts_unchecked(h, values),
        t1,
        method: HittingMethod::ExactReversal,
        coords: Some(coords),
    })
}

/// `α = B_{u T₁} / √T₁` by linear interpolation of the grid.
pub fn alpha_from_path(h: &HittingPath, u_draw: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u_draw) {
        return Err(Error::Domain {
            name: "u_draw",
            value: u_draw,
            domain: "[0, 1]",
        });
    }
    if u_draw == 1.0 {
        return Ok(1.0 / h.t1.sqrt());
    }
    Ok(h.value_at(u_draw * h.t1) / h.t1.sqrt())
}
