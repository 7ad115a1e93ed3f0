//! Brownian motion, the bridge, the meander and the Bessel-3 process on a grid.

use rand::Rng;

use super::grid::PathGrid;
use super::local_time::LocalTimeCurve;
use crate::sampling::{normal, SeedSpec};
use crate::{Error, Result};

fn check_steps(n_steps: usize, t: f64) -> Result<f64> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain {
            name: "horizon",
            value: t,
            domain: "(0, inf)",
        });
    }
    Ok(t / n_steps as f64)
}

/// Gaussian random walk with variance `dt` per step, starting at 0.
pub(crate) fn walk<R: Rng + ?Sized>(n_steps: usize, dt: f64, rng: &mut R) -> Vec<f64> {
    let sd = dt.sqrt();
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut x = 0.0;
    values.push(x);
    for _ in 0..n_steps {
        x += sd * normal(rng);
        values.push(x);
    }
    values
}

/// Standard Brownian motion on `[0, t]` sampled exactly at `n_steps + 1` points.
pub fn simulate_bm(n_steps: usize, t: f64, seed: SeedSpec) -> Result<PathGrid> {
    simulate_bm_with(n_steps, t, &mut seed.rng())
}

pub fn simulate_bm_with<R: Rng + ?Sized>(n_steps: usize, t: f64, rng: &mut R) -> Result<PathGrid> {
    let dt = check_steps(n_steps, t)?;
    Ok(PathGrid::from_parts_unchecked(dt, walk(n_steps, dt, rng)))
}

/// `b(u) = B_u - u B_1`, pinned to exactly zero at both ends.
pub fn bridge_from_bm(p: &PathGrid) -> Result<PathGrid> {
    if (p.t_end() - 1.0).abs() > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "bridge needs a path on [0, 1], got t_end = {}",
            p.t_end()
        )));
    }
    let x = p.values();
    let n = p.n_steps();
    let end = x[n];
    let mut values: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(k, &v)| v - (k as f64 / n as f64) * end)
        .collect();
    values[0] = 0.0;
    values[n] = 0.0;
    Ok(PathGrid::from_parts_unchecked(p.dt(), values))
}

pub fn simulate_bridge_with<R: Rng + ?Sized>(n_steps: usize, rng: &mut R) -> Result<PathGrid> {
    bridge_from_bm(&simulate_bm_with(n_steps, 1.0, rng)?)
}

/// Meander built as `m(u) = |b(u)| + λ_u⁰` from a bridge and its local time at 0.
#[derive(Debug, Clone)]
pub struct Meander {
    path: PathGrid,
    local_time: LocalTimeCurve,
}

impl Meander {
    pub fn path(&self) -> &PathGrid {
        &self.path
    }

    pub fn value_at(&self, u: f64) -> f64 {
        self.path.value_at(u)
    }

    /// `i_u = inf_{u ≤ t ≤ 1} m_t`, which for this construction is `λ_u⁰`.
    pub fn future_inf(&self, u: f64) -> f64 {
        self.local_time.value_at(u)
    }

    pub fn local_time(&self) -> &LocalTimeCurve {
        &self.local_time
    }
}

pub fn meander_from_bridge(b: &PathGrid, lt: &LocalTimeCurve) -> Result<Meander> {
    if !b.same_grid(lt.dt(), lt.values().len()) {
        return Err(Error::GridMismatch(format!(
            "bridge has {} points at dt {}, local time has {} at dt {}",
            b.values().len(),
            b.dt(),
            lt.values().len(),
            lt.dt()
        )));
    }
    if lt.level != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "meander needs the local time at 0, got level {}",
            lt.level
        )));
    }
    let values = b
        .values()
        .iter()
        .zip(lt.values())
        .map(|(x, l)| x.abs() + l)
        .collect();
    Ok(Meander {
        path: PathGrid::from_parts_unchecked(b.dt(), values),
        local_time: lt.clone(),
    })
}

/// Bessel-3 path as the norm of a 3-D Brownian motion, with its coordinates.
#[derive(Debug, Clone)]
pub struct Bes3Path {
    norm: PathGrid,
    coords: Vec<[f64; 3]>,
}

impl Bes3Path {
    pub fn grid(&self) -> &PathGrid {
        &self.norm
    }

    pub fn into_grid(self) -> PathGrid {
        self.norm
    }

    pub fn coords(&self) -> &[[f64; 3]] {
        &self.coords
    }

    /// Exact draw of `R_t` given the grid: inside a cell the 3-D motion is a
    /// Brownian bridge between the two stored points.
    pub fn sample_at<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        let p = bridge_point(&self.coords, self.norm.dt(), t, rng);
        (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
    }
}

/// Point of a piecewise Brownian bridge through `coords` at time `t`.
pub(crate) fn bridge_point<R: Rng + ?Sized>(coords: &[[f64; 3]], dt: f64, t: f64, rng: &mut R) -> [f64; 3] {
    let n = coords.len() - 1;
    let x = (t / dt).clamp(0.0, n as f64);
    let k = (x.floor() as usize).min(n - 1);
    let w = x - k as f64;
    let sd = (w * (1.0 - w) * dt).sqrt();
    let (a, b) = (coords[k], coords[k + 1]);
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = a[i] + w * (b[i] - a[i]);
        if sd > 0.0 {
            out[i] += sd * normal(rng);
        }
    }
    out
}

pub fn simulate_bes3(n_steps: usize, t: f64, seed: SeedSpec) -> Result<PathGrid> {
    Ok(simulate_bes3_with(n_steps, t, &mut seed.rng())?.into_grid())
}

pub fn simulate_bes3_with<R: Rng + ?Sized>(n_steps: usize, t: f64, rng: &mut R) -> Result<Bes3Path> {
    let dt = check_steps(n_steps, t)?;
    let sd = dt.sqrt();
    let mut coords = Vec::with_capacity(n_steps + 1);
    let mut values = Vec::with_capacity(n_steps + 1);
    let mut p = [0.0f64; 3];
    coords.push(p);
    values.push(0.0);
    for _ in 0..n_steps {
        for c in p.iter_mut() {
            *c += sd * normal(rng);
        }
        coords.push(p);
        values.push((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt());
    }
    Ok(Bes3Path {
        norm: PathGrid::from_parts_unchecked(dt, values),
        coords,
    })
}
