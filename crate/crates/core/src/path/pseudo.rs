//! Pseudo-Brownian bridge `(B_{uτ₁}/√τ₁, u ≤ 1)`, with `τ₁` the first time
//! the estimated local time at 0 exceeds 1.

use rand::Rng;

use super::grid::{interpolate, PathGrid};
use super::local_time::{LocalTimeAccumulator, LocalTimeMethod};
use super::Simulated;
use crate::sampling::normal;
use crate::{Error, Result};

/// Stored points are thinned by two whenever this many have accumulated.
pub const MAX_STORED_POINTS: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct PseudoBridgePath {
    path: PathGrid,
    local_time: Vec<f64>,
    tau1: f64,
    steps: usize,
}

impl PseudoBridgePath {
    /// Path rescaled to `[0, 1]` in time and by `1/√τ₁` in space.
    pub fn path(&self) -> &PathGrid {
        &self.path
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    /// Simulation steps taken before stopping.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn value_at(&self, u: f64) -> f64 {
        self.path.value_at(u)
    }

    /// `L̂_{uτ₁}`, not rescaled.
    pub fn localtime_at_sample(&self, u: f64) -> f64 {
        interpolate(&self.local_time, self.path.dt(), u)
    }
}

/// Values `(B, L̂)` at steps `0, stride, 2 stride, ...`; the stride doubles
/// whenever [`MAX_STORED_POINTS`] have accumulated.
struct Decimator {
    stride: usize,
    next: usize,
    b: Vec<f64>,
    l: Vec<f64>,
}

impl Decimator {
    fn new() -> Self {
        Decimator {
            stride: 1,
            next: 1,
            b: vec![0.0],
            l: vec![0.0],
        }
    }

    #[inline]
    fn offer(&mut self, step: usize, b: f64, l: f64) {
        if step != self.next {
            return;
        }
        self.b.push(b);
        self.l.push(l);
        if self.b.len() >= MAX_STORED_POINTS {
            thin(&mut self.b);
            thin(&mut self.l);
            self.stride *= 2;
        }
        self.next = self.b.len() * self.stride;
    }
}

/// Runs Brownian motion with step `dt` until `L̂ > 1`.
///
/// - `τ̂₁` is the first grid time with `L̂ > 1`; the overshoot of `L̂`
///   past 1 (of order `ε`) is ignored.
/// - The result is re-gridded uniformly on `[0, 1]` from the stored points.
///   Once the buffer has been thinned, the last stored cell generally has a
///   different length than the others, and the re-gridding treats it as an
///   ordinary straight segment.
/// - Paths that have not stopped after `cap_steps` steps are discarded.
pub fn simulate_pseudo_bridge<R: Rng + ?Sized>(
    dt: f64,
    lt_method: LocalTimeMethod,
    epsilon: f64,
    cap_steps: usize,
    rng: &mut R,
) -> Result<Simulated<PseudoBridgePath>> {
    if !(dt > 0.0) || !dt.is_finite() || cap_steps == 0 {
        return Err(Error::InvalidArgument(format!("pseudo-bridge with dt {dt}, cap {cap_steps}")));
    }
    let mut acc = LocalTimeAccumulator::new(0.0, lt_method, epsilon, 0.0)?;
    let sd = dt.sqrt();
    let mut store = Decimator::new();
    let mut x = 0.0;
    for k in 1..=cap_steps {
        let next = x + sd * normal(rng);
        let l = acc.step(x, next, dt);
        x = next;
        if l > 1.0 {
            return Ok(Simulated::Done(finish(store, dt, k, x, l)));
        }
        store.offer(k, x, l);
    }
    Ok(Simulated::Discarded { steps: cap_steps })
}

/// Keeps the even positions.
fn thin<T>(v: &mut Vec<T>) {
    let mut i = 0;
    v.retain(|_| {
        i += 1;
        i % 2 == 1
    });
}

fn finish(mut store: Decimator, dt: f64, k: usize, b_end: f64, l_end: f64) -> PseudoBridgePath {
    let tau1 = k as f64 * dt;
    let scale = 1.0 / tau1.sqrt();
    let stride = store.stride;
    let stored = store.b.len();
    let last_step = (stored - 1) * stride;
    if last_step != k {
        store.b.push(b_end);
        store.l.push(l_end);
    }
    let step_of = |i: usize| if i < stored { (i * stride) as f64 } else { k as f64 };
    let (b, l) = if stride == 1 {
        (store.b, store.l)
    } else {
        let n = store.b.len() - 1;
        let mut b = Vec::with_capacity(n + 1);
        let mut l = Vec::with_capacity(n + 1);
        let mut j = 0;
        for i in 0..=n {
            let s = i as f64 / n as f64 * k as f64;
            while j + 1 < n && step_of(j + 1) < s {
                j += 1;
            }
            let (s0, s1) = (step_of(j), step_of(j + 1));
            let w = ((s - s0) / (s1 - s0)).clamp(0.0, 1.0);
            b.push(store.b[j] + w * (store.b[j + 1] - store.b[j]));
            l.push(store.l[j] + w * (store.l[j + 1] - store.l[j]));
        }
        (b, l)
    };
    let n = b.len() - 1;
    let values = b.iter().map(|v| v * scale).collect();
    PseudoBridgePath {
        path: PathGrid::from_parts_unchecked(1.0 / n as f64, values),
        local_time: l,
        tau1,
        steps: k,
    }
}
