//! Residual Brownian motion in the enlargement by `T₁`:
//! `β_t = B_t + ∫₀^t ds/(1-B_s) - ∫₀^t (1-B_s)/(T₁-s) ds` for `t ≤ T₁`.

use super::grid::PathGrid;
use super::hitting::{HittingMethod, HittingPath};
use crate::{Error, Result};

/// Fraction of `[0, T₁]` at the end where the `sqrt(T₁ - s)` substitution is used.
const TAIL_FRACTION: f64 = 0.01;

/// `β` on a uniform grid of `n_grid` steps over `[0, T₁]`.
///
/// Both integrands blow up like `(T₁ - s)^(-1/2)`. The trapezoid rule is
/// used up to `0.99 T₁`; after that the integral is taken in
/// `v = sqrt(T₁ - s)`, where `2v` times the integrand stays bounded. Its
/// value at `v = 0` is not defined for a rough path and is replaced by the
/// value at the last grid node before `T₁`.
pub fn jeulin_residual(h: &HittingPath, n_grid: usize) -> Result<PathGrid> {
    if h.method() != HittingMethod::ExactReversal {
        return Err(Error::InvalidArgument("jeulin_residual needs an exact reversal path".into()));
    }
    if n_grid < 2 {
        return Err(Error::InvalidArgument("n_grid must be at least 2".into()));
    }
    let t1 = h.t1();
    let ds = t1 / n_grid as f64;
    let b: Vec<f64> = if h.path().n_steps() == n_grid {
        h.path().values().to_vec()
    } else {
        (0..=n_grid).map(|k| h.value_at(k as f64 * ds)).collect()
    };
    let drift = |k: usize| {
        let y = 1.0 - b[k];
        1.0 / y - y / (t1 - k as f64 * ds)
    };

    let split = (((1.0 - TAIL_FRACTION) * n_grid as f64).ceil() as usize).clamp(1, n_grid - 1);
    let mut integral = vec![0.0; n_grid + 1];
    for k in 0..split {
        integral[k + 1] = integral[k] + 0.5 * ds * (drift(k) + drift(k + 1));
    }
    // g(v) = 2 v f(T₁ - v²) at the nodes s_k, with v_k = sqrt(T₁ - s_k).
    let v = |k: usize| ((n_grid - k) as f64 * ds).sqrt();
    let g = |k: usize| {
        if k == n_grid {
            2.0 * v(n_grid - 1) * drift(n_grid - 1)
        } else {
            2.0 * v(k) * drift(k)
        }
    };
    for k in split..n_grid {
        // s from s_k to s_{k+1} is v from v_k down to v_{k+1}.
        integral[k + 1] = integral[k] + 0.5 * (v(k) - v(k + 1)) * (g(k) + g(k + 1));
    }
    let values: Vec<f64> = b.iter().zip(&integral).map(|(x, i)| x + i).collect();
    PathGrid::new(ds, values)
}
