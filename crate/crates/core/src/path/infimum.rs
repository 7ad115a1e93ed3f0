//! Future infimum `J_u = inf_{u ≤ t ≤ t_end} X_t` of a sampled path.

use rand::Rng;

use super::grid::PathGrid;
use crate::sampling::{normal, uniform};
use crate::{Error, Result};

fn check_u(p: &PathGrid, u: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&u) {
        return Err(Error::Domain {
            name: "u",
            value: u,
            domain: "[0, 1]",
        });
    }
    if p.t_end() < 1.0 - 1e-12 {
        return Err(Error::GridMismatch(format!("grid ends at {} < 1", p.t_end())));
    }
    Ok(())
}

/// Minimum of the grid values on `[u, 1]`, with the value at `u` interpolated.
pub fn future_infimum(p: &PathGrid, u: f64) -> Result<f64> {
    check_u(p, u)?;
    let x = p.values();
    let end = ((1.0 / p.dt()).round() as usize).min(p.n_steps());
    let first = ((u / p.dt()).floor() as usize + 1).min(end);
    Ok(x[first..=end]
        .iter()
        .copied()
        .fold(p.value_at(u), f64::min))
}

/// Minimum of a Brownian bridge from `a` to `b` over a cell of length `h`.
///
/// Inverts `P(min < m) = exp(-2 (a - m)(b - m) / h)` with `v` in `(0, 1]`.
#[inline]
pub fn bridge_minimum(a: f64, b: f64, h: f64, v: f64) -> f64 {
    let d = a - b;
    0.5 * (a + b - (d * d - 2.0 * h * v.ln()).sqrt())
}

/// Future infimum with every cell treated as a Brownian bridge.
///
/// The grid minimum sits about `0.58 sqrt(dt)` above the continuous one;
/// drawing each cell's minimum conditionally on its endpoints removes that
/// bias for Brownian paths, and for the Bessel-3 norm away from the origin.
/// The value at `u` itself is drawn from the bridge through its cell.
pub fn refined_future_infimum<R: Rng + ?Sized>(p: &PathGrid, u: f64, rng: &mut R) -> Result<f64> {
    check_u(p, u)?;
    let x = p.values();
    let h = p.dt();
    let end = ((1.0 / h).round() as usize).min(p.n_steps());
    // Cells whose endpoints lie this far above the running minimum cannot
    // beat it except with probability below e^-70.
    let reach = 6.0 * h.sqrt();
    let pos = (u / h).min(end as f64);
    let k = (pos.floor() as usize).min(end.saturating_sub(1));
    let mut best = x[end];
    for j in (k + 1..end).rev() {
        let (a, b) = (x[j], x[j + 1]);
        if a.min(b) - best < reach {
            best = best.min(bridge_minimum(a, b, h, 1.0 - uniform(rng)));
        }
    }
    let w = pos - k as f64;
    let at_u = x[k] + w * (x[k + 1] - x[k]) + (w * (1.0 - w) * h).sqrt() * normal(rng);
    let rest = (1.0 - w) * h;
    let partial = if rest > 0.0 {
        bridge_minimum(at_u, x[k + 1], rest, 1.0 - uniform(rng))
    } else {
        at_u
    };
    Ok(best.min(partial).min(at_u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SeedSpec;

    fn grid(v: Vec<f64>) -> PathGrid {
        let n = v.len() - 1;
        PathGrid::new(1.0 / n as f64, v).unwrap()
    }

    #[test]
    fn grid_infimum_basics() {
        let p = grid(vec![0.0, 2.0, 1.0, 3.0, 2.5]);
        assert_eq!(future_infimum(&p, 1.0).unwrap(), 2.5);
        assert_eq!(future_infimum(&p, 0.0).unwrap(), 0.0);
        assert_eq!(future_infimum(&p, 0.3).unwrap(), 1.0);
        // interpolated value at u = 0.125 is 1.0; the later minimum is also 1.0
        assert_eq!(future_infimum(&p, 0.125).unwrap(), 1.0);
        assert!(future_infimum(&p, 1.5).is_err());
        assert!(future_infimum(&p, -0.1).is_err());
    }

    #[test]
    fn bridge_minimum_edges() {
        assert_eq!(bridge_minimum(1.0, 2.0, 0.1, 1.0), 1.0);
        assert!(bridge_minimum(1.0, 1.0, 0.1, 0.5) < 1.0);
    }

    #[test]
    fn bridge_minimum_law_matches_reflection() {
        // Minimum of a Brownian motion started at 0 over unit time: P(min < -m) = 2 P(B_1 < -m).
        let mut rng = SeedSpec::new(4, 4).rng();
        let n = 200_000;
        let mut below = 0usize;
        for _ in 0..n {
            let b = normal(&mut rng);
            if bridge_minimum(0.0, b, 1.0, 1.0 - uniform(&mut rng)) < -1.0 {
                below += 1;
            }
        }
        let want = 2.0 * crate::special::normal_cdf(-1.0);
        let got = below as f64 / n as f64;
        let se = (want * (1.0 - want) / n as f64).sqrt();
        assert!((got - want).abs() < 4.0 * se, "{got} vs {want}");
    }

    #[test]
    fn refined_is_below_later_grid_points() {
        let mut rng = SeedSpec::new(8, 0).rng();
        let p = crate::path::simulate_bm_with(128, 1.0, &mut rng).unwrap();
        for &u in &[0.0f64, 0.1, 0.5, 0.99] {
            let first = (u * 128.0).floor() as usize + 1;
            let later = p.values()[first..].iter().copied().fold(f64::INFINITY, f64::min);
            let r = refined_future_infimum(&p, u, &mut rng).unwrap();
            assert!(r <= later, "u={u}");
        }
        assert_eq!(refined_future_infimum(&p, 1.0, &mut rng).unwrap(), p.terminal());
    }
}
