//! Both sides of the Williams reversal on a finite horizon:
//! `(T₁, 1 - B_{T₁ - s})` against `(γ₁, R_s)`, `γ₁` the last passage of a
//! Bessel-3 process at level 1.

use rand::Rng;

use super::brownian::{simulate_bes3_with, Bes3Path};
use super::hitting::{simulate_hitting_path_walk, HittingPath};
use super::Simulated;
use crate::sampling::uniform;
use crate::Result;

/// Last passage at `level` of a Bessel-3 path, when it falls in the horizon.
///
/// From `R_H = r > level` the process returns to `level` with probability
/// `level / r`, which is drawn here; `R_H ≤ level` means the last passage
/// is later still. In both cases `None` is returned. Otherwise the last
/// grid crossing is interpolated linearly.
pub fn last_passage_in_horizon<R: Rng + ?Sized>(p: &Bes3Path, level: f64, rng: &mut R) -> Option<f64> {
    let grid = p.grid();
    let x = grid.values();
    let r_end = grid.terminal();
    if r_end <= level || uniform(rng) < level / r_end {
        return None;
    }
    let k = x.iter().rposition(|&v| v <= level)?;
    let (a, b) = (x[k], x[k + 1]);
    Some((k as f64 + (level - a) / (b - a)) * grid.dt())
}

/// One draw per side, restricted to times in `[0, horizon]`.
#[derive(Debug, Clone)]
pub struct ReversalSides {
    /// `(T₁, 1 - B_{T₁/2})` from the walk.
    pub hitting: Option<(f64, f64)>,
    /// `(γ₁, R_{γ₁/2})` from the Bessel path.
    pub last_passage: Option<(f64, f64)>,
}

/// Draws both sides of the identity with the same step `dt` up to `horizon`.
pub fn reversal_pair<R: Rng + ?Sized>(horizon: f64, dt: f64, rng: &mut R) -> Result<ReversalSides> {
    let steps = (horizon / dt).round().max(1.0) as usize;
    let hitting = match simulate_hitting_path_walk(dt, steps, rng)? {
        Simulated::Done(h) => Some(midpoint_hitting(&h)),
        Simulated::Discarded { .. } => None,
    };
    let bes = simulate_bes3_with(steps, steps as f64 * dt, rng)?;
    let last_passage = last_passage_in_horizon(&bes, 1.0, rng).map(|g| (g, bes.grid().value_at(0.5 * g)));
    Ok(ReversalSides { hitting, last_passage })
}

fn midpoint_hitting(h: &HittingPath) -> (f64, f64) {
    (h.t1(), 1.0 - h.value_at(0.5 * h.t1()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::SeedSpec;

    #[test]
    fn last_passage_is_a_crossing() {
        let mut rng = SeedSpec::new(30, 0).rng();
        let mut seen = 0;
        for _ in 0..200 {
            let p = simulate_bes3_with(4000, 4.0, &mut rng).unwrap();
            if let Some(g) = last_passage_in_horizon(&p, 1.0, &mut rng) {
                seen += 1;
                assert!(g > 0.0 && g < 4.0);
                assert!((p.grid().value_at(g) - 1.0).abs() < 1e-9);
                let k = (g / p.grid().dt()).floor() as usize + 1;
                assert!(p.grid().values()[k..].iter().all(|&v| v > 1.0));
            }
        }
        assert!(seen > 50);
    }

    #[test]
    fn sides_stay_in_horizon() {
        let mut rng = SeedSpec::new(30, 1).rng();
        for _ in 0..50 {
            let s = reversal_pair(2.0, 1e-3, &mut rng).unwrap();
            if let Some((t, m)) = s.hitting {
                assert!(t <= 2.0 + 1e-12 && m > 0.0);
            }
            if let Some((g, r)) = s.last_passage {
                assert!(g <= 2.0 && r >= 0.0);
            }
        }
    }
}
