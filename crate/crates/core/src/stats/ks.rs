//! Kolmogorov–Smirnov tests with asymptotic p-values.

use std::f64::consts::PI;

use super::report::{Rule, TestReport, ALPHA};
use crate::special::CdfSpec;
use crate::{Error, Result};

pub(crate) fn sorted_finite(x: &[f64], what: &'static str) -> Result<Vec<f64>> {
    if x.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite(what));
    }
    let mut v = x.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    Ok(v)
}

fn need(n: usize, min: usize, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::InvalidArgument(format!("{what} needs at least {min} values, got {n}")));
    }
    Ok(())
}

/// Kolmogorov survival function `Q(λ) = 2 Σ_{k≥1} (-1)^(k-1) exp(-2 k² λ²)`.
///
/// Below `λ = 1.18` the alternating series converges slowly and the
/// Jacobi theta form `1 - √(2π)/λ Σ exp(-(2k-1)² π² / (8λ²))` is used.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let y = -PI * PI / (8.0 * lambda * lambda);
        let mut s = 0.0;
        for k in 1..=6 {
            let j = (2 * k - 1) as f64;
            s += (j * j * y).exp();
        }
        (1.0 - (2.0 * PI).sqrt() / lambda * s).clamp(0.0, 1.0)
    } else {
        let mut s = 0.0;
        let mut sign = 1.0;
        for k in 1..=100 {
            let kf = k as f64;
            let term = (-2.0 * kf * kf * lambda * lambda).exp();
            s += sign * term;
            if term < 1e-18 {
                break;
            }
            sign = -sign;
        }
        (2.0 * s).clamp(0.0, 1.0)
    }
}

/// Asymptotic p-value of distance `d` with Stephens' finite-sample scaling.
pub fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let s = n_eff.sqrt();
    kolmogorov_sf((s + 0.12 + 0.11 / s) * d)
}

/// One-sample distance `sup |F̂ - F|` over a sample.
pub fn ks_distance(x: &[f64], cdf: &CdfSpec) -> Result<f64> {
    let v = sorted_finite(x, "ks sample")?;
    Ok(distance_sorted(&v, |t| cdf.cdf(t)))
}

fn distance_sorted(v: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < v.len() {
        // Ties step the empirical CDF by their multiplicity at once.
        let mut j = i + 1;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        let f = cdf(v[i]);
        d = d.max(f - i as f64 / n).max(j as f64 / n - f);
        i = j;
    }
    d
}

/// One-sample KS test, judged at level [`ALPHA`] by default.
pub fn ks_one_sample(x: &[f64], cdf: &CdfSpec) -> Result<TestReport> {
    need(x.len(), 10, "ks_one_sample")?;
    let d = ks_distance(x, cdf)?;
    let p = ks_p_value(d, x.len() as f64);
    Ok(TestReport::new(format!("ks_one_sample[{}]", cdf.name()), d, ALPHA, Rule::PValueAbove)
        .with_p_value(p)
        .with_n(&[x.len()]))
}

/// Two-sample distance between empirical CDFs.
pub fn ks_two_sample_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted_finite(a, "ks sample a")?;
    let b = sorted_finite(b, "ks sample b")?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let t = a[i].min(b[j]);
        while i < a.len() && a[i] == t {
            i += 1;
        }
        while j < b.len() && b[j] == t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Two-sample KS test with `n_eff = n m / (n + m)`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<TestReport> {
    need(a.len(), 10, "ks_two_sample")?;
    need(b.len(), 10, "ks_two_sample")?;
    let d = ks_two_sample_distance(a, b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let p = ks_p_value(d, na * nb / (na + nb));
    Ok(TestReport::new("ks_two_sample", d, ALPHA, Rule::PValueAbove)
        .with_p_value(p)
        .with_n(&[a.len(), b.len()]))
}
