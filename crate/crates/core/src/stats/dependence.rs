//! Pearson χ² uniformity and Spearman rank independence.

use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::report::{Rule, TestReport, ALPHA};
use super::summary::compensated_sum;
use crate::{Error, Result};

/// Upper tail of the χ² law with `df` degrees of freedom.
pub fn chi2_sf(x: f64, df: f64) -> f64 {
    ChiSquared::new(df).map(|d| d.sf(x)).unwrap_or(f64::NAN)
}

/// Pearson χ² of `x` against the uniform law on `[0, 1]` with equal bins.
pub fn chi2_uniformity(x: &[f64], bins: usize) -> Result<TestReport> {
    if bins < 2 {
        return Err(Error::InvalidArgument(format!("{bins} bins")));
    }
    if x.is_empty() {
        return Err(Error::InvalidArgument("empty batch".into()));
    }
    let mut counts = vec![0usize; bins];
    for &v in x {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::Domain {
                name: "uniformity sample",
                value: v,
                domain: "[0, 1]",
            });
        }
        counts[((v * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let expected = x.len() as f64 / bins as f64;
    let stat = compensated_sum(counts.iter().map(|&c| {
        let d = c as f64 - expected;
        d * d / expected
    }));
    let p = chi2_sf(stat, (bins - 1) as f64);
    Ok(TestReport::new(format!("chi2_uniformity[{bins}]"), stat, ALPHA, Rule::PValueAbove)
        .with_p_value(p)
        .with_n(&[x.len()]))
}

/// Ranks starting at 1, ties sharing their average rank.
pub fn midranks(x: &[f64]) -> Result<Vec<f64>> {
    if x.iter().any(|v| v.is_nan()) {
        return Err(Error::NonFinite("rank sample"));
    }
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_unstable_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i + 1;
        while j < idx.len() && x[idx[j]] == x[idx[i]] {
            j += 1;
        }
        let r = 0.5 * ((i + 1) + j) as f64;
        for &k in &idx[i..j] {
            ranks[k] = r;
        }
        i = j;
    }
    Ok(ranks)
}

/// Spearman correlation: Pearson correlation of midranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!("unpaired batches: {} vs {}", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::InvalidArgument("need at least three pairs".into()));
    }
    let rx = midranks(x)?;
    let ry = midranks(y)?;
    let mean = (x.len() as f64 + 1.0) / 2.0;
    let sxy = compensated_sum(rx.iter().zip(&ry).map(|(a, b)| (a - mean) * (b - mean)));
    let sxx = compensated_sum(rx.iter().map(|a| (a - mean) * (a - mean)));
    let syy = compensated_sum(ry.iter().map(|b| (b - mean) * (b - mean)));
    if sxx == 0.0 || syy == 0.0 {
        return Ok(0.0);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// `|ρ_S| < 4/√n` under independence.
pub fn rank_independence(x: &[f64], y: &[f64]) -> Result<TestReport> {
    let rho = spearman(x, y)?;
    let n = x.len();
    Ok(TestReport::new(
        "rank_independence",
        rho.abs(),
        4.0 / (n as f64).sqrt(),
        Rule::StatisticBelow { flag_factor: None },
    )
    .with_n(&[n])
    .with_note(format!("spearman rho {rho:.5}")))
}
