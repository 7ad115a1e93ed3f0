//! Identities about `(|B_1|, L_1)`, checked by quadrature and exact draws.

use std::time::Instant;

use super::common::{par_paths, seed_for, NamedSample};
use super::{Budget, Context, Outcome};
use crate::path::{default_bandwidth, simulate_bm_with, terminal_local_time, LocalTimeMethod};
use crate::sampling::{normal, sample_joint_b1_l1};
use crate::special::{h_via_quadrature, mills_h, DensitySpec};
use crate::stats::{binned_conditional_mean, mean_ci, BinMean, Rule, TestReport};
use crate::Result;

/// Conditional-mean checks use bins of this half-width.
pub(crate) const HALF_BIN: f64 = 0.05;

/// Log-spaced grid of `n` points on `[lo, hi]`.
pub(crate) fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Max deviation of `mills_h` from the quadrature form on `[0.01, 50]`.
pub fn h_identity_deviation() -> Result<(f64, f64)> {
    let mut worst: f64 = 0.0;
    let mut at = 0.0;
    for l in log_grid(0.01, 50.0, 200) {
        let d = (mills_h(l)? - h_via_quadrature(l)?).abs();
        if d > worst {
            worst = d;
            at = l;
        }
    }
    Ok((worst, at))
}

/// 4-SE check of one conditional-mean bin.
pub(crate) fn bin_report(name: String, bin: &BinMean, target: f64) -> TestReport {
    let mut r = if bin.count >= 2 && bin.se.is_finite() {
        let z = (bin.mean - target).abs() / bin.se;
        TestReport::new(name, z, 4.0, Rule::IntervalContains { target })
            .with_interval(bin.mean - 4.0 * bin.se, bin.mean + 4.0 * bin.se)
    } else {
        TestReport::new(name, f64::NAN, 4.0, Rule::IntervalContains { target })
    };
    r = r.with_n(&[bin.count]).with_note(format!(
        "bin [{:.3}, {:.3}): mean {:.6} se {:.2e} target {:.6}",
        bin.lo, bin.hi, bin.mean, bin.se, target
    ));
    if bin.flagged && r.verdict == crate::stats::Verdict::Pass {
        r.verdict = crate::stats::Verdict::Flag;
        r = r.with_note("bin holds fewer than the minimum count");
    }
    r
}

pub(super) fn prop1(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();

    let t = Instant::now();
    let (dev, at) = h_identity_deviation()?;
    let secs = t.elapsed().as_secs_f64();
    out.check(
        TestReport::new(
            "h_vs_gaussian_expectation",
            dev,
            1e-8,
            Rule::StatisticBelow { flag_factor: None },
        )
        .with_n(&[200])
        .with_note(format!("max |H(l) - l E[1/(N^2+l^2)]| over log grid [0.01, 50], at l = {at:.4}"))
        .with_note(format!("evaluation took {secs:.3} s")),
    );

    let seed = seed_for(ctx.master_seed, "prop1-h-identities", 0);
    let joint = sample_joint_b1_l1(b.n, seed);
    let abs_b: Vec<f64> = joint.column(0).into_iter().map(f64::abs).collect();
    let l1 = joint.column(1);
    for &l in &[0.5, 1.0, 2.0] {
        let edges = [l - HALF_BIN, l + HALF_BIN];
        let h = mills_h(l)?;
        let given_b = &binned_conditional_mean(&abs_b, &l1, &edges)?[0];
        out.check(bin_report(format!("E[L1 | |B1| = {l}] = H({l})"), given_b, h).with_seeds(&[seed]));
        let given_l = &binned_conditional_mean(&l1, &abs_b, &edges)?[0];
        out.check(bin_report(format!("E[|B1| | L1 = {l}] = H({l})"), given_l, h).with_seeds(&[seed]));
    }

    let nseed = seed_for(ctx.master_seed, "prop1-h-identities", 1);
    let mut rng = nseed.rng();
    let ratio: Vec<f64> = (0..b.n)
        .map(|_| {
            let z = normal(&mut rng);
            1.0 / (z * z + 1.0)
        })
        .collect();
    out.check(
        mean_ci(&ratio, 4.0)?
            .against("E[1/(N^2+1)] = H(1)", mills_h(1.0)?)
            .with_seeds(&[nseed]),
    );
    out.sample(NamedSample::new("abs_B1", abs_b).with_density(DensitySpec::half_normal()));
    out.sample(NamedSample::new("L1", l1).with_density(DensitySpec::half_normal()));
    Ok(out)
}

struct TestFn {
    name: &'static str,
    phi: fn(f64) -> f64,
    /// `∫_0^l φ`.
    big_phi: fn(f64) -> f64,
}

const TEST_FNS: [TestFn; 3] = [
    TestFn {
        name: "1{x<=1}",
        phi: |x| if x <= 1.0 { 1.0 } else { 0.0 },
        big_phi: |l| l.min(1.0),
    },
    TestFn {
        name: "exp(-x)",
        phi: |x| (-x).exp(),
        big_phi: |l| -(-l).exp_m1(),
    },
    TestFn {
        name: "cos(3x)",
        phi: |x| (3.0 * x).cos(),
        big_phi: |l| (3.0 * l).sin() / 3.0,
    },
];

pub(super) fn balayage(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    let seed = seed_for(ctx.master_seed, "balayage-check", 0);
    let joint = sample_joint_b1_l1(b.n_exact, seed);
    for f in &TEST_FNS {
        let d: Vec<f64> = joint
            .rows()
            .map(|r| (f.phi)(r[1]) * r[0].abs() - (f.big_phi)(r[1]))
            .collect();
        out.check(
            mean_ci(&d, 4.0)?
                .against(format!("exact: E[phi(L1)|B1| - Phi(L1)] = 0, phi = {}", f.name), 0.0)
                .with_seeds(&[seed]),
        );
    }

    let pseed = seed_for(ctx.master_seed, "balayage-check", 1);
    let eps = default_bandwidth(1.0 / b.steps as f64);
    let steps = b.steps;
    let pairs: Vec<Result<(f64, f64)>> = par_paths(b.n, pseed, |rng| {
        let p = simulate_bm_with(steps, 1.0, rng)?;
        let l = terminal_local_time(&p, 0.0, LocalTimeMethod::Occupation, eps)?;
        Ok((p.terminal(), l))
    });
    let pairs = pairs.into_iter().collect::<Result<Vec<_>>>()?;
    for f in &TEST_FNS[1..2] {
        let d: Vec<f64> = pairs
            .iter()
            .map(|&(x, l)| (f.phi)(l) * x.abs() - (f.big_phi)(l))
            .collect();
        out.check(
            mean_ci(&d, 4.0)?
                .against(format!("paths: E[phi(L1)|B1| - Phi(L1)] = 0, phi = {}", f.name), 0.0)
                .with_seeds(&[pseed])
                .with_note(format!("{} steps, occupation bandwidth {eps:.4e}", steps)),
        );
    }
    let lt: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    out.sample(NamedSample::new("path_L1", lt).with_density(DensitySpec::half_normal()));
    Ok(out)
}
