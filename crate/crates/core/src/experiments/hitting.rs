//! Experiments on first-passage paths: the pseudo-bridge triplet, the law
//! of `α`, the Jeulin residual and the Williams reversal.

use super::common::{either, par_paths, seed_for, NamedSample};
use super::{Budget, Context, Outcome};
use crate::path::{
    default_bandwidth, jeulin_residual, reversal_pair, simulate_hitting_path_exact, simulate_pseudo_bridge,
    LocalTimeMethod, Simulated,
};
use crate::sampling::{sample_alpha_closed, sample_triplet_closed, uniform};
use crate::special::{cdf_t1, CdfSpec, DensitySpec};
use crate::stats::{
    chi2_uniformity, ks_one_sample, ks_two_sample, mean_ci, spearman, Rule, TestReport, FLAG_FACTOR,
};
use crate::Result;

/// Pseudo-bridge paths are discarded after this many time units.
pub const PSEUDO_HORIZON: f64 = 1e4;

/// Horizon of both sides of the reversal.
pub const WILLIAMS_HORIZON: f64 = 4.0;

const PATH_DISTANCE: f64 = 0.03;
const UNIFORM_BINS: usize = 50;

fn rank_check(name: String, x: &[f64], y: &[f64], max: f64) -> Result<TestReport> {
    let rho = spearman(x, y)?;
    Ok(TestReport::new(name, rho.abs(), max, Rule::StatisticBelow { flag_factor: None })
        .with_n(&[x.len()])
        .with_note(format!("spearman rho {rho:.5}")))
}

pub(super) fn thm1(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let dt = 1.0 / b.steps as f64;
    let cap = (PSEUDO_HORIZON / dt).round() as usize;
    let eps = default_bandwidth(dt);
    let seed = seed_for(ctx.master_seed, "thm1-pseudo-bridge", b.steps as u32);
    let runs: Vec<Result<Option<([f64; 3], usize)>>> = par_paths(b.n, seed, |rng| {
        Ok(match simulate_pseudo_bridge(dt, LocalTimeMethod::Occupation, eps, cap, rng)? {
            Simulated::Done(p) => {
                let u = uniform(rng);
                let l = p.localtime_at_sample(u).min(1.0);
                Some(([p.value_at(u), 1.0 / p.tau1().sqrt(), l], p.steps()))
            }
            Simulated::Discarded { .. } => None,
        })
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let kept: Vec<_> = runs.iter().flatten().collect();
    let discarded = runs.len() - kept.len();
    let x: Vec<f64> = kept.iter().map(|r| r.0[0]).collect();
    let y: Vec<f64> = kept.iter().map(|r| r.0[1]).collect();
    let z: Vec<f64> = kept.iter().map(|r| r.0[2]).collect();
    let mean_steps = kept.iter().map(|r| r.1 as f64).sum::<f64>() / kept.len().max(1) as f64;

    // Discarding tau1 > horizon keeps exactly 1/sqrt(tau1) >= cut.
    let cut = 1.0 / PSEUDO_HORIZON.sqrt();
    let cseed = seed_for(ctx.master_seed, "thm1-pseudo-bridge", u32::MAX);
    let closed = sample_triplet_closed(b.n_exact, cseed);
    let rows: Vec<&[f64]> = closed.rows().filter(|r| r[1] >= cut).collect();
    let cx: Vec<f64> = rows.iter().map(|r| r[0]).collect();

    let note = format!(
        "{} paths, dt {dt:.1e}, bandwidth {eps:.3e}; {discarded} discarded at tau1 > {PSEUDO_HORIZON:.0}; mean {mean_steps:.0} steps",
        b.n
    );
    let mut out = Outcome::default();
    let chi = chi2_uniformity(&z, UNIFORM_BINS)?
        .renamed(format!("L_(U tau1) uniform (chi2, {UNIFORM_BINS} bins)"))
        .with_seeds(&[seed]);
    let ks = ks_one_sample(&z, &CdfSpec::uniform01())?
        .renamed("L_(U tau1) uniform (KS distance)")
        .as_distance(PATH_DISTANCE)
        .with_seeds(&[seed]);
    out.check(either(chi, ks).with_note(note.clone()));
    out.check(
        ks_two_sample(&x, &cx)?
            .renamed("B_(U tau1)/sqrt(tau1) vs B1/2 (KS distance)")
            .as_distance(PATH_DISTANCE)
            .with_seeds(&[seed, cseed])
            .with_note(format!("closed-form draws restricted to L1 >= {cut}")),
    );
    out.check(
        ks_one_sample(&y, &CdfSpec::half_normal().conditioned(cut, f64::INFINITY)?)?
            .renamed("1/sqrt(tau1) vs half-normal (KS distance)")
            .as_distance(PATH_DISTANCE)
            .with_seeds(&[seed]),
    );
    out.check(rank_check("rank corr(L_(U tau1), B_(U tau1)/sqrt(tau1))".into(), &z, &x, PATH_DISTANCE)?.with_seeds(&[seed]));
    out.check(rank_check("rank corr(L_(U tau1), 1/sqrt(tau1))".into(), &z, &y, PATH_DISTANCE)?.with_seeds(&[seed]));
    out.sample(NamedSample::new("L_at_U", z).with_density(DensitySpec::uniform01()));
    out.sample(NamedSample::new("inv_sqrt_tau1", y).with_density(DensitySpec::half_normal()));
    Ok(out)
}

fn alpha_draws(ctx: &Context, label: &str, n: usize, steps: usize) -> Result<(crate::sampling::SeedSpec, Vec<f64>)> {
    let seed = seed_for(ctx.master_seed, label, steps as u32);
    let a: Vec<Result<f64>> = par_paths(n, seed, |rng| {
        let h = simulate_hitting_path_exact(steps, rng)?;
        let u = uniform(rng);
        Ok(h.sample_exact_at(u, rng) / h.t1().sqrt())
    });
    Ok((seed, a.into_iter().collect::<Result<Vec<_>>>()?))
}

pub(super) fn alpha_centering(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let (seed, a) = alpha_draws(ctx, "alpha-centering", b.n, b.steps)?;
    let mut out = Outcome::default();
    out.check(
        mean_ci(&a, 4.0)?
            .against("E[B_(U T1)/sqrt(T1)] = 0", 0.0)
            .with_seeds(&[seed])
            .with_note(format!("{} reversal paths of {} steps, value at U T1 drawn inside its cell", b.n, b.steps)),
    );
    Ok(out)
}

pub(super) fn alpha_law(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let (seed, a) = alpha_draws(ctx, "alpha-law", b.n, b.steps)?;
    let cseed = seed_for(ctx.master_seed, "alpha-law", u32::MAX);
    let closed = sample_alpha_closed(b.n_exact, cseed);
    let mut out = Outcome::default();
    out.check(
        ks_two_sample(&a, closed.values())?
            .renamed("path alpha vs Lambda L1 - |B1|/2")
            .with_seeds(&[seed, cseed])
            .with_note(format!("{} reversal paths of {} steps", b.n, b.steps)),
    );
    out.sample(NamedSample::new("path_alpha", a));
    Ok(out)
}

pub(super) fn jeulin(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let seed = seed_for(ctx.master_seed, "jeulin-decomposition", b.steps as u32);
    let steps = b.steps;
    let mid = steps / 2;
    let rows: Vec<Result<(f64, f64)>> = par_paths(b.n, seed, |rng| {
        let h = simulate_hitting_path_exact(steps, rng)?;
        let beta = jeulin_residual(&h, steps)?;
        let half = beta.dt() * mid as f64;
        Ok((beta.values()[mid] / half.sqrt(), h.t1()))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let z: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let t1: Vec<f64> = rows.iter().map(|r| r.1).collect();

    let mut out = Outcome::default();
    out.check(
        ks_one_sample(&z, &CdfSpec::std_normal())?
            .renamed("beta_(T1/2)/sqrt(T1/2) standard normal (KS distance)")
            .as_distance(PATH_DISTANCE)
            .with_seeds(&[seed])
            .with_note(format!("{} reversal paths on {steps} steps", b.n)),
    );
    out.check(
        rank_check("rank corr(beta_(T1/2)/sqrt(T1/2), T1)".into(), &z, &t1, 4.0 / (b.n as f64).sqrt())?
            .with_seeds(&[seed]),
    );
    // Terciles of T1 = 1/N^2: |N| above or below its 1/3 and 2/3 quantiles.
    let mut sorted = t1.clone();
    sorted.sort_by(f64::total_cmp);
    let q = [f64::NEG_INFINITY, sorted[sorted.len() / 3], sorted[2 * sorted.len() / 3], f64::INFINITY];
    for k in 0..3 {
        let sel: Vec<f64> = z
            .iter()
            .zip(&t1)
            .filter(|(_, &t)| t >= q[k] && t < q[k + 1])
            .map(|(&v, _)| v * v)
            .collect();
        let m = mean_ci(&sel, 4.0)?;
        out.check(
            TestReport::new(
                format!("Var(beta_(T1/2))/(T1/2) = 1, T1 tercile {}", k + 1),
                (m.mean - 1.0).abs(),
                0.1,
                Rule::StatisticBelow { flag_factor: None },
            )
            .with_n(&[sel.len()])
            .with_seeds(&[seed])
            .with_note(format!("ratio {:.4} (se {:.4})", m.mean, m.se)),
        );
    }
    out.sample(NamedSample::new("beta_mid", z).with_density(DensitySpec::std_normal()));
    Ok(out)
}

pub(super) fn williams(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let dt = WILLIAMS_HORIZON / b.steps as f64;
    let seed = seed_for(ctx.master_seed, "williams-reversal", b.steps as u32);
    let sides = par_paths(b.n, seed, |rng| reversal_pair(WILLIAMS_HORIZON, dt, rng));
    let sides = sides.into_iter().collect::<Result<Vec<_>>>()?;
    let hit: Vec<(f64, f64)> = sides.iter().filter_map(|s| s.hitting).collect();
    let last: Vec<(f64, f64)> = sides.iter().filter_map(|s| s.last_passage).collect();
    let (t1, bmid): (Vec<f64>, Vec<f64>) = hit.iter().copied().unzip();
    let (gamma, rmid): (Vec<f64>, Vec<f64>) = last.iter().copied().unzip();

    let mut out = Outcome::default();
    let note = format!("{} pairs, dt {dt:.2e}, horizon {WILLIAMS_HORIZON}", b.n);
    out.check(
        ks_two_sample(&t1, &gamma)?
            .renamed("T1 vs gamma_1 on the horizon (KS distance)")
            .as_distance(PATH_DISTANCE)
            .with_seeds(&[seed])
            .with_note(note.clone()),
    );
    out.check(
        ks_two_sample(&bmid, &rmid)?
            .renamed("1 - B_(T1/2) vs R_(gamma_1/2) (KS distance)")
            .as_distance(PATH_DISTANCE)
            .with_seeds(&[seed])
            .with_note(note),
    );
    out.check(
        ks_one_sample(&t1, &CdfSpec::t1_truncated(WILLIAMS_HORIZON))?
            .renamed("walk T1 vs law of 1/N^2 given T1 <= horizon (KS distance)")
            .as_distance(PATH_DISTANCE)
            .with_seeds(&[seed]),
    );
    let beyond = 1.0 - cdf_t1(WILLIAMS_HORIZON);
    for (name, kept) in [("walk", hit.len()), ("Bessel", last.len())] {
        let frac = 1.0 - kept as f64 / b.n as f64;
        out.check(
            TestReport::new(
                format!("{name} fraction beyond the horizon = P(T1 > {WILLIAMS_HORIZON})"),
                (frac - beyond).abs(),
                0.02,
                Rule::StatisticBelow { flag_factor: Some(FLAG_FACTOR) },
            )
            .with_n(&[b.n])
            .with_seeds(&[seed])
            .with_note(format!("observed {frac:.4}, expected {beyond:.4}")),
        );
    }
    out.sample(NamedSample::new("walk_T1", t1));
    out.sample(NamedSample::new("bessel_gamma", gamma));
    Ok(out)
}
