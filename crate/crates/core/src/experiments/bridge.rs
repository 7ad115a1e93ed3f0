//! Brownian bridge and meander experiments, on one shared batch of bridges.

use super::common::{par_paths, rank_corr_match, seed_for, NamedSample};
use super::{Budget, Context, Outcome};
use crate::path::{
    default_bandwidth, local_time_zero, meander_from_bridge, simulate_bridge_with, terminal_local_time,
    LocalTimeMethod,
};
use crate::sampling::{sample_bu_closed, sample_meander_triplet, sample_mu_closed, uniform, SeedSpec};
use crate::special::quad::kronrod15;
use crate::special::{cdf_from_density, expected_ratio_lambda, pdf_bu_given_lambda, CdfSpec, DensitySpec};
use crate::stats::{
    ks_one_sample, ks_two_sample, mean_ci, rank_independence, spearman, Rule, TestReport, FLAG_FACTOR,
};
use crate::Result;

/// Level of the second local time recorded per bridge.
pub const RATIO_LEVEL: f64 = 0.5;

/// Path-level KS distance threshold for bridge and meander laws.
pub const BRIDGE_KS_DISTANCE: f64 = 0.02;

/// Per-bridge summaries on a grid of `steps` steps.
#[derive(Debug)]
pub struct BridgeBatch {
    pub seed: SeedSpec,
    pub steps: usize,
    pub bandwidth: f64,
    /// Uniform sampling time.
    pub u: Vec<f64>,
    pub b_u: Vec<f64>,
    pub lambda_1: Vec<f64>,
    pub lambda_u: Vec<f64>,
    /// Terminal local time at [`RATIO_LEVEL`].
    pub lambda_y: Vec<f64>,
    /// `m(U) = |b(U)| + λ_U`.
    pub m_u: Vec<f64>,
    /// `m(1)`, equal to `λ_1` in this construction.
    pub m_1: Vec<f64>,
}

impl BridgeBatch {
    pub fn simulate(master_seed: u64, n: usize, steps: usize) -> Result<Self> {
        let seed = seed_for(master_seed, "bridge-paths", steps as u32);
        let eps = default_bandwidth(1.0 / steps as f64);
        let rows: Vec<Result<[f64; 7]>> = par_paths(n, seed, |rng| {
            let b = simulate_bridge_with(steps, rng)?;
            let lt = local_time_zero(&b, LocalTimeMethod::Occupation, eps)?;
            let ly = terminal_local_time(&b, RATIO_LEVEL, LocalTimeMethod::Occupation, eps)?;
            let m = meander_from_bridge(&b, &lt)?;
            let u = uniform(rng);
            Ok([u, b.value_at(u), lt.terminal(), lt.value_at(u), ly, m.value_at(u), m.value_at(1.0)])
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        let col = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<f64>>();
        Ok(BridgeBatch {
            seed,
            steps,
            bandwidth: eps,
            u: col(0),
            b_u: col(1),
            lambda_1: col(2),
            lambda_u: col(3),
            lambda_y: col(4),
            m_u: col(5),
            m_1: col(6),
        })
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    fn note(&self) -> String {
        format!(
            "{} bridges of {} steps, occupation bandwidth {:.3e}",
            self.n(),
            self.steps,
            self.bandwidth
        )
    }

    /// `λ_U / λ_1`, with the (rare) paths that never touched the band mapped to 0.
    pub fn lambda_ratio(&self) -> Vec<f64> {
        self.lambda_u
            .iter()
            .zip(&self.lambda_1)
            .map(|(&a, &b)| if b > 0.0 { (a / b).clamp(0.0, 1.0) } else { 0.0 })
            .collect()
    }
}

fn distance_check(name: &str, x: &[f64], cdf: &CdfSpec, max: f64, batch: &BridgeBatch) -> Result<TestReport> {
    Ok(ks_one_sample(x, cdf)?
        .renamed(name)
        .as_distance(max)
        .with_seeds(&[batch.seed])
        .with_note(batch.note()))
}

pub(super) fn thm2(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let batch = ctx.bridges(b.n, b.steps)?;
    let mut out = Outcome::default();
    let ratio = batch.lambda_ratio();
    out.check(distance_check(
        "lambda_U/lambda_1 uniform (KS distance)",
        &ratio,
        &CdfSpec::uniform01(),
        0.02,
        &batch,
    )?);
    for (name, other) in [("b(U)", &batch.b_u), ("lambda_1", &batch.lambda_1)] {
        let rho = spearman(&ratio, other)?;
        out.check(
            TestReport::new(
                format!("rank corr(lambda_U/lambda_1, {name})"),
                rho.abs(),
                0.02,
                Rule::StatisticBelow { flag_factor: Some(FLAG_FACTOR) },
            )
            .with_n(&[batch.n()])
            .with_seeds(&[batch.seed])
            .with_note(format!("spearman rho {rho:.5}")),
        );
    }
    out.sample(NamedSample::new("lambda_ratio", ratio).with_density(DensitySpec::uniform01()));
    Ok(out)
}

pub(super) fn cor2_rayleigh(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let batch = ctx.bridges(b.n, b.steps)?;
    let mut out = Outcome::default();
    out.check(distance_check(
        "lambda_1 Rayleigh (KS distance)",
        &batch.lambda_1,
        &CdfSpec::rayleigh(),
        BRIDGE_KS_DISTANCE,
        &batch,
    )?);
    let m = mean_ci(&batch.lambda_1, 4.0)?;
    out.check(
        m.against("E[lambda_1] = sqrt(pi/2)", (std::f64::consts::PI / 2.0).sqrt())
            .with_seeds(&[batch.seed]),
    );
    out.sample(NamedSample::new("lambda_1", batch.lambda_1.clone()).with_density(DensitySpec::rayleigh()));
    Ok(out)
}

pub(super) fn cor2_bu(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    let cdf = cdf_from_density(&DensitySpec::bu())?;
    let seed = seed_for(ctx.master_seed, "cor2-bU", 0);
    let exact = sample_bu_closed(b.n_exact, seed);
    out.check(
        ks_one_sample(exact.values(), &cdf)?
            .renamed("exact sqrt(2E) V/2 vs density of b(U)")
            .with_seeds(&[seed]),
    );
    let batch = ctx.bridges(b.n, b.steps)?;
    out.check(distance_check("path b(U) vs density of b(U) (KS distance)", &batch.b_u, &cdf, BRIDGE_KS_DISTANCE, &batch)?);
    out.sample(NamedSample::new("path_bU", batch.b_u.clone()).with_density(DensitySpec::bu()));
    out.sample(NamedSample::new("exact_bU", exact.into_values()).with_density(DensitySpec::bu()));
    Ok(out)
}

/// Law of `b(U)` given `λ_1 ∈ [lo, hi]`: the conditional density mixed over
/// the Rayleigh law of `λ_1` on the bin.
pub(crate) fn bu_given_lambda_bin(lo: f64, hi: f64) -> Result<DensitySpec> {
    let rayleigh = |l: f64| l * (-0.5 * l * l).exp();
    let mass = (-0.5 * lo * lo).exp() - (-0.5 * hi * hi).exp();
    pdf_bu_given_lambda(0.0, lo)?;
    Ok(DensitySpec::new(
        format!("bU|lambda_1 in [{lo},{hi}]"),
        f64::NEG_INFINITY,
        f64::INFINITY,
        move |y| {
            let f = |l: f64| pdf_bu_given_lambda(y, l).unwrap_or(0.0) * rayleigh(l);
            let mid = 0.5 * (lo + hi);
            (kronrod15(&f, lo, mid).0 + kronrod15(&f, mid, hi).0) / mass
        },
    )
    .with_kinks(&[0.0]))
}

pub(super) fn cor2_ratio(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let batch = ctx.bridges(b.n, b.steps)?;
    let mut out = Outcome::default();
    let ratio: Vec<f64> = batch
        .lambda_y
        .iter()
        .zip(&batch.lambda_1)
        .filter(|(_, &l)| l > 0.0)
        .map(|(&y, &l)| y / l)
        .collect();
    let target = expected_ratio_lambda(RATIO_LEVEL);
    out.check(
        mean_ci(&ratio, 4.0)?
            .against(format!("E[lambda_1^y/lambda_1] = exp(-2y^2), y = {RATIO_LEVEL}"), target)
            .with_seeds(&[batch.seed])
            .with_note(batch.note())
            .with_note(format!("{} of {} paths with lambda_1 > 0", ratio.len(), batch.n())),
    );
    for &(lo, hi) in &[(0.9, 1.1), (1.4, 1.6)] {
        let sel: Vec<f64> = batch
            .b_u
            .iter()
            .zip(&batch.lambda_1)
            .filter(|(_, &l)| l >= lo && l < hi)
            .map(|(&y, _)| y)
            .collect();
        let cdf = cdf_from_density(&bu_given_lambda_bin(lo, hi)?)?;
        out.check(
            ks_one_sample(&sel, &cdf)?
                .renamed(format!("b(U) given lambda_1 in [{lo}, {hi})"))
                .with_seeds(&[batch.seed]),
        );
    }
    Ok(out)
}

pub(super) fn thm3(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let batch = ctx.bridges(b.n, b.steps)?;
    let mut out = Outcome::default();
    // i_U / m(1) = λ_U / λ_1 by construction.
    let ratio = batch.lambda_ratio();
    out.check(distance_check("i_U/m(1) uniform (KS distance)", &ratio, &CdfSpec::uniform01(), 0.03, &batch)?);
    out.check(
        rank_independence(&ratio, &batch.m_1)?
            .renamed("rank independence(i_U/m(1), m(1))")
            .with_seeds(&[batch.seed]),
    );
    let seed = seed_for(ctx.master_seed, "thm3-meander", 0);
    let t = sample_meander_triplet(b.n_exact, seed);
    let (r_mu, r_ratio) = (t.column(0), t.column(2));
    out.check(
        rank_corr_match(
            "rank corr(i_U/m(1), m(U)) vs weighted closed form".into(),
            (&ratio, &batch.m_u),
            (&r_ratio, &r_mu),
            0.03,
            Some(FLAG_FACTOR),
        )?
        .with_seeds(&[batch.seed, seed]),
    );
    out.check(
        ks_two_sample(&batch.m_u, &r_mu)?
            .renamed("path m(U) vs |B1|/2 + Lambda L1 under the L1-weighted law (KS distance)")
            .as_distance(BRIDGE_KS_DISTANCE)
            .with_seeds(&[batch.seed, seed]),
    );
    Ok(out)
}

pub(super) fn cor3(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let batch = ctx.bridges(b.n, b.steps)?;
    let mut out = Outcome::default();
    let mu = cdf_from_density(&DensitySpec::mu())?;
    out.check(distance_check("m(1) Rayleigh (KS distance)", &batch.m_1, &CdfSpec::rayleigh(), BRIDGE_KS_DISTANCE, &batch)?);
    out.check(distance_check("m(U) vs density of m(U) (KS distance)", &batch.m_u, &mu, BRIDGE_KS_DISTANCE, &batch)?);
    let seed = seed_for(ctx.master_seed, "cor3", 0);
    let exact = sample_mu_closed(b.n_exact, seed);
    out.check(
        ks_one_sample(exact.values(), &mu)?
            .renamed("exact sqrt(2E) W vs density of m(U)")
            .with_seeds(&[seed]),
    );
    out.sample(NamedSample::new("path_m1", batch.m_1.clone()).with_density(DensitySpec::rayleigh()));
    out.sample(NamedSample::new("path_mU", batch.m_u.clone()).with_density(DensitySpec::mu()));
    Ok(out)
}
