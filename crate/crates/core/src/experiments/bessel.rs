//! Bessel-3 experiments, from exact two-time draws and 3-D norm paths.

use super::common::{par_paths, rank_corr_match, seed_for, NamedSample};
use super::laws::{bin_report, HALF_BIN};
use super::{Budget, Context, Outcome};
use crate::path::{future_infimum, refined_future_infimum, simulate_bes3_with};
use crate::sampling::{sample_bes3_pair, sample_bessel_triplet, sample_r1, sample_ru_closed, uniform};
use crate::special::{cdf_from_density, cond_exp_ru, cond_exp_u_over_ru, DensitySpec};
use crate::stats::{
    binned_conditional_mean, chi2_uniformity, ks_one_sample, ks_two_sample, mean_ci, rank_independence,
};
use crate::Result;

pub(crate) const THM4_BINS: usize = 50;

/// Steps of the cor4 Bessel-3 paths.
pub(crate) const COR4_STEPS: usize = 256;

const COND_BIN: f64 = 0.1;

pub(super) fn thm4(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let seed = seed_for(ctx.master_seed, "thm4-bessel", b.steps as u32);
    let steps = b.steps;
    let rows: Vec<Result<[f64; 4]>> = par_paths(b.n, seed, |rng| {
        let p = simulate_bes3_with(steps, 1.0, rng)?;
        let u = uniform(rng);
        let grid = p.grid();
        let j = refined_future_infimum(grid, u, rng)?.max(0.0);
        let j_grid = future_infimum(grid, u)?;
        Ok([j / grid.terminal(), j_grid / grid.terminal(), grid.value_at(u), grid.terminal()])
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<f64>>();
    let (ratio, ratio_grid, r_u, r_1) = (col(0), col(1), col(2), col(3));

    let mut out = Outcome::default();
    let grid_p = chi2_uniformity(&ratio_grid, THM4_BINS)?.p_value;
    out.check(
        chi2_uniformity(&ratio, THM4_BINS)?
            .renamed(format!("J_U/R(1) uniform (chi2, {THM4_BINS} bins)"))
            .with_seeds(&[seed])
            .with_note(format!(
                "{} paths of {steps} steps; J_U from per-cell bridge minima",
                b.n
            ))
            .with_note(format!("grid-minimum J_U alone gives p = {:.3e}", grid_p.unwrap_or(f64::NAN))),
    );
    out.check(
        rank_independence(&ratio, &r_1)?
            .renamed("rank independence(J_U/R(1), R(1))")
            .with_seeds(&[seed]),
    );
    let cseed = seed_for(ctx.master_seed, "thm4-bessel", u32::MAX);
    let t = sample_bessel_triplet(b.n_exact, cseed);
    let (c_ru, c_ratio) = (t.column(0), t.column(2));
    let se = (1.0 / ratio.len() as f64 + 1.0 / c_ratio.len() as f64).sqrt();
    out.check(
        rank_corr_match(
            "rank corr(J_U/R(1), R(U)) vs weighted closed form".into(),
            (&ratio, &r_u),
            (&c_ratio, &c_ru),
            4.0 * se,
            None,
        )?
        .with_seeds(&[seed, cseed]),
    );
    out.check(
        ks_two_sample(&r_u, &c_ru)?
            .renamed("path R(U) vs |B1|/2 + Lambda L1 under the L1^2-weighted law")
            .with_seeds(&[seed, cseed]),
    );
    out.sample(NamedSample::new("J_U_over_R1", ratio).with_density(DensitySpec::uniform01()));
    Ok(out)
}

/// Conditional law of `R(U)` given `R(1)` in `[r, r + 0.1)` against that of
/// `m(U)` given `m(1)` in the same bin.
pub(crate) fn conditional_bins() -> [f64; 3] {
    [0.8, 1.2, 1.6]
}

fn select(x: &[f64], y: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    x.iter()
        .zip(y)
        .filter(|(&c, _)| c >= lo && c < hi)
        .map(|(_, &v)| v)
        .collect()
}

pub(super) fn cor4(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let mut out = Outcome::default();
    let s1 = seed_for(ctx.master_seed, "cor4", 0);
    let s2 = seed_for(ctx.master_seed, "cor4", 1);
    let r1 = sample_r1(b.n_exact, s1).into_values();
    let ru = sample_ru_closed(b.n_exact, s2).into_values();
    out.check(
        ks_one_sample(&r1, &cdf_from_density(&DensitySpec::r1())?)?
            .renamed("exact R(1) vs Maxwell density")
            .with_seeds(&[s1]),
    );
    out.check(
        ks_one_sample(&ru, &cdf_from_density(&DensitySpec::ru())?)?
            .renamed("exact sqrt(U) R(1) vs density of R(U)")
            .with_seeds(&[s2]),
    );

    let n_paths = (b.n_exact / 10).max(10);
    let ps = seed_for(ctx.master_seed, "cor4", 2);
    let rows: Vec<Result<[f64; 2]>> = par_paths(n_paths, ps, |rng| {
        let p = simulate_bes3_with(COR4_STEPS, 1.0, rng)?;
        let u = uniform(rng);
        Ok([p.grid().terminal(), p.sample_at(u, rng)])
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let path_r1: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let path_ru: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let note = format!("{n_paths} 3-D norm paths of {COR4_STEPS} steps, R(U) drawn exactly inside its cell");
    out.check(
        ks_two_sample(&path_r1, &r1)?
            .renamed("path R(1) vs exact R(1)")
            .with_seeds(&[ps, s1])
            .with_note(note.clone()),
    );
    out.check(
        ks_two_sample(&path_ru, &ru)?
            .renamed("path R(U) vs exact sqrt(U) R(1)")
            .with_seeds(&[ps, s2])
            .with_note(note),
    );

    let ts = seed_for(ctx.master_seed, "cor4", 3);
    let triples = sample_bes3_pair(b.n_exact, ts);
    let (e_ru, e_r1) = (triples.column(1), triples.column(2));
    let batch = ctx.bridges(b.n, b.steps)?;
    for r in conditional_bins() {
        let hi = r + COND_BIN;
        let bes = select(&e_r1, &e_ru, r, hi);
        let mea = select(&batch.m_1, &batch.m_u, r, hi);
        out.check(
            ks_two_sample(&bes, &mea)?
                .renamed(format!("R(U) given R(1) in [{r}, {hi:.1}) vs m(U) given m(1) in the same bin"))
                .with_seeds(&[ts, batch.seed])
                .with_note(format!("meanders from {} bridges of {} steps", batch.n(), batch.steps)),
        );
    }
    out.sample(NamedSample::new("exact_R1", r1).with_density(DensitySpec::r1()));
    out.sample(NamedSample::new("path_RU", path_ru).with_density(DensitySpec::ru()));
    Ok(out)
}

struct Draws {
    seed: crate::sampling::SeedSpec,
    u: Vec<f64>,
    ru: Vec<f64>,
    r1: Vec<f64>,
}

fn draws(ctx: &Context, label: &str, n: usize) -> Draws {
    let seed = seed_for(ctx.master_seed, label, 0);
    let t = sample_bes3_pair(n, seed);
    Draws {
        seed,
        u: t.column(0),
        ru: t.column(1),
        r1: t.column(2),
    }
}

fn edges(r: f64) -> [f64; 2] {
    [r - HALF_BIN, r + HALF_BIN]
}

pub(super) fn lem1(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let d = draws(ctx, "lem1-bessel-cond", b.n);
    let mut out = Outcome::default();
    for &r in &[0.5, 1.0, 2.0] {
        let bin = &binned_conditional_mean(&d.r1, &d.ru, &edges(r))?[0];
        out.check(
            bin_report(format!("E[R_U | R_1 = {r}] = (r + H(r))/2"), bin, cond_exp_ru(r)?).with_seeds(&[d.seed]),
        );
    }
    // Integrated over R_1: E[R_U - (R_1 + H(R_1))/2] = 0.
    let resid: Vec<f64> = d
        .ru
        .iter()
        .zip(&d.r1)
        .map(|(&a, &r)| Ok(a - cond_exp_ru(r)?))
        .collect::<Result<_>>()?;
    out.check(
        mean_ci(&resid, 4.0)?
            .against("E[R_U - (R_1 + H(R_1))/2] = 0", 0.0)
            .with_seeds(&[d.seed]),
    );
    Ok(out)
}

pub(super) fn lem2(ctx: &Context, b: &Budget) -> Result<Outcome> {
    let d = draws(ctx, "lem2-H", b.n);
    let mut out = Outcome::default();
    let target = (2.0 / std::f64::consts::PI).sqrt();
    let a: Vec<f64> = d.ru.iter().zip(&d.r1).map(|(&x, &r)| x / (r * r)).collect();
    let c: Vec<f64> = d
        .u
        .iter()
        .zip(d.ru.iter().zip(&d.r1))
        .map(|(&u, (&x, &r))| u / (x * r * r))
        .collect();
    let heavy = "the summand has infinite variance (tail index 3/2); the SE is a plug-in estimate";
    out.check(
        mean_ci(&a, 4.0)?
            .against("E[R_U/R_1^2] = sqrt(2/pi)", target)
            .with_seeds(&[d.seed])
            .with_note(heavy),
    );
    out.check(
        mean_ci(&c, 4.0)?
            .against("E[U/(R_U R_1^2)] = sqrt(2/pi)", target)
            .with_seeds(&[d.seed])
            .with_note(heavy),
    );
    let ratio: Vec<f64> = d.u.iter().zip(&d.ru).map(|(&u, &x)| u / x).collect();
    for &r in &[0.5, 1.0, 2.0] {
        let bin = &binned_conditional_mean(&d.r1, &ratio, &edges(r))?[0];
        out.check(
            bin_report(format!("E[U/R_U | R_1 = {r}] = H({r})"), bin, cond_exp_u_over_ru(r)?)
                .with_seeds(&[d.seed]),
        );
    }
    Ok(out)
}
