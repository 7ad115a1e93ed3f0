use blab::path::*;
use blab::sampling::{uniform, SeedSpec};
use blab::special::{cdf_from_density, CdfSpec, DensitySpec};
use blab::stats::{ks_one_sample, mean_and_se};
use statrs::distribution::{ContinuousCDF, Normal};

fn rng(stream: u64) -> rand_chacha::ChaCha8Rng {
    SeedSpec::new(77, stream).rng()
}

fn phi(x: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().cdf(x)
}

#[test]
fn bm_terminal_variance() {
    let mut r = rng(1);
    let n = 100_000;
    let sq: Vec<f64> = (0..n)
        .map(|_| simulate_bm_with(16, 1.0, &mut r).unwrap().terminal().powi(2))
        .collect();
    let (m, se) = mean_and_se(&sq).unwrap();
    assert!((m - 1.0).abs() < 4.0 * se, "{m}");
    let p = simulate_bm(1, 2.0, SeedSpec::new(77, 2)).unwrap();
    assert_eq!(p.values().len(), 2);
    assert_eq!(p.values()[0], 0.0);
    assert!(simulate_bm(0, 1.0, SeedSpec::new(77, 2)).is_err());
}

#[test]
fn bridge_is_pinned_with_quarter_variance_at_half() {
    let mut r = rng(3);
    let n = 100_000;
    let mid: Vec<f64> = (0..n)
        .map(|_| {
            let b = simulate_bridge_with(64, &mut r).unwrap();
            assert_eq!(b.values()[0], 0.0);
            assert_eq!(b.terminal(), 0.0);
            b.value_at(0.5).powi(2)
        })
        .collect();
    let (m, se) = mean_and_se(&mid).unwrap();
    assert!((m - 0.25).abs() < 4.0 * se, "{m}");
    let long = simulate_bm(10, 2.0, SeedSpec::new(77, 4)).unwrap();
    assert!(bridge_from_bm(&long).is_err());
}

#[test]
fn bridge_at_uniform_time_matches_its_density() {
    let mut r = rng(5);
    let x: Vec<f64> = (0..20_000)
        .map(|_| {
            let b = simulate_bridge_with(4096, &mut r).unwrap();
            let u = uniform(&mut r);
            b.value_at(u)
        })
        .collect();
    let cdf = cdf_from_density(&DensitySpec::bu()).unwrap();
    assert!(ks_one_sample(&x, &cdf).unwrap().passed());
}

#[test]
fn bm_local_time_mean() {
    let steps = 1 << 14;
    let dt = 1.0 / steps as f64;
    let target = (2.0 / std::f64::consts::PI).sqrt();
    // Downcrossings lose up to one crossing at the ends (about eps), and
    // the grid misses band exits by about 0.58 sqrt(dt) at each side.
    for (stream, method, eps, grid_bias) in [
        (6, LocalTimeMethod::Occupation, default_bandwidth(dt), 0.0),
        (7, LocalTimeMethod::Downcrossing, 0.1, 1.2 * dt.sqrt() / 0.1 * target),
    ] {
        let mut r = rng(stream);
        let l: Vec<f64> = (0..10_000)
            .map(|_| {
                let p = simulate_bm_with(steps, 1.0, &mut r).unwrap();
                terminal_local_time(&p, 0.0, method, eps).unwrap()
            })
            .collect();
        let (m, se) = mean_and_se(&l).unwrap();
        assert!((m - target).abs() < 4.0 * se + eps + grid_bias, "{method:?}: {m}");
    }
}

#[test]
fn local_time_vanishes_away_from_the_level() {
    let values: Vec<f64> = (0..=100).map(|k| 1.0 + (k as f64 * 0.1).sin().abs()).collect();
    let p = PathGrid::new(0.01, values).unwrap();
    for method in [LocalTimeMethod::Occupation, LocalTimeMethod::Downcrossing] {
        let lt = local_time_zero(&p, method, 0.05).unwrap();
        assert!(lt.values().iter().all(|&v| v == 0.0));
    }
    assert!(PathGrid::new(0.01, vec![0.0, f64::NAN]).is_err());
    assert!(PathGrid::new(0.0, vec![0.0, 1.0]).is_err());
}

#[test]
fn meander_is_nonnegative_and_grids_must_match() {
    let mut r = rng(8);
    let b = simulate_bridge_with(1024, &mut r).unwrap();
    let lt = local_time_zero(&b, LocalTimeMethod::Occupation, default_bandwidth(b.dt())).unwrap();
    let m = meander_from_bridge(&b, &lt).unwrap();
    assert_eq!(m.path().values()[0], 0.0);
    assert!(m.path().values().iter().all(|&v| v >= 0.0));
    assert!(m.future_inf(0.3) <= m.value_at(0.3));
    let other = simulate_bridge_with(512, &mut r).unwrap();
    assert!(meander_from_bridge(&other, &lt).is_err());
}

#[test]
fn bes3_marginal_and_inverse_moment() {
    let mut r = rng(9);
    let r1: Vec<f64> = (0..100_000)
        .map(|_| {
            let p = simulate_bes3_with(4, 1.0, &mut r).unwrap();
            assert!(p.grid().values().iter().all(|&v| v >= 0.0));
            p.grid().terminal()
        })
        .collect();
    let cdf = cdf_from_density(&DensitySpec::r1()).unwrap();
    assert!(ks_one_sample(&r1, &cdf).unwrap().passed());

    // E[1/R_1] by trapezoid on the density written out here
    let c = (2.0 / std::f64::consts::PI).sqrt();
    let h = 1e-4;
    let oracle: f64 = (1..120_000).map(|k| {
        let y = k as f64 * h;
        c * y * (-0.5 * y * y).exp() * h
    }).sum();
    let inv: Vec<f64> = r1.iter().map(|v| 1.0 / v).collect();
    let (m, se) = mean_and_se(&inv).unwrap();
    assert!((m - oracle).abs() < 4.0 * se, "{m} vs {oracle}");
}

#[test]
fn future_infimum_properties() {
    let mut r = rng(10);
    let p = simulate_bm_with(256, 1.0, &mut r).unwrap();
    assert_eq!(future_infimum(&p, 1.0).unwrap(), p.terminal());
    let mut last = f64::NEG_INFINITY;
    for k in 0..=20 {
        let u = k as f64 / 20.0;
        let inf = future_infimum(&p, u).unwrap();
        assert!(inf >= last);
        assert!(inf <= p.value_at(u));
        assert!(refined_future_infimum(&p, u, &mut r).unwrap() <= inf);
        last = inf;
    }
    assert!(future_infimum(&p, 1.5).is_err());
    assert!(future_infimum(&p, -0.1).is_err());
}

#[test]
fn walk_hits_one_and_discards_at_the_expected_rate() {
    let mut r = rng(11);
    let n = 10_000;
    let mut discarded = Vec::with_capacity(n);
    for _ in 0..n {
        match simulate_hitting_path_walk(1e-3, 4000, &mut r).unwrap() {
            Simulated::Done(h) => {
                assert_eq!(h.path().terminal(), 1.0);
                assert!(h.t1() <= 4.0);
                discarded.push(0.0);
            }
            Simulated::Discarded { steps } => {
                assert_eq!(steps, 4000);
                discarded.push(1.0);
            }
        }
    }
    let (m, se) = mean_and_se(&discarded).unwrap();
    let expected = 2.0 * phi(0.5) - 1.0;
    // late crossings of the discrete walk add a few thousandths
    assert!((m - expected).abs() < 4.0 * se + 0.01, "{m}");
    assert!(simulate_hitting_path_walk(0.0, 10, &mut r).is_err());
}

#[test]
fn exact_hitting_paths_and_alpha() {
    let mut r = rng(12);
    let mut t1 = Vec::new();
    for _ in 0..10_000 {
        let h = simulate_hitting_path_exact(64, &mut r).unwrap();
        let v = h.path().values();
        assert_eq!(v[0], 0.0);
        assert_eq!(h.path().terminal(), 1.0);
        assert!(v[..v.len() - 1].iter().all(|&x| x < 1.0));
        assert_eq!(alpha_from_path(&h, 1.0).unwrap(), 1.0 / h.t1().sqrt());
        assert_eq!(alpha_from_path(&h, 0.0).unwrap(), 0.0);
        assert!(alpha_from_path(&h, 1.5).is_err());
        t1.push(h.t1());
    }
    let cdf = CdfSpec::closed("first passage", 0.0, f64::INFINITY, |t| 2.0 * (1.0 - phi(1.0 / t.sqrt())));
    assert!(ks_one_sample(&t1, &cdf).unwrap().passed());
}

#[test]
fn pseudo_bridge_ends_in_the_band() {
    let mut r = rng(13);
    let dt = 1e-3;
    let eps = default_bandwidth(dt);
    let mut done = 0;
    for _ in 0..200 {
        if let Simulated::Done(p) =
            simulate_pseudo_bridge(dt, LocalTimeMethod::Occupation, eps, 2_000_000, &mut r).unwrap()
        {
            done += 1;
            let tau = p.tau1();
            assert!((tau - p.steps() as f64 * dt).abs() < 1e-9);
            assert_eq!(p.path().values()[0], 0.0);
            assert!(p.value_at(1.0).abs() * tau.sqrt() <= eps + 6.0 * dt.sqrt());
            let l = p.localtime_at_sample(1.0);
            assert!(l > 1.0 && l <= 1.0 + dt / eps, "{l}");
        }
    }
    assert!(done > 180);
    let short = simulate_pseudo_bridge(dt, LocalTimeMethod::Occupation, eps, 1, &mut r).unwrap();
    assert!(short.is_discarded());
}

#[test]
fn jeulin_residual_starts_at_zero_and_needs_exact_paths() {
    let mut r = rng(14);
    let h = simulate_hitting_path_exact(512, &mut r).unwrap();
    let beta = jeulin_residual(&h, 512).unwrap();
    assert_eq!(beta.values()[0], 0.0);
    assert!(beta.values().iter().all(|v| v.is_finite()));
    let walk = loop {
        if let Simulated::Done(w) = simulate_hitting_path_walk(1e-3, 100_000, &mut r).unwrap() {
            break w;
        }
    };
    assert!(jeulin_residual(&walk, 512).is_err());
}

#[test]
fn reversal_sides_stay_in_the_horizon() {
    let mut r = rng(15);
    for _ in 0..200 {
        let s = reversal_pair(4.0, 1e-3, &mut r).unwrap();
        if let Some((t, x)) = s.hitting {
            assert!(t <= 4.0 && x >= 0.0);
        }
        if let Some((g, x)) = s.last_passage {
            assert!(g <= 4.0 && x >= 0.0);
        }
    }
}
