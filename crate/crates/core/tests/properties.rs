use blab::path::*;
use blab::sampling::*;
use blab::special::*;
use blab::stats::*;
use proptest::prelude::*;

type Sampler = fn(usize, SeedSpec) -> SampleBatch;

const SAMPLERS: [(Sampler, usize); 12] = [
    (sample_gaussian, 1),
    (sample_joint_b1_l1, 2),
    (sample_alpha_closed, 1),
    (sample_t1, 1),
    (sample_bu_closed, 1),
    (sample_mu_closed, 1),
    (sample_r1, 1),
    (sample_ru_closed, 1),
    (sample_r1_ru_paired, 3),
    (sample_triplet_closed, 3),
    (sample_meander_triplet, 3),
    (sample_bessel_triplet, 3),
];

fn catalogue() -> Vec<DensitySpec> {
    vec![
        DensitySpec::rayleigh(),
        DensitySpec::half_normal(),
        DensitySpec::std_normal(),
        DensitySpec::uniform01(),
        DensitySpec::bu(),
        DensitySpec::mu(),
        DensitySpec::r1(),
        DensitySpec::ru(),
        DensitySpec::t1(),
        DensitySpec::maxwell(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn batches_are_pure_functions_of_n_and_seed(
        which in 0..SAMPLERS.len(), n in 0usize..200, master in any::<u64>(), stream in 0u64..(1 << 32),
    ) {
        let (f, dim) = SAMPLERS[which];
        let s = SeedSpec::new(master, stream);
        let a = f(n, s);
        prop_assert_eq!(a.dim(), dim);
        prop_assert_eq!(a.n(), n);
        prop_assert_eq!(a.values().len(), n * dim);
        prop_assert!(a.values().iter().all(|v| v.is_finite()));
        let again = f(n, s);
        prop_assert_eq!(a.values(), again.values());
    }

    #[test]
    fn joint_draws_have_nonnegative_local_time(n in 1usize..500, master in any::<u64>()) {
        let b = sample_joint_b1_l1(n, SeedSpec::new(master, 0));
        prop_assert!(b.rows().all(|r| r[1] >= 0.0));
    }

    #[test]
    fn densities_vanish_off_support(which in 0usize..10, y in -50.0f64..50.0) {
        let d = &catalogue()[which];
        let (lo, hi) = d.support();
        let p = d.pdf(y);
        prop_assert!(p >= 0.0 && p.is_finite());
        if y < lo || y > hi {
            prop_assert_eq!(p, 0.0);
        }
    }

    #[test]
    fn cdfs_are_monotone(which in 0usize..10, a in -20.0f64..20.0, gap in 0.0f64..10.0) {
        let d = &catalogue()[which];
        let c = if d.name() == "T1" { CdfSpec::t1() } else { cdf_from_density(d).unwrap() };
        let (fa, fb) = (c.cdf(a), c.cdf(a + gap));
        prop_assert!((0.0..=1.0).contains(&fa) && (0.0..=1.0).contains(&fb));
        prop_assert!(fa <= fb + 1e-12);
    }

    #[test]
    fn bu_density_is_even_and_joint_density_symmetric(y in 0.0f64..6.0, l in 0.0f64..6.0) {
        prop_assert_eq!(pdf_bu(y), pdf_bu(-y));
        let a = joint_density_b1_l1(y, l).unwrap();
        let b = joint_density_b1_l1(l, y).unwrap();
        prop_assert!((a - b).abs() <= 1e-14 * a.max(b).max(1e-300));
        prop_assert_eq!(a, joint_density_b1_l1(-y, l).unwrap());
    }

    #[test]
    fn mills_ratio_sits_between_gordon_bounds(l in 1e-3f64..1e3) {
        let h = mills_h(l).unwrap();
        prop_assert!(l / (1.0 + l * l) < h && h < 1.0 / l);
        prop_assert!(mills_h(l * 1.01).unwrap() < h);
    }

    #[test]
    fn gaussian_tails_add_to_the_full_integral(x in -30.0f64..30.0) {
        let total = gauss_tail(x) + gauss_tail(-x);
        prop_assert!((total / (2.0 * std::f64::consts::PI).sqrt() - 1.0).abs() < 1e-13);
        prop_assert!((normal_cdf(x) + normal_sf(x) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn path_invariants(steps in 2usize..400, master in any::<u64>(), u in 0.0f64..=1.0) {
        let mut rng = SeedSpec::new(master, 1).rng();
        let bm = simulate_bm_with(steps, 1.0, &mut rng).unwrap();
        prop_assert_eq!(bm.values()[0], 0.0);
        prop_assert!(bm.values().iter().all(|v| v.is_finite()));
        prop_assert!((bm.t_end() - 1.0).abs() < 1e-12);

        let b = bridge_from_bm(&bm).unwrap();
        prop_assert_eq!(b.terminal(), 0.0);
        for method in [LocalTimeMethod::Occupation, LocalTimeMethod::Downcrossing] {
            let lt = local_time_zero(&b, method, default_bandwidth(b.dt())).unwrap();
            prop_assert_eq!(lt.values()[0], 0.0);
            prop_assert!(lt.values().windows(2).all(|w| w[0] <= w[1]));
        }
        let lt = local_time_zero(&b, LocalTimeMethod::Occupation, default_bandwidth(b.dt())).unwrap();
        let m = meander_from_bridge(&b, &lt).unwrap();
        prop_assert!(m.path().values().iter().all(|&v| v >= 0.0));
        prop_assert!(m.future_inf(u) <= m.value_at(u) + 1e-15);

        let inf = future_infimum(&bm, u).unwrap();
        prop_assert!(inf <= bm.value_at(u));
        prop_assert!(inf <= future_infimum(&bm, (u + 0.1).min(1.0)).unwrap());

        let r = simulate_bes3_with(steps, 1.0, &mut rng).unwrap();
        prop_assert!(r.grid().values().iter().all(|&v| v >= 0.0));
        let h = simulate_hitting_path_exact(steps, &mut rng).unwrap();
        let v = h.path().values();
        prop_assert_eq!(v[steps], 1.0);
        prop_assert!(v[..steps].iter().all(|&x| x < 1.0));
        prop_assert!(h.t1() > 0.0);
    }

    #[test]
    fn verdict_follows_the_recorded_rule(stat in 0.0f64..3.0, thr in 0.01f64..2.0, p in 0.0f64..1.0, flag in prop::option::of(1.0f64..3.0)) {
        let r = TestReport::new("t", stat, thr, Rule::StatisticBelow { flag_factor: flag });
        let expected = if stat < thr {
            Verdict::Pass
        } else if flag.is_some_and(|f| stat < f * thr) {
            Verdict::Flag
        } else {
            Verdict::Fail
        };
        prop_assert_eq!(r.verdict, expected);
        let q = TestReport::new("q", stat, thr.min(0.5), Rule::PValueAbove).with_p_value(p);
        prop_assert_eq!(q.passed(), p > thr.min(0.5));
        let back: TestReport = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
        prop_assert_eq!(back, q);
    }

    #[test]
    fn rank_statistics(x in prop::collection::vec(-5i32..5, 3..200), seed in any::<u64>()) {
        let xs: Vec<f64> = x.iter().map(|&v| f64::from(v)).collect();
        let r = midranks(&xs).unwrap();
        let n = xs.len() as f64;
        prop_assert!((r.iter().sum::<f64>() - n * (n + 1.0) / 2.0).abs() < 1e-9);
        let y = sample_gaussian(xs.len(), SeedSpec::new(seed, 0)).into_values();
        if let Ok(rho) = spearman(&xs, &y) {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&rho));
            prop_assert!((rho - spearman(&y, &xs).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn ks_outputs_are_probabilities(x in prop::collection::vec(-4.0f64..4.0, 10..300)) {
        let d = ks_distance(&x, &CdfSpec::std_normal()).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        let p = ks_p_value(d, x.len() as f64);
        prop_assert!((0.0..=1.0).contains(&p));
        let mut rev = x.clone();
        rev.reverse();
        prop_assert_eq!(ks_two_sample_distance(&x, &rev).unwrap(), 0.0);
    }

    #[test]
    fn compensated_sum_ignores_order(x in prop::collection::vec(-1e6f64..1e6, 1..300)) {
        let mut rev = x.clone();
        rev.reverse();
        let (a, b) = (compensated_sum(x.iter().copied()), compensated_sum(rev));
        let scale: f64 = x.iter().map(|v| v.abs()).sum::<f64>().max(1.0);
        prop_assert!((a - b).abs() <= 1e-15 * scale);
    }
}
