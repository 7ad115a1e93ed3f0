//! Exact (non-path) samplers for the closed-form laws.
//!
//! Every sampler is a pure function of `(n, seed)`: one ChaCha8 stream per
//! batch, consumed sequentially.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{SampleBatch, SeedSpec};

/// Value of `(B_1, L_1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointB1L1 {
    pub b1: f64,
    pub l1: f64,
}

impl JointB1L1 {
    pub fn from_row(row: &[f64]) -> Self {
        JointB1L1 {
            b1: row[0],
            l1: row[1],
        }
    }
}

#[inline]
pub fn uniform<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random::<f64>()
}

#[inline]
pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Exponential(1) by inversion, `-ln(1 - U)` with `U` in `[0, 1)`.
#[inline]
pub fn exponential<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    -(-uniform(rng)).ln_1p()
}

/// Maxwell draw: Euclidean norm of a standard 3-D Gaussian.
#[inline]
pub fn maxwell<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let (x, y, z) = (normal(rng), normal(rng), normal(rng));
    (x * x + y * y + z * z).sqrt()
}

#[inline]
pub fn joint_b1_l1<R: Rng + ?Sized>(rng: &mut R) -> JointB1L1 {
    // |B_1| + L_1 is Maxwell and splits uniformly; the sign of B_1 is a fair coin.
    let s = maxwell(rng);
    let v = 2.0 * uniform(rng) - 1.0;
    JointB1L1 {
        b1: s * v,
        l1: s * (1.0 - v.abs()),
    }
}

/// `1/N²`; redraws the (measure-zero) `N` values that would overflow.
#[inline]
pub fn t1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let z = normal(rng);
        let t = 1.0 / (z * z);
        if t.is_finite() {
            return t;
        }
    }
}

fn collect(n: usize, dim: usize, labels: &[&str], seed: SeedSpec, mut draw: impl FnMut(&mut Vec<f64>)) -> SampleBatch {
    let mut values = Vec::with_capacity(n * dim);
    for _ in 0..n {
        draw(&mut values);
    }
    SampleBatch::new(values, labels, seed).expect("exact samplers produce finite values")
}

pub fn sample_gaussian(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 1, &["N"], seed, |v| v.push(normal(&mut rng)))
}

/// Pairs `(B_1, L_1)` with density `(|x|+l) exp(-(|x|+l)²/2) / sqrt(2 pi)`.
pub fn sample_joint_b1_l1(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 2, &["B1", "L1"], seed, |v| {
        let j = joint_b1_l1(&mut rng);
        v.push(j.b1);
        v.push(j.l1);
    })
}

/// `Λ L_1 - |B_1|/2` with `Λ` uniform on `[0, 1]`.
pub fn sample_alpha_closed(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 1, &["alpha"], seed, |v| {
        let j = joint_b1_l1(&mut rng);
        let lambda = uniform(&mut rng);
        v.push(lambda * j.l1 - 0.5 * j.b1.abs());
    })
}

/// First hitting time of 1 by Brownian motion, as `1/N²`.
pub fn sample_t1(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 1, &["T1"], seed, |v| v.push(t1(&mut rng)))
}

/// `sqrt(2E) V / 2` with `V` uniform on `[-1, 1]`: the law of `b(U)`.
pub fn sample_bu_closed(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 1, &["bU"], seed, |v| {
        let e = exponential(&mut rng);
        let w = 2.0 * uniform(&mut rng) - 1.0;
        v.push((2.0 * e).sqrt() * w * 0.5);
    })
}

/// `sqrt(2E) W` with `W` uniform on `[1/2, 1]`: the law of `m(U)`.
pub fn sample_mu_closed(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 1, &["mU"], seed, |v| {
        let e = exponential(&mut rng);
        let w = 0.5 + 0.5 * uniform(&mut rng);
        v.push((2.0 * e).sqrt() * w);
    })
}

/// Maxwell draws: the law of `R_1`.
pub fn sample_r1(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 1, &["R1"], seed, |v| v.push(maxwell(&mut rng)))
}

/// `sqrt(U) R_1` with fresh `U`: the law of `R_U`.
pub fn sample_ru_closed(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 1, &["RU"], seed, |v| {
        let r = maxwell(&mut rng);
        let u = uniform(&mut rng);
        v.push(u.sqrt() * r);
    })
}

/// Paired `(R_1, sqrt(U) R_1, U)` from one stream; the second coordinate is
/// never larger than the first.
pub fn sample_r1_ru_paired(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 3, &["R1", "RU", "U"], seed, |v| {
        let r = maxwell(&mut rng);
        let u = uniform(&mut rng);
        v.push(r);
        v.push(u.sqrt() * r);
        v.push(u);
    })
}

/// Triples `(B_1/2, L_1, Λ)` with `Λ` uniform and independent of the pair.
pub fn sample_triplet_closed(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 3, &["half_B1", "L1", "Lambda"], seed, |v| {
        let j = joint_b1_l1(&mut rng);
        let lambda = uniform(&mut rng);
        v.push(0.5 * j.b1);
        v.push(j.l1);
        v.push(lambda);
    })
}

/// Exact two-time draws `(U, R_U, R_1)` of a Bessel-3 process from 0.
///
/// `R = |X|` for a 3-D Brownian motion `X`, sampled at the independent
/// uniform time `U` and at time 1 through Gaussian increments.
pub fn sample_bes3_pair(n: usize, seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 3, &["U", "RU", "R1"], seed, |v| {
        let u = uniform(&mut rng);
        let (su, sr) = (u.sqrt(), (1.0 - u).sqrt());
        let mut ru2 = 0.0;
        let mut r12 = 0.0;
        for _ in 0..3 {
            let xu = su * normal(&mut rng);
            let x1 = xu + sr * normal(&mut rng);
            ru2 += xu * xu;
            r12 += x1 * x1;
        }
        v.push(u);
        v.push(ru2.sqrt());
        v.push(r12.sqrt());
    })
}

/// Norm of a standard Gaussian vector in `R^k`.
fn chi<R: Rng + ?Sized>(k: usize, rng: &mut R) -> f64 {
    (0..k).map(|_| normal(rng).powi(2)).sum::<f64>().sqrt()
}

/// `(|B_1|/2 + Λ L_1, L_1, Λ)` under the law of `(B_1, L_1)` reweighted by
/// `L_1^k / E[L_1^k]`.
///
/// With `|B_1| + L_1 = S` and `L_1 = S W`, the weight turns `S` into a
/// chi variable with `3 + k` degrees of freedom and gives `W` the density
/// `(k+1) w^k` on `[0, 1]`.
fn weighted_triplet(n: usize, k: usize, labels: &[&str], seed: SeedSpec) -> SampleBatch {
    let mut rng = seed.rng();
    collect(n, 3, labels, seed, |v| {
        let s = chi(3 + k, &mut rng);
        let w = uniform(&mut rng).powf(1.0 / (k as f64 + 1.0));
        let lambda = uniform(&mut rng);
        let (b, l) = (s * (1.0 - w), s * w);
        v.push(0.5 * b + lambda * l);
        v.push(l);
        v.push(lambda);
    })
}

/// Triples with the joint law of `(m(U), m(1), i_U/m(1))` for the meander.
pub fn sample_meander_triplet(n: usize, seed: SeedSpec) -> SampleBatch {
    weighted_triplet(n, 1, &["mU", "m1", "ratio"], seed)
}

/// Triples with the joint law of `(R(U), R(1), J_U/R(1))` for Bessel-3.
pub fn sample_bessel_triplet(n: usize, seed: SeedSpec) -> SampleBatch {
    weighted_triplet(n, 2, &["RU", "R1", "ratio"], seed)
}
