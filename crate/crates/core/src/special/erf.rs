//! Complementary error function, its scaled form and the Gaussian tail
//! integral, after W. J. Cody's rational Chebyshev approximations (CALERF).

#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

use crate::{Error, Result};

const THRESH: f64 = 0.46875;
const XBIG: f64 = 26.543;
const XHUGE: f64 = 6.71e7;
const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

const A: [f64; 5] = [
    3.161_123_743_870_565_6,
    1.138_641_541_510_501_6e2,
    3.774_852_376_853_020_2e2,
    3.209_377_589_138_469_5e3,
    1.857_777_061_846_031_5e-1,
];
const B: [f64; 4] = [
    2.360_129_095_234_412_1e1,
    2.440_246_379_344_441_7e2,
    1.282_616_526_077_372_3e3,
    2.844_236_833_439_170_6e3,
];
const C: [f64; 9] = [
    5.641_884_969_886_700_9e-1,
    8.883_149_794_388_376,
    6.611_919_063_714_163e1,
    2.986_351_381_974_001_3e2,
    8.819_522_212_417_691e2,
    1.712_047_612_634_070_6e3,
    2.051_078_377_826_071_5e3,
    1.230_339_354_797_997_2e3,
    2.153_115_354_744_038_5e-8,
];
const D: [f64; 8] = [
    1.574_492_611_070_983_5e1,
    1.176_939_508_913_125e2,
    5.371_811_018_620_098_6e2,
    1.621_389_574_566_690_2e3,
    3.290_799_235_733_459_6e3,
    4.362_619_090_143_247e3,
    3.439_367_674_143_721_6e3,
    1.230_339_354_803_749_4e3,
];
const P: [f64; 6] = [
    3.053_266_349_612_323_4e-1,
    3.603_448_999_498_044_4e-1,
    1.257_817_261_112_292_5e-1,
    1.608_378_514_874_227_7e-2,
    6.587_491_615_298_378e-4,
    1.631_538_713_730_209_8e-2,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822_4,
    1.872_952_849_923_460_5,
    5.279_051_029_514_284e-1,
    6.051_834_131_244_132e-2,
    2.335_204_976_268_691_9e-3,
];

/// `erf(x)` for `|x| <= THRESH`.
fn erf_small(x: f64) -> f64 {
    let z = x * x;
    let mut num = A[4] * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + A[i]) * z;
        den = (den + B[i]) * z;
    }
    x * (num + A[3]) / (den + B[3])
}

/// `erfcx(y) = exp(y^2) erfc(y)` for `y > THRESH`.
fn erfcx_large(y: f64) -> f64 {
    if y <= 4.0 {
        let mut num = C[8] * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + C[i]) * y;
            den = (den + D[i]) * y;
        }
        (num + C[7]) / (den + D[7])
    } else if y >= XHUGE {
        FRAC_1_SQRT_PI / y
    } else {
        let z = 1.0 / (y * y);
        let mut num = P[5] * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + P[i]) * z;
            den = (den + Q[i]) * z;
        }
        let r = z * (num + P[4]) / (den + Q[4]);
        (FRAC_1_SQRT_PI - r) / y
    }
}

/// `exp(-y^2)` without the rounding error of forming `y*y` directly.
fn exp_neg_square(y: f64) -> f64 {
    let head = (y * 16.0).trunc() / 16.0;
    let del = (y - head) * (y + head);
    (-head * head).exp() * (-del).exp()
}

fn exp_pos_square(y: f64) -> f64 {
    let head = (y * 16.0).trunc() / 16.0;
    let del = (y - head) * (y + head);
    (head * head).exp() * del.exp()
}

pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESH {
        return 1.0 - erf_small(x);
    }
    let upper = if y >= XBIG {
        0.0
    } else {
        erfcx_large(y) * exp_neg_square(y)
    };
    if x < 0.0 {
        2.0 - upper
    } else {
        upper
    }
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
///
/// Overflows to `+inf` for `x` below roughly `-26.6`.
pub fn erfcx(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESH {
        return (x * x).exp() * (1.0 - erf_small(x));
    }
    let r = erfcx_large(y);
    if x < 0.0 {
        2.0 * exp_pos_square(y) - r
    } else {
        r
    }
}

/// `∫_x^∞ exp(-z²/2) dz`.
///
/// Equals `sqrt(pi/2) erfc(x/sqrt 2)`; for `x <= -38` this is `sqrt(2 pi)`
/// to double precision.
pub fn gauss_tail(x: f64) -> f64 {
    let s = x * std::f64::consts::FRAC_1_SQRT_2;
    if x >= 0.0 {
        (PI / 2.0).sqrt() * erfc(s)
    } else {
        // The lower tail is tiny relative to sqrt(2 pi), so subtracting it
        // loses nothing.
        (2.0 * PI).sqrt() - (PI / 2.0).sqrt() * erfc(-s)
    }
}

/// Upper tail probability of the standard normal, `1 - Phi(x)`.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * erfc(x * std::f64::consts::FRAC_1_SQRT_2)
}

pub fn normal_cdf(x: f64) -> f64 {
    normal_sf(-x)
}

/// Scaled Mills ratio `H(l) = exp(l²/2) ∫_l^∞ exp(-x²/2) dx` for `l >= 0`.
///
/// Evaluated through `erfcx`, so `exp(l²/2)` is never formed.
pub fn mills_h(l: f64) -> Result<f64> {
    if !(l >= 0.0) {
        return Err(Error::Domain {
            name: "H",
            value: l,
            domain: "[0, inf)",
        });
    }
    Ok((PI / 2.0).sqrt() * erfcx(l * std::f64::consts::FRAC_1_SQRT_2))
}
