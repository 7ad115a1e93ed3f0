//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite and
//! semi-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One application of the 15-point Kronrod rule; returns (value, error).
pub fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut gauss = fc * WG[3];
    let mut kron = fc * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Below this a segment's error is roundoff and refining it is pointless.
fn roundoff_floor(value: f64) -> f64 {
    50.0 * f64::EPSILON * value.abs()
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_err: 0.0,
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    // Settled segments: error at roundoff level, or no longer splittable.
    let mut settled: Vec<Segment> = Vec::new();
    let mut total = 0.0;
    let mut open_err = 0.0;
    let push = |seg: Segment,
                heap: &mut BinaryHeap<Segment>,
                settled: &mut Vec<Segment>,
                open_err: &mut f64| {
        let unsplittable = {
            let mid = 0.5 * (seg.a + seg.b);
            mid <= seg.a || mid >= seg.b
        };
        if seg.err <= roundoff_floor(seg.value) || unsplittable {
            settled.push(seg);
        } else {
            *open_err += seg.err;
            heap.push(seg);
        }
    };
    let (v, e) = kronrod15(f, a, b);
    if !v.is_finite() {
        return Err(Error::NonFinite("quadrature integrand"));
    }
    total += v;
    push(Segment { a, b, value: v, err: e }, &mut heap, &mut settled, &mut open_err);
    while let Some(worst) = heap.peek().copied() {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if open_err <= tol {
            break;
        }
        if heap.len() + settled.len() >= cfg.max_intervals {
            return Err(Error::Quadrature {
                value: total,
                abs_err: open_err,
            });
        }
        heap.pop();
        open_err -= worst.err;
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = kronrod15(f, worst.a, mid);
        let (v2, e2) = kronrod15(f, mid, worst.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::NonFinite("quadrature integrand"));
        }
        total += v1 + v2 - worst.value;
        push(Segment { a: worst.a, b: mid, value: v1, err: e1 }, &mut heap, &mut settled, &mut open_err);
        push(Segment { a: mid, b: worst.b, value: v2, err: e2 }, &mut heap, &mut settled, &mut open_err);
    }
    // Re-sum to shed the drift of the running total.
    let (value, abs_err) = heap
        .iter()
        .chain(settled.iter())
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.err));
    Ok(QuadResult {
        value,
        abs_err,
        intervals: heap.len() + settled.len(),
    })
}

/// Integrates `f` over `[a, b]`; either endpoint may be infinite.
///
/// Infinite ranges are mapped to `[0, 1)` with `x = a + t/(1-t)`; the
/// Kronrod nodes never touch `t = 1`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    integrate_dyn(&f, a, b, cfg)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if a.is_nan() || b.is_nan() {
        return Err(Error::InvalidArgument("NaN integration bound".into()));
    }
    if a > b {
        let r = integrate_dyn(f, b, a, cfg)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adapt(&f, a, b, cfg),
        (true, false) => adapt(
            &|t: f64| {
                let s = 1.0 - t;
                f(a + t / s) / (s * s)
            },
            0.0,
            1.0,
            cfg,
        ),
        (false, true) => adapt(
            &|t: f64| {
                let s = 1.0 - t;
                f(b - t / s) / (s * s)
            },
            0.0,
            1.0,
            cfg,
        ),
        (false, false) => {
            let lo = integrate_dyn(f, f64::NEG_INFINITY, 0.0, cfg)?;
            let hi = integrate_dyn(f, 0.0, f64::INFINITY, cfg)?;
            Ok(QuadResult {
                value: lo.value + hi.value,
                abs_err: lo.abs_err + hi.abs_err,
                intervals: lo.intervals + hi.intervals,
            })
        }
    }
}

/// Integrates over `[a, b]` split at the given interior points (kinks,
/// peaks); points outside `(a, b)` are ignored.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let mut pts: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut edges = Vec::with_capacity(pts.len() + 2);
    edges.push(a);
    edges.extend(pts);
    edges.push(b);
    let mut out = QuadResult {
        value: 0.0,
        abs_err: 0.0,
        intervals: 0,
    };
    for w in edges.windows(2) {
        let r = integrate_dyn(&f, w[0], w[1], cfg)?;
        out.value += r.value;
        out.abs_err += r.abs_err;
        out.intervals += r.intervals;
    }
    Ok(out)
}
