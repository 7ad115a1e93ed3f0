use std::fmt;
use std::sync::Arc;

use super::erf::normal_cdf;
use super::laws;
use super::quad::{integrate_with_breaks, kronrod15, QuadConfig};
use crate::{Error, Result};

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Mass tolerance every reference density must meet.
pub const MASS_TOL: f64 = 1e-8;

const KNOTS: usize = 1024;

/// An evaluable density with declared support `[lo, hi]` (either end may
/// be infinite) and an explicit normalization constant.
#[derive(Clone)]
pub struct DensitySpec {
    name: String,
    lo: f64,
    hi: f64,
    kinks: Vec<f64>,
    norm: f64,
    eval: Evaluator,
}

impl fmt::Debug for DensitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensitySpec")
            .field("name", &self.name)
            .field("support", &(self.lo, self.hi))
            .field("norm", &self.norm)
            .finish()
    }
}

impl DensitySpec {
    pub fn new<F>(name: impl Into<String>, lo: f64, hi: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        DensitySpec {
            name: name.into(),
            lo,
            hi,
            kinks: Vec::new(),
            norm: 1.0,
            eval: Arc::new(f),
        }
    }

    /// Points where the density is not smooth; quadrature splits there.
    pub fn with_kinks(mut self, kinks: &[f64]) -> Self {
        self.kinks = kinks.to_vec();
        self
    }

    pub fn with_normalization(mut self, c: f64) -> Self {
        self.norm = c;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn normalization(&self) -> f64 {
        self.norm
    }

    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < self.lo || x > self.hi || x.is_nan() {
            0.0
        } else {
            self.norm * (self.eval)(x)
        }
    }

    pub fn integrate_over(&self, a: f64, b: f64) -> Result<f64> {
        let a = a.max(self.lo);
        let b = b.min(self.hi);
        if a >= b {
            return Ok(0.0);
        }
        let cfg = QuadConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_intervals: 8000,
        };
        Ok(integrate_with_breaks(|x| self.pdf(x), a, b, &self.kinks, &cfg)?.value)
    }

    pub fn mass(&self) -> Result<f64> {
        self.integrate_over(self.lo, self.hi)
    }

    pub fn check_normalized(&self) -> Result<f64> {
        let m = self.mass()?;
        if (m - 1.0).abs() > MASS_TOL {
            return Err(Error::NotNormalized {
                name: self.name.clone(),
                mass: m,
            });
        }
        Ok(m)
    }

    pub fn rayleigh() -> Self {
        DensitySpec::new("rayleigh", 0.0, f64::INFINITY, |l| l * (-0.5 * l * l).exp())
    }

    pub fn half_normal() -> Self {
        DensitySpec::new("half_normal", 0.0, f64::INFINITY, laws::pdf_half_normal)
    }

    pub fn std_normal() -> Self {
        DensitySpec::new("std_normal", f64::NEG_INFINITY, f64::INFINITY, laws::pdf_std_normal)
    }

    pub fn uniform01() -> Self {
        DensitySpec::new("uniform01", 0.0, 1.0, |_| 1.0)
    }

    pub fn bu() -> Self {
        DensitySpec::new("bU", f64::NEG_INFINITY, f64::INFINITY, laws::pdf_bu).with_kinks(&[0.0])
    }

    pub fn bu_given_lambda(l: f64) -> Result<Self> {
        laws::pdf_bu_given_lambda(0.0, l)?;
        Ok(DensitySpec::new(
            format!("bU_given_lambda({l})"),
            f64::NEG_INFINITY,
            f64::INFINITY,
            move |y| laws::pdf_bu_given_lambda(y, l).unwrap_or(0.0),
        )
        .with_kinks(&[0.0]))
    }

    pub fn mu() -> Self {
        DensitySpec::new("mU", 0.0, f64::INFINITY, laws::pdf_mu)
    }

    pub fn r1() -> Self {
        DensitySpec::new("R1", 0.0, f64::INFINITY, laws::pdf_r1)
    }

    pub fn ru() -> Self {
        DensitySpec::new("RU", 0.0, f64::INFINITY, laws::pdf_ru)
    }

    /// Heavy-tailed; pair it with [`CdfSpec::t1`] rather than a tabulated CDF.
    pub fn t1() -> Self {
        DensitySpec::new("T1", 0.0, f64::INFINITY, laws::pdf_t1)
    }

    /// Maxwell law of `|B_1| + L_1`, same as `R_1`.
    pub fn maxwell() -> Self {
        DensitySpec::new("maxwell", 0.0, f64::INFINITY, laws::pdf_r1)
    }
}

#[derive(Clone)]
enum CdfKind {
    Closed(Evaluator),
    Tabulated {
        density: DensitySpec,
        knots: Vec<f64>,
        cum: Vec<f64>,
        lower_tail: f64,
    },
}

/// A CDF either in closed form or obtained from a [`DensitySpec`] by
/// cumulative quadrature over a knot table.
#[derive(Clone)]
pub struct CdfSpec {
    name: String,
    lo: f64,
    hi: f64,
    kind: CdfKind,
}

impl fmt::Debug for CdfSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CdfSpec")
            .field("name", &self.name)
            .field("support", &(self.lo, self.hi))
            .field("tabulated", &matches!(self.kind, CdfKind::Tabulated { .. }))
            .finish()
    }
}

impl CdfSpec {
    pub fn closed<F>(name: impl Into<String>, lo: f64, hi: f64, f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        CdfSpec {
            name: name.into(),
            lo,
            hi,
            kind: CdfKind::Closed(Arc::new(f)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn derived_from(&self) -> Option<&DensitySpec> {
        match &self.kind {
            CdfKind::Tabulated { density, .. } => Some(density),
            CdfKind::Closed(_) => None,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return 1.0;
        }
        match &self.kind {
            CdfKind::Closed(f) => f(x).clamp(0.0, 1.0),
            CdfKind::Tabulated {
                density,
                knots,
                cum,
                lower_tail,
            } => {
                if x < knots[0] {
                    // Only reachable in a negligible tail.
                    return lower_tail.min(1.0);
                }
                let i = match knots.binary_search_by(|k| k.total_cmp(&x)) {
                    Ok(i) => return cum[i].clamp(0.0, 1.0),
                    Err(i) => i - 1,
                };
                if i + 1 >= knots.len() {
                    return cum[knots.len() - 1].clamp(0.0, 1.0);
                }
                let (part, _) = kronrod15(&|t| density.pdf(t), knots[i], x);
                (cum[i] + part).clamp(0.0, 1.0)
            }
        }
    }

    /// The law conditioned on `[a, b]`.
    pub fn conditioned(&self, a: f64, b: f64) -> Result<CdfSpec> {
        let (fa, fb) = (self.cdf(a), self.cdf(b));
        if !(fb > fa) {
            return Err(Error::InvalidArgument(format!(
                "`{}` puts no mass on [{a}, {b}]",
                self.name
            )));
        }
        let base = self.clone();
        Ok(CdfSpec::closed(
            format!("{}|[{a},{b}]", self.name),
            a.max(self.lo),
            b.min(self.hi),
            move |x| (base.cdf(x) - fa) / (fb - fa),
        ))
    }

    /// Smallest `x` with `cdf(x) >= p`, by bisection.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("quantile level {p}")));
        }
        let mut lo = if self.lo.is_finite() { self.lo } else { -1.0 };
        while self.cdf(lo) > p {
            lo = 2.0 * lo - 1.0;
        }
        let mut hi = if self.hi.is_finite() { self.hi } else { 1.0 };
        while self.cdf(hi) < p {
            hi = 2.0 * hi + 1.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi)
    }

    pub fn rayleigh() -> Self {
        CdfSpec::closed("rayleigh", 0.0, f64::INFINITY, |l| -(-0.5 * l * l).exp_m1())
    }

    pub fn half_normal() -> Self {
        CdfSpec::closed("half_normal", 0.0, f64::INFINITY, |x| 2.0 * normal_cdf(x) - 1.0)
    }

    pub fn std_normal() -> Self {
        CdfSpec::closed("std_normal", f64::NEG_INFINITY, f64::INFINITY, normal_cdf)
    }

    pub fn uniform01() -> Self {
        CdfSpec::closed("uniform01", 0.0, 1.0, |u| u)
    }

    pub fn t1() -> Self {
        CdfSpec::closed("T1", 0.0, f64::INFINITY, laws::cdf_t1)
    }

    /// `T_1` conditioned on `T_1 <= cap`.
    pub fn t1_truncated(cap: f64) -> Self {
        let z = laws::cdf_t1(cap);
        CdfSpec::closed(format!("T1|T1<={cap}"), 0.0, cap, move |t| laws::cdf_t1(t) / z)
    }
}

/// `y,pdf,cdf` rows on `grid`, for plotting.
pub fn density_table_csv(d: &DensitySpec, grid: &[f64]) -> Result<String> {
    let cdf = cdf_from_density(d)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(["y", "pdf", "cdf"]).map_err(err)?;
    for &y in grid {
        w.write_record([y.to_string(), d.pdf(y).to_string(), cdf.cdf(y).to_string()])
            .map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// Finite point beyond which the density carries less than `1e-16` mass.
fn tail_cut(d: &DensitySpec, start: f64, dir: f64) -> Result<(f64, f64)> {
    let mut width = 1.0;
    for _ in 0..60 {
        let b = start + dir * width;
        let tail = if dir > 0.0 {
            d.integrate_over(b, f64::INFINITY)?
        } else {
            d.integrate_over(f64::NEG_INFINITY, b)?
        };
        if tail < 1e-16 {
            return Ok((b, tail));
        }
        width *= 2.0;
    }
    Err(Error::InvalidArgument(format!(
        "density `{}` is too heavy-tailed to tabulate; use a closed-form CDF",
        d.name
    )))
}

/// Builds a monotone CDF by cumulative adaptive quadrature on a knot table.
///
/// Rejects densities whose mass is not 1 within [`MASS_TOL`].
pub fn cdf_from_density(d: &DensitySpec) -> Result<CdfSpec> {
    d.check_normalized()?;
    let (lo, lower_tail) = if d.lo.is_finite() {
        (d.lo, 0.0)
    } else {
        let anchor = d.hi.min(0.0);
        tail_cut(d, if anchor.is_finite() { anchor } else { 0.0 }, -1.0)?
    };
    let (hi, _) = if d.hi.is_finite() {
        (d.hi, 0.0)
    } else {
        tail_cut(d, lo.max(0.0), 1.0)?
    };
    let mut knots: Vec<f64> = (0..=KNOTS)
        .map(|i| lo + (hi - lo) * i as f64 / KNOTS as f64)
        .chain(d.kinks.iter().copied().filter(|&k| k > lo && k < hi))
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut cum = Vec::with_capacity(knots.len());
    let mut acc = lower_tail;
    cum.push(acc);
    for w in knots.windows(2) {
        acc += d.integrate_over(w[0], w[1])?;
        cum.push(acc);
    }
    Ok(CdfSpec {
        name: d.name.clone(),
        lo: d.lo,
        hi: d.hi,
        kind: CdfKind::Tabulated {
            density: d.clone(),
            knots,
            cum,
            lower_tail,
        },
    })
}
