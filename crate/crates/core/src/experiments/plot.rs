//! Static SVG overlays of a normalized histogram and a reference density.

use std::fmt::Write as _;
use std::path::Path;

use crate::fsio::write_atomic;
use crate::special::DensitySpec;
use crate::stats::sorted_finite;
use crate::{Error, Result};

pub const MIN_PLOT_N: usize = 1000;
const CURVE_POINTS: usize = 512;
const MAX_BINS: usize = 200;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;

/// Histogram layout `(bins, lo, width)` from the Freedman–Diaconis rule.
///
/// The bin count is held to `[1, 200]`; zero-range batches are rejected.
pub fn freedman_diaconis_bins(x: &[f64]) -> Result<(usize, f64, f64)> {
    let s = sorted_finite(x, "plot sample")?;
    if s.is_empty() {
        return Err(Error::InvalidArgument("empty plot sample".into()));
    }
    let (lo, hi) = (s[0], s[s.len() - 1]);
    if !(hi > lo) {
        return Err(Error::InvalidArgument(format!("degenerate plot sample: all values equal {lo}")));
    }
    let q = |p: f64| s[((s.len() - 1) as f64 * p).round() as usize];
    let iqr = q(0.75) - q(0.25);
    let h = 2.0 * iqr / (s.len() as f64).cbrt();
    let bins = if h > 0.0 {
        (((hi - lo) / h).ceil() as usize).clamp(1, MAX_BINS)
    } else {
        MAX_BINS
    };
    Ok((bins, lo, (hi - lo) / bins as f64))
}

pub fn render_plot_svg(x: &[f64], density: &DensitySpec, title: &str) -> Result<String> {
    if x.len() < MIN_PLOT_N {
        return Err(Error::InvalidArgument(format!(
            "plot needs at least {MIN_PLOT_N} points, got {}",
            x.len()
        )));
    }
    let (bins, lo, width) = freedman_diaconis_bins(x)?;
    let mut counts = vec![0usize; bins];
    for &v in x {
        let k = (((v - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let n = x.len() as f64;
    let heights: Vec<f64> = counts.iter().map(|&c| c as f64 / (n * width)).collect();
    let hi = lo + width * bins as f64;
    let curve: Vec<(f64, f64)> = (0..CURVE_POINTS)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / (CURVE_POINTS - 1) as f64;
            (t, density.pdf(t))
        })
        .collect();
    let ymax = heights
        .iter()
        .copied()
        .chain(curve.iter().map(|p| p.1))
        .filter(|v| v.is_finite())
        .fold(0.0, f64::max)
        .max(1e-300)
        * 1.05;

    let sx = |t: f64| PAD + (t - lo) / (hi - lo) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - y.min(ymax) / ymax * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{PAD}" y="24" font-family="sans-serif" font-size="14">{}</text>"#,
        escape(title)
    );
    for (k, &h) in heights.iter().enumerate() {
        let x0 = sx(lo + k as f64 * width);
        let x1 = sx(lo + (k + 1) as f64 * width);
        let y = sy(h);
        let _ = writeln!(
            svg,
            r##"<rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
            x1 - x0,
            H - PAD - y
        );
    }
    let mut d = String::new();
    for (i, &(t, y)) in curve.iter().enumerate() {
        let y = if y.is_finite() { y } else { 0.0 };
        let _ = write!(d, "{}{:.3},{:.3} ", if i == 0 { "M" } else { "L" }, sx(t), sy(y));
    }
    let _ = writeln!(
        svg,
        r##"<path d="{}" fill="none" stroke="#de2d26" stroke-width="1.5"/>"##,
        d.trim_end()
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{PAD}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{}" stroke="black"/>"#,
        H - PAD
    );
    for (t, anchor) in [(lo, "start"), (hi, "end")] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.3}" y="{}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{}</text>"#,
            sx(t),
            H - PAD + 16.0,
            fmt_tick(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">n = {}, {} bins; density {}</text>"#,
        W - PAD,
        PAD - 8.0,
        x.len(),
        bins,
        escape(density.name())
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn render_plot(x: &[f64], density: &DensitySpec, out_path: &Path) -> Result<()> {
    let title = out_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    write_atomic(out_path, render_plot_svg(x, density, &title)?.as_bytes())
}

fn fmt_tick(t: f64) -> String {
    if t.abs() >= 1e4 || (t != 0.0 && t.abs() < 1e-3) {
        format!("{t:.2e}")
    } else {
        format!("{t:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
