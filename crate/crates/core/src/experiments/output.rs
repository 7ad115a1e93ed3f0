//! Report files: JSON round trip, Markdown summary, CSV tables.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::common::NamedSample;
use super::runner::SuiteReport;
use crate::fsio::write_atomic;
use crate::{Error, Result};

pub fn report_from_json(path: &Path) -> Result<SuiteReport> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn num(x: f64) -> String {
    if x == 0.0 || (1e-3..1e4).contains(&x.abs()) {
        format!("{x:.4}")
    } else {
        format!("{x:.3e}")
    }
}

pub fn render_markdown(report: &SuiteReport) -> String {
    let mut md = String::new();
    let _ = writeln!(md, "# Experiment report\n");
    let _ = writeln!(
        md,
        "Master seed `{}`, schema version {}.\n",
        report.config.master_seed, report.version
    );
    let _ = writeln!(md, "| experiment | checks | pass | flag | fail |");
    let _ = writeln!(md, "|---|---|---|---|---|");
    for e in &report.experiments {
        let (p, fl, f) = e.counts();
        let _ = writeln!(md, "| {} | {} | {p} | {fl} | {f} |", e.name, e.checks.len());
    }
    for e in &report.experiments {
        let _ = writeln!(md, "\n## {}\n", e.name);
        let _ = writeln!(md, "Identity: `{}`\n", e.anchor);
        let _ = writeln!(
            md,
            "Budget: n = {}, steps = {}, n_exact = {}. {}\n",
            e.budget.n, e.budget.steps, e.budget.n_exact, e.description
        );
        let _ = writeln!(md, "| check | statistic | threshold | p | verdict |");
        let _ = writeln!(md, "|---|---|---|---|---|");
        for c in &e.checks {
            let p = c.p_value.map(num).unwrap_or_else(|| "-".into());
            let _ = writeln!(
                md,
                "| {} | {} | {} | {p} | {} |",
                c.test_name.replace('|', "\\|"),
                num(c.statistic),
                num(c.threshold),
                c.verdict
            );
        }
        let notes: Vec<_> = e.checks.iter().flat_map(|c| c.notes.iter().map(move |n| (c, n))).collect();
        if !notes.is_empty() {
            md.push('\n');
            for (c, n) in notes {
                let _ = writeln!(md, "- {}: {}", c.test_name, n);
            }
        }
    }
    md
}

fn csv_bytes(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))
}

/// One row per check across the suite.
pub(crate) fn write_checks_csv(path: &Path, report: &SuiteReport) -> Result<()> {
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    let rows = report.experiments.iter().flat_map(|e| {
        e.checks.iter().map(move |c| {
            vec![
                e.name.clone(),
                c.test_name.clone(),
                c.verdict.to_string(),
                c.statistic.to_string(),
                c.threshold.to_string(),
                opt(c.p_value),
                c.n.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(";"),
                opt(c.interval.map(|i| i[0])),
                opt(c.interval.map(|i| i[1])),
            ]
        })
    });
    let bytes = csv_bytes(
        &[
            "experiment",
            "check",
            "verdict",
            "statistic",
            "threshold",
            "p_value",
            "n",
            "interval_lo",
            "interval_hi",
        ],
        rows,
    )?;
    write_atomic(path, &bytes)
}

/// Writes each sample to `dir/<experiment>/<sample>.csv` as one column.
pub fn write_csv_samples(dir: &Path, experiment: &str, samples: &[NamedSample]) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for s in samples {
        let path = dir.join(experiment).join(format!("{}.csv", s.name));
        let bytes = csv_bytes(&[s.name.as_str()], s.values.iter().map(|v| vec![v.to_string()]))?;
        write_atomic(&path, &bytes)?;
        written.push(path);
    }
    Ok(written)
}
