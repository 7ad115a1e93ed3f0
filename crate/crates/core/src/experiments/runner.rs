//! Runs a selection of experiments and writes their artifacts.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::output::{render_markdown, write_checks_csv, write_csv_samples};
use super::plot::{render_plot, MIN_PLOT_N};
use super::{find, registry, Budget, Context, ExperimentSpec, Outcome};
use crate::fsio::write_atomic;
use crate::stats::{TestReport, Verdict, SCHEMA_VERSION};
use crate::{Error, Result};

/// Environment variable that sets the worker count.
pub const WORKERS_ENV: &str = "BLAB_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Md,
    Svg,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            "svg" => Ok(Format::Svg),
            other => Err(Error::InvalidArgument(format!("unknown format `{other}`"))),
        }
    }
}

impl Format {
    /// Comma-separated list such as `json,csv`.
    pub fn parse_list(s: &str) -> Result<Vec<Format>> {
        let set: BTreeSet<Format> = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(Format::from_str)
            .collect::<Result<_>>()?;
        if set.is_empty() {
            return Err(Error::InvalidArgument("empty format list".into()));
        }
        Ok(set.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Experiment names; empty selects the whole registry.
    pub experiments: Vec<String>,
    pub master_seed: u64,
    /// Overrides of every selected experiment's `n` and `steps`.
    pub n: Option<usize>,
    pub steps: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
    /// Treat flagged checks as failures.
    pub strict: bool,
    /// Worker threads; recorded in the metadata file only.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            experiments: Vec::new(),
            master_seed: 1,
            n: None,
            steps: None,
            out_dir: None,
            formats: vec![Format::Json],
            strict: false,
            workers: None,
        }
    }
}

impl RunConfig {
    /// Resolves names and budgets; fails before anything is computed.
    pub fn resolve(&self) -> Result<Vec<(&'static ExperimentSpec, Budget)>> {
        let specs: Vec<&'static ExperimentSpec> = if self.experiments.is_empty() {
            registry().iter().collect()
        } else {
            let mut seen = BTreeSet::new();
            let mut v = Vec::new();
            for name in &self.experiments {
                let s = find(name)?;
                if seen.insert(s.name) {
                    v.push(s);
                }
            }
            v
        };
        specs
            .into_iter()
            .map(|s| {
                let b = s.default_budget.with_overrides(self.n, self.steps);
                b.validate()?;
                Ok((s, b))
            })
            .collect()
    }

    /// `BLAB_WORKERS` when set, otherwise the configured count.
    pub fn worker_count(&self) -> Result<Option<usize>> {
        let from_env = match std::env::var(WORKERS_ENV) {
            Ok(v) if !v.trim().is_empty() => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidArgument(format!("{WORKERS_ENV}={v} is not a count")))?,
            ),
            _ => None,
        };
        let w = from_env.or(self.workers);
        if w == Some(0) {
            return Err(Error::InvalidArgument("worker count must be positive".into()));
        }
        Ok(w)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub anchor: String,
    pub description: String,
    pub budget: Budget,
    pub verdict: Verdict,
    pub checks: Vec<TestReport>,
}

impl ExperimentReport {
    pub fn counts(&self) -> (usize, usize, usize) {
        let c = |v: Verdict| self.checks.iter().filter(|r| r.verdict == v).count();
        (c(Verdict::Pass), c(Verdict::Flag), c(Verdict::Fail))
    }
}

/// The deterministic part of a run: identical for identical configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: u32,
    pub config: RunConfig,
    pub experiments: Vec<ExperimentReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub name: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub pass: usize,
    pub flag: usize,
    pub fail: usize,
    pub strict: bool,
    pub workers: usize,
    pub timings: Vec<Timing>,
    pub total_seconds: f64,
    pub written: Vec<PathBuf>,
}

impl SuiteSummary {
    pub fn failed(&self) -> bool {
        self.fail > 0 || (self.strict && self.flag > 0)
    }

    pub fn exit_code(&self) -> i32 {
        i32::from(self.failed())
    }
}

fn experiment_report(spec: &ExperimentSpec, budget: Budget, outcome: &Outcome) -> ExperimentReport {
    let verdict = outcome
        .checks
        .iter()
        .fold(Verdict::Pass, |v, c| v.worst(c.verdict));
    ExperimentReport {
        name: spec.name.to_string(),
        anchor: spec.anchor.to_string(),
        description: spec.description.to_string(),
        budget,
        verdict,
        checks: outcome.checks.clone(),
    }
}

pub fn run(config: &RunConfig) -> Result<(SuiteReport, SuiteSummary)> {
    let plan = config.resolve()?;
    if config.formats.is_empty() {
        return Err(Error::InvalidArgument("no output format selected".into()));
    }
    let workers = config.worker_count()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;

    let started = Instant::now();
    let ctx = Context::new(config.master_seed);
    let results: Vec<Result<(Outcome, f64)>> = pool.install(|| {
        // Batches read by several experiments are drawn once, up front.
        let keys: BTreeSet<(usize, usize)> = plan
            .iter()
            .filter(|(s, _)| s.uses_bridges)
            .map(|(_, b)| (b.n, b.steps))
            .collect();
        for (n, steps) in keys {
            if let Err(e) = ctx.bridges(n, steps) {
                return vec![Err(e)];
            }
        }
        plan.par_iter()
            .map(|(spec, budget)| {
                let t = Instant::now();
                let out = spec.run(&ctx, budget)?;
                Ok((out, t.elapsed().as_secs_f64()))
            })
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let report = SuiteReport {
        version: SCHEMA_VERSION,
        config: config.clone(),
        experiments: plan
            .iter()
            .zip(&results)
            .map(|((s, b), (o, _))| experiment_report(s, *b, o))
            .collect(),
    };
    let count = |v: Verdict| {
        report
            .experiments
            .iter()
            .flat_map(|e| &e.checks)
            .filter(|c| c.verdict == v)
            .count()
    };
    let mut summary = SuiteSummary {
        pass: count(Verdict::Pass),
        flag: count(Verdict::Flag),
        fail: count(Verdict::Fail),
        strict: config.strict,
        workers: pool.current_num_threads(),
        timings: plan
            .iter()
            .zip(&results)
            .map(|((s, _), (_, secs))| Timing {
                name: s.name.to_string(),
                seconds: *secs,
            })
            .collect(),
        total_seconds: started.elapsed().as_secs_f64(),
        written: Vec::new(),
    };
    if let Some(dir) = &config.out_dir {
        let outcomes: Vec<&Outcome> = results.iter().map(|r| &r.0).collect();
        summary.written = write_artifacts(dir, config, &report, &summary, &outcomes)?;
    }
    Ok((report, summary))
}

fn write_artifacts(
    dir: &Path,
    config: &RunConfig,
    report: &SuiteReport,
    summary: &SuiteSummary,
    outcomes: &[&Outcome],
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for f in &config.formats {
        match f {
            Format::Json => {
                let p = dir.join("report.json");
                write_atomic(&p, serde_json::to_string_pretty(report)?.as_bytes())?;
                written.push(p);
                let p = dir.join("metadata.json");
                let meta = serde_json::json!({
                    "version": SCHEMA_VERSION,
                    "crate_version": env!("CARGO_PKG_VERSION"),
                    "workers": summary.workers,
                    "total_seconds": summary.total_seconds,
                    "timings": summary.timings,
                });
                write_atomic(&p, serde_json::to_string_pretty(&meta)?.as_bytes())?;
                written.push(p);
            }
            Format::Md => {
                let p = dir.join("report.md");
                write_atomic(&p, render_markdown(report).as_bytes())?;
                written.push(p);
            }
            Format::Csv => {
                let p = dir.join("checks.csv");
                write_checks_csv(&p, report)?;
                written.push(p);
                for (e, o) in report.experiments.iter().zip(outcomes) {
                    written.extend(write_csv_samples(&dir.join("samples"), &e.name, &o.samples)?);
                }
            }
            Format::Svg => {
                for (e, o) in report.experiments.iter().zip(outcomes) {
                    for s in &o.samples {
                        if let (Some(d), true) = (&s.density, s.values.len() >= MIN_PLOT_N) {
                            let p = dir.join("plots").join(&e.name).join(format!("{}.svg", s.name));
                            render_plot(&s.values, d, &p)?;
                            written.push(p);
                        }
                    }
                }
            }
        }
    }
    Ok(written)
}
