use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use blab::experiments::{registry, render_markdown, report_from_json, run, Format, RunConfig};

#[derive(Parser)]
#[command(name = "blab", version, about = "Seeded Monte Carlo checks of Brownian identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List registered experiments with their default budgets.
    List,
    /// Run experiments and write their reports.
    Run {
        /// Experiment names (repeatable); all experiments when omitted.
        #[arg(long = "experiment", short = 'e', num_args = 1..)]
        experiments: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Overrides the number of paths or draws of every selected experiment.
        #[arg(long)]
        n: Option<usize>,
        /// Overrides the number of steps of every selected experiment.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value = "blab-out")]
        out: PathBuf,
        /// Comma-separated subset of json,csv,md,svg.
        #[arg(long, default_value = "json,md")]
        format: String,
        /// Treat flagged checks as failures.
        #[arg(long)]
        strict: bool,
        /// Worker threads (BLAB_WORKERS takes precedence).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print a saved report.json as Markdown.
    Report { path: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(cmd: Command) -> blab::Result<ExitCode> {
    match cmd {
        Command::List => {
            for s in registry() {
                let b = s.default_budget;
                println!("{:<22} n={:<8} steps={:<6} n_exact={:<8} {}", s.name, b.n, b.steps, b.n_exact, s.anchor);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run {
            experiments,
            seed,
            n,
            steps,
            out,
            format,
            strict,
            workers,
        } => {
            let config = RunConfig {
                experiments,
                master_seed: seed,
                n,
                steps,
                out_dir: Some(out),
                formats: Format::parse_list(&format)?,
                strict,
                workers,
            };
            let (report, summary) = run(&config)?;
            for (e, t) in report.experiments.iter().zip(&summary.timings) {
                let (p, fl, f) = e.counts();
                println!("{:<22} {:<5} {p:>3} pass {fl:>3} flag {f:>3} fail {:>8.1} s", e.name, e.verdict.to_string(), t.seconds);
            }
            println!(
                "total: pass {}, flag {}, fail {} in {:.1} s on {} workers",
                summary.pass, summary.flag, summary.fail, summary.total_seconds, summary.workers
            );
            Ok(if summary.failed() { ExitCode::FAILURE } else { ExitCode::SUCCESS })
        }
        Command::Report { path } => {
            print!("{}", render_markdown(&report_from_json(&path)?));
            Ok(ExitCode::SUCCESS)
        }
    }
}
