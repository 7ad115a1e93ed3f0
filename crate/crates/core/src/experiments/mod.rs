//! Named, seeded experiments: one per identity, each a list of checks.

mod bessel;
mod bridge;
mod common;
mod hitting;
mod laws;
mod output;
mod plot;
mod runner;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

pub use common::NamedSample;
pub use output::{render_markdown, report_from_json, write_csv_samples};
pub use plot::{freedman_diaconis_bins, render_plot, render_plot_svg};
pub use runner::{run, ExperimentReport, Format, RunConfig, SuiteReport, SuiteSummary};

use crate::stats::TestReport;
use crate::{Error, Result};

/// Sample sizes and resolution. What `n` and `steps` count depends on the
/// experiment and is stated in its description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub n: usize,
    pub steps: usize,
    pub n_exact: usize,
}

impl Budget {
    pub const fn new(n: usize, steps: usize, n_exact: usize) -> Self {
        Budget { n, steps, n_exact }
    }

    pub fn with_overrides(self, n: Option<usize>, steps: Option<usize>) -> Self {
        Budget {
            n: n.unwrap_or(self.n),
            steps: steps.unwrap_or(self.steps),
            n_exact: self.n_exact,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.n < 10 || self.steps < 2 {
            return Err(Error::InvalidArgument(format!(
                "budget n = {}, steps = {} is too small",
                self.n, self.steps
            )));
        }
        if self.n > u32::MAX as usize {
            return Err(Error::InvalidArgument(format!("n = {} exceeds 2^32 paths", self.n)));
        }
        Ok(())
    }
}

/// What an experiment produced: its checks and the samples behind them.
#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: Vec<TestReport>,
    pub samples: Vec<NamedSample>,
}

impl Outcome {
    pub(crate) fn check(&mut self, r: TestReport) {
        self.checks.push(r);
    }

    pub(crate) fn sample(&mut self, s: NamedSample) {
        self.samples.push(s);
    }

    pub fn find(&self, test_name: &str) -> Option<&TestReport> {
        self.checks.iter().find(|c| c.test_name == test_name)
    }
}

type BridgeKey = (u64, usize, usize);

/// State shared by the experiments of one run: the master seed and path
/// batches that several experiments read.
pub struct Context {
    pub master_seed: u64,
    bridges: Mutex<HashMap<BridgeKey, Arc<OnceLock<Arc<bridge::BridgeBatch>>>>>,
}

impl Context {
    pub fn new(master_seed: u64) -> Self {
        Context {
            master_seed,
            bridges: Mutex::new(HashMap::new()),
        }
    }

    pub(crate) fn bridges(&self, n: usize, steps: usize) -> Result<Arc<bridge::BridgeBatch>> {
        let cell = {
            let mut map = self.bridges.lock().expect("bridge cache poisoned");
            map.entry((self.master_seed, n, steps)).or_default().clone()
        };
        if let Some(b) = cell.get() {
            return Ok(b.clone());
        }
        let batch = Arc::new(bridge::BridgeBatch::simulate(self.master_seed, n, steps)?);
        Ok(cell.get_or_init(|| batch).clone())
    }
}

pub struct ExperimentSpec {
    pub name: &'static str,
    /// The identity under test, stated plainly.
    pub anchor: &'static str,
    pub description: &'static str,
    pub default_budget: Budget,
    /// Reads the shared bridge batch at `(n, steps)`.
    pub uses_bridges: bool,
    run: fn(&Context, &Budget) -> Result<Outcome>,
}

impl ExperimentSpec {
    pub fn run(&self, ctx: &Context, budget: &Budget) -> Result<Outcome> {
        budget.validate()?;
        (self.run)(ctx, budget)
    }

    pub fn run_default(&self, master_seed: u64) -> Result<Outcome> {
        self.run(&Context::new(master_seed), &self.default_budget)
    }
}

impl std::fmt::Debug for ExperimentSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExperimentSpec")
            .field("name", &self.name)
            .field("default_budget", &self.default_budget)
            .finish()
    }
}

const K: usize = 1 << 10;
const M: usize = 1_000_000;

pub fn registry() -> &'static [ExperimentSpec] {
    static REGISTRY: &[ExperimentSpec] = &[
        ExperimentSpec {
            name: "prop1-h-identities",
            anchor: "E[L1 | |B1|=l] = E[|B1| | L1=l] = H(l) = l E[1/(N^2+l^2)]",
            description: "H against quadrature on a log grid; conditional means from exact (B1, L1) draws (n).",
            default_budget: Budget::new(M, 2, 0),
            run: laws::prop1,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "balayage-check",
            anchor: "E[phi(L1)|B1|] = E[int_0^L1 phi(x) dx] for bounded phi",
            description: "Exact (B1, L1) draws (n_exact) and Brownian paths (n paths of `steps` steps).",
            default_budget: Budget::new(10_000, 16 * K, M),
            run: laws::balayage,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "thm1-pseudo-bridge",
            anchor: "(B_{U tau1}/sqrt(tau1), 1/sqrt(tau1), L_{U tau1}) has the law of (B1/2, L1, Lambda)",
            description: "n pseudo-bridge paths with dt = 1/steps, capped at 10^4 time units.",
            default_budget: Budget::new(10_000, 1000, 100_000),
            run: hitting::thm1,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "thm2-bridge-sampling",
            anchor: "lambda_U/lambda_1 is uniform and independent of (b(U), lambda_1)",
            description: "n Brownian bridges of `steps` steps, local time by occupation.",
            default_budget: Budget::new(40_000, 16 * K, 0),
            run: bridge::thm2,
            uses_bridges: true,
        },
        ExperimentSpec {
            name: "cor2-rayleigh",
            anchor: "lambda_1 of the bridge has density l exp(-l^2/2)",
            description: "n Brownian bridges of `steps` steps.",
            default_budget: Budget::new(10_000, 64 * K, 0),
            run: bridge::cor2_rayleigh,
            uses_bridges: true,
        },
        ExperimentSpec {
            name: "cor2-bU",
            anchor: "b(U) has density int_{2|y|}^inf exp(-z^2/2) dz, b(U) = sqrt(2E) V/2",
            description: "Exact draws (n_exact) and n bridges of `steps` steps.",
            default_budget: Budget::new(10_000, 64 * K, M),
            run: bridge::cor2_bu,
            uses_bridges: true,
        },
        ExperimentSpec {
            name: "cor2-ratio",
            anchor: "E[lambda_1^y | lambda_1 = l] = (2|y|+l) exp(-2y^2-2|y|l); E[lambda_1^y/lambda_1] = exp(-2y^2)",
            description: "n bridges of `steps` steps, level y = 1/2.",
            default_budget: Budget::new(10_000, 64 * K, 0),
            run: bridge::cor2_ratio,
            uses_bridges: true,
        },
        ExperimentSpec {
            name: "thm3-meander",
            anchor: "m = |b| + lambda: (m(U), m(1), i_U/m(1)) has the sqrt(pi/2) L1-weighted law of (|B1|/2 + Lambda L1, L1, Lambda)",
            description: "Meanders from n bridges of `steps` steps; n_exact weighted closed-form draws.",
            default_budget: Budget::new(10_000, 64 * K, M),
            run: bridge::thm3,
            uses_bridges: true,
        },
        ExperimentSpec {
            name: "cor3",
            anchor: "m(1) is Rayleigh; m(U) has density 2 int_y^{2y} exp(-z^2/2) dz, m(U) = sqrt(2E) W",
            description: "Meanders from n bridges of `steps` steps; exact m(U) draws (n_exact).",
            default_budget: Budget::new(10_000, 64 * K, M),
            run: bridge::cor3,
            uses_bridges: true,
        },
        ExperimentSpec {
            name: "thm4-bessel",
            anchor: "(R(U), R(1), J_U/R(1)) has the L1^2-weighted law of (|B1|/2 + Lambda L1, L1, Lambda)",
            description: "n Bessel-3 paths of `steps` steps, bridge-corrected future infimum; n_exact weighted closed-form draws.",
            default_budget: Budget::new(100_000, K, M),
            run: bessel::thm4,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "cor4",
            anchor: "R(1) is Maxwell; R(U) = sqrt(U) R(1); R(U) given R(1) has the law of m(U) given m(1)",
            description: "Exact draws (n_exact), n_exact/10 Bessel paths of 256 steps, meanders from n bridges of `steps` steps.",
            default_budget: Budget::new(10_000, 64 * K, M),
            run: bessel::cor4,
            uses_bridges: true,
        },
        ExperimentSpec {
            name: "lem1-bessel-cond",
            anchor: "E[R_U | R_1=r] = (r + E[U/R_U | R_1=r])/2",
            description: "n exact draws of (U, R_U, R_1).",
            default_budget: Budget::new(M, 2, 0),
            run: bessel::lem1,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "lem2-H",
            anchor: "E[U/R_U | R_1=r] = H(r); E[R_U/R_1^2] = E[U/(R_U R_1^2)] = sqrt(2/pi)",
            description: "n exact draws of (U, R_U, R_1).",
            default_budget: Budget::new(M, 2, 0),
            run: bessel::lem2,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "alpha-centering",
            anchor: "E[B_{U T1}/sqrt(T1)] = 0",
            description: "n reversal hitting paths of `steps` steps, read exactly inside cells.",
            default_budget: Budget::new(M, 64, 0),
            run: hitting::alpha_centering,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "alpha-law",
            anchor: "B_{U T1}/sqrt(T1) has the law of Lambda L1 - |B1|/2",
            description: "n reversal hitting paths of `steps` steps against n_exact closed-form draws.",
            default_budget: Budget::new(100_000, 64, 100_000),
            run: hitting::alpha_law,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "jeulin-decomposition",
            anchor: "beta = B + int ds/(1-B) - int (1-B)/(T1-s) ds is a Brownian motion independent of T1",
            description: "n reversal hitting paths on `steps` grid steps.",
            default_budget: Budget::new(10_000, K, 0),
            run: hitting::jeulin,
            uses_bridges: false,
        },
        ExperimentSpec {
            name: "williams-reversal",
            anchor: "(T1, 1 - B_{T1 - s}) has the law of (gamma_1, R_s), gamma_1 the last passage of R at 1",
            description: "n walks and n Bessel-3 paths of `steps` steps over the horizon [0, 4].",
            default_budget: Budget::new(10_000, 16_000, 0),
            run: hitting::williams,
            uses_bridges: false,
        },
    ];
    REGISTRY
}

pub fn find(name: &str) -> Result<&'static ExperimentSpec> {
    registry()
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete_and_unique() {
        let r = registry();
        assert!(r.len() >= 15);
        assert!(r.iter().any(|s| s.name == "alpha-centering"));
        for (i, s) in r.iter().enumerate() {
            assert!(!s.anchor.is_empty() && !s.description.is_empty());
            assert!(r[i + 1..].iter().all(|t| t.name != s.name), "{}", s.name);
            s.default_budget.validate().unwrap();
        }
        assert!(matches!(find("nope"), Err(Error::UnknownExperiment(_))));
    }
}
