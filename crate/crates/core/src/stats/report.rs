use serde::{Deserialize, Serialize};

use crate::sampling::SeedSpec;

pub const SCHEMA_VERSION: u32 = 1;

/// Default significance level for tests on exact samplers.
pub const ALPHA: f64 = 1e-3;

/// Distance-rule results below `FLAG_FACTOR * threshold` are flagged, not failed.
pub const FLAG_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Flag,
}

impl Verdict {
    /// Worst of two verdicts: fail over flag over pass.
    pub fn worst(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Flag, _) | (_, Flag) => Flag,
            _ => Pass,
        }
    }

    pub fn strict(self) -> Verdict {
        if self == Verdict::Flag {
            Verdict::Fail
        } else {
            self
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Flag => "flag",
        })
    }
}

/// How the verdict follows from the numbers in the report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rule {
    /// Pass iff `p_value > threshold`.
    PValueAbove,
    /// Pass iff `statistic < threshold`; flag up to `flag_factor * threshold`.
    StatisticBelow { flag_factor: Option<f64> },
    /// Pass iff the interval contains `target`.
    IntervalContains { target: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub v: u32,
    pub test_name: String,
    pub statistic: f64,
    pub threshold: f64,
    pub p_value: Option<f64>,
    pub n: Vec<usize>,
    pub seeds: Vec<SeedSpec>,
    pub rule: Rule,
    pub verdict: Verdict,
    pub interval: Option<[f64; 2]>,
    pub notes: Vec<String>,
}

impl TestReport {
    pub fn new(test_name: impl Into<String>, statistic: f64, threshold: f64, rule: Rule) -> Self {
        let mut r = TestReport {
            v: SCHEMA_VERSION,
            test_name: test_name.into(),
            statistic,
            threshold,
            p_value: None,
            n: Vec::new(),
            seeds: Vec::new(),
            rule,
            verdict: Verdict::Fail,
            interval: None,
            notes: Vec::new(),
        };
        r.decide();
        r
    }

    fn decide(&mut self) {
        self.verdict = match self.rule {
            Rule::PValueAbove => match self.p_value {
                Some(p) if p > self.threshold => Verdict::Pass,
                _ => Verdict::Fail,
            },
            Rule::StatisticBelow { flag_factor } => {
                if self.statistic < self.threshold {
                    Verdict::Pass
                } else if flag_factor.is_some_and(|f| self.statistic < f * self.threshold) {
                    Verdict::Flag
                } else {
                    Verdict::Fail
                }
            }
            Rule::IntervalContains { target } => match self.interval {
                Some([lo, hi]) if lo <= target && target <= hi => Verdict::Pass,
                _ => Verdict::Fail,
            },
        };
        // NaN statistics never pass.
        if self.statistic.is_nan() {
            self.verdict = Verdict::Fail;
        }
    }

    pub fn with_p_value(mut self, p: f64) -> Self {
        self.p_value = Some(p);
        self.decide();
        self
    }

    pub fn with_interval(mut self, lo: f64, hi: f64) -> Self {
        self.interval = Some([lo, hi]);
        self.decide();
        self
    }

    pub fn with_n(mut self, n: &[usize]) -> Self {
        self.n = n.to_vec();
        self
    }

    pub fn with_seeds(mut self, seeds: &[SeedSpec]) -> Self {
        self.seeds = seeds.to_vec();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.test_name = name.into();
        self
    }

    /// Re-judges with a p-value threshold.
    pub fn at_level(mut self, alpha: f64) -> Self {
        self.rule = Rule::PValueAbove;
        self.threshold = alpha;
        self.decide();
        self
    }

    /// Re-judges the statistic as a distance against `max`, with flagging.
    pub fn as_distance(mut self, max: f64) -> Self {
        self.rule = Rule::StatisticBelow {
            flag_factor: Some(FLAG_FACTOR),
        };
        self.threshold = max;
        self.decide();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules() {
        let r = TestReport::new("ks", 0.01, ALPHA, Rule::PValueAbove);
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.clone().with_p_value(0.2).verdict, Verdict::Pass);
        assert_eq!(r.clone().with_p_value(1e-4).verdict, Verdict::Fail);
        assert_eq!(r.clone().as_distance(0.02).verdict, Verdict::Pass);
        assert_eq!(r.clone().as_distance(0.008).verdict, Verdict::Flag);
        assert_eq!(r.clone().as_distance(0.006).verdict, Verdict::Fail);
        let m = TestReport::new("mean", 0.1, 4.0, Rule::IntervalContains { target: 0.0 });
        assert_eq!(m.clone().with_interval(-0.1, 0.3).verdict, Verdict::Pass);
        assert_eq!(m.with_interval(0.05, 0.3).verdict, Verdict::Fail);
    }

    #[test]
    fn worst_and_strict() {
        assert_eq!(Verdict::Pass.worst(Verdict::Flag), Verdict::Flag);
        assert_eq!(Verdict::Flag.worst(Verdict::Fail), Verdict::Fail);
        assert_eq!(Verdict::Flag.strict(), Verdict::Fail);
        assert_eq!(Verdict::Pass.strict(), Verdict::Pass);
    }

    #[test]
    fn json_field_order_is_stable() {
        let r = TestReport::new("x", 1.0, 2.0, Rule::StatisticBelow { flag_factor: None });
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.starts_with(r#"{"v":1,"test_name":"x","statistic":1.0,"threshold":2.0"#), "{s}");
        let back: TestReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
