use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::sampling::SeedSpec;
use crate::special::DensitySpec;
use crate::stats::{spearman, Rule, TestReport};
use crate::Result;

/// Top-level stream for `(label, part)`: FNV-1a, folded to 31 bits so that
/// [`SeedSpec::child`] stays available.
pub(crate) fn stream_for(label: &str, part: u32) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes().chain(part.to_le_bytes()) {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    (h ^ (h >> 31)) & 0x7fff_ffff
}

pub(crate) fn seed_for(master: u64, label: &str, part: u32) -> SeedSpec {
    SeedSpec::new(master, stream_for(label, part))
}

/// One result per path, path `i` on stream `seed.child(i)`, in index order.
pub(crate) fn par_paths<T, F>(n: usize, seed: SeedSpec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync + Send,
{
    assert!(n <= u32::MAX as usize);
    (0..n as u32)
        .into_par_iter()
        .map(|i| f(&mut seed.child(i).rng()))
        .collect()
}

/// `primary` if it passes, otherwise `fallback` annotated with why.
pub(crate) fn either(primary: TestReport, fallback: TestReport) -> TestReport {
    if primary.passed() {
        return primary;
    }
    let note = format!(
        "{} did not pass (statistic {:.4e}, p {:?}); judged by fallback",
        primary.test_name, primary.statistic, primary.p_value
    );
    fallback.with_note(note)
}

/// `|ρ_S(path) - ρ_S(reference)|` for a pair whose dependence is known
/// only through a reference sampler.
pub(crate) fn rank_corr_match(
    name: String,
    path: (&[f64], &[f64]),
    reference: (&[f64], &[f64]),
    max: f64,
    flag_factor: Option<f64>,
) -> Result<TestReport> {
    let a = spearman(path.0, path.1)?;
    let b = spearman(reference.0, reference.1)?;
    Ok(TestReport::new(name, (a - b).abs(), max, Rule::StatisticBelow { flag_factor })
        .with_n(&[path.0.len(), reference.0.len()])
        .with_note(format!("spearman rho {a:.5} on paths, {b:.5} on reference draws")))
}

/// A sample kept for CSV output and, with a density, for plotting.
#[derive(Clone)]
pub struct NamedSample {
    pub name: String,
    pub values: Vec<f64>,
    pub density: Option<DensitySpec>,
}

impl NamedSample {
    pub fn new(name: &str, values: Vec<f64>) -> Self {
        NamedSample {
            name: name.to_string(),
            values,
            density: None,
        }
    }

    pub fn with_density(mut self, d: DensitySpec) -> Self {
        self.density = Some(d);
        self
    }
}

impl std::fmt::Debug for NamedSample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NamedSample")
            .field("name", &self.name)
            .field("n", &self.values.len())
            .field("density", &self.density.as_ref().map(|d| d.name().to_string()))
            .finish()
    }
}
