//! Statistical tests that turn samples and reference laws into [`TestReport`]s.

mod dependence;
mod ks;
mod report;
mod summary;

pub use dependence::{chi2_sf, chi2_uniformity, midranks, rank_independence, spearman};
pub use ks::{
    kolmogorov_sf, ks_distance, ks_one_sample, ks_p_value, ks_two_sample, ks_two_sample_distance,
};
pub(crate) use ks::sorted_finite;
pub use report::{Rule, TestReport, Verdict, ALPHA, FLAG_FACTOR, SCHEMA_VERSION};
pub use summary::{
    binned_conditional_mean, compensated_sum, mean_and_se, mean_ci, BinMean, MeanInterval, NeumaierSum,
    MIN_BIN_COUNT,
};
