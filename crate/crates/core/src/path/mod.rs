//! Discretized paths: Brownian motion and its transforms, local times,
//! hitting-time constructions.
//!
//! A path is filled by one thread from one random stream and is read-only
//! afterwards; independent paths come from independent [`SeedSpec`] streams.
//!
//! [`SeedSpec`]: crate::sampling::SeedSpec

mod brownian;
mod grid;
mod hitting;
mod infimum;
mod jeulin;
mod local_time;
mod pseudo;
mod williams;

pub use brownian::{
    bridge_from_bm, meander_from_bridge, simulate_bes3, simulate_bes3_with, simulate_bm, simulate_bm_with,
    simulate_bridge_with, Bes3Path, Meander,
};
pub use grid::PathGrid;
pub use hitting::{
    alpha_from_path, simulate_hitting_path_exact, simulate_hitting_path_walk, HittingMethod, HittingPath,
};
pub use infimum::{bridge_minimum, future_infimum, refined_future_infimum};
pub use jeulin::jeulin_residual;
pub use local_time::{
    default_bandwidth, local_time_at_level, local_time_zero, terminal_local_time, LocalTimeAccumulator,
    LocalTimeCurve, LocalTimeMethod,
};
pub use pseudo::{simulate_pseudo_bridge, PseudoBridgePath, MAX_STORED_POINTS};
pub use williams::{last_passage_in_horizon, reversal_pair, ReversalSides};

/// Outcome of a simulation that may give up at a step cap.
#[derive(Debug, Clone)]
pub enum Simulated<T> {
    Done(T),
    Discarded { steps: usize },
}

impl<T> Simulated<T> {
    pub fn done(self) -> Option<T> {
        match self {
            Simulated::Done(t) => Some(t),
            Simulated::Discarded { .. } => None,
        }
    }

    pub fn is_discarded(&self) -> bool {
        matches!(self, Simulated::Discarded { .. })
    }
}
