//! Seeded exact samplers for the closed-form laws, plus batch I/O.

mod batch;
pub mod exact;
pub mod io;
mod seed;

pub use batch::SampleBatch;
pub use exact::*;
pub use seed::SeedSpec;
