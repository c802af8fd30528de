//! Simulation and verification kernel for Hammersley's interacting particle
//! process with Poisson sources and sinks.
//!
//! The crate is organised around the event-driven state machine in
//! [`engine`], driven by point sets from [`point_process`]. On top of it,
//! [`coupling`] tracks second-class (discrepancy) particles between coupled
//! runs, [`paths`] computes longest North-East path lengths, [`stats`]
//! provides the goodness-of-fit kernel, and [`scenario`] bundles
//! reproducible input recipes and replication plumbing.

pub mod coupling;
pub mod engine;
pub mod error;
pub mod generator;
pub mod paths;
pub mod point_process;
pub mod scenario;
pub mod stats;
pub mod stream;

pub use error::{Error, Result};
pub use stream::UnitStream;
