//! Simulation and numerical verification toolkit for spectrally positive
//! stable Levy processes, continuous state branching processes, stable
//! looptree forests, metric nets, and the Brownian snake, together with
//! the exponent analysis that singles out the square-root metric scaling.
//!
//! Everything is seed-deterministic: samplers are pure functions of their
//! parameters and an explicit RNG, and ensembles parallelize over derived
//! seed streams (see [`seed`]).

pub mod characterization;
pub mod csbp;
pub mod error;
pub mod forest;
pub mod levy_net;
pub mod report;
pub mod seed;
pub mod snake;
pub mod special;
pub mod stable;
pub mod stats;

pub use error::{Error, Result};
