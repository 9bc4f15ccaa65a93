pub mod error;
pub mod hierarchy;
pub mod integrator;
pub mod metrics;
pub mod neuron;
pub mod simulate;
pub mod topology;

pub use error::{Error, Result};
