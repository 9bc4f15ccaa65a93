//! Experiment driver for the burstlab simulator: TOML configs in, CSV/DOT/JSON out.

pub mod commands;
pub mod config;
pub mod output;
pub mod pipeline;
