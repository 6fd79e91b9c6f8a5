//! File formats, data pipeline, training loop and CLI around `qnn-core`.

pub mod bench;
pub mod checkpoint;
pub mod cli;
pub mod data;
mod error;
pub mod gradcheck;
pub mod metrics;
pub mod mnist;
pub mod snapshot;
pub mod trainer;

pub use error::{Error, Result};
