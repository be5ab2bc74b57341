//! Exact truncated q-series workbench.

pub mod bailey;
pub mod error;
pub mod partitions;
pub mod pochhammer;
pub mod series;
pub mod theta;

pub use error::{Error, Result};
pub use series::{Grain, TruncatedSeries};
