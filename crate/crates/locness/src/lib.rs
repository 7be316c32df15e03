//! File formats, scoring and experiment sweeps around `locness-core`.

pub mod io;
pub mod pipeline;
pub mod scores;
pub mod sweep;

pub use io::{IoError, LabeledGraph};
pub use scores::{score, Scores};
