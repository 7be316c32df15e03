//! Cover comparison: overlapping NMI, Omega index, overlap F-score.

mod fscore;
mod nmi;
mod omega;

pub use fscore::{overlap_fscore, ConfusionCounts, FScore};
pub use nmi::overlapping_nmi;
pub use omega::omega_index;

use crate::cover::Cover;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("covers range over different vertex sets ({left} vs {right} vertices)")]
    VertexCountMismatch { left: usize, right: usize },
    #[error("omega index needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("degenerate expected agreement: both covers put every pair at one sharing level, yet they disagree")]
    DegenerateExpectedAgreement,
}

fn same_vertex_set(x: &Cover, y: &Cover) -> Result<usize, MetricError> {
    if x.vertex_count() == y.vertex_count() {
        Ok(x.vertex_count())
    } else {
        Err(MetricError::VertexCountMismatch {
            left: x.vertex_count(),
            right: y.vertex_count(),
        })
    }
}
