//! Detection with every structural invariant checked on the way out.

use locness_core::detect::{detect, DetectConfig, DetectError, Detection};
use locness_core::{CoverError, GraphError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("graph invariant: {0}")]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Detect(#[from] DetectError),
    #[error("cover invariant: {0}")]
    Cover(#[from] CoverError),
    #[error("leader invariant: {0}")]
    Leaders(String),
}

/// Validate the graph, detect, then check the cover and leader assignment.
pub fn detect_checked(graph: &locness_core::Graph, cfg: &DetectConfig) -> Result<Detection, PipelineError> {
    graph.validate()?;
    let d = detect(graph, cfg)?;
    d.cover.check_invariants()?;
    d.leaders
        .check_invariants(graph, &cfg.preference)
        .map_err(|e| PipelineError::Leaders(e.to_string()))?;
    Ok(d)
}
