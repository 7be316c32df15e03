use super::{same_vertex_set, MetricError};
use crate::cover::Cover;

/// Binary "is overlapping" confusion counts over all vertices.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    #[cfg_attr(feature = "serde", serde(rename = "fn"))]
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: ConfusionCounts,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Precision, recall and F1 of overlapping-vertex identification.
///
/// A vertex is positive when it has more than one membership; how many is
/// ignored. Any 0/0 evaluates to 0.
pub fn overlap_fscore(detected: &Cover, truth: &Cover) -> Result<FScore, MetricError> {
    let n = same_vertex_set(detected, truth)?;
    let mut counts = ConfusionCounts::default();
    for v in 0..n as u32 {
        match (detected.is_overlapping(v), truth.is_overlapping(v)) {
            (true, true) => counts.tp += 1,
            (true, false) => counts.fp += 1,
            (false, true) => counts.fn_ += 1,
            (false, false) => counts.tn += 1,
        }
    }
    let precision = ratio(counts.tp as f64, (counts.tp + counts.fp) as f64);
    let recall = ratio(counts.tp as f64, (counts.tp + counts.fn_) as f64);
    let f1 = ratio(2.0 * precision * recall, precision + recall);
    Ok(FScore {
        precision,
        recall,
        f1,
        counts,
    })
}
