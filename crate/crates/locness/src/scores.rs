use locness_core::{omega_index, overlap_fscore, overlapping_nmi, ConfusionCounts, Cover, MetricError};
use serde::{Deserialize, Serialize};

/// Comparison of a detected cover against a reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub nmi: f64,
    pub omega: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub counts: ConfusionCounts,
}

pub fn score(detected: &Cover, truth: &Cover) -> Result<Scores, MetricError> {
    let f = overlap_fscore(detected, truth)?;
    Ok(Scores {
        nmi: overlapping_nmi(detected, truth)?,
        omega: omega_index(detected, truth)?,
        precision: f.precision,
        recall: f.recall,
        f1: f.f1,
        counts: f.counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_comparison_with_overlap_is_perfect() {
        let c = Cover::new(5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let s = score(&c, &c).unwrap();
        assert_eq!((s.nmi, s.omega, s.precision, s.recall, s.f1), (1.0, 1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn singletons_against_one_block() {
        let block = Cover::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let singles = Cover::from_labels(&[0, 1, 2, 3]).unwrap();
        assert_eq!(score(&singles, &block).unwrap().nmi, 0.0);
    }

    #[test]
    fn serializes_confusion_counts_with_fn_key() {
        let c = Cover::new(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let json = serde_json::to_value(score(&c, &c).unwrap()).unwrap();
        assert_eq!(json["counts"]["fn"], 0);
        assert_eq!(json["counts"]["tp"], 1);
    }
}
