use crate::graph::{sorted_intersection_count, VertexId};

/// Local score a vertex gives each neighbour when picking leaders.
///
/// Implementations may only look at the two neighbour lists, which is what a
/// vertex learns in one request/reply exchange with the candidate. Scores must
/// be non-negative. Exact float equality decides ties, so equal rationals must
/// be computed the same way.
pub trait PreferenceFunction: Sync {
    fn score(&self, own: &[VertexId], candidate: VertexId, candidate_neighbors: &[VertexId]) -> f64;
}

/// `|Γ(v) ∩ Γ(u)| + 1`: shared neighbours plus the direct edge.
///
/// Stand-in for the original agreement measure, which is not restated by the
/// algorithm's authors. Strictly positive on neighbours.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Agreement;

impl PreferenceFunction for Agreement {
    fn score(&self, own: &[VertexId], _: VertexId, candidate_neighbors: &[VertexId]) -> f64 {
        (sorted_intersection_count(own, candidate_neighbors) + 1) as f64
    }
}

/// `|Γ(v) ∩ Γ(u)| / |Γ(v) ∪ Γ(u)|`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Jaccard;

impl PreferenceFunction for Jaccard {
    fn score(&self, own: &[VertexId], _: VertexId, candidate_neighbors: &[VertexId]) -> f64 {
        let common = sorted_intersection_count(own, candidate_neighbors);
        let union = own.len() + candidate_neighbors.len() - common;
        if union == 0 {
            0.0
        } else {
            common as f64 / union as f64
        }
    }
}

/// Built-in preference functions, selectable by name.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Preference {
    #[default]
    Agreement,
    Jaccard,
}

impl Preference {
    pub const ALL: [Preference; 2] = [Preference::Agreement, Preference::Jaccard];

    pub fn name(self) -> &'static str {
        match self {
            Self::Agreement => "agreement",
            Self::Jaccard => "jaccard",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl PreferenceFunction for Preference {
    fn score(&self, own: &[VertexId], candidate: VertexId, candidate_neighbors: &[VertexId]) -> f64 {
        match self {
            Self::Agreement => Agreement.score(own, candidate, candidate_neighbors),
            Self::Jaccard => Jaccard.score(own, candidate, candidate_neighbors),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agreement_counts_shared_plus_one() {
        // own = Γ(0) = {1,2,3}, candidate 1 with Γ(1) = {0,2,3,4}
        assert_eq!(Agreement.score(&[1, 2, 3], 1, &[0, 2, 3, 4]), 3.0);
        assert_eq!(Agreement.score(&[1], 1, &[0]), 1.0);
    }

    #[test]
    fn jaccard_ratio() {
        assert_eq!(Jaccard.score(&[1, 2, 3], 1, &[0, 2, 3, 4]), 2.0 / 5.0);
        assert_eq!(Jaccard.score(&[1], 1, &[0]), 0.0);
    }

    #[test]
    fn names_round_trip() {
        for p in Preference::ALL {
            assert_eq!(Preference::from_name(p.name()), Some(p));
        }
        assert_eq!(Preference::from_name("pagerank"), None);
    }
}
