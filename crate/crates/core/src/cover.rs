//! Overlapping community assignments.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::VertexId;

/// Index of a community inside a [`Cover`].
pub type CommunityId = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("cover must range over at least one vertex")]
    NoVertices,
    #[error("community {0} is empty")]
    EmptyCommunity(usize),
    #[error("vertex {vertex} in community {community} is out of range for {n} vertices")]
    VertexOutOfRange {
        vertex: VertexId,
        community: usize,
        n: usize,
    },
    #[error("vertex {0} belongs to no community")]
    Uncovered(VertexId),
    #[error("membership of vertex {vertex} is inconsistent with community {community}")]
    Inconsistent { vertex: VertexId, community: usize },
}

/// Assignment of each of `n` vertices to one or more communities.
///
/// Communities hold sorted, duplicate-free member lists; `membership(v)` holds
/// the sorted indices of the communities containing `v`. Both views are kept
/// in sync by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    communities: Vec<Vec<VertexId>>,
    membership: Vec<Vec<CommunityId>>,
}

impl Cover {
    /// Build a cover over `0..n`. Members are sorted and deduplicated.
    pub fn new(n: usize, mut communities: Vec<Vec<VertexId>>) -> Result<Self, CoverError> {
        if n == 0 {
            return Err(CoverError::NoVertices);
        }
        let mut membership = vec![Vec::new(); n];
        for (c, members) in communities.iter_mut().enumerate() {
            members.sort_unstable();
            members.dedup();
            if members.is_empty() {
                return Err(CoverError::EmptyCommunity(c));
            }
            for &v in members.iter() {
                let slot = membership.get_mut(v as usize).ok_or(CoverError::VertexOutOfRange {
                    vertex: v,
                    community: c,
                    n,
                })?;
                slot.push(c as CommunityId);
            }
        }
        if let Some(v) = membership.iter().position(Vec::is_empty) {
            return Err(CoverError::Uncovered(v as VertexId));
        }
        Ok(Self {
            communities,
            membership,
        })
    }

    /// A partition from one community label per vertex. Labels need not be dense.
    pub fn from_labels(labels: &[usize]) -> Result<Self, CoverError> {
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut communities: Vec<Vec<VertexId>> = Vec::new();
        for (v, &l) in labels.iter().enumerate() {
            let idx = *index.entry(l).or_insert_with(|| {
                communities.push(Vec::new());
                communities.len() - 1
            });
            communities[idx].push(v as VertexId);
        }
        Self::new(labels.len(), communities)
    }

    /// Reorder communities by their smallest member (ties by full member list).
    pub fn canonicalize(mut self) -> Self {
        self.communities.sort_unstable();
        let n = self.vertex_count();
        Self::new(n, core::mem::take(&mut self.communities)).expect("canonicalize keeps a valid cover valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.membership.len()
    }

    pub fn community_count(&self) -> usize {
        self.communities.len()
    }

    pub fn communities(&self) -> &[Vec<VertexId>] {
        &self.communities
    }

    pub fn community(&self, c: CommunityId) -> &[VertexId] {
        &self.communities[c as usize]
    }

    pub fn memberships(&self, v: VertexId) -> &[CommunityId] {
        &self.membership[v as usize]
    }

    pub fn is_overlapping(&self, v: VertexId) -> bool {
        self.membership[v as usize].len() > 1
    }

    /// Vertices with more than one membership, ascending.
    pub fn overlapping_vertices(&self) -> Vec<VertexId> {
        (0..self.vertex_count() as VertexId)
            .filter(|&v| self.is_overlapping(v))
            .collect()
    }

    /// Total number of (vertex, community) memberships.
    pub fn membership_total(&self) -> usize {
        self.communities.iter().map(Vec::len).sum()
    }

    /// Re-check all invariants from scratch.
    pub fn check_invariants(&self) -> Result<(), CoverError> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(CoverError::NoVertices);
        }
        let mut seen = vec![Vec::new(); n];
        for (c, members) in self.communities.iter().enumerate() {
            if members.is_empty() {
                return Err(CoverError::EmptyCommunity(c));
            }
            for (i, &v) in members.iter().enumerate() {
                if v as usize >= n {
                    return Err(CoverError::VertexOutOfRange {
                        vertex: v,
                        community: c,
                        n,
                    });
                }
                if i > 0 && members[i - 1] >= v {
                    return Err(CoverError::Inconsistent {
                        vertex: v,
                        community: c,
                    });
                }
                seen[v as usize].push(c as CommunityId);
            }
        }
        for (v, (expected, actual)) in seen.iter().zip(&self.membership).enumerate() {
            if expected.is_empty() {
                return Err(CoverError::Uncovered(v as VertexId));
            }
            if expected != actual {
                let community = expected
                    .iter()
                    .chain(actual)
                    .find(|c| !(expected.contains(c) && actual.contains(c)))
                    .copied()
                    .unwrap_or(expected[0]);
                return Err(CoverError::Inconsistent {
                    vertex: v as VertexId,
                    community: community as usize,
                });
            }
        }
        Ok(())
    }

    /// Add `v` to community `c`; no-op if already a member.
    pub(crate) fn insert(&mut self, c: CommunityId, v: VertexId) {
        let members = &mut self.communities[c as usize];
        if let Err(pos) = members.binary_search(&v) {
            members.insert(pos, v);
            let m = &mut self.membership[v as usize];
            let at = m.binary_search(&c).unwrap_err();
            m.insert(at, c);
        }
    }
}
