//! Immutable undirected simple graph in compressed sparse row form.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::union_find::UnionFind;

/// Dense vertex identifier in `0..n`.
pub type VertexId = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("operation requires two distinct vertices, got {0} twice")]
    SameVertex(VertexId),
    #[error("graph invariant violated: {0}")]
    Invariant(InvariantViolation),
}

/// A broken [`Graph`] invariant, reported by [`Graph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantViolation {
    /// `v` lists `u` as a neighbour but `u` does not list `v`.
    Asymmetric {
        u: VertexId,
        v: VertexId,
    },
    SelfLoop {
        vertex: VertexId,
    },
    /// Neighbour list not strictly increasing: unsorted or duplicated entry.
    NotStrictlyIncreasing {
        vertex: VertexId,
    },
    NeighborOutOfRange {
        vertex: VertexId,
        neighbor: VertexId,
    },
    DegreeSum {
        sum: usize,
        edges: usize,
    },
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Asymmetric { u, v } => {
                write!(f, "symmetry: {v} lists {u} as neighbour but {u} does not list {v}")
            }
            Self::SelfLoop { vertex } => write!(f, "no self-loops: vertex {vertex} lists itself"),
            Self::NotStrictlyIncreasing { vertex } => write!(
                f,
                "no duplicate edges: neighbour list of {vertex} is not strictly increasing"
            ),
            Self::NeighborOutOfRange { vertex, neighbor } => {
                write!(f, "range: vertex {vertex} lists unknown neighbour {neighbor}")
            }
            Self::DegreeSum { sum, edges } => {
                write!(f, "degree sum: sum of degrees is {sum}, expected 2m = {}", 2 * edges)
            }
        }
    }
}

/// Counts of input records dropped while building a [`Graph`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

/// Result of a successful [`Graph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics {
    pub components: usize,
    pub isolated_vertices: usize,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Warning {
    Disconnected { components: usize },
    IsolatedVertices { count: usize },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Disconnected { components } => write!(
                f,
                "graph has {components} connected components; detection runs per component"
            ),
            Self::IsolatedVertices { count } => {
                write!(f, "graph has {count} isolated vertices; detection requires none")
            }
        }
    }
}

/// Undirected, unweighted simple graph.
///
/// Neighbour lists are sorted and duplicate free, so set operations on
/// neighbourhoods are linear merges.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    edges: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("m", &self.edges)
            .finish()
    }
}

impl Graph {
    /// Build from an undirected edge list over vertices `0..n`.
    ///
    /// Self-loops and repeated edges (in either orientation) are dropped and
    /// counted in the returned report.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<(Self, BuildReport), GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut report = BuildReport::default();
        let mut pairs: Vec<(VertexId, VertexId)> = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x.into(), n });
                }
            }
            if u == v {
                report.self_loops += 1;
                continue;
            }
            pairs.push((u.min(v), u.max(v)));
        }
        let raw = pairs.len();
        pairs.sort_unstable();
        pairs.dedup();
        report.duplicate_edges = raw - pairs.len();

        let mut degree = vec![0usize; n];
        for &(u, v) in &pairs {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut targets = vec![0; 2 * pairs.len()];
        // Pairs are sorted by (min, max), so each list fills in increasing order
        // for the lower endpoint; the upper endpoint's list is sorted below.
        for &(u, v) in &pairs {
            targets[cursor[u as usize]] = v;
            cursor[u as usize] += 1;
            targets[cursor[v as usize]] = u;
            cursor[v as usize] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Ok((
            Self {
                offsets,
                targets,
                edges: pairs.len(),
            },
            report,
        ))
    }

    /// Wrap raw adjacency lists without checking any invariant.
    ///
    /// Intended for tests of [`Graph::validate`] and for callers that already
    /// hold canonical adjacency; everything else should use [`Graph::from_edges`].
    pub fn from_adjacency_unchecked(adjacency: Vec<Vec<VertexId>>) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        offsets.push(0);
        let mut targets = Vec::new();
        for list in &adjacency {
            targets.extend_from_slice(list);
            offsets.push(targets.len());
        }
        Self {
            offsets,
            edges: targets.len() / 2,
            targets,
        }
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Mean degree `2m / n`.
    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges as f64 / self.vertex_count() as f64
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        0..self.vertex_count() as VertexId
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    fn check_id(&self, v: VertexId) -> Result<(), GraphError> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v.into(),
                n: self.vertex_count(),
            })
        }
    }

    /// `|Γ(u) ∩ Γ(v)|` by sorted merge.
    pub fn common_neighbor_count(&self, u: VertexId, v: VertexId) -> Result<usize, GraphError> {
        self.check_id(u)?;
        self.check_id(v)?;
        if u == v {
            return Err(GraphError::SameVertex(u));
        }
        Ok(sorted_intersection_count(self.neighbors(u), self.neighbors(v)))
    }

    /// Number of connected components; isolated vertices count as components.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        for (u, v) in self.edges() {
            uf.union(u as usize, v as usize);
        }
        uf.set_count()
    }

    /// Check every structural invariant and report connectivity.
    ///
    /// Invariant breaches are errors. A disconnected graph or isolated
    /// vertices only produce warnings.
    pub fn validate(&self) -> Result<Diagnostics, GraphError> {
        let n = self.vertex_count();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let breach = |v| Err(GraphError::Invariant(v));
        let mut degree_sum = 0;
        for v in self.vertices() {
            let list = self.neighbors(v);
            degree_sum += list.len();
            for (i, &u) in list.iter().enumerate() {
                if u as usize >= n {
                    return breach(InvariantViolation::NeighborOutOfRange { vertex: v, neighbor: u });
                }
                if u == v {
                    return breach(InvariantViolation::SelfLoop { vertex: v });
                }
                if i > 0 && list[i - 1] >= u {
                    return breach(InvariantViolation::NotStrictlyIncreasing { vertex: v });
                }
            }
        }
        for v in self.vertices() {
            for &u in self.neighbors(v) {
                if !self.has_edge(u, v) {
                    return breach(InvariantViolation::Asymmetric { u, v });
                }
            }
        }
        if degree_sum != 2 * self.edges {
            return breach(InvariantViolation::DegreeSum {
                sum: degree_sum,
                edges: self.edges,
            });
        }

        let components = self.component_count();
        let isolated_vertices = self.vertices().filter(|&v| self.degree(v) == 0).count();
        let mut warnings = Vec::new();
        if components > 1 {
            warnings.push(Warning::Disconnected { components });
        }
        if isolated_vertices > 0 {
            warnings.push(Warning::IsolatedVertices {
                count: isolated_vertices,
            });
        }
        Ok(Diagnostics {
            components,
            isolated_vertices,
            warnings,
        })
    }

    /// Copy of this graph without the given edges (either orientation).
    pub fn without_edges(&self, removed: &[(VertexId, VertexId)]) -> Self {
        let removed: BTreeSet<(VertexId, VertexId)> = removed.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
        let kept = self.edges().filter(|e| !removed.contains(e));
        Self::from_edges(self.vertex_count(), kept)
            .expect("edges of a valid graph are in range")
            .0
    }
}

/// Size of the intersection of two strictly increasing slices.
pub fn sorted_intersection_count(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}
