//! Overlapping community detection by local leader selection.
//!
//! The pipeline has four stages:
//!
//! 1. [`select_leaders`]: each vertex scores its neighbours and keeps every
//!    maximiser as a leader. Runs on the vertex engine.
//! 2. [`choose_main_leaders`]: the leader of highest degree becomes the main
//!    leader; degree ties follow the [`TiePolicy`].
//! 3. [`merge_step`]: every vertex's community is merged with its main
//!    leader's, giving the weakly connected components of `v → â_v`.
//! 4. [`overlap_step`]: a vertex with several leaders also joins the
//!    community of each non-main leader, without merging.

mod leaders;
mod preference;

use alloc::vec::Vec;

pub use leaders::{
    choose_main_leaders, select_leaders, select_leaders_direct, LeaderAssignment, LeaderMessage, LeaderProgram,
    LeaderSets, LeaderViolation, TiePolicy,
};
pub use preference::{Agreement, Jaccard, Preference, PreferenceFunction};

use crate::cover::{CommunityId, Cover};
use crate::engine::{EngineConfig, EngineError, EngineStats, ExecutionMode};
use crate::graph::{Graph, VertexId};
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DetectError {
    #[error("vertex {0} is isolated; every vertex needs at least one neighbour")]
    IsolatedVertex(VertexId),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("leader selection did not finish within {supersteps} supersteps")]
    NotConverged { supersteps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectConfig {
    pub seed: u64,
    pub preference: Preference,
    pub tie_policy: TiePolicy,
    pub mode: ExecutionMode,
}

impl Default for DetectConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            preference: Preference::Agreement,
            tie_policy: TiePolicy::Random,
            mode: ExecutionMode::Sequential,
        }
    }
}

impl DetectConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn engine(&self) -> EngineConfig {
        EngineConfig {
            seed: self.seed,
            // request, reply, score
            max_supersteps: 4,
            mode: self.mode,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Detection {
    pub cover: Cover,
    pub leaders: LeaderAssignment,
    pub stats: EngineStats,
}

/// Union every vertex with its main leader; communities are numbered by
/// their smallest member.
pub fn merge_step(la: &LeaderAssignment) -> Cover {
    let order: Vec<VertexId> = (0..la.vertex_count() as VertexId).collect();
    merge_step_in_order(la, &order)
}

/// [`merge_step`] visiting vertices in `order`. The result is the same for
/// every permutation.
pub fn merge_step_in_order(la: &LeaderAssignment, order: &[VertexId]) -> Cover {
    let n = la.vertex_count();
    let mut uf = UnionFind::new(n);
    for &v in order {
        uf.union(v as usize, la.main_leader(v) as usize);
    }
    let labels = uf.labels();
    Cover::from_labels(&labels).expect("every vertex carries a label")
}

/// Add each multi-leader vertex to the community of every non-main leader.
///
/// "The community of `a`" is `a`'s community in the merged cover, so
/// additions never chain.
pub fn overlap_step(la: &LeaderAssignment, cover: Cover) -> Cover {
    let order: Vec<VertexId> = (0..la.vertex_count() as VertexId).collect();
    overlap_step_in_order(la, cover, &order)
}

/// [`overlap_step`] visiting vertices in `order`.
pub fn overlap_step_in_order(la: &LeaderAssignment, mut cover: Cover, order: &[VertexId]) -> Cover {
    let home: Vec<CommunityId> = (0..cover.vertex_count() as VertexId)
        .map(|v| cover.memberships(v)[0])
        .collect();
    for &v in order {
        let leaders = la.leaders(v);
        if leaders.len() < 2 {
            continue;
        }
        let main = la.main_leader(v);
        for &a in leaders.iter().filter(|&&a| a != main) {
            cover.insert(home[a as usize], v);
        }
    }
    cover
}

fn fold(graph: &Graph, sets: LeaderSets, cfg: &DetectConfig) -> (Cover, LeaderAssignment) {
    let la = choose_main_leaders(graph, sets, cfg.tie_policy, cfg.seed);
    let cover = overlap_step(&la, merge_step(&la));
    (cover, la)
}

/// Full pipeline, with leader selection running on the vertex engine.
pub fn detect(graph: &Graph, cfg: &DetectConfig) -> Result<Detection, DetectError> {
    let (sets, stats) = select_leaders(graph, &cfg.preference, &cfg.engine())?;
    let (cover, leaders) = fold(graph, sets, cfg);
    Ok(Detection { cover, leaders, stats })
}

/// Full pipeline with leader selection as a direct loop. Produces the same
/// cover as [`detect`] for the same configuration.
pub fn detect_sequential(graph: &Graph, cfg: &DetectConfig) -> Result<(Cover, LeaderAssignment), DetectError> {
    let sets = select_leaders_direct(graph, &cfg.preference)?;
    Ok(fold(graph, sets, cfg))
}
