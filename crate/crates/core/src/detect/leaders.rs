use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use super::preference::PreferenceFunction;
use super::DetectError;
use crate::engine::{self, EngineConfig, EngineStats, Envelope, Outbox, VertexContext, VertexProgram, Vote};
use crate::graph::{Graph, VertexId};
use crate::seed;

/// Stream tag for main-leader tie draws.
const MAIN_LEADER_STREAM: u64 = 0x6d61_696e;

/// How ties between equal-degree leaders are broken when choosing the main leader.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TiePolicy {
    /// Seeded uniform draw among the tied leaders.
    #[default]
    Random,
    /// Smallest vertex id.
    LowestId,
}

impl TiePolicy {
    pub fn name(self) -> &'static str {
        match self {
            Self::Random => "random",
            Self::LowestId => "lowest-id",
        }
    }
}

/// Leader set `A_v` of every vertex, each sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderSets {
    sets: Vec<Vec<VertexId>>,
}

impl LeaderSets {
    pub fn from_sets(mut sets: Vec<Vec<VertexId>>) -> Self {
        for s in &mut sets {
            s.sort_unstable();
            s.dedup();
        }
        Self { sets }
    }

    pub fn vertex_count(&self) -> usize {
        self.sets.len()
    }

    pub fn of(&self, v: VertexId) -> &[VertexId] {
        &self.sets[v as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[VertexId]> + '_ {
        self.sets.iter().map(Vec::as_slice)
    }
}

/// Leader sets plus the main leader `â_v` of each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderAssignment {
    sets: LeaderSets,
    main: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LeaderViolation {
    EmptyLeaderSet { vertex: VertexId },
    NotNeighbor { vertex: VertexId, leader: VertexId },
    NotArgmax { vertex: VertexId },
    MainNotLeader { vertex: VertexId },
    MainNotMaxDegree { vertex: VertexId },
}

impl fmt::Display for LeaderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyLeaderSet { vertex } => write!(f, "vertex {vertex} has no leader"),
            Self::NotNeighbor { vertex, leader } => {
                write!(f, "leader {leader} of vertex {vertex} is not a neighbour")
            }
            Self::NotArgmax { vertex } => {
                write!(f, "leader set of vertex {vertex} is not the argmax of its preference")
            }
            Self::MainNotLeader { vertex } => {
                write!(f, "main leader of vertex {vertex} is not in its leader set")
            }
            Self::MainNotMaxDegree { vertex } => {
                write!(f, "main leader of vertex {vertex} does not have maximum degree")
            }
        }
    }
}

impl LeaderAssignment {
    /// Assemble from parts. `main[v]` must belong to `sets.of(v)`.
    pub fn new(sets: LeaderSets, main: Vec<VertexId>) -> Self {
        assert_eq!(sets.vertex_count(), main.len());
        debug_assert!(main.iter().enumerate().all(|(v, m)| sets.of(v as VertexId).contains(m)));
        Self { sets, main }
    }

    pub fn vertex_count(&self) -> usize {
        self.main.len()
    }

    pub fn leaders(&self, v: VertexId) -> &[VertexId] {
        self.sets.of(v)
    }

    pub fn main_leader(&self, v: VertexId) -> VertexId {
        self.main[v as usize]
    }

    pub fn sets(&self) -> &LeaderSets {
        &self.sets
    }

    /// Check leader sets against `graph` and `pref`: non-empty, neighbours
    /// only, exactly the argmax, and main leaders of maximal degree.
    pub fn check_invariants<F: PreferenceFunction + ?Sized>(
        &self,
        graph: &Graph,
        pref: &F,
    ) -> Result<(), LeaderViolation> {
        for v in graph.vertices() {
            let leaders = self.leaders(v);
            if leaders.is_empty() {
                return Err(LeaderViolation::EmptyLeaderSet { vertex: v });
            }
            if let Some(&leader) = leaders.iter().find(|&&a| !graph.has_edge(v, a)) {
                return Err(LeaderViolation::NotNeighbor { vertex: v, leader });
            }
            if leaders != argmax_neighbors(graph, v, pref).as_slice() {
                return Err(LeaderViolation::NotArgmax { vertex: v });
            }
            let main = self.main_leader(v);
            if !leaders.contains(&main) {
                return Err(LeaderViolation::MainNotLeader { vertex: v });
            }
            if leaders.iter().any(|&a| graph.degree(a) > graph.degree(main)) {
                return Err(LeaderViolation::MainNotMaxDegree { vertex: v });
            }
        }
        Ok(())
    }
}

/// Neighbours of `v` that maximise `pref`, ascending.
fn argmax_neighbors<F: PreferenceFunction + ?Sized>(graph: &Graph, v: VertexId, pref: &F) -> Vec<VertexId> {
    argmax(
        graph
            .neighbors(v)
            .iter()
            .map(|&u| (u, pref.score(graph.neighbors(v), u, graph.neighbors(u)))),
    )
}

fn argmax(scored: impl Iterator<Item = (VertexId, f64)>) -> Vec<VertexId> {
    let mut best = f64::NEG_INFINITY;
    let mut out = Vec::new();
    for (u, s) in scored {
        if s > best {
            best = s;
            out.clear();
            out.push(u);
        } else if s == best {
            out.push(u);
        }
    }
    out
}

fn require_no_isolated(graph: &Graph) -> Result<(), DetectError> {
    match graph.vertices().find(|&v| graph.degree(v) == 0) {
        Some(v) => Err(DetectError::IsolatedVertex(v)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone)]
pub enum LeaderMessage {
    /// "Send me your neighbour list."
    Request,
    Reply(Arc<[VertexId]>),
}

/// Leader selection as a vertex program: request, reply, then score.
///
/// Superstep 0 sends a request to every neighbour, superstep 1 answers each
/// request with the vertex's neighbour list, and superstep 2 scores the
/// replies. Total traffic is exactly `4m` messages.
#[derive(Debug)]
pub struct LeaderProgram<'p, F: ?Sized> {
    pref: &'p F,
}

impl<'p, F: PreferenceFunction + ?Sized> LeaderProgram<'p, F> {
    pub fn new(pref: &'p F) -> Self {
        Self { pref }
    }
}

impl<F: PreferenceFunction + ?Sized> VertexProgram for LeaderProgram<'_, F> {
    type State = Vec<VertexId>;
    type Message = LeaderMessage;

    fn init(&self, _: &VertexContext<'_>) -> Self::State {
        Vec::new()
    }

    fn compute(
        &self,
        ctx: &VertexContext<'_>,
        leaders: &mut Self::State,
        inbox: &[Envelope<LeaderMessage>],
        outbox: &mut Outbox<LeaderMessage>,
    ) -> Vote {
        if ctx.superstep() == 0 {
            outbox.send_to_all(ctx.neighbors(), LeaderMessage::Request);
            return Vote::Halt;
        }
        let mut list: Option<Arc<[VertexId]>> = None;
        let mut replies = Vec::new();
        for msg in inbox {
            match &msg.payload {
                LeaderMessage::Request => {
                    let list = list.get_or_insert_with(|| Arc::from(ctx.neighbors()));
                    outbox.send(msg.from, LeaderMessage::Reply(Arc::clone(list)));
                }
                LeaderMessage::Reply(theirs) => replies.push((msg.from, theirs)),
            }
        }
        if !replies.is_empty() {
            *leaders = argmax(
                replies
                    .iter()
                    .map(|(u, theirs)| (*u, self.pref.score(ctx.neighbors(), *u, theirs))),
            );
        }
        Vote::Halt
    }
}

/// Compute every `A_v` on the vertex engine.
pub fn select_leaders<F: PreferenceFunction + ?Sized>(
    graph: &Graph,
    pref: &F,
    config: &EngineConfig,
) -> Result<(LeaderSets, EngineStats), DetectError> {
    require_no_isolated(graph)?;
    let out = engine::run(graph, &LeaderProgram::new(pref), config)?;
    if !out.converged {
        return Err(DetectError::NotConverged {
            supersteps: out.stats.supersteps,
        });
    }
    Ok((LeaderSets { sets: out.states }, out.stats))
}

/// Compute every `A_v` with a plain loop over the graph, without the engine.
pub fn select_leaders_direct<F: PreferenceFunction + ?Sized>(
    graph: &Graph,
    pref: &F,
) -> Result<LeaderSets, DetectError> {
    require_no_isolated(graph)?;
    Ok(LeaderSets {
        sets: graph.vertices().map(|v| argmax_neighbors(graph, v, pref)).collect(),
    })
}

/// Pick `â_v`: the leader of maximum degree, ties broken by `policy`.
///
/// Random draws for vertex `v` come from a stream keyed by `(seed, v)`, so the
/// result does not depend on iteration order.
pub fn choose_main_leaders(graph: &Graph, sets: LeaderSets, policy: TiePolicy, seed: u64) -> LeaderAssignment {
    let main = graph
        .vertices()
        .map(|v| {
            let leaders = sets.of(v);
            let top = leaders
                .iter()
                .map(|&a| graph.degree(a))
                .max()
                .expect("non-empty leader set");
            let tied: Vec<VertexId> = leaders.iter().copied().filter(|&a| graph.degree(a) == top).collect();
            match (tied.len(), policy) {
                (1, _) | (_, TiePolicy::LowestId) => tied[0],
                (k, TiePolicy::Random) => {
                    let mut rng = seed::rng(seed, &[MAIN_LEADER_STREAM, u64::from(v)]);
                    tied[rng.gen_range(0..k)]
                }
            }
        })
        .collect();
    LeaderAssignment { sets, main }
}
