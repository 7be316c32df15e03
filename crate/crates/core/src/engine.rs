//! Bulk-synchronous vertex-program simulator.
//!
//! A [`VertexProgram`] sees only its own state, its neighbour ids and the
//! messages delivered to it, and may address messages only to neighbours.
//! Messages sent in superstep `t` are delivered at the start of `t + 1`, with
//! each inbox ordered by sender id (emission order within a sender). Vertices
//! vote to halt and are reactivated by incoming mail. The run ends when every
//! vertex has halted and no message is in flight.
//!
//! Because inbox order and per-vertex random streams are fixed, the outcome is
//! identical in sequential and parallel execution.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, VertexId};
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("max_supersteps must be at least 1")]
    NoSupersteps,
    #[error("locality violation in superstep {superstep}: vertex {from} addressed non-neighbour {to}")]
    LocalityViolation {
        superstep: usize,
        from: VertexId,
        to: VertexId,
    },
}

/// Message counts of one engine run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EngineStats {
    pub supersteps: usize,
    pub messages_per_superstep: Vec<u64>,
    pub total_messages: u64,
}

impl EngineStats {
    fn record(&mut self, sent: u64) {
        self.supersteps += 1;
        self.messages_per_superstep.push(sent);
        self.total_messages += sent;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum ExecutionMode {
    #[default]
    Sequential,
    /// Vertex programs of one superstep run on the rayon pool.
    #[cfg(feature = "parallel")]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    pub seed: u64,
    pub max_supersteps: usize,
    pub mode: ExecutionMode,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_supersteps: 64,
            mode: ExecutionMode::Sequential,
        }
    }
}

/// Decision returned by [`VertexProgram::compute`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vote {
    Continue,
    Halt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope<M> {
    pub from: VertexId,
    pub payload: M,
}

/// What a vertex may know about itself during a superstep.
#[derive(Debug)]
pub struct VertexContext<'a> {
    vertex: VertexId,
    superstep: usize,
    neighbors: &'a [VertexId],
    seed: u64,
}

impl VertexContext<'_> {
    pub fn vertex(&self) -> VertexId {
        self.vertex
    }

    pub fn superstep(&self) -> usize {
        self.superstep
    }

    pub fn neighbors(&self) -> &[VertexId] {
        self.neighbors
    }

    pub fn degree(&self) -> usize {
        self.neighbors.len()
    }

    /// Random stream private to this vertex and superstep.
    pub fn rng(&self) -> ChaCha8Rng {
        seed::rng(self.seed, &[u64::from(self.vertex), self.superstep as u64])
    }
}

/// Messages queued by one vertex during one superstep.
#[derive(Debug)]
pub struct Outbox<M> {
    queued: Vec<(VertexId, M)>,
}

impl<M> Outbox<M> {
    fn new() -> Self {
        Self { queued: Vec::new() }
    }

    /// Queue `payload` for `to`. Non-neighbour addresses fail the run.
    pub fn send(&mut self, to: VertexId, payload: M) {
        self.queued.push((to, payload));
    }

    pub fn len(&self) -> usize {
        self.queued.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queued.is_empty()
    }
}

impl<M: Clone> Outbox<M> {
    pub fn send_to_all(&mut self, neighbors: &[VertexId], payload: M) {
        self.queued.extend(neighbors.iter().map(|&u| (u, payload.clone())));
    }
}

/// A per-vertex program in the think-like-a-vertex model.
pub trait VertexProgram: Sync {
    type State: Send;
    type Message: Send + Sync;

    fn init(&self, ctx: &VertexContext<'_>) -> Self::State;

    /// Run one superstep for an active vertex.
    fn compute(
        &self,
        ctx: &VertexContext<'_>,
        state: &mut Self::State,
        inbox: &[Envelope<Self::Message>],
        outbox: &mut Outbox<Self::Message>,
    ) -> Vote;
}

#[derive(Debug)]
pub struct RunOutcome<S> {
    pub states: Vec<S>,
    pub stats: EngineStats,
    /// `false` when `max_supersteps` ran out before quiescence.
    pub converged: bool,
}

struct Step<M> {
    vote: Vote,
    sent: Vec<(VertexId, M)>,
}

#[allow(clippy::too_many_arguments)]
fn step_vertex<P: VertexProgram>(
    program: &P,
    graph: &Graph,
    seed: u64,
    superstep: usize,
    v: usize,
    state: &mut P::State,
    halted: bool,
    inbox: &[Envelope<P::Message>],
) -> Option<Step<P::Message>> {
    if halted && inbox.is_empty() {
        return None;
    }
    let vertex = v as VertexId;
    let ctx = VertexContext {
        vertex,
        superstep,
        neighbors: graph.neighbors(vertex),
        seed,
    };
    let mut outbox = Outbox::new();
    let vote = program.compute(&ctx, state, inbox, &mut outbox);
    Some(Step {
        vote,
        sent: outbox.queued,
    })
}

/// Execute `program` on every vertex of `graph` until quiescence.
pub fn run<P: VertexProgram>(
    graph: &Graph,
    program: &P,
    config: &EngineConfig,
) -> Result<RunOutcome<P::State>, EngineError> {
    if config.max_supersteps == 0 {
        return Err(EngineError::NoSupersteps);
    }
    let n = graph.vertex_count();
    let mut states: Vec<P::State> = graph
        .vertices()
        .map(|v| {
            program.init(&VertexContext {
                vertex: v,
                superstep: 0,
                neighbors: graph.neighbors(v),
                seed: config.seed,
            })
        })
        .collect();
    let mut halted = vec![false; n];
    let mut inboxes: Vec<Vec<Envelope<P::Message>>> = (0..n).map(|_| Vec::new()).collect();
    let mut stats = EngineStats::default();

    for superstep in 0..config.max_supersteps {
        let steps: Vec<Option<Step<P::Message>>> = match config.mode {
            ExecutionMode::Sequential => states
                .iter_mut()
                .zip(&inboxes)
                .enumerate()
                .map(|(v, (state, inbox))| {
                    step_vertex(program, graph, config.seed, superstep, v, state, halted[v], inbox)
                })
                .collect(),
            #[cfg(feature = "parallel")]
            ExecutionMode::Parallel => {
                use rayon::prelude::*;
                let halted = &halted;
                states
                    .par_iter_mut()
                    .zip(inboxes.par_iter())
                    .enumerate()
                    .map(|(v, (state, inbox))| {
                        step_vertex(program, graph, config.seed, superstep, v, state, halted[v], inbox)
                    })
                    .collect()
            }
        };

        let mut next: Vec<Vec<Envelope<P::Message>>> = (0..n).map(|_| Vec::new()).collect();
        let mut sent = 0u64;
        // Senders are visited in increasing id, so every inbox ends up sorted by sender.
        for (v, step) in steps.into_iter().enumerate() {
            let Some(step) = step else { continue };
            let from = v as VertexId;
            halted[v] = step.vote == Vote::Halt;
            for (to, payload) in step.sent {
                if (to as usize) >= n || !graph.has_edge(from, to) {
                    return Err(EngineError::LocalityViolation { superstep, from, to });
                }
                next[to as usize].push(Envelope { from, payload });
                sent += 1;
            }
        }
        stats.record(sent);
        inboxes = next;
        if sent == 0 && halted.iter().all(|&h| h) {
            return Ok(RunOutcome {
                states,
                stats,
                converged: true,
            });
        }
    }
    Ok(RunOutcome {
        states,
        stats,
        converged: false,
    })
}
