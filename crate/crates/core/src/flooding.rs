//! Label flooding, the message-count baseline.
//!
//! Every vertex starts knowing its own label and forwards each label the first
//! time it learns it, to all neighbours, until nobody learns anything new.
//! Two counts are reported:
//!
//! - `engine.total_messages`: one message per edge direction per superstep,
//!   carrying every label the sender learned in the previous superstep
//!   (forwarding deduplicated per label and batched per edge).
//! - `label_messages`: the same traffic if each label travelled in its own
//!   message, i.e. `Σ_labels Σ_v d_v = n · 2m` on a connected graph.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::engine::{
    self, EngineConfig, EngineError, EngineStats, Envelope, Outbox, VertexContext, VertexProgram, Vote,
};
use crate::graph::{Graph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloodingStats {
    pub engine: EngineStats,
    pub label_messages: u64,
    pub converged: bool,
}

#[derive(Debug)]
pub struct FloodState {
    known: Vec<u64>,
    label_messages: u64,
}

impl FloodState {
    fn learn(&mut self, label: VertexId) -> bool {
        let (word, bit) = (label as usize / 64, 1u64 << (label % 64));
        let fresh = self.known[word] & bit == 0;
        self.known[word] |= bit;
        fresh
    }
}

#[derive(Debug)]
struct Flood {
    words: usize,
}

impl VertexProgram for Flood {
    type State = FloodState;
    type Message = Arc<[VertexId]>;

    fn init(&self, _: &VertexContext<'_>) -> FloodState {
        FloodState {
            known: vec![0; self.words],
            label_messages: 0,
        }
    }

    fn compute(
        &self,
        ctx: &VertexContext<'_>,
        state: &mut FloodState,
        inbox: &[Envelope<Self::Message>],
        outbox: &mut Outbox<Self::Message>,
    ) -> Vote {
        let mut fresh = Vec::new();
        if ctx.superstep() == 0 {
            state.learn(ctx.vertex());
            fresh.push(ctx.vertex());
        }
        for msg in inbox {
            for &label in msg.payload.iter() {
                if state.learn(label) {
                    fresh.push(label);
                }
            }
        }
        if !fresh.is_empty() {
            state.label_messages += (fresh.len() * ctx.degree()) as u64;
            outbox.send_to_all(ctx.neighbors(), Arc::from(fresh));
        }
        Vote::Halt
    }
}

/// Flood every label through `graph` and count the traffic.
pub fn flooding_reference(graph: &Graph, max_supersteps: usize) -> Result<FloodingStats, EngineError> {
    let program = Flood {
        words: graph.vertex_count().div_ceil(64),
    };
    let config = EngineConfig {
        max_supersteps,
        ..EngineConfig::default()
    };
    let out = engine::run(graph, &program, &config)?;
    Ok(FloodingStats {
        label_messages: out.states.iter().map(|s| s.label_messages).sum(),
        engine: out.stats,
        converged: out.converged,
    })
}
