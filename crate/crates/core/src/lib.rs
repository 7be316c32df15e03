//! Overlapping community detection by local leader selection.
//!
//! Every vertex scores its neighbours with a [`PreferenceFunction`], keeps all
//! maximisers as its leaders, and joins the community of its highest-degree
//! leader. Vertices with several leaders are additionally placed in the
//! community of every other leader, which is what produces overlap.
//!
//! The crate is `no_std` (it needs `alloc`) and contains no IO. File formats,
//! fixtures and the command-line tool live in the `locness` crate.
//!
//! Module map:
//!
//! - [`graph`]: immutable CSR graph and its validation.
//! - [`cover`]: overlapping community assignments.
//! - [`engine`]: bulk-synchronous vertex-program simulator with message accounting.
//! - [`detect`]: the detection pipeline, expressed as a vertex program plus a fold.
//! - [`flooding`]: label-flooding baseline used for message-count comparisons.
//! - [`metrics`]: overlapping NMI, Omega index, overlap F-score.
//! - [`benchgen`]: planted-overlap benchmark generator.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod benchgen;
pub mod cover;
pub mod detect;
pub mod engine;
pub mod flooding;
pub mod graph;
pub mod metrics;
pub mod seed;
pub mod union_find;

#[cfg(any(test, feature = "oracle"))]
pub mod oracle;

pub use benchgen::{generate, GenError, GenParams};
pub use cover::{CommunityId, Cover, CoverError};
pub use detect::{
    detect, Agreement, DetectConfig, DetectError, Detection, Jaccard, LeaderAssignment, LeaderSets, Preference,
    PreferenceFunction, TiePolicy,
};
pub use engine::{EngineConfig, EngineError, EngineStats, ExecutionMode, VertexProgram};
pub use graph::{Diagnostics, Graph, GraphError, VertexId};
pub use metrics::{omega_index, overlap_fscore, overlapping_nmi, ConfusionCounts, MetricError};
