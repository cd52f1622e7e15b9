//! Transcript contexts of multiplexor-composition protocols, aliveness,
//! candidate transcripts, characteristic graphs, the `G′` construction, the
//! pair events and the barrier instance.

mod alive;
mod barrier;
mod candidate;
mod context;
mod events;
mod gprime;
mod graph;
mod hardwire;

pub use alive::{check_alive, log_complexity_ceiling, AliveReport, LiveParams};
pub use barrier::{balanced_halves, barrier_construct, Barrier, BarrierSpec};
pub use candidate::{candidate_transcript, popular_transcript, CandidateRun, CandidateStep, Popular};
pub use context::{
    derive_context, derive_context_on, derive_context_standard, mux_parameters, Slice, TranscriptContext,
};
pub use events::{check_pair_events, PairEvents};
pub use gprime::{build_gprime, row_strings, FunctionTrace, GPrime, Triplet};
pub use graph::{
    adjacent, char_graph, char_graph_on, chromatic_term, intersects, verify_chromatic_bound, weakly_intersects,
    CharGraph, MAX_CHAR_VERTICES,
};
pub use hardwire::hardwire;
