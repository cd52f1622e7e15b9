//! Exact, small-scale machinery for Karchmer–Wigderson relations and their
//! compositions.
//!
//! Everything here is computed by exhaustive search over explicitly
//! enumerated domains: protocol trees and their rectangles, formula
//! complexity through the rectangle game, rectangle covers, half-duplex
//! protocols with an adversarial channel, prefix-thick string sets and their
//! winning sets, and the characteristic graphs built on top of them.
//!
//! The modules mirror the layers of the construction:
//!
//! * [`boolcore`]: truth tables, matrices, formulas, entropy and linear codes.
//! * [`relations`]: communication relations as finite validity tables.
//! * [`detcc`]: deterministic protocols, the rectangle game, the formula
//!   oracle, composition protocols and fortification.
//! * [`ndcc`]: rectangle covers, graph equality and exact graph invariants.
//! * [`halfduplex`]: half-duplex protocols, execution and the multiplexor
//!   reduction.
//! * [`prefixthick`]: prefix trees, thickness and winning sets.
//! * [`structlab`]: transcript contexts, characteristic graphs and the
//!   pipelines that combine all of the above.
//! * [`suites`]: named verification suites producing [`report::Report`]s.

pub mod bits;
pub mod boolcore;
pub mod detcc;
pub mod error;
pub mod halfduplex;
pub mod ndcc;
pub mod prefixthick;
pub mod relations;
pub mod report;
pub mod structlab;
pub mod suites;

pub use error::{Error, Result};

/// Bumped whenever a solver change could alter a computed value.
pub const SOLVER_VERSION: &str = "krwlab-1";
