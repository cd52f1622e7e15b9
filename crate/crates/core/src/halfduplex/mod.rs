//! Half-duplex protocols with adversary: two 4-ary trees, one per player.
//!
//! Each internal vertex has children for the four edge labels receive(0),
//! receive(1), send(0) and send(1). Alice's tree partitions her inputs, Bob's
//! tree partitions his, and the players advance in lockstep, one round per
//! level.

mod exec;
mod reduction;
mod tree;

pub use exec::{
    check_solves, consistent_inputs, execute_all, is_partially_hd, outcomes, validate_hd, Consistent, ExecutionTrace,
    Outcomes, RoundClass, RoundRecord,
};
pub use reduction::{optimal_sub_protocols, reduction_transform, Reduction};
pub use tree::{lift_standard, Edge, HdNode, HdProtocol, HdTree, Move};
