//! Rectangle covers (non-deterministic complexity), graph equality and
//! exact graph invariants.

mod cover;
mod graph;

pub use cover::{
    graph_eq, graph_ineq, min_rect_cover, verify_graph_eq_ncc, verify_graph_ineq_bounds, verify_ncc_vs_concc, Cell,
    CoverResult, PromiseMatrix, MAX_COVER_SIDE,
};
pub use graph::{chromatic_number, clique_number, graph_invariants, independence_number, SimpleGraph};
