//! Strings over per-coordinate alphabets, prefix trees, thickness and
//! winning sets.

mod strings;
mod thick;

pub use strings::{AlphabetProfile, PrefixTree, StringSet, MAX_Q};
pub use thick::{
    brute_force_winning_set, density_bound, intersect_witness, is_prefix_thick, project_family_bound,
    thick_projections, verify_winning_size, winning_projections, winning_set, BranchingStructure, ProjectionBound,
};
