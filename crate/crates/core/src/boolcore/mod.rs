//! Ground objects: truth tables, bit strings, matrices, formulas, entropy
//! arithmetic and binary linear codes.

mod code;
mod entropy;
mod formula;
mod matrix;
mod truth_table;

pub use code::{cosets, find_linear_code, CodeSearch, LinearCode};
pub use entropy::{binary_entropy, binomial, binomial_entropy_bounds, BinomialBounds, LOG_SLACK};
pub use formula::{build_parity_formula, Depth, Formula};
pub use matrix::{apply_rowwise, eval_composition, BitString, BooleanMatrix};
pub use truth_table::TruthTable;
