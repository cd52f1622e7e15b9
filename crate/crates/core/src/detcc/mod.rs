//! Deterministic protocols, exact communication complexity and protocol
//! size by rectangle-game search, the formula-enumeration oracle, the
//! composition protocol and fortification.

mod compose;
mod fortify;
mod game;
mod oracle;
mod protocol;

pub use compose::obvious_protocol;
pub use fortify::{check_subadditivity, find_fortified_subset, is_fortified, FortifiedSubset, SubadditivityReport};
pub use game::{exact_cc, exact_protocol_size, formula_complexity_rect, optimal_protocol, RectangleGame, SearchBudget};
pub use oracle::{formula_oracle, OracleResult, MAX_ORACLE_ARITY, MAX_SIZE_CAP};
pub use protocol::{validate_protocol, Node, Player, ProtocolTree, ValidationReport};
