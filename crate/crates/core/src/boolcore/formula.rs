use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::TruthTable;

/// Formula or protocol depth, with `NegInf` for constant functions and empty
/// rectangles. Adding to `NegInf` saturates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Depth {
    NegInf,
    Finite(u32),
}

impl Depth {
    pub fn finite(self) -> Option<u32> {
        match self {
            Depth::NegInf => None,
            Depth::Finite(d) => Some(d),
        }
    }

    pub fn plus(self, k: u32) -> Depth {
        match self {
            Depth::NegInf => Depth::NegInf,
            Depth::Finite(d) => Depth::Finite(d + k),
        }
    }

    /// Real value, with `NegInf` mapped to negative infinity.
    pub fn as_f64(self) -> f64 {
        match self {
            Depth::NegInf => f64::NEG_INFINITY,
            Depth::Finite(d) => d as f64,
        }
    }
}

impl Ord for Depth {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Depth::NegInf, Depth::NegInf) => Ordering::Equal,
            (Depth::NegInf, _) => Ordering::Less,
            (_, Depth::NegInf) => Ordering::Greater,
            (Depth::Finite(a), Depth::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Depth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Depth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Depth::NegInf => f.write_str("-inf"),
            Depth::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// De Morgan formula: AND/OR gates over literals. Variables are 0-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Formula {
    Const(bool),
    Lit { var: usize, negated: bool },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(var: usize) -> Self {
        Formula::Lit { var, negated: false }
    }

    pub fn not_var(var: usize) -> Self {
        Formula::Lit { var, negated: true }
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// Number of leaves; constants have size 0.
    pub fn size(&self) -> usize {
        match self {
            Formula::Const(_) => 0,
            Formula::Lit { .. } => 1,
            Formula::And(a, b) | Formula::Or(a, b) => a.size() + b.size(),
        }
    }

    /// A lone literal has depth 0; constants have depth `NegInf`.
    pub fn depth(&self) -> Depth {
        match self {
            Formula::Const(_) => Depth::NegInf,
            Formula::Lit { .. } => Depth::Finite(0),
            Formula::And(a, b) | Formula::Or(a, b) => a.depth().max(b.depth()).plus(1),
        }
    }

    /// Evaluates on input index `x` of an `arity`-bit function (`x1` is the MSB).
    pub fn eval(&self, arity: usize, x: u32) -> bool {
        match self {
            Formula::Const(c) => *c,
            Formula::Lit { var, negated } => (x >> (arity - 1 - var) & 1 == 1) != *negated,
            Formula::And(a, b) => a.eval(arity, x) && b.eval(arity, x),
            Formula::Or(a, b) => a.eval(arity, x) || b.eval(arity, x),
        }
    }

    pub fn truth_table(&self, arity: usize) -> TruthTable {
        TruthTable::from_fn(arity, |x| self.eval(arity, x))
    }

    /// Negation pushed to the literals.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Const(c) => Formula::Const(!c),
            Formula::Lit { var, negated } => Formula::Lit { var: *var, negated: !negated },
            Formula::And(a, b) => Formula::or(a.negate(), b.negate()),
            Formula::Or(a, b) => Formula::and(a.negate(), b.negate()),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(c) => write!(f, "{}", *c as u8),
            Formula::Lit { var, negated } => {
                write!(f, "{}x{}", if *negated { "!" } else { "" }, var + 1)
            }
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

/// Parity of `n` variables by recursive halving:
/// `P(x) = (A ∧ ¬B) ∨ (¬A ∧ B)` where `A`, `B` are the parities of the halves.
pub fn build_parity_formula(n: usize) -> Formula {
    assert!(n >= 1);
    parity_pair(0, n).0
}

// Returns (parity, negated parity) over variables lo..hi.
fn parity_pair(lo: usize, hi: usize) -> (Formula, Formula) {
    if hi - lo == 1 {
        return (Formula::var(lo), Formula::not_var(lo));
    }
    let mid = lo + (hi - lo) / 2;
    let (a, na) = parity_pair(lo, mid);
    let (b, nb) = parity_pair(mid, hi);
    let p = Formula::or(Formula::and(a.clone(), nb.clone()), Formula::and(na.clone(), b.clone()));
    let np = Formula::or(Formula::and(a, b), Formula::and(na, nb));
    (p, np)
}
