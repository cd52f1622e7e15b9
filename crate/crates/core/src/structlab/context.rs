use std::collections::BTreeMap;

use crate::boolcore::{apply_rowwise, BitString, BooleanMatrix, TruthTable};
use crate::detcc::ProtocolTree;
use crate::halfduplex::{consistent_inputs, lift_standard, HdProtocol};
use crate::relations::{Point, Relation, RelationDescriptor};
use crate::{Error, Result};

/// Consistent inputs of one inner function, split by side.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Slice {
    pub xs: Vec<BooleanMatrix>,
    pub ys: Vec<BooleanMatrix>,
}

/// The sets `X_π(g)`, `Y_π(g)` and everything derived from them, for a
/// transcript of a protocol for `KW_f ⋄ MUX_n` or `KW_f ⊛ MUX_n`.
#[derive(Clone, Debug)]
pub struct TranscriptContext {
    f: TruthTable,
    n: usize,
    strong: bool,
    transcript: Vec<bool>,
    slices: BTreeMap<TruthTable, Slice>,
}

/// `(f, n, strong)` of a multiplexor composition.
pub fn mux_parameters(rel: &Relation) -> Result<(TruthTable, usize, bool)> {
    match rel.descriptor() {
        Some(RelationDescriptor::MuxCompose { f, m, n, strong }) => Ok((TruthTable::from_hex(*m, f)?, *n, *strong)),
        _ => Err(Error::invalid("relation is not a multiplexor composition")),
    }
}

impl TranscriptContext {
    /// A context from explicit per-function sets. Matrices are sorted and
    /// deduplicated; functions with no inputs on either side are dropped.
    pub fn from_slices(
        f: TruthTable,
        n: usize,
        strong: bool,
        transcript: Vec<bool>,
        slices: BTreeMap<TruthTable, Slice>,
    ) -> Result<Self> {
        let m = f.arity();
        let mut clean = BTreeMap::new();
        for (g, mut s) in slices {
            if g.arity() != n {
                return Err(Error::ArityMismatch { expected: n, found: g.arity() });
            }
            for x in s.xs.iter().chain(&s.ys) {
                if x.rows() != m || x.cols() != n {
                    return Err(Error::invalid(format!("matrix {x} is not {m}×{n}")));
                }
            }
            s.xs.sort();
            s.xs.dedup();
            s.ys.sort();
            s.ys.dedup();
            if !s.xs.is_empty() || !s.ys.is_empty() {
                clean.insert(g, s);
            }
        }
        Ok(TranscriptContext { f, n, strong, transcript, slices: clean })
    }

    pub fn f(&self) -> &TruthTable {
        &self.f
    }

    pub fn m(&self) -> usize {
        self.f.arity()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strong(&self) -> bool {
        self.strong
    }

    pub fn transcript(&self) -> &[bool] {
        &self.transcript
    }

    /// Functions with at least one consistent input on some side.
    pub fn functions(&self) -> impl Iterator<Item = &TruthTable> {
        self.slices.keys()
    }

    pub fn x_pi(&self, g: &TruthTable) -> &[BooleanMatrix] {
        self.slices.get(g).map_or(&[], |s| &s.xs)
    }

    pub fn y_pi(&self, g: &TruthTable) -> &[BooleanMatrix] {
        self.slices.get(g).map_or(&[], |s| &s.ys)
    }

    /// `X_π(g,a) = X_π(g) ∩ g⁻¹(a)`.
    pub fn x_pi_a(&self, g: &TruthTable, a: &BitString) -> Vec<BooleanMatrix> {
        filter_by_value(self.x_pi(g), g, a)
    }

    pub fn y_pi_b(&self, g: &TruthTable, b: &BitString) -> Vec<BooleanMatrix> {
        filter_by_value(self.y_pi(g), g, b)
    }

    /// `A_π(g)`: the strings `g(X)` over `X ∈ X_π(g)`.
    pub fn a_pi(&self, g: &TruthTable) -> Vec<BitString> {
        values(self.x_pi(g), g)
    }

    pub fn b_pi(&self, g: &TruthTable) -> Vec<BitString> {
        values(self.y_pi(g), g)
    }

    /// `V_π`: functions whose consistency sets are nonempty on both sides.
    pub fn v_pi(&self) -> Vec<TruthTable> {
        self.slices.iter().filter(|(_, s)| !s.xs.is_empty() && !s.ys.is_empty()).map(|(g, _)| g.clone()).collect()
    }

    /// `|g⁻¹(a)| = ∏ |g⁻¹(a_i)|`, counted in matrices.
    pub fn preimage_size(g: &TruthTable, a: &BitString) -> u64 {
        let (ones, zeros) = (g.weight() as u64, (g.size() - g.weight()) as u64);
        (0..a.len()).map(|i| if a.bit(i) { ones } else { zeros }).product()
    }
}

fn filter_by_value(xs: &[BooleanMatrix], g: &TruthTable, a: &BitString) -> Vec<BooleanMatrix> {
    xs.iter().filter(|x| apply_rowwise(g, x).ok().as_ref() == Some(a)).cloned().collect()
}

fn values(xs: &[BooleanMatrix], g: &TruthTable) -> Vec<BitString> {
    let mut out: Vec<BitString> = xs.iter().map(|x| apply_rowwise(g, x).expect("matching arity")).collect();
    out.sort();
    out.dedup();
    out
}

/// The context of `π` in a half-duplex protocol over a multiplexor
/// composition, by an exhaustive consistency scan.
pub fn derive_context(p: &HdProtocol, rel: &Relation, pi: &[bool]) -> Result<TranscriptContext> {
    let (f, n, strong) = mux_parameters(rel)?;
    derive_context_on(p, f, n, strong, rel.x_points(), rel.y_points(), pi)
}

/// [`derive_context`] for a standard protocol, through its half-duplex lift.
pub fn derive_context_standard(tree: &ProtocolTree, rel: &Relation, pi: &[bool]) -> Result<TranscriptContext> {
    derive_context(&lift_standard(tree), rel, pi)
}

/// [`derive_context`] with the domains given as point lists, for protocols
/// whose relation is too large to tabulate.
pub fn derive_context_on(
    p: &HdProtocol,
    f: TruthTable,
    n: usize,
    strong: bool,
    x_points: &[Point],
    y_points: &[Point],
    pi: &[bool],
) -> Result<TranscriptContext> {
    if p.x_len != x_points.len() || p.y_len != y_points.len() {
        return Err(Error::invalid("protocol domains do not match the point lists"));
    }
    if pi.len() as u32 > p.depth() {
        return Err(Error::invalid(format!("transcript of length {} exceeds depth {}", pi.len(), p.depth())));
    }
    let cons = consistent_inputs(p, pi)?;
    let mut slices: BTreeMap<TruthTable, Slice> = BTreeMap::new();
    for (set, points, alice) in [(&cons.x, x_points, true), (&cons.y, y_points, false)] {
        for i in set.iter() {
            let (Some(g), Some(x)) = (points[i as usize].func(), points[i as usize].matrix()) else {
                return Err(Error::invalid(format!("point {} is not a multiplexor matrix input", points[i as usize])));
            };
            let s = slices.entry(g.clone()).or_default();
            if alice {
                s.xs.push(x.clone());
            } else {
                s.ys.push(x.clone());
            }
        }
    }
    TranscriptContext::from_slices(f, n, strong, pi.to_vec(), slices)
}
