use std::collections::BTreeMap;

use super::tree::{Edge, HdProtocol, HdTree, Move};
use crate::boolcore::TruthTable;
use crate::detcc::{optimal_protocol, validate_protocol, Player, ProtocolTree, SearchBudget};
use crate::relations::{compose_standard, compose_strong, mux_compose, Output, Point, Relation};
use crate::{Error, Result};

/// The protocol for the multiplexor composition built from one protocol
/// per inner function, together with its relation and bookkeeping.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub protocol: HdProtocol,
    pub relation: Relation,
    /// Largest depth among the inner protocols.
    pub c: u32,
    /// Bits used to announce an entry index.
    pub index_bits: u32,
    pub strong: bool,
}

impl Reduction {
    /// `c + ⌈log(mn)⌉ + 3` for the strong composition and one less for the
    /// standard one, which skips the `a_i` bit.
    pub fn expected_depth(&self) -> u32 {
        self.c + self.index_bits + if self.strong { 3 } else { 2 }
    }
}

/// A minimum-depth protocol for `KW_f ⊛ KW_g` (or `⋄`) for every
/// non-constant `g` on `n` bits.
pub fn optimal_sub_protocols(
    f: &TruthTable,
    n: usize,
    strong: bool,
    budget: SearchBudget,
) -> Result<BTreeMap<TruthTable, ProtocolTree>> {
    let mut out = BTreeMap::new();
    for g in TruthTable::all(n).into_iter().filter(|g| !g.is_constant()) {
        let rel = if strong { compose_strong(f, &g)? } else { compose_standard(f, &g)? };
        out.insert(g, optimal_protocol(&rel, budget)?);
    }
    Ok(out)
}

struct Inner {
    rel: Relation,
    tree: ProtocolTree,
}

fn ceil_log2(k: usize) -> u32 {
    usize::BITS - (k.max(1) - 1).leading_zeros()
}

/// Where a player's simulation of its inner protocol stands after following
/// its own view, and its next move. Once the inner protocol has reached a
/// leaf, Alice pads by sending 0 and Bob by receiving, so padding rounds are
/// classical whenever both players run the same inner protocol.
fn simulate<'t>(tree: &'t ProtocolTree, me: Player, input: u32, view: &[Edge]) -> (&'t ProtocolTree, Move) {
    let mut node = tree;
    for e in view {
        match node.children() {
            None => {}
            Some(kids) => node = &kids[e.bit() as usize],
        }
    }
    let mv = match (node.owner(), node.children()) {
        (Some(owner), Some(kids)) if owner == me => {
            let side = |t: &ProtocolTree| match me {
                Player::Alice => t.x.contains(input),
                Player::Bob => t.y.contains(input),
            };
            Move::Send(side(&kids[1]))
        }
        (None, _) if me == Player::Alice => Move::Send(false),
        _ => Move::Receive,
    };
    (node, mv)
}

/// Builds the partially half-duplex protocol for `KW_f ⊛ MUX_n` (or the
/// standard composition) from inner protocols. Each player first simulates
/// the protocol for its own function for `c` rounds, padding as described at
/// [`simulate`]. A player holding a constant function (which never occurs
/// opposite the same function) pads from the start and announces entry
/// (1,1).
/// Alice then announces her entry `(i,j)`, the bit `a_i` (strong only) and
/// `X_{i,j}`; Bob answers 1 if everything checks out against his side and 0
/// otherwise, and the output is `(i,j)` or ⊥ accordingly.
pub fn reduction_transform(
    f: &TruthTable,
    n: usize,
    protocols: &BTreeMap<TruthTable, ProtocolTree>,
    strong: bool,
) -> Result<Reduction> {
    let m = f.arity();
    let relation = mux_compose(f, n, strong)?;
    let mut inner: BTreeMap<TruthTable, Inner> = BTreeMap::new();
    for g in TruthTable::all(n).into_iter().filter(|g| !g.is_constant()) {
        let tree = protocols.get(&g).ok_or_else(|| Error::invalid(format!("no protocol for g = {g}")))?;
        let rel = if strong { compose_strong(f, &g)? } else { compose_standard(f, &g)? };
        let report = validate_protocol(tree, &rel);
        if !report.is_valid() {
            return Err(Error::invalid(format!("protocol for g = {g} is invalid: {}", report.violations.join("; "))));
        }
        inner.insert(g, Inner { rel, tree: tree.clone() });
    }
    let c = inner.values().map(|p| p.tree.depth()).max().unwrap_or(0);
    let k = ceil_log2(m * n);
    let tail = if strong { k + 2 } else { k + 1 };
    let depth = c + tail + 1;

    // Each player's local view of its inner protocol: the inner relation's
    // index for its matrix, or None for a constant function.
    let locate = |p: &Point, alice: bool| -> Option<(&Inner, u32)> {
        let g = p.func()?;
        let inn = inner.get(g)?;
        let pt = Point::Matrix(p.matrix()?.clone());
        let idx = if alice { inn.rel.x_index(&pt) } else { inn.rel.y_index(&pt) }?;
        Some((inn, idx as u32))
    };
    let entry_of = |t: &ProtocolTree| match t.output() {
        Some(Output::Entry(i, j)) => Some((i, j)),
        _ => None,
    };

    let alice_strategy = |x: u32, view: &[Edge]| -> Move {
        let p = relation.x_point(x as usize);
        let local = locate(p, true);
        let r = view.len() as u32;
        let (node, mv) = match local {
            Some((inn, xi)) => {
                let (node, mv) = simulate(&inn.tree, Player::Alice, xi, &view[..view.len().min(c as usize)]);
                (Some(node), mv)
            }
            None => (None, Move::Send(false)),
        };
        if r < c {
            return mv;
        }
        let (i, j) = node.and_then(entry_of).unwrap_or((0, 0));
        let matrix = p.matrix().unwrap();
        let a_i = p.func().unwrap().eval(matrix.row(i).value());
        let t = r - c;
        if t < k {
            let idx = (i * n + j) as u32;
            Move::Send(idx >> (k - 1 - t) & 1 == 1)
        } else if strong && t == k {
            Move::Send(a_i)
        } else if t < tail {
            Move::Send(matrix.entry(i, j))
        } else if t == tail {
            Move::Receive
        } else if view[view.len() - 1] == Edge::Rc(true) {
            Move::Halt(Output::Entry(i, j))
        } else {
            Move::Halt(Output::Bottom)
        }
    };

    let bob_strategy = |y: u32, view: &[Edge]| -> Move {
        let p = relation.y_point(y as usize);
        let local = locate(p, false);
        let r = view.len() as u32;
        let (node, mv) = match local {
            Some((inn, yi)) => {
                let (node, mv) = simulate(&inn.tree, Player::Bob, yi, &view[..view.len().min(c as usize)]);
                (Some(node), mv)
            }
            None => (None, Move::Receive),
        };
        if r < c {
            return mv;
        }
        let t = r - c;
        if t < tail {
            return Move::Receive;
        }
        let heard: Vec<bool> = view[c as usize..(c + tail) as usize].iter().map(|e| e.bit()).collect();
        let idx = heard[..k as usize].iter().fold(0usize, |acc, &b| acc << 1 | b as usize);
        let x_bit = heard[tail as usize - 1];
        let accept = node.and_then(entry_of).is_some_and(|(i, j)| {
            let matrix = p.matrix().unwrap();
            let b_i = p.func().unwrap().eval(matrix.row(i).value());
            idx == i * n + j && (!strong || heard[k as usize] != b_i) && x_bit != matrix.entry(i, j)
        });
        if t == tail {
            Move::Send(accept)
        } else if accept {
            let (i, j) = node.and_then(entry_of).unwrap();
            Move::Halt(Output::Entry(i, j))
        } else {
            Move::Halt(Output::Bottom)
        }
    };

    let alice = HdTree::from_strategy(relation.x_len(), depth, alice_strategy)?;
    let bob = HdTree::from_strategy(relation.y_len(), depth, bob_strategy)?;
    let protocol = HdProtocol { x_len: relation.x_len(), y_len: relation.y_len(), alice, bob };
    Ok(Reduction { protocol, relation, c, index_bits: k, strong })
}
