use super::context::mux_parameters;
use crate::bits::IndexSet;
use crate::boolcore::TruthTable;
use crate::detcc::{Player, ProtocolTree};
use crate::halfduplex::{Edge, HdProtocol};
use crate::relations::{compose_standard, compose_strong, Output, Point, Relation};
use crate::{Error, Result};

/// The standard protocol `Π_g` for `KW_f ⊛ KW_g` (or `⋄`) obtained by fixing
/// both players' function to `g` in a partially half-duplex protocol over
/// the multiplexor composition. Every transcript of `Π_g` is a transcript
/// of the original protocol. Errors where a round on `g` is not classical.
pub fn hardwire(p: &HdProtocol, rel: &Relation, g: &TruthTable) -> Result<(ProtocolTree, Relation)> {
    let (f, _, strong) = mux_parameters(rel)?;
    let target = if strong { compose_strong(&f, g)? } else { compose_standard(&f, g)? };
    let lift = |points: &[Point], index: &dyn Fn(&Point) -> Option<usize>| -> Result<Vec<u32>> {
        points
            .iter()
            .map(|pt| {
                let matrix = pt.matrix().expect("composition inputs are matrices").clone();
                let q = Point::MuxMatrix { func: g.clone(), matrix };
                index(&q)
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::invalid(format!("{q} missing from the multiplexor domain")))
            })
            .collect()
    };
    let xmap = lift(target.x_points(), &|q| rel.x_index(q))?;
    let ymap = lift(target.y_points(), &|q| rel.y_index(q))?;
    let tree =
        grow(p, &xmap, &ymap, p.alice.root(), p.bob.root(), IndexSet::full(xmap.len()), IndexSet::full(ymap.len()))?;
    Ok((tree, target))
}

fn restrict(set: &IndexSet, map: &[u32], vertex_set: &IndexSet) -> IndexSet {
    IndexSet::from_sorted(set.iter().filter(|&i| vertex_set.contains(map[i as usize])).collect())
}

fn grow(
    p: &HdProtocol,
    xmap: &[u32],
    ymap: &[u32],
    u: usize,
    v: usize,
    xs: IndexSet,
    ys: IndexSet,
) -> Result<ProtocolTree> {
    let (ta, tb) = (&p.alice, &p.bob);
    if xs.is_empty() || ys.is_empty() {
        // No input reaches this leaf; ⊥ is not an output of the composition.
        let out = ta.node(u).output.filter(|o| *o != Output::Bottom).unwrap_or(Output::Entry(0, 0));
        return Ok(ProtocolTree::leaf(xs, ys, out));
    }
    match (ta.is_leaf(u), tb.is_leaf(v)) {
        (true, true) => {
            let out = ta.node(u).output.ok_or_else(|| Error::invalid(format!("alice leaf {u} has no output")))?;
            return Ok(ProtocolTree::leaf(xs, ys, out));
        }
        (false, false) => {}
        _ => return Err(Error::invalid(format!("players halt at different rounds at ({u},{v})"))),
    }
    let sends = |tree: &crate::halfduplex::HdTree, w: usize, map: &[u32], set: &IndexSet| {
        let c = tree.node(w).children.expect("internal");
        let cnt = |e: Edge| restrict(set, map, &tree.node(c[e.slot()]).set).len();
        (cnt(Edge::Sd(false)) + cnt(Edge::Sd(true)), cnt(Edge::Rc(false)))
    };
    let (a_send, a_recv) = sends(ta, u, xmap, &xs);
    let (b_send, b_recv) = sends(tb, v, ymap, &ys);
    let owner = match (a_send, a_recv, b_send, b_recv) {
        (s, 0, 0, r) if s == xs.len() && r == ys.len() => Player::Alice,
        (0, r, s, 0) if r == xs.len() && s == ys.len() => Player::Bob,
        _ => return Err(Error::invalid(format!("round at ({u},{v}) is not classical on this function"))),
    };
    let (cu, cv) = (ta.node(u).children.unwrap(), tb.node(v).children.unwrap());
    let mut kids = Vec::with_capacity(2);
    for bit in [false, true] {
        let (eu, ev) = match owner {
            Player::Alice => (Edge::Sd(bit), Edge::Rc(bit)),
            Player::Bob => (Edge::Rc(bit), Edge::Sd(bit)),
        };
        let (nu, nv) = (cu[eu.slot()], cv[ev.slot()]);
        let nx = restrict(&xs, xmap, &ta.node(nu).set);
        let ny = restrict(&ys, ymap, &tb.node(nv).set);
        kids.push(grow(p, xmap, ymap, nu, nv, nx, ny)?);
    }
    let c1 = kids.pop().unwrap();
    let c0 = kids.pop().unwrap();
    Ok(ProtocolTree::internal(xs, ys, owner, c0, c1))
}
