use rayon::prelude::*;
use serde::Serialize;

use super::context::{derive_context, TranscriptContext};
use crate::boolcore::{apply_rowwise, TruthTable};
use crate::halfduplex::{consistent_inputs, HdProtocol, HdTree};
use crate::ndcc::{chromatic_number, SimpleGraph};
use crate::relations::Relation;
use crate::report::{Check, Status};
use crate::{Error, Result};

/// Largest vertex set a characteristic graph may have.
pub const MAX_CHAR_VERTICES: usize = 32;

/// `G_π` on a set of inner functions; vertex `k` is `vertices[k]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharGraph {
    pub vertices: Vec<TruthTable>,
    pub graph: SimpleGraph,
    pub strong: bool,
}

/// `X_π(g_A) ∩ Y_π(g_B) ≠ ∅`.
pub fn intersects(ctx: &TranscriptContext, ga: &TruthTable, gb: &TruthTable) -> bool {
    let ys = ctx.y_pi(gb);
    ctx.x_pi(ga).iter().any(|x| ys.binary_search(x).is_ok())
}

/// Some `X ∈ X_π(g_A)`, `Y ∈ Y_π(g_B)` agree on every row where
/// `g_A(X)` and `g_B(Y)` differ.
pub fn weakly_intersects(ctx: &TranscriptContext, ga: &TruthTable, gb: &TruthTable) -> bool {
    let ys: Vec<_> = ctx.y_pi(gb).iter().map(|y| (y, apply_rowwise(gb, y).expect("arity"))).collect();
    ctx.x_pi(ga).iter().any(|x| {
        let a = apply_rowwise(ga, x).expect("arity");
        ys.iter().any(|(y, b)| a.differing(b).into_iter().all(|i| x.row(i) == y.row(i)))
    })
}

/// Adjacency in `G_π`: the (weak, when `strong`) intersection property in
/// either direction.
pub fn adjacent(ctx: &TranscriptContext, ga: &TruthTable, gb: &TruthTable, strong: bool) -> bool {
    let test = if strong { weakly_intersects } else { intersects };
    test(ctx, ga, gb) || test(ctx, gb, ga)
}

/// `G_π` on all of `V_π`.
pub fn char_graph(ctx: &TranscriptContext, strong: bool) -> Result<CharGraph> {
    char_graph_on(ctx, &ctx.v_pi(), strong)
}

/// The subgraph of `G_π` induced by `vertices`.
pub fn char_graph_on(ctx: &TranscriptContext, vertices: &[TruthTable], strong: bool) -> Result<CharGraph> {
    if vertices.len() > MAX_CHAR_VERTICES {
        return Err(Error::budget(format!("{} vertices exceed {MAX_CHAR_VERTICES}", vertices.len())));
    }
    let pairs: Vec<(usize, usize)> =
        (0..vertices.len()).flat_map(|i| (i + 1..vertices.len()).map(move |j| (i, j))).collect();
    let edges: Vec<(usize, usize)> =
        pairs.into_par_iter().filter(|&(i, j)| adjacent(ctx, &vertices[i], &vertices[j], strong)).collect();
    let graph = SimpleGraph::from_edges(vertices.len(), &edges)?;
    Ok(CharGraph { vertices: vertices.to_vec(), graph, strong })
}

fn heights(tree: &HdTree) -> Vec<u32> {
    // Children always follow their parent in the arena.
    let mut h = vec![0u32; tree.nodes.len()];
    for v in (0..tree.nodes.len()).rev() {
        if let Some(c) = tree.nodes[v].children {
            h[v] = 1 + c.iter().map(|&k| h[k]).max().unwrap_or(0);
        }
    }
    h
}

/// `log log χ − log log log χ − 4`, or `None` when `χ ≤ 2` makes it
/// undefined.
pub fn chromatic_term(chi: usize) -> Option<f64> {
    (chi > 2).then(|| {
        let ll = (chi as f64).log2().log2();
        ll - ll.log2() - 4.0
    })
}

/// Checks that the rounds after `π₁` (the deepest consistent vertex on
/// either side) cover `log log χ − log log log χ − 4` for the characteristic
/// graph of `π₁`. The check is vacuous when that term is not positive.
pub fn verify_chromatic_bound(p: &HdProtocol, rel: &Relation, pi: &[bool], strong: bool) -> Result<Check> {
    let id = if strong { "chromatic-bound-strong" } else { "chromatic-bound" };
    let ctx = derive_context(p, rel, pi)?;
    let cg = char_graph(&ctx, strong)?;
    let chi = chromatic_number(&cg.graph)?;
    let cons = consistent_inputs(p, pi)?;
    let (ha, hb) = (heights(&p.alice), heights(&p.bob));
    let remaining = cons
        .alice_vertex
        .iter()
        .map(|&(_, v)| ha[v])
        .chain(cons.bob_vertex.iter().map(|&(_, v)| hb[v]))
        .max()
        .unwrap_or(0);
    let term = chromatic_term(chi);
    let rhs = pi.len() as f64 + term.unwrap_or(0.0).max(0.0);
    let total = pi.len() as u32 + remaining;
    let margin = total as f64 - rhs;
    let detail = format!(
        "|π1| = {}, remaining = {remaining}, χ = {chi}, term = {}",
        pi.len(),
        term.map_or("undefined".to_string(), |t| format!("{t:.3}"))
    );
    let status = if margin < 0.0 {
        Status::Fail
    } else if term.is_none_or(|t| t <= 0.0) {
        Status::Vacuous
    } else {
        Status::Pass
    };
    Ok(Check::new(id, status, detail).with_margin(margin))
}
