use serde::Serialize;

use super::alive::{check_alive, AliveReport, LiveParams};
use super::context::{derive_context_on, TranscriptContext};
use super::graph::{char_graph, CharGraph};
use crate::boolcore::{apply_rowwise, cosets, BitString, BooleanMatrix, LinearCode, TruthTable};
use crate::detcc::{formula_complexity_rect, SearchBudget};
use crate::halfduplex::{HdProtocol, HdTree, Move};
use crate::relations::{composition_domain, Output, Point};
use crate::report::Check;
use crate::{Error, Result};

/// Parameters of the barrier instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BarrierSpec {
    pub f: TruthTable,
    pub code: LinearCode,
    /// Ones in the first column of Alice's and Bob's matrices.
    pub w_x: usize,
    pub w_y: usize,
    pub n: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Barrier {
    /// The four announcements as a half-duplex protocol; every leaf is
    /// labeled ⊥ since only the prefix matters.
    #[serde(skip)]
    pub protocol: HdProtocol,
    pub transcript: Vec<bool>,
    /// Smallest element of the chosen coset `W`.
    pub coset: u32,
    /// `L(A_W' × f⁻¹(0))` for every coset, by representative.
    pub coset_values: Vec<(u32, u64)>,
    pub l_f: u64,
    #[serde(skip)]
    pub context: TranscriptContext,
    pub graph: CharGraph,
    /// Functions balanced on both halves fixed by the first input bit.
    pub v: Vec<TruthTable>,
    pub alive: AliveReport,
    pub checks: Vec<Check>,
}

fn first_column_weight(x: &BooleanMatrix) -> usize {
    (0..x.rows()).filter(|&i| x.entry(i, 0)).count()
}

/// Whether `g` stays balanced once its first input bit is fixed either way.
pub fn balanced_halves(g: &TruthTable) -> bool {
    let n = g.arity();
    let half = 1u32 << (n - 1);
    let ones = |lo: u32| (lo..lo + half).filter(|&v| g.eval(v)).count();
    n >= 2 && ones(0) as u32 * 2 == half && ones(half) as u32 * 2 == half
}

/// Builds the transcript of four announcements (Alice: "my first column
/// has `w_X` ones", Bob: "mine has `w_Y`", Alice: "`g(X) ∈ W`", Bob:
/// "`g(Y) ∈ W`") for the coset `W` of `C` maximizing `L(A_W × f⁻¹(0))`, and
/// checks that the strong characteristic graph has no edges. Requires
/// `w_Y − w_X > m − d(C)`: then `X, Y` differ on more rows than two strings
/// of one coset can agree on.
pub fn barrier_construct(spec: &BarrierSpec, params: &LiveParams, budget: SearchBudget) -> Result<Barrier> {
    let BarrierSpec { f, code, w_x, w_y, n } = spec;
    let (m, n) = (f.arity(), *n);
    if code.length() != m {
        return Err(Error::invalid(format!("code length {} differs from m = {m}", code.length())));
    }
    if n < 2 || m * n > 12 {
        return Err(Error::budget(format!("barrier with m = {m}, n = {n} outside n ≥ 2, mn ≤ 12")));
    }
    let d = code.distance().unwrap_or(m + 1);
    if *w_x > m || *w_y > m || *w_y as i64 - *w_x as i64 <= m as i64 - d as i64 {
        return Err(Error::invalid(format!(
            "precondition w_Y - w_X > m - d fails: w_X = {w_x}, w_Y = {w_y}, m = {m}, d = {d}"
        )));
    }

    let strings = |v: bool| -> Vec<BitString> { f.preimage(v).into_iter().map(|x| BitString::new(m, x)).collect() };
    let (ones, zeros) = (strings(true), strings(false));
    let l_f = formula_complexity_rect(&ones, &zeros, budget)?.0;
    let mut coset_values = Vec::new();
    for rep in cosets(code)? {
        let a_w: Vec<BitString> = ones.iter().filter(|a| code.same_coset(a.value(), rep)).copied().collect();
        coset_values.push((rep, formula_complexity_rect(&a_w, &zeros, budget)?.0));
    }
    let &(coset, best) = coset_values.iter().fold(&coset_values[0], |b, c| if c.1 > b.1 { c } else { b });
    let in_w = |s: &BitString| code.same_coset(s.value(), coset);
    if !ones.iter().any(in_w) || !zeros.iter().any(in_w) {
        return Err(Error::invalid(format!("coset of {coset:0m$b} misses one side of f")));
    }
    let sum: u64 = coset_values.iter().map(|c| c.1).sum();
    let mut checks = vec![Check::from_bool(
        "barrier-coset-max",
        l_f <= sum && sum <= coset_values.len() as u64 * best,
        format!("L(f) = {l_f} ≤ Σ_W' L(A_W'×f^-1(0)) = {sum} ≤ {} cosets × {best}", coset_values.len()),
    )];

    let (mut xp, mut yp) = (Vec::new(), Vec::new());
    for g in TruthTable::all(n) {
        let (xs, ys) = composition_domain(f, &g);
        xp.extend(xs.into_iter().map(|matrix| Point::MuxMatrix { func: g.clone(), matrix }));
        yp.extend(ys.into_iter().map(|matrix| Point::MuxMatrix { func: g.clone(), matrix }));
    }
    let announce = |p: &Point, weight: usize| {
        let (g, x) = (p.func().unwrap(), p.matrix().unwrap());
        (first_column_weight(x) == weight, in_w(&apply_rowwise(g, x).expect("arity")))
    };
    let alice = HdTree::from_strategy(xp.len(), 4, |i, view| {
        let (w, c) = announce(&xp[i as usize], *w_x);
        match view.len() {
            0 => Move::Send(w),
            2 => Move::Send(c),
            4 => Move::Halt(Output::Bottom),
            _ => Move::Receive,
        }
    })?;
    let bob = HdTree::from_strategy(yp.len(), 4, |i, view| {
        let (w, c) = announce(&yp[i as usize], *w_y);
        match view.len() {
            1 => Move::Send(w),
            3 => Move::Send(c),
            4 => Move::Halt(Output::Bottom),
            _ => Move::Receive,
        }
    })?;
    let protocol = HdProtocol { x_len: xp.len(), y_len: yp.len(), alice, bob };
    let transcript = vec![true; 4];
    let context = derive_context_on(&protocol, f.clone(), n, true, &xp, &yp, &transcript)?;
    let graph = char_graph(&context, true)?;
    checks.push(Check::from_bool(
        "barrier-no-edges",
        graph.graph.edge_count() == 0,
        format!("{} vertices, {} edges", graph.vertices.len(), graph.graph.edge_count()),
    ));
    let v: Vec<TruthTable> = context.v_pi().into_iter().filter(balanced_halves).collect();
    let alive = check_alive(&context, &v, params, budget)?;
    Ok(Barrier { protocol, transcript, coset, coset_values, l_f, context, graph, v, alive, checks })
}
