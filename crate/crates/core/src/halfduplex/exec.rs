use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::tree::{ActionKind, Edge, HdProtocol, HdTree};
use crate::bits::IndexSet;
use crate::detcc::ValidationReport;
use crate::relations::{Output, Relation};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundClass {
    Classical,
    Wasted,
    Silent,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RoundRecord {
    pub class: RoundClass,
    pub alice: Edge,
    pub bob: Edge,
    /// Bits supplied to Alice and Bob in a silent round.
    pub adversary: Option<(bool, bool)>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ExecutionTrace {
    pub rounds: Vec<RoundRecord>,
    pub leaves: (usize, usize),
    pub output: Output,
}

/// Summary of every execution on one input pair.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Outcomes {
    pub outputs: BTreeSet<Output>,
    pub wasted: bool,
    pub silent: bool,
}

impl Outcomes {
    pub fn all_classical(&self) -> bool {
        !self.wasted && !self.silent
    }
}

type Step = (RoundClass, Edge, Edge, Option<(bool, bool)>);

fn steps(p: &HdProtocol, u: usize, v: usize, x: u32, y: u32) -> Result<Vec<(usize, usize, Step)>> {
    let (ta, tb) = (&p.alice, &p.bob);
    let a = ta.action(u, x).ok_or_else(|| Error::invalid(format!("x{x} in no child of alice vertex {u}")))?;
    let b = tb.action(v, y).ok_or_else(|| Error::invalid(format!("y{y} in no child of bob vertex {v}")))?;
    let go = |ea: Edge, eb: Edge| (ta.child(u, ea).unwrap(), tb.child(v, eb).unwrap());
    Ok(match (a, b) {
        (ActionKind::Send(s), ActionKind::Receive) => {
            let (ea, eb) = (Edge::Sd(s), Edge::Rc(s));
            let (nu, nv) = go(ea, eb);
            vec![(nu, nv, (RoundClass::Classical, ea, eb, None))]
        }
        (ActionKind::Receive, ActionKind::Send(s)) => {
            let (ea, eb) = (Edge::Rc(s), Edge::Sd(s));
            let (nu, nv) = go(ea, eb);
            vec![(nu, nv, (RoundClass::Classical, ea, eb, None))]
        }
        (ActionKind::Send(s), ActionKind::Send(t)) => {
            let (ea, eb) = (Edge::Sd(s), Edge::Sd(t));
            let (nu, nv) = go(ea, eb);
            vec![(nu, nv, (RoundClass::Wasted, ea, eb, None))]
        }
        (ActionKind::Receive, ActionKind::Receive) => {
            let mut out = Vec::with_capacity(4);
            for s in [false, true] {
                for t in [false, true] {
                    let (ea, eb) = (Edge::Rc(s), Edge::Rc(t));
                    let (nu, nv) = go(ea, eb);
                    out.push((nu, nv, (RoundClass::Silent, ea, eb, Some((s, t)))));
                }
            }
            out
        }
    })
}

fn leaf_output(p: &HdProtocol, u: usize, v: usize) -> Result<Option<Output>> {
    match (p.alice.is_leaf(u), p.bob.is_leaf(v)) {
        (false, false) => Ok(None),
        (true, true) => {
            let (oa, ob) = (p.alice.node(u).output, p.bob.node(v).output);
            match (oa, ob) {
                (Some(a), Some(b)) if a == b => Ok(Some(a)),
                _ => Err(Error::invalid(format!("leaves ({u},{v}) disagree: {oa:?} vs {ob:?}"))),
            }
        }
        _ => Err(Error::invalid(format!(
            "one player halts before the other at vertices ({u},{v}), round {}",
            p.alice.node(u).depth
        ))),
    }
}

fn check_input(p: &HdProtocol, x: u32, y: u32) -> Result<()> {
    if x as usize >= p.x_len || y as usize >= p.y_len {
        return Err(Error::invalid(format!("input pair ({x},{y}) outside the domain")));
    }
    Ok(())
}

/// Every reachable state on `(x, y)` under every adversary, explored once
/// per vertex pair.
pub fn outcomes(p: &HdProtocol, x: u32, y: u32) -> Result<Outcomes> {
    check_input(p, x, y)?;
    let mut out = Outcomes::default();
    let mut seen = HashSet::new();
    let mut stack = vec![(p.alice.root(), p.bob.root())];
    while let Some((u, v)) = stack.pop() {
        if !seen.insert((u, v)) {
            continue;
        }
        if let Some(o) = leaf_output(p, u, v)? {
            out.outputs.insert(o);
            continue;
        }
        for (nu, nv, (class, ..)) in steps(p, u, v, x, y)? {
            match class {
                RoundClass::Wasted => out.wasted = true,
                RoundClass::Silent => out.silent = true,
                RoundClass::Classical => {}
            }
            stack.push((nu, nv));
        }
    }
    Ok(out)
}

pub const MAX_TRACES: usize = 1 << 16;

/// All executions on `(x, y)`, one per sequence of adversary choices.
pub fn execute_all(p: &HdProtocol, x: u32, y: u32) -> Result<Vec<ExecutionTrace>> {
    check_input(p, x, y)?;
    fn go(
        p: &HdProtocol,
        x: u32,
        y: u32,
        u: usize,
        v: usize,
        rounds: &mut Vec<RoundRecord>,
        out: &mut Vec<ExecutionTrace>,
    ) -> Result<()> {
        if let Some(output) = leaf_output(p, u, v)? {
            if out.len() >= MAX_TRACES {
                return Err(Error::budget(format!("more than {MAX_TRACES} traces")));
            }
            out.push(ExecutionTrace { rounds: rounds.clone(), leaves: (u, v), output });
            return Ok(());
        }
        for (nu, nv, (class, alice, bob, adversary)) in steps(p, u, v, x, y)? {
            rounds.push(RoundRecord { class, alice, bob, adversary });
            go(p, x, y, nu, nv, rounds, out)?;
            rounds.pop();
        }
        Ok(())
    }
    let mut out = Vec::new();
    go(p, x, y, p.alice.root(), p.bob.root(), &mut Vec::new(), &mut out)?;
    Ok(out)
}

const MAX_MESSAGES: usize = 20;

fn structural(tree: &HdTree, name: &str, domain: usize, report: &mut ValidationReport) {
    if tree.nodes.is_empty() {
        report.violations.push(format!("{name}: empty tree"));
        return;
    }
    if tree.node(0).set != IndexSet::full(domain) {
        report.violations.push(format!("{name}: root set is not the full domain"));
    }
    for (i, n) in tree.nodes.iter().enumerate() {
        let Some(c) = n.children else {
            if !n.set.is_empty() && n.output.is_none() {
                report.violations.push(format!("{name}: leaf {i} has inputs but no output"));
            }
            continue;
        };
        let [r0, r1, s0, s1] = c.map(|k| &tree.nodes[k].set);
        if r0 != r1 {
            report.violations.push(format!("{name}: vertex {i} has different receive(0)/receive(1) sets"));
        }
        if !(r0.is_disjoint(s0) && r0.is_disjoint(s1) && s0.is_disjoint(s1)) {
            report.violations.push(format!("{name}: children of vertex {i} overlap"));
        }
        if r0.union(s0).union(s1) != n.set {
            report.violations.push(format!("{name}: children of vertex {i} do not cover its set"));
        }
        if c.iter().any(|&k| tree.nodes[k].depth != n.depth + 1) {
            report.violations.push(format!("{name}: vertex {i} has a child at the wrong depth"));
        }
    }
}

/// Checks the tree bullets and, by exhaustive execution, that both players
/// reach leaves together with equal outputs.
pub fn validate_hd(p: &HdProtocol) -> ValidationReport {
    let mut report = ValidationReport { violations: Vec::new() };
    structural(&p.alice, "alice", p.x_len, &mut report);
    structural(&p.bob, "bob", p.y_len, &mut report);
    if p.alice.depth() != p.bob.depth() {
        report.violations.push(format!("tree depths differ: {} vs {}", p.alice.depth(), p.bob.depth()));
    }
    if !report.violations.is_empty() {
        return report;
    }
    let errors: Vec<String> = (0..p.x_len as u32)
        .into_par_iter()
        .flat_map_iter(|x| {
            (0..p.y_len as u32).filter_map(move |y| outcomes(p, x, y).err().map(|e| format!("on ({x},{y}): {e}")))
        })
        .collect();
    let total = errors.len();
    report.violations.extend(errors.into_iter().take(MAX_MESSAGES));
    if total > MAX_MESSAGES {
        report.violations.push(format!("... {} more execution violations", total - MAX_MESSAGES));
    }
    report
}

fn same_domain(p: &HdProtocol, rel: &Relation) -> Result<()> {
    if p.x_len != rel.x_len() || p.y_len != rel.y_len() {
        return Err(Error::invalid(format!(
            "protocol domain {}x{} does not match relation {}x{}",
            p.x_len,
            p.y_len,
            rel.x_len(),
            rel.y_len()
        )));
    }
    Ok(())
}

/// Lists input pairs where some execution produces an output outside the
/// relation.
pub fn check_solves(p: &HdProtocol, rel: &Relation) -> Result<ValidationReport> {
    same_domain(p, rel)?;
    let bad: Vec<String> = (0..p.x_len as u32)
        .into_par_iter()
        .flat_map_iter(|x| {
            (0..p.y_len as u32).filter_map(move |y| match outcomes(p, x, y) {
                Err(e) => Some(format!("on ({x},{y}): {e}")),
                Ok(o) => o
                    .outputs
                    .iter()
                    .find(|out| !rel.solves(x as usize, y as usize, out))
                    .map(|out| format!("on ({x},{y}): invalid output {out}")),
            })
        })
        .collect();
    let mut violations: Vec<String> = bad.iter().take(MAX_MESSAGES).cloned().collect();
    if bad.len() > MAX_MESSAGES {
        violations.push(format!("... {} more", bad.len() - MAX_MESSAGES));
    }
    Ok(ValidationReport { violations })
}

/// True iff every execution on inputs with equal function components has
/// only classical rounds.
pub fn is_partially_hd(p: &HdProtocol, rel: &Relation) -> Result<bool> {
    same_domain(p, rel)?;
    if rel.x_points().iter().chain(rel.y_points()).any(|pt| pt.func().is_none()) {
        return Err(Error::invalid("relation inputs carry no function component"));
    }
    let results: Vec<Result<bool>> = (0..p.x_len)
        .into_par_iter()
        .map(|x| {
            let ga = rel.x_point(x).func();
            for y in 0..p.y_len {
                if rel.y_point(y).func() == ga && !outcomes(p, x as u32, y as u32)?.all_classical() {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect();
    let mut all = true;
    for r in results {
        all &= r?;
    }
    Ok(all)
}

/// Inputs consistent with a transcript, with the vertex each one occupies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Consistent {
    pub x: IndexSet,
    pub y: IndexSet,
    /// `(input, vertex)` pairs sorted by input.
    pub alice_vertex: Vec<(u32, usize)>,
    pub bob_vertex: Vec<(u32, usize)>,
}

impl Consistent {
    pub fn is_transcript(&self) -> bool {
        !self.x.is_empty() && !self.y.is_empty()
    }
}

fn frontier(tree: &HdTree, pi: &[bool], name: &str) -> Result<(IndexSet, Vec<(u32, usize)>)> {
    let mut level = vec![tree.root()];
    for &b in pi {
        level = level
            .into_iter()
            .filter_map(|v| tree.node(v).children)
            .flat_map(|c| [c[Edge::Rc(b).slot()], c[Edge::Sd(b).slot()]])
            .filter(|&k| !tree.node(k).set.is_empty())
            .collect();
    }
    let mut pairs: Vec<(u32, usize)> =
        level.iter().flat_map(|&v| tree.node(v).set.iter().map(move |x| (x, v))).collect();
    pairs.sort_unstable();
    if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::invalid(format!(
            "{name} input {} lies in two vertices {} and {} consistent with the transcript",
            w[0].0, w[0].1, w[1].1
        )));
    }
    let set = IndexSet::from_sorted(pairs.iter().map(|p| p.0).collect());
    Ok((set, pairs))
}

/// `X_π` and `Y_π`. Errors if some input sits in two consistent vertices,
/// which a valid protocol never allows.
pub fn consistent_inputs(p: &HdProtocol, pi: &[bool]) -> Result<Consistent> {
    let (x, alice_vertex) = frontier(&p.alice, pi, "alice")?;
    let (y, bob_vertex) = frontier(&p.bob, pi, "bob")?;
    Ok(Consistent { x, y, alice_vertex, bob_vertex })
}
