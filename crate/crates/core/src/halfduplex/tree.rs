use std::fmt;

use serde::Serialize;

use crate::bits::IndexSet;
use crate::detcc::{Node, Player, ProtocolTree};
use crate::relations::Output;
use crate::{Error, Result};

/// Edge label: what the player did in a round and which bit it saw or sent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Edge {
    Rc(bool),
    Sd(bool),
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Rc(false), Edge::Rc(true), Edge::Sd(false), Edge::Sd(true)];

    pub fn slot(self) -> usize {
        match self {
            Edge::Rc(b) => b as usize,
            Edge::Sd(b) => 2 + b as usize,
        }
    }

    pub fn bit(self) -> bool {
        match self {
            Edge::Rc(b) | Edge::Sd(b) => b,
        }
    }

    pub fn is_send(self) -> bool {
        matches!(self, Edge::Sd(_))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Edge::Rc(b) => write!(f, "rc({})", *b as u8),
            Edge::Sd(b) => write!(f, "sd({})", *b as u8),
        }
    }
}

/// A player's decision at a vertex.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Move {
    Send(bool),
    Receive,
    Halt(Output),
}

#[derive(Clone, Debug, Serialize)]
pub struct HdNode {
    pub set: IndexSet,
    pub depth: u32,
    /// Children in slot order rc(0), rc(1), sd(0), sd(1); `None` at leaves.
    pub children: Option<[usize; 4]>,
    /// Output of a leaf. Empty leaves may carry none.
    pub output: Option<Output>,
}

/// One player's tree, stored as an arena with the root at index 0.
#[derive(Clone, Debug, Serialize)]
pub struct HdTree {
    pub nodes: Vec<HdNode>,
}

impl HdTree {
    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, v: usize) -> &HdNode {
        &self.nodes[v]
    }

    pub fn child(&self, v: usize, e: Edge) -> Option<usize> {
        self.nodes[v].children.map(|c| c[e.slot()])
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.nodes[v].children.is_none()
    }

    pub fn depth(&self) -> u32 {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// The edge the input takes out of `v`, if `v` is internal and contains it.
    pub fn action(&self, v: usize, input: u32) -> Option<ActionKind> {
        let c = self.nodes[v].children?;
        if self.nodes[c[0]].set.contains(input) {
            Some(ActionKind::Receive)
        } else if self.nodes[c[2]].set.contains(input) {
            Some(ActionKind::Send(false))
        } else if self.nodes[c[3]].set.contains(input) {
            Some(ActionKind::Send(true))
        } else {
            None
        }
    }

    /// Builds a tree from a strategy that maps an input and the player's own
    /// view so far to a move. Inputs sharing a vertex must agree on halting
    /// and on the output.
    pub fn from_strategy(domain: usize, max_depth: u32, strategy: impl Fn(u32, &[Edge]) -> Move) -> Result<Self> {
        let mut tree = HdTree { nodes: Vec::new() };
        let mut view = Vec::new();
        tree.grow(IndexSet::full(domain), &mut view, max_depth, &strategy)?;
        Ok(tree)
    }

    fn grow(
        &mut self,
        set: IndexSet,
        view: &mut Vec<Edge>,
        max_depth: u32,
        strategy: &impl Fn(u32, &[Edge]) -> Move,
    ) -> Result<usize> {
        let id = self.nodes.len();
        let depth = view.len() as u32;
        self.nodes.push(HdNode { set: set.clone(), depth, children: None, output: None });
        if set.is_empty() {
            return Ok(id);
        }
        let mut halt = None;
        let mut parts: [Vec<u32>; 3] = Default::default();
        for x in set.iter() {
            match strategy(x, view) {
                Move::Halt(o) => match halt {
                    None if parts.iter().all(Vec::is_empty) => halt = Some(o),
                    Some(p) if p == o => {}
                    _ => return Err(Error::invalid(format!("inputs at view {view:?} disagree on halting"))),
                },
                m => {
                    if halt.is_some() {
                        return Err(Error::invalid(format!("inputs at view {view:?} disagree on halting")));
                    }
                    let k = match m {
                        Move::Receive => 0,
                        Move::Send(b) => 1 + b as usize,
                        Move::Halt(_) => unreachable!(),
                    };
                    parts[k].push(x);
                }
            }
        }
        if let Some(o) = halt {
            self.nodes[id].output = Some(o);
            return Ok(id);
        }
        if depth >= max_depth {
            return Err(Error::invalid(format!("strategy exceeds depth {max_depth}")));
        }
        let [rc, s0, s1] = parts.map(IndexSet::from_sorted);
        let mut children = [0; 4];
        for (e, s) in Edge::ALL.into_iter().zip([rc.clone(), rc, s0, s1]) {
            view.push(e);
            children[e.slot()] = self.grow(s, view, max_depth, strategy)?;
            view.pop();
        }
        self.nodes[id].children = Some(children);
        Ok(id)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ActionKind {
    Receive,
    Send(bool),
}

/// A half-duplex protocol over `x_len × y_len` inputs.
#[derive(Clone, Debug, Serialize)]
pub struct HdProtocol {
    pub x_len: usize,
    pub y_len: usize,
    pub alice: HdTree,
    pub bob: HdTree,
}

impl HdProtocol {
    /// Communication complexity: the larger of the two tree depths (equal in
    /// a valid protocol).
    pub fn depth(&self) -> u32 {
        self.alice.depth().max(self.bob.depth())
    }

    pub fn tree(&self, p: Player) -> &HdTree {
        match p {
            Player::Alice => &self.alice,
            Player::Bob => &self.bob,
        }
    }

    /// Paired node lists, one line per vertex: `id depth [children] output |set|`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (name, t) in [("alice", &self.alice), ("bob", &self.bob)] {
            out.push_str(&format!("{name} {}\n", t.nodes.len()));
            for (i, n) in t.nodes.iter().enumerate() {
                let kids = n.children.map(|c| format!("{c:?}")).unwrap_or_else(|| "-".into());
                let o = n.output.map(|o| o.to_string()).unwrap_or_else(|| "-".into());
                out.push_str(&format!("{i} {} {kids} {o} {}\n", n.depth, n.set.len()));
            }
        }
        out
    }
}

/// Views a standard protocol as a half-duplex one: the owner of each vertex
/// sends, the other player receives.
pub fn lift_standard(tree: &ProtocolTree) -> HdProtocol {
    fn lift(t: &ProtocolTree, me: Player, depth: u32, out: &mut HdTree) -> usize {
        let id = out.nodes.len();
        let set = match me {
            Player::Alice => t.x.clone(),
            Player::Bob => t.y.clone(),
        };
        out.nodes.push(HdNode { set: set.clone(), depth, children: None, output: t.output() });
        if let Node::Internal { owner, children } = &t.node {
            let empty = |out: &mut HdTree| {
                out.nodes.push(HdNode { set: IndexSet::empty(), depth: depth + 1, children: None, output: None });
                out.nodes.len() - 1
            };
            let kids = if *owner == me {
                let r0 = empty(out);
                let r1 = empty(out);
                let s0 = lift(&children[0], me, depth + 1, out);
                let s1 = lift(&children[1], me, depth + 1, out);
                [r0, r1, s0, s1]
            } else {
                let r0 = lift(&children[0], me, depth + 1, out);
                let r1 = lift(&children[1], me, depth + 1, out);
                let s0 = empty(out);
                let s1 = empty(out);
                [r0, r1, s0, s1]
            };
            out.nodes[id].children = Some(kids);
        }
        id
    }
    let mut alice = HdTree { nodes: Vec::new() };
    let mut bob = HdTree { nodes: Vec::new() };
    lift(tree, Player::Alice, 0, &mut alice);
    lift(tree, Player::Bob, 0, &mut bob);
    HdProtocol { x_len: tree.x.len(), y_len: tree.y.len(), alice, bob }
}
