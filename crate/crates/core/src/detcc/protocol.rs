use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::IndexSet;
use crate::boolcore::Depth;
use crate::relations::{Output, Relation};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

/// A deterministic protocol. Every node carries its rectangle as index sets
/// into the relation's domains; child `b` is the subtree after bit `b`.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ProtocolTree {
    pub x: IndexSet,
    pub y: IndexSet,
    #[serde(flatten)]
    pub node: Node,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Node {
    Leaf { output: Output },
    Internal { owner: Player, children: Box<[ProtocolTree; 2]> },
}

impl ProtocolTree {
    pub fn leaf(x: IndexSet, y: IndexSet, output: Output) -> Self {
        ProtocolTree { x, y, node: Node::Leaf { output } }
    }

    pub fn internal(x: IndexSet, y: IndexSet, owner: Player, c0: ProtocolTree, c1: ProtocolTree) -> Self {
        ProtocolTree { x, y, node: Node::Internal { owner, children: Box::new([c0, c1]) } }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.node, Node::Leaf { .. })
    }

    pub fn owner(&self) -> Option<Player> {
        match &self.node {
            Node::Internal { owner, .. } => Some(*owner),
            Node::Leaf { .. } => None,
        }
    }

    pub fn output(&self) -> Option<Output> {
        match &self.node {
            Node::Leaf { output } => Some(*output),
            Node::Internal { .. } => None,
        }
    }

    pub fn children(&self) -> Option<&[ProtocolTree; 2]> {
        match &self.node {
            Node::Internal { children, .. } => Some(children),
            Node::Leaf { .. } => None,
        }
    }

    /// A single leaf has depth 0.
    pub fn depth(&self) -> u32 {
        match self.children() {
            None => 0,
            Some([a, b]) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn depth_value(&self) -> Depth {
        Depth::Finite(self.depth())
    }

    /// Number of leaves.
    pub fn size(&self) -> u64 {
        match self.children() {
            None => 1,
            Some([a, b]) => a.size() + b.size(),
        }
    }

    /// The node reached after the bits of `path`.
    pub fn node_at(&self, path: &[bool]) -> Option<&ProtocolTree> {
        let mut v = self;
        for &b in path {
            v = &v.children()?[b as usize];
        }
        Some(v)
    }

    /// Transcript and output of the execution on `(xi, yi)`.
    pub fn run(&self, xi: u32, yi: u32) -> Option<(Vec<bool>, Output)> {
        let mut v = self;
        let mut bits = Vec::new();
        loop {
            match &v.node {
                Node::Leaf { output } => return Some((bits, *output)),
                Node::Internal { owner, children } => {
                    let b = match owner {
                        Player::Alice => children.iter().position(|c| c.x.contains(xi))?,
                        Player::Bob => children.iter().position(|c| c.y.contains(yi))?,
                    };
                    bits.push(b == 1);
                    v = &children[b];
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("protocol serializes")
    }
}

impl fmt::Display for ProtocolTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(t: &ProtocolTree, label: &str, indent: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write!(f, "{:indent$}{label}", "")?;
            match &t.node {
                Node::Leaf { output } => writeln!(f, "leaf {output}"),
                Node::Internal { owner, children } => {
                    writeln!(f, "{owner:?}")?;
                    go(&children[0], "0: ", indent + 2, f)?;
                    go(&children[1], "1: ", indent + 2, f)
                }
            }
        }
        go(self, "", 0, f)
    }
}

/// Every violated structural condition and every bad leaf.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_protocol(tree: &ProtocolTree, rel: &Relation) -> ValidationReport {
    let mut report = ValidationReport::default();
    if tree.x != IndexSet::full(rel.x_len()) || tree.y != IndexSet::full(rel.y_len()) {
        report.violations.push("root rectangle is not the full domain".into());
    }
    check_node(tree, rel, &mut Vec::new(), &mut report);
    report
}

fn path_str(path: &[bool]) -> String {
    if path.is_empty() {
        "root".into()
    } else {
        path.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

fn check_node(t: &ProtocolTree, rel: &Relation, path: &mut Vec<bool>, report: &mut ValidationReport) {
    let here = path_str(path);
    match &t.node {
        Node::Leaf { output } => {
            let Some(oi) = rel.output_index(output) else {
                report.violations.push(format!("{here}: output {output} not in relation"));
                return;
            };
            for xi in t.x.iter() {
                for yi in t.y.iter() {
                    if rel.valid_mask(xi as usize, yi as usize) >> oi & 1 == 0 {
                        report.violations.push(format!(
                            "{here}: output {output} invalid on ({}, {})",
                            rel.x_point(xi as usize),
                            rel.y_point(yi as usize)
                        ));
                        return;
                    }
                }
            }
        }
        Node::Internal { owner, children } => {
            let [c0, c1] = children.as_ref();
            let (split, kept, (s0, s1), (k0, k1)) = match owner {
                Player::Alice => (&t.x, &t.y, (&c0.x, &c1.x), (&c0.y, &c1.y)),
                Player::Bob => (&t.y, &t.x, (&c0.y, &c1.y), (&c0.x, &c1.x)),
            };
            if !s0.is_disjoint(s1) || s0.union(s1) != *split {
                report.violations.push(format!("{here}: {owner:?}'s children do not partition its set"));
            }
            if k0 != kept || k1 != kept {
                report.violations.push(format!("{here}: children change the silent player's set"));
            }
            for (b, c) in children.iter().enumerate() {
                path.push(b == 1);
                check_node(c, rel, path, report);
                path.pop();
            }
        }
    }
}
