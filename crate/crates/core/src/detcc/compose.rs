use crate::bits::IndexSet;
use crate::boolcore::{apply_rowwise, BitString, TruthTable};
use crate::relations::{compose_standard, kw, Output, Point, Relation};
use crate::{Error, Result};

use super::{validate_protocol, Node, Player, ProtocolTree};

/// The protocol for `KW_f ⋄ KW_g` that first runs `Π_f` on `a = g(X)` and
/// `b = g(Y)`, and then `Π_g` on the selected rows `X_i`, `Y_i`.
///
/// The result is indexed by the domain of [`compose_standard`]`(f, g)`,
/// which is also the domain of the strong composition; the row it selects
/// always has `a_i ≠ b_i`, so it solves both.
pub fn obvious_protocol(
    f: &TruthTable,
    g: &TruthTable,
    pi_f: &ProtocolTree,
    pi_g: &ProtocolTree,
) -> Result<ProtocolTree> {
    let rf = kw(f)?;
    let rg = kw(g)?;
    for (name, p, r) in [("f", pi_f, &rf), ("g", pi_g, &rg)] {
        let report = validate_protocol(p, r);
        if !report.is_valid() {
            return Err(Error::invalid(format!("protocol for KW_{name} is invalid: {}", report.violations.join("; "))));
        }
    }
    let composed = compose_standard(f, g)?;
    let splice = Splice { g, pi_g, rf: &rf, rg: &rg, composed: &composed };
    Ok(splice.outer(pi_f, IndexSet::full(composed.x_len()), IndexSet::full(composed.y_len())))
}

struct Splice<'a> {
    g: &'a TruthTable,
    pi_g: &'a ProtocolTree,
    rf: &'a Relation,
    rg: &'a Relation,
    composed: &'a Relation,
}

impl Splice<'_> {
    fn point(&self, alice: bool, k: u32) -> &Point {
        if alice {
            self.composed.x_point(k as usize)
        } else {
            self.composed.y_point(k as usize)
        }
    }

    fn column(&self, p: &Point) -> BitString {
        apply_rowwise(self.g, p.matrix().expect("matrix input")).expect("arity")
    }

    fn filter(&self, set: &IndexSet, alice: bool, keep: impl Fn(&Point) -> bool) -> IndexSet {
        set.iter().filter(|&k| keep(self.point(alice, k))).collect()
    }

    fn outer(&self, node: &ProtocolTree, xs: IndexSet, ys: IndexSet) -> ProtocolTree {
        match &node.node {
            Node::Internal { owner, children } => {
                let [c0, c1] = children.as_ref();
                let split = |c: &ProtocolTree| match owner {
                    Player::Alice => {
                        let part = self.filter(&xs, true, |p| {
                            let a = self.rf.x_index(&Point::Str(self.column(p)));
                            a.is_some_and(|a| c.x.contains(a as u32))
                        });
                        self.outer(c, part, ys.clone())
                    }
                    Player::Bob => {
                        let part = self.filter(&ys, false, |p| {
                            let b = self.rf.y_index(&Point::Str(self.column(p)));
                            b.is_some_and(|b| c.y.contains(b as u32))
                        });
                        self.outer(c, xs.clone(), part)
                    }
                };
                let (k0, k1) = (split(c0), split(c1));
                ProtocolTree::internal(xs, ys, *owner, k0, k1)
            }
            Node::Leaf { output } => {
                let Output::Coord(i) = *output else { unreachable!("validated KW protocol outputs coordinates") };
                // At a valid leaf every a shares the same a_i.
                let alice_has_one =
                    node.x.iter().next().is_none_or(|a| self.rf.x_point(a as usize).string().unwrap().bit(i));
                self.inner(self.pi_g, i, !alice_has_one, xs, ys)
            }
        }
    }

    // Runs the inner protocol on row `i`. With `swapped`, Bob holds the row
    // in g⁻¹(1) and every inner node changes owner.
    fn inner(&self, node: &ProtocolTree, i: usize, swapped: bool, xs: IndexSet, ys: IndexSet) -> ProtocolTree {
        match &node.node {
            Node::Leaf { output } => {
                let Output::Coord(j) = *output else { unreachable!("validated KW protocol outputs coordinates") };
                ProtocolTree::leaf(xs, ys, Output::Entry(i, j))
            }
            Node::Internal { owner, children } => {
                let speaker = if swapped { owner.other() } else { *owner };
                let [c0, c1] = children.as_ref();
                let split = |c: &ProtocolTree| {
                    let keep = |p: &Point| {
                        let row = Point::Str(p.matrix().unwrap().row(i));
                        match owner {
                            Player::Alice => self.rg.x_index(&row).is_some_and(|r| c.x.contains(r as u32)),
                            Player::Bob => self.rg.y_index(&row).is_some_and(|r| c.y.contains(r as u32)),
                        }
                    };
                    match speaker {
                        Player::Alice => {
                            let part = self.filter(&xs, true, keep);
                            self.inner(c, i, swapped, part, ys.clone())
                        }
                        Player::Bob => {
                            let part = self.filter(&ys, false, keep);
                            self.inner(c, i, swapped, xs.clone(), part)
                        }
                    }
                };
                let (k0, k1) = (split(c0), split(c1));
                ProtocolTree::internal(xs, ys, speaker, k0, k1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detcc::{exact_cc, optimal_protocol, SearchBudget};
    use crate::relations::compose_strong;

    #[test]
    fn and_and_validates_on_both() {
        let and = TruthTable::and(2);
        let b = SearchBudget::default();
        let p = optimal_protocol(&kw(&and).unwrap(), b).unwrap();
        let o = obvious_protocol(&and, &and, &p, &p).unwrap();
        assert!(o.depth() <= 2);
        assert!(validate_protocol(&o, &compose_standard(&and, &and).unwrap()).is_valid());
        assert!(validate_protocol(&o, &compose_strong(&and, &and).unwrap()).is_valid());
    }

    #[test]
    fn swapped_rows_and_depth_additivity() {
        let b = SearchBudget::default();
        let or = TruthTable::or(2);
        let xor = TruthTable::parity(2);
        let pf = optimal_protocol(&kw(&xor).unwrap(), b).unwrap();
        let pg = optimal_protocol(&kw(&or).unwrap(), b).unwrap();
        let o = obvious_protocol(&xor, &or, &pf, &pg).unwrap();
        assert_eq!(o.depth(), pf.depth() + pg.depth());
        let strong = compose_strong(&xor, &or).unwrap();
        assert!(validate_protocol(&o, &strong).is_valid());
        let cc = exact_cc(&compose_standard(&xor, &or).unwrap(), b).unwrap();
        assert!(cc.finite().unwrap() <= o.depth());
    }

    #[test]
    fn invalid_subprotocol_rejected() {
        let and = TruthTable::and(2);
        let rel = kw(&and).unwrap();
        let bad = ProtocolTree::leaf(IndexSet::full(rel.x_len()), IndexSet::full(rel.y_len()), Output::Coord(0));
        assert!(obvious_protocol(&and, &and, &bad, &bad).is_err());
    }
}
