use std::collections::HashMap;

use crate::bits::{mask_iter, IndexSet};
use crate::boolcore::{BitString, Depth};
use crate::relations::{kw_rectangle, Relation};
use crate::{Error, Result};

use super::{Player, ProtocolTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Largest side of a rectangle the solver accepts.
    pub max_side: usize,
    /// Largest number of memo entries before the search aborts.
    pub max_memo: usize,
    /// Depth searched up to before `exact_cc` gives up.
    pub max_depth: Option<u32>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_side: 16, max_memo: 40_000_000, max_depth: None }
    }
}

#[derive(Clone, Copy)]
struct SizeEntry {
    value: u32,
    exact: bool,
}

/// Memoized solver for the rectangle game of one relation.
///
/// Rectangles are pairs of bitmasks over the relation's input indices, so
/// both sides of the relation must have at most 64 elements. The memo is
/// kept across queries; sub-rectangles of earlier queries are free.
pub struct RectangleGame<'r> {
    rel: &'r Relation,
    budget: SearchBudget,
    outputs: usize,
    // good[x * outputs + o]: the y's on which output o is valid for x.
    good: Vec<u64>,
    // dead[x]: the y's with no valid output at all for x.
    dead: Vec<u64>,
    splits: Vec<Vec<u32>>,
    cc_memo: HashMap<(u64, u64), (u8, u8)>,
    size_memo: HashMap<(u64, u64), SizeEntry>,
}

impl<'r> RectangleGame<'r> {
    pub fn new(rel: &'r Relation, budget: SearchBudget) -> Result<Self> {
        if rel.x_len() > 64 || rel.y_len() > 64 {
            return Err(Error::budget(format!(
                "relation sides {}×{} exceed the 64-element bitset solver",
                rel.x_len(),
                rel.y_len()
            )));
        }
        let outputs = rel.outputs().len();
        let mut good = vec![0u64; rel.x_len() * outputs];
        let mut dead = vec![0u64; rel.x_len()];
        for x in 0..rel.x_len() {
            for y in 0..rel.y_len() {
                let mask = rel.valid_mask(x, y);
                if mask == 0 {
                    dead[x] |= 1 << y;
                }
                for o in mask_iter(mask) {
                    good[x * outputs + o] |= 1 << y;
                }
            }
        }
        Ok(RectangleGame {
            rel,
            budget,
            outputs,
            good,
            dead,
            splits: Vec::new(),
            cc_memo: HashMap::new(),
            size_memo: HashMap::new(),
        })
    }

    pub fn relation(&self) -> &Relation {
        self.rel
    }

    pub fn full_x(&self) -> u64 {
        low_mask(self.rel.x_len())
    }

    pub fn full_y(&self) -> u64 {
        low_mask(self.rel.y_len())
    }

    pub fn memo_entries(&self) -> usize {
        self.cc_memo.len() + self.size_memo.len()
    }

    fn check_query(&self, xm: u64, ym: u64) -> Result<()> {
        if xm & !self.full_x() != 0 || ym & !self.full_y() != 0 {
            return Err(Error::invalid("rectangle outside the relation's domain"));
        }
        let (sx, sy) = (xm.count_ones() as usize, ym.count_ones() as usize);
        if sx > self.budget.max_side || sy > self.budget.max_side {
            return Err(Error::budget(format!("rectangle {sx}×{sy} exceeds side limit {}", self.budget.max_side)));
        }
        if let Some(x) = mask_iter(xm).find(|&x| self.dead[x] & ym != 0) {
            return Err(Error::invalid(format!(
                "no valid output for input {} on some pair; the game has no solution",
                self.rel.x_point(x)
            )));
        }
        Ok(())
    }

    fn check_memo(&self) -> Result<()> {
        if self.memo_entries() > self.budget.max_memo {
            Err(Error::budget(format!("memo exceeded {} entries", self.budget.max_memo)))
        } else {
            Ok(())
        }
    }

    /// Smallest output index valid on the whole rectangle.
    pub fn common_output(&self, xm: u64, ym: u64) -> Option<usize> {
        (0..self.outputs).find(|&o| mask_iter(xm).all(|x| ym & !self.good[x * self.outputs + o] == 0))
    }

    fn split_list(&mut self, k: usize) -> &[u32] {
        while self.splits.len() <= k {
            let k = self.splits.len();
            let mut v: Vec<u32> =
                if k < 2 { Vec::new() } else { (1u32..(1 << k) - 1).filter(|s| s & 1 == 1).collect() };
            v.sort_by_key(|&s| ((2 * s.count_ones() as i64 - k as i64).abs(), s));
            self.splits.push(v);
        }
        &self.splits[k]
    }

    // All bipartitions of the rectangle: Alice's first, then Bob's, each
    // ordered by balance and then by submask. Part 0 holds the lowest element.
    fn bipartitions(&mut self, xm: u64, ym: u64) -> Vec<(Player, (u64, u64), (u64, u64))> {
        let mut out = Vec::new();
        for (player, side, other) in [(Player::Alice, xm, ym), (Player::Bob, ym, xm)] {
            let elems: Vec<usize> = mask_iter(side).collect();
            let subs = self.split_list(elems.len()).to_vec();
            for s in subs {
                let part0 = mask_iter(s as u64).fold(0u64, |acc, i| acc | 1 << elems[i]);
                let part1 = side & !part0;
                out.push(match player {
                    Player::Alice => (player, (part0, other), (part1, other)),
                    Player::Bob => (player, (other, part0), (other, part1)),
                });
            }
        }
        out
    }

    /// Minimum depth of a protocol solving the relation on `X×Y`.
    pub fn cc(&mut self, xm: u64, ym: u64) -> Result<Depth> {
        self.check_query(xm, ym)?;
        if xm == 0 || ym == 0 {
            return Ok(Depth::NegInf);
        }
        let cap = self.budget.max_depth.unwrap_or(u32::MAX);
        let mut k = 0;
        loop {
            if self.cc_le(xm, ym, k)? {
                return Ok(Depth::Finite(k));
            }
            if k >= cap {
                return Err(Error::budget(format!("depth exceeds cap {cap}")));
            }
            k += 1;
        }
    }

    fn cc_le(&mut self, xm: u64, ym: u64, k: u32) -> Result<bool> {
        if xm == 0 || ym == 0 || self.common_output(xm, ym).is_some() {
            return Ok(true);
        }
        if k == 0 {
            return Ok(false);
        }
        let (lb, ub) = self.cc_memo.get(&(xm, ym)).copied().unwrap_or((1, u8::MAX));
        if ub as u32 <= k {
            return Ok(true);
        }
        if lb as u32 > k {
            return Ok(false);
        }
        for (_, p0, p1) in self.bipartitions(xm, ym) {
            if self.cc_le(p0.0, p0.1, k - 1)? && self.cc_le(p1.0, p1.1, k - 1)? {
                self.cc_memo.insert((xm, ym), (lb, k as u8));
                self.check_memo()?;
                return Ok(true);
            }
        }
        self.cc_memo.insert((xm, ym), (k as u8 + 1, ub));
        self.check_memo()?;
        Ok(false)
    }

    /// Minimum number of leaves of a protocol solving the relation on `X×Y`.
    pub fn size(&mut self, xm: u64, ym: u64) -> Result<u64> {
        self.check_query(xm, ym)?;
        let bound = (xm.count_ones() as u64 * ym.count_ones() as u64).max(1);
        Ok(self.size_le(xm, ym, bound)?.expect("revealing both inputs is a valid protocol"))
    }

    fn size_lb(&self, xm: u64, ym: u64) -> u64 {
        if xm == 0 || ym == 0 {
            return 0;
        }
        if self.common_output(xm, ym).is_some() {
            return 1;
        }
        match self.size_memo.get(&(xm, ym)) {
            Some(e) => (e.value as u64).max(2),
            None => 2,
        }
    }

    // The exact size if it is at most `k`, else `None`.
    fn size_le(&mut self, xm: u64, ym: u64, k: u64) -> Result<Option<u64>> {
        if xm == 0 || ym == 0 {
            return Ok(Some(0));
        }
        if self.common_output(xm, ym).is_some() {
            return Ok((k >= 1).then_some(1));
        }
        if let Some(e) = self.size_memo.get(&(xm, ym)) {
            if e.exact {
                return Ok((e.value as u64 <= k).then_some(e.value as u64));
            }
            if e.value as u64 > k {
                return Ok(None);
            }
        }
        if k < 2 {
            return Ok(None);
        }
        let mut best = None;
        let mut limit = k;
        for (_, p0, p1) in self.bipartitions(xm, ym) {
            let (l0, l1) = (self.size_lb(p0.0, p0.1), self.size_lb(p1.0, p1.1));
            if l0 + l1 > limit {
                continue;
            }
            let Some(s0) = self.size_le(p0.0, p0.1, limit - l1)? else { continue };
            let Some(s1) = self.size_le(p1.0, p1.1, limit - s0)? else { continue };
            best = Some(s0 + s1);
            limit = s0 + s1 - 1;
            if limit < 2 {
                break;
            }
        }
        let entry = match best {
            Some(v) => SizeEntry { value: v as u32, exact: true },
            None => SizeEntry { value: (k + 1).min(u32::MAX as u64) as u32, exact: false },
        };
        self.size_memo.insert((xm, ym), entry);
        self.check_memo()?;
        Ok(best)
    }

    fn leaf(&self, xm: u64, ym: u64) -> ProtocolTree {
        let o = self.common_output(xm, ym).unwrap_or(0);
        ProtocolTree::leaf(IndexSet::from_mask(xm), IndexSet::from_mask(ym), self.rel.outputs()[o])
    }

    /// A protocol of minimum depth on `X×Y`; the first optimal split in the
    /// solver's enumeration order is taken at every node.
    pub fn depth_protocol(&mut self, xm: u64, ym: u64) -> Result<ProtocolTree> {
        self.check_query(xm, ym)?;
        let k = match self.cc(xm, ym)? {
            Depth::NegInf | Depth::Finite(0) => return Ok(self.leaf(xm, ym)),
            Depth::Finite(k) => k,
        };
        for (owner, p0, p1) in self.bipartitions(xm, ym) {
            if self.cc_le(p0.0, p0.1, k - 1)? && self.cc_le(p1.0, p1.1, k - 1)? {
                let c0 = self.depth_protocol(p0.0, p0.1)?;
                let c1 = self.depth_protocol(p1.0, p1.1)?;
                return Ok(ProtocolTree::internal(IndexSet::from_mask(xm), IndexSet::from_mask(ym), owner, c0, c1));
            }
        }
        unreachable!("cc value without a witnessing split")
    }

    /// A protocol with the minimum number of leaves on `X×Y`.
    pub fn size_protocol(&mut self, xm: u64, ym: u64) -> Result<ProtocolTree> {
        let v = self.size(xm, ym)?;
        if v <= 1 {
            return Ok(self.leaf(xm, ym));
        }
        for (owner, p0, p1) in self.bipartitions(xm, ym) {
            let Some(s0) = self.size_le(p0.0, p0.1, v - 1)? else { continue };
            if self.size_le(p1.0, p1.1, v - s0)?.is_some() {
                let c0 = self.size_protocol(p0.0, p0.1)?;
                let c1 = self.size_protocol(p1.0, p1.1)?;
                return Ok(ProtocolTree::internal(IndexSet::from_mask(xm), IndexSet::from_mask(ym), owner, c0, c1));
            }
        }
        unreachable!("size value without a witnessing split")
    }
}

fn low_mask(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

pub fn exact_cc(rel: &Relation, budget: SearchBudget) -> Result<Depth> {
    let mut game = RectangleGame::new(rel, budget)?;
    game.cc(game.full_x(), game.full_y())
}

pub fn exact_protocol_size(rel: &Relation, budget: SearchBudget) -> Result<u64> {
    let mut game = RectangleGame::new(rel, budget)?;
    game.size(game.full_x(), game.full_y())
}

/// A minimum-depth protocol for the whole relation.
pub fn optimal_protocol(rel: &Relation, budget: SearchBudget) -> Result<ProtocolTree> {
    let mut game = RectangleGame::new(rel, budget)?;
    game.depth_protocol(game.full_x(), game.full_y())
}

/// `(L(A×B), D(A×B))` through the KW game; `(0, NegInf)` if a side is empty.
pub fn formula_complexity_rect(a: &[BitString], b: &[BitString], budget: SearchBudget) -> Result<(u64, Depth)> {
    if a.is_empty() || b.is_empty() {
        return Ok((0, Depth::NegInf));
    }
    let rel = kw_rectangle(a, b)?;
    let mut game = RectangleGame::new(&rel, budget)?;
    let (xm, ym) = (game.full_x(), game.full_y());
    Ok((game.size(xm, ym)?, game.cc(xm, ym)?))
}
