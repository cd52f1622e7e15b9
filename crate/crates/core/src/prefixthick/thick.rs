use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::strings::{PrefixTree, StringSet};
use crate::boolcore::LOG_SLACK;
use crate::report::Check;
use crate::{Error, Result};

/// A degree vector `w ∈ [q]^m`.
pub type BranchingStructure = Vec<u8>;

pub const MAX_WINNING_STRINGS: usize = 100_000;
const MAX_BRUTE_STRINGS: usize = 18;
const MAX_PROJECTION_M: usize = 16;

// Contiguous runs of a sorted slice sharing the symbol at position `d`.
fn groups(strings: &[Vec<u8>], d: usize) -> impl Iterator<Item = &[Vec<u8>]> {
    let mut rest = strings;
    std::iter::from_fn(move || {
        let first = rest.first()?;
        let k = rest.iter().position(|s| s[d] != first[d]).unwrap_or(rest.len());
        let (head, tail) = rest.split_at(k);
        rest = tail;
        Some(head)
    })
}

// The largest subset whose trie below depth `d` has every degree > t.
fn thick_part(strings: &[Vec<u8>], d: usize, m: usize, t: f64) -> Vec<Vec<u8>> {
    if strings.is_empty() {
        return Vec::new();
    }
    if d == m {
        return strings.to_vec();
    }
    let parts: Vec<Vec<Vec<u8>>> =
        groups(strings, d).map(|g| thick_part(g, d + 1, m, t)).filter(|p| !p.is_empty()).collect();
    if parts.len() as f64 > t {
        parts.concat()
    } else {
        Vec::new()
    }
}

/// Whether some subset's prefix tree has minimum degree greater than `t`,
/// with the largest such subset as witness.
pub fn is_prefix_thick(x: &StringSet, t: f64) -> (bool, Option<StringSet>) {
    let part = thick_part(x.strings(), 0, x.m(), t);
    if part.is_empty() {
        (false, None)
    } else {
        let w = StringSet::new(x.profile().clone(), part).expect("subset of a valid set");
        (true, Some(w))
    }
}

fn winning(strings: &[Vec<u8>], d: usize, m: usize) -> Vec<BranchingStructure> {
    if strings.is_empty() {
        return Vec::new();
    }
    if d == m {
        return vec![Vec::new()];
    }
    let mut counts: HashMap<BranchingStructure, u8> = HashMap::new();
    for g in groups(strings, d) {
        for w in winning(g, d + 1, m) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    let mut out = Vec::new();
    for (w, c) in counts {
        for k in 1..=c {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.push(k);
            v.extend_from_slice(&w);
            out.push(v);
        }
    }
    out
}

/// All branching structures, by splitting on the first symbol: `k∘w` is one
/// exactly when at least `k` first-symbol suffix sets have `w`.
pub fn winning_set(x: &StringSet) -> Result<BTreeSet<BranchingStructure>> {
    if x.len() > MAX_WINNING_STRINGS {
        return Err(Error::budget(format!("{} strings exceed {MAX_WINNING_STRINGS}", x.len())));
    }
    Ok(winning(x.strings(), 0, x.m()).into_iter().collect())
}

/// Degree profiles of every nonempty subset whose prefix tree is uniform at
/// each depth. Exponential in `|X|`.
pub fn brute_force_winning_set(x: &StringSet) -> Result<BTreeSet<BranchingStructure>> {
    if x.len() > MAX_BRUTE_STRINGS {
        return Err(Error::budget(format!("{} strings exceed {MAX_BRUTE_STRINGS} for subset search", x.len())));
    }
    let mut out = BTreeSet::new();
    for mask in 1u64..1 << x.len() {
        let sub = StringSet::from_mask(x, mask);
        if let Some(w) = PrefixTree::new(&sub)?.uniform_profile(x.m()) {
            out.insert(w);
        }
    }
    Ok(out)
}

/// Checks `|W(X)| = |X|`, and against the subset search when `X` is small.
pub fn verify_winning_size(x: &StringSet) -> Result<Check> {
    let w = winning_set(x)?;
    let mut ok = w.len() == x.len();
    let mut detail = format!("|W| = {}, |X| = {}", w.len(), x.len());
    if x.len() <= 14 {
        let brute = brute_force_winning_set(x)?;
        ok &= brute == w;
        detail.push_str(if brute == w { ", matches subset search" } else { ", DIFFERS from subset search" });
    }
    Ok(Check::from_bool("winning-set-size", ok, detail))
}

fn threshold(q: usize, eps: f64) -> f64 {
    (0.5 + eps) * q as f64
}

fn check_m(x: &StringSet) -> Result<()> {
    if x.m() > MAX_PROJECTION_M {
        Err(Error::budget(format!("m = {} exceeds {MAX_PROJECTION_M}", x.m())))
    } else {
        Ok(())
    }
}

/// Masks `I` (bit `i` = coordinate `i`, 0-based) with `X|_I` prefix thick at
/// degree `(1/2+ε)q`, found by testing every projection.
pub fn thick_projections(x: &StringSet, eps: f64) -> Result<Vec<u32>> {
    check_m(x)?;
    let t = threshold(x.q(), eps);
    Ok((0u32..1 << x.m()).filter(|&mask| is_prefix_thick(&x.project(mask), t).0).collect())
}

/// The image of the winning set under `w ↦ {i : w_i > (1/2+ε)q}`. Always a
/// subfamily of [`thick_projections`], and in general a proper one.
pub fn winning_projections(x: &StringSet, eps: f64) -> Result<Vec<u32>> {
    check_m(x)?;
    let t = threshold(x.q(), eps);
    let set: BTreeSet<u32> = winning_set(x)?
        .iter()
        .map(|w| w.iter().enumerate().filter(|(_, &d)| d as f64 > t).fold(0u32, |m, (i, _)| m | 1 << i))
        .collect();
    Ok(set.into_iter().collect())
}

/// `2^{-2 log e·ε·m}·|X|/q^m`, the guaranteed fraction of thick projections.
pub fn density_bound(m: usize, q: usize, eps: f64, size: usize) -> f64 {
    let log2 = -2.0 * std::f64::consts::LOG2_E * eps * m as f64 + (size as f64).log2() - m as f64 * (q as f64).log2();
    log2.exp2()
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionBound {
    pub family: Vec<u32>,
    pub image: Vec<u32>,
    /// `|F| / 2^m`.
    pub fraction: f64,
    pub bound: f64,
    pub holds: bool,
    pub image_holds: bool,
    pub image_is_subfamily: bool,
    pub downward_closed: bool,
}

/// Evaluates the density bound for both the direct family and the image of
/// the winning set.
pub fn project_family_bound(x: &StringSet, eps: f64) -> Result<ProjectionBound> {
    let family = thick_projections(x, eps)?;
    let image = winning_projections(x, eps)?;
    let total = (1u64 << x.m()) as f64;
    let bound = density_bound(x.m(), x.q(), eps, x.len());
    let ok = |k: usize| x.is_empty() || (k as f64 / total).log2() >= bound.log2() - LOG_SLACK;
    let members: BTreeSet<u32> = family.iter().copied().collect();
    let downward_closed =
        family.iter().all(|&i| (0..x.m()).filter(|&b| i >> b & 1 == 1).all(|b| members.contains(&(i & !(1 << b)))));
    Ok(ProjectionBound {
        fraction: family.len() as f64 / total,
        bound,
        holds: ok(family.len()),
        image_holds: ok(image.len()),
        image_is_subfamily: image.iter().all(|i| members.contains(i)),
        downward_closed,
        family,
        image,
    })
}

/// A common string of two sets. When both are prefix thick (degree `q/2`),
/// descends their thick subsets choosing the smallest common child at each
/// level; the descent cannot get stuck, and getting stuck is reported as an
/// error. Otherwise tries the same greedy descent on the raw tries and may
/// return `None`.
pub fn intersect_witness(x: &StringSet, y: &StringSet) -> Result<Option<Vec<u8>>> {
    if x.profile() != y.profile() {
        return Err(Error::invalid("string sets have different alphabet profiles"));
    }
    let t = x.q() as f64 / 2.0;
    let (tx, wx) = is_prefix_thick(x, t);
    let (ty, wy) = is_prefix_thick(y, t);
    let both = tx && ty;
    let (a, b) = if both { (wx.unwrap(), wy.unwrap()) } else { (x.clone(), y.clone()) };
    if a.is_empty() || b.is_empty() {
        return Ok(None);
    }
    let (ta, tb) = (PrefixTree::new(&a)?, PrefixTree::new(&b)?);
    let (mut u, mut v) = (0, 0);
    let mut out = Vec::with_capacity(x.m());
    for _ in 0..x.m() {
        let common =
            ta.nodes[u].children.iter().find_map(|(c, &cu)| tb.nodes[v].children.get(c).map(|&cv| (*c, cu, cv)));
        match common {
            Some((c, cu, cv)) => {
                out.push(c);
                u = cu;
                v = cv;
            }
            None if both => {
                return Err(Error::invalid(format!("thick sets share no child below prefix {out:?}")));
            }
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}
