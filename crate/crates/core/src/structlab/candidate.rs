use std::collections::BTreeMap;

use serde::Serialize;

use super::alive::ComplexityCache;
use crate::boolcore::{apply_rowwise, BitString, TruthTable};
use crate::detcc::{Node, Player, ProtocolTree, SearchBudget};
use crate::relations::Relation;
use crate::{Error, Result};

/// One bit of a candidate transcript.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateStep {
    pub speaker: Player,
    pub bit: bool,
    /// `L(A×B)` for the tracked sets before and after the bit.
    pub l_before: u64,
    pub l_after: u64,
    /// Size of the speaker's tracked set before and after.
    pub tracked_before: usize,
    pub tracked_after: usize,
    /// Smallest `|X_new(a)|/|X(a)|` over the speaker's surviving strings.
    pub min_shrink: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateRun {
    pub g: TruthTable,
    pub transcript: Vec<bool>,
    pub steps: Vec<CandidateStep>,
    pub final_l: u64,
    pub at_leaf: bool,
}

impl CandidateRun {
    /// `L` drops by at most half per bit.
    pub fn halving_holds(&self) -> bool {
        self.steps.iter().all(|s| 2 * s.l_after >= s.l_before)
    }

    /// The speaker's consistency sets shrink by at most half per bit.
    pub fn shrink_holds(&self) -> bool {
        self.steps.iter().all(|s| s.min_shrink >= 0.5)
    }

    /// A leaf is only reached once `L(A×B) ≤ 1`.
    pub fn leaf_holds(&self) -> bool {
        !self.at_leaf || self.final_l <= 1
    }
}

/// Builds `π_g` bit by bit: at each node the speaker's strings vote with the
/// majority of their consistent inputs (ties to 0), and the bit keeping the
/// larger `L(A_σ×B)` is taken (ties to 0). Stops after `target_len` bits or
/// at a leaf.
pub fn candidate_transcript(
    tree: &ProtocolTree,
    rel: &Relation,
    g: &TruthTable,
    target_len: usize,
    budget: SearchBudget,
) -> Result<CandidateRun> {
    let inner = |points: &[crate::relations::Point]| -> Result<Vec<BitString>> {
        points
            .iter()
            .map(|p| {
                let x = p.matrix().ok_or_else(|| Error::invalid(format!("point {p} is not a matrix")))?;
                apply_rowwise(g, x)
            })
            .collect()
    };
    let (gx, gy) = (inner(rel.x_points())?, inner(rel.y_points())?);
    let distinct = |set: &crate::bits::IndexSet, vals: &[BitString]| -> Vec<BitString> {
        let mut v: Vec<BitString> = set.iter().map(|i| vals[i as usize]).collect();
        v.sort();
        v.dedup();
        v
    };
    let mut a = distinct(&tree.x, &gx);
    let mut b = distinct(&tree.y, &gy);
    let mut cache = ComplexityCache::default();
    let mut node = tree;
    let mut transcript = Vec::new();
    let mut steps = Vec::new();
    while transcript.len() < target_len {
        let Node::Internal { owner, children } = &node.node else { break };
        let (tracked, other, vals) = match owner {
            Player::Alice => (&a, &b, &gx),
            Player::Bob => (&b, &a, &gy),
        };
        let side = |t: &ProtocolTree| if *owner == Player::Alice { t.x.clone() } else { t.y.clone() };
        // counts[s][bit] = consistent inputs of string s in child `bit`
        let mut counts: BTreeMap<BitString, [usize; 2]> = tracked.iter().map(|s| (*s, [0, 0])).collect();
        for (bit, child) in children.iter().enumerate() {
            for i in side(child).iter() {
                if let Some(c) = counts.get_mut(&vals[i as usize]) {
                    c[bit] += 1;
                }
            }
        }
        let part = |sigma: usize| -> Vec<BitString> {
            counts.iter().filter(|(_, c)| (c[1] > c[0]) as usize == sigma).map(|(s, _)| *s).collect()
        };
        let (p0, p1) = (part(0), part(1));
        let l = |cache: &mut ComplexityCache, t: &[BitString]| -> Result<u64> {
            match owner {
                Player::Alice => cache.get(t, other, budget),
                Player::Bob => cache.get(other, t, budget),
            }
        };
        let l_before = l(&mut cache, tracked)?;
        let (l0, l1) = (l(&mut cache, &p0)?, l(&mut cache, &p1)?);
        let sigma = (l1 > l0) as usize;
        let kept = if sigma == 1 { p1 } else { p0 };
        let min_shrink = kept
            .iter()
            .map(|s| {
                let c = counts[s];
                c[sigma] as f64 / (c[0] + c[1]) as f64
            })
            .fold(1.0, f64::min);
        steps.push(CandidateStep {
            speaker: *owner,
            bit: sigma == 1,
            l_before,
            l_after: l0.max(l1),
            tracked_before: tracked.len(),
            tracked_after: kept.len(),
            min_shrink,
        });
        match owner {
            Player::Alice => a = kept,
            Player::Bob => b = kept,
        }
        transcript.push(sigma == 1);
        node = &children[sigma];
    }
    let final_l = cache.get(&a, &b, budget)?;
    Ok(CandidateRun { g: g.clone(), transcript, steps, final_l, at_leaf: node.is_leaf() })
}

/// The most common transcript among the candidates (ties to the
/// lexicographically smallest) and the functions supporting it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Popular {
    pub transcript: Vec<bool>,
    pub support: Vec<TruthTable>,
    pub distinct: usize,
    pub total: usize,
}

impl Popular {
    /// `|V| ≥ (number of candidates)/(number of distinct transcripts)`.
    pub fn pigeonhole_holds(&self) -> bool {
        self.support.len() * self.distinct >= self.total
    }
}

pub fn popular_transcript(candidates: &BTreeMap<TruthTable, Vec<bool>>) -> Result<Popular> {
    let Some(len) = candidates.values().next().map(Vec::len) else {
        return Err(Error::invalid("no candidate transcripts"));
    };
    if candidates.values().any(|t| t.len() != len) {
        return Err(Error::invalid("candidate transcripts have unequal lengths"));
    }
    let mut groups: BTreeMap<&Vec<bool>, Vec<TruthTable>> = BTreeMap::new();
    for (g, t) in candidates {
        groups.entry(t).or_default().push(g.clone());
    }
    let distinct = groups.len();
    // BTreeMap order is lexicographic, so the first maximum wins ties.
    let (t, support) = groups
        .into_iter()
        .fold(None::<(&Vec<bool>, Vec<TruthTable>)>, |best, (t, s)| match best {
            Some(b) if b.1.len() >= s.len() => Some(b),
            _ => Some((t, s)),
        })
        .expect("nonempty");
    Ok(Popular { transcript: t.clone(), support, distinct, total: candidates.len() })
}
