use serde::Serialize;

use super::gprime::row_label;
use crate::bits::mask_iter;
use crate::boolcore::{BitString, TruthTable};
use crate::prefixthick::{intersect_witness, is_prefix_thick, AlphabetProfile, StringSet};
use crate::{Error, Result};

/// The three events for a pair of functions and the resulting
/// intersection. Strings hold one row value per coordinate of `I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairEvents {
    /// `|g_A⁻¹(a_i) ∩ g_B⁻¹(b_i)|` for each `i ∈ I`.
    pub alphabet_sizes: Vec<usize>,
    pub small_alphabets: bool,
    pub x_thick: bool,
    pub y_thick: bool,
    pub intersection: usize,
    /// A common string found by descending the thick witnesses, when all
    /// three events hold.
    pub witness: Option<Vec<u32>>,
}

impl PairEvents {
    pub fn all_hold(&self) -> bool {
        self.small_alphabets && self.x_thick && self.y_thick
    }

    /// The implication "all three events ⇒ the sets intersect".
    pub fn implication_holds(&self) -> bool {
        !self.all_hold() || (self.intersection > 0 && self.witness.is_some())
    }
}

/// Evaluates the events for `Xs ⊆ g_A⁻¹(a)|_I` and `Ys ⊆ g_B⁻¹(b)|_I`:
/// every `|g_A⁻¹(a_i) ∩ g_B⁻¹(b_i)|` is at most `(1+ε/2)·2^{n−2}`, and both
/// `Xs ∩ g_B⁻¹(b)|_I` and `Ys ∩ g_A⁻¹(a)|_I` are prefix thick with degree
/// `(1/2+ε/2)·2^{n−2}` over the intersected alphabets. Alphabets of unequal
/// size are padded with unused symbols up to the largest one.
#[allow(clippy::too_many_arguments)]
pub fn check_pair_events(
    ga: &TruthTable,
    gb: &TruthTable,
    a: &BitString,
    b: &BitString,
    coords: u32,
    xs: &[Vec<u32>],
    ys: &[Vec<u32>],
    eps: f64,
) -> Result<PairEvents> {
    let n = ga.arity();
    if gb.arity() != n || n < 2 {
        return Err(Error::invalid("functions must share an arity of at least 2"));
    }
    if !ga.is_balanced() || !gb.is_balanced() {
        return Err(Error::invalid("functions must be balanced"));
    }
    if a.len() != b.len() || coords >> a.len() != 0 {
        return Err(Error::invalid("strings and coordinate set disagree on m"));
    }
    let idx: Vec<usize> = mask_iter(coords as u64).collect();
    let fits = |s: &Vec<u32>, g: &TruthTable, v: &BitString| {
        s.len() == idx.len() && s.iter().zip(&idx).all(|(&r, &i)| r < 1 << n && g.eval(r) == v.bit(i))
    };
    if !xs.iter().all(|s| fits(s, ga, a)) || !ys.iter().all(|s| fits(s, gb, b)) {
        return Err(Error::invalid("Xs or Ys is not inside the preimage of its string"));
    }
    let alphabets: Vec<Vec<u32>> = idx
        .iter()
        .map(|&i| (0..1u32 << n).filter(|&r| ga.eval(r) == a.bit(i) && gb.eval(r) == b.bit(i)).collect())
        .collect();
    let sizes: Vec<usize> = alphabets.iter().map(Vec::len).collect();
    let quarter = (1usize << (n - 2)) as f64;
    let small = sizes.iter().all(|&s| s as f64 <= (1.0 + eps / 2.0) * quarter + 1e-9);

    let q = sizes.iter().copied().max().unwrap_or(1).max(1);
    let labels = alphabets
        .iter()
        .map(|al| {
            let mut l: Vec<String> = al.iter().map(|&r| row_label(n, r)).collect();
            l.extend((al.len()..q).map(|k| format!("pad{k}")));
            l
        })
        .collect();
    let profile = AlphabetProfile::with_labels(labels)?;
    let encode = |set: &[Vec<u32>]| -> Result<StringSet> {
        let strings = set
            .iter()
            .filter_map(|s| s.iter().zip(&alphabets).map(|(r, al)| al.binary_search(r).ok().map(|k| k as u8)).collect())
            .collect();
        StringSet::new(profile.clone(), strings)
    };
    let (sx, sy) = (encode(xs)?, encode(ys)?);
    let t = (0.5 + eps / 2.0) * quarter;
    let (x_thick, y_thick) = (is_prefix_thick(&sx, t).0, is_prefix_thick(&sy, t).0);

    let mut sorted_y = ys.to_vec();
    sorted_y.sort();
    let intersection = xs.iter().filter(|s| sorted_y.binary_search(s).is_ok()).count();
    let witness = if small && x_thick && y_thick {
        intersect_witness(&sx, &sy)?.map(|w| w.iter().zip(&alphabets).map(|(&k, al)| al[k as usize]).collect())
    } else {
        None
    };
    Ok(PairEvents { alphabet_sizes: sizes, small_alphabets: small, x_thick, y_thick, intersection, witness })
}
