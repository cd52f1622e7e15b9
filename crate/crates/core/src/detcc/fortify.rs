use serde::Serialize;

use crate::bits::mask_iter;
use crate::boolcore::BitString;
use crate::relations::kw_rectangle;
use crate::{Error, Result};

use super::{Player, RectangleGame, SearchBudget};

pub const MAX_FORTIFY_SIDE: usize = 12;

/// Checks `L(Ã×B)/L(A×B) ≥ ρ·|Ã|/|A|` for every nonempty `Ã ⊆ A` (or the
/// same on Bob's side).
pub fn is_fortified(a: &[BitString], b: &[BitString], rho: f64, side: Player, budget: SearchBudget) -> Result<bool> {
    let rel = kw_rectangle(a, b)?;
    let mut game = RectangleGame::new(&rel, budget)?;
    let full = side_mask(&game, side);
    check_side_len(full)?;
    fortified_within(&mut game, full, side, rho)
}

fn side_mask(game: &RectangleGame, side: Player) -> u64 {
    match side {
        Player::Alice => game.full_x(),
        Player::Bob => game.full_y(),
    }
}

fn check_side_len(mask: u64) -> Result<()> {
    if mask.count_ones() as usize > MAX_FORTIFY_SIDE {
        Err(Error::budget(format!("fortification over {} elements exceeds {MAX_FORTIFY_SIDE}", mask.count_ones())))
    } else {
        Ok(())
    }
}

fn complexity(game: &mut RectangleGame, part: u64, side: Player) -> Result<u64> {
    match side {
        Player::Alice => game.size(part, game.full_y()),
        Player::Bob => game.size(game.full_x(), part),
    }
}

// Is `set × (other side)` ρ-fortified on `side`?
fn fortified_within(game: &mut RectangleGame, set: u64, side: Player, rho: f64) -> Result<bool> {
    let whole = complexity(game, set, side)? as f64;
    let n = set.count_ones() as f64;
    let elems: Vec<usize> = mask_iter(set).collect();
    for s in 1u64..1 << elems.len() {
        let sub = mask_iter(s).fold(0u64, |acc, i| acc | 1 << elems[i]);
        let l = complexity(game, sub, side)? as f64;
        if l / whole < rho * sub.count_ones() as f64 / n - 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FortifiedSubset {
    pub subset: Vec<BitString>,
    pub complexity: u64,
    pub full_complexity: u64,
}

/// The ρ-fortified subset of `A` (or of `B`, on Bob's side) with the largest
/// formula complexity; ties go to the larger subset and then to the
/// lexicographically smallest one.
pub fn find_fortified_subset(
    a: &[BitString],
    b: &[BitString],
    rho: f64,
    side: Player,
    budget: SearchBudget,
) -> Result<FortifiedSubset> {
    let rel = kw_rectangle(a, b)?;
    let mut game = RectangleGame::new(&rel, budget)?;
    let full = side_mask(&game, side);
    check_side_len(full)?;
    let pool = match side {
        Player::Alice => a,
        Player::Bob => b,
    };
    let mut candidates = Vec::new();
    for s in 1..=full {
        candidates.push((complexity(&mut game, s, side)?, s));
    }
    let lex_key = |s: u64| -> Vec<BitString> { mask_iter(s).map(|i| pool[i]).collect() };
    candidates.sort_by(|(l1, s1), (l2, s2)| {
        l2.cmp(l1).then(s2.count_ones().cmp(&s1.count_ones())).then_with(|| lex_key(*s1).cmp(&lex_key(*s2)))
    });
    let full_complexity = complexity(&mut game, full, side)?;
    for (l, s) in candidates {
        if fortified_within(&mut game, s, side, rho)? {
            return Ok(FortifiedSubset { subset: lex_key(s), complexity: l, full_complexity });
        }
    }
    unreachable!("singletons are fortified for any ρ ≤ 1")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubadditivityReport {
    pub whole: u64,
    pub part0: u64,
    pub part1: u64,
    pub holds: bool,
}

/// Checks `L(A×B) ≤ L(A₀×B) + L(A₁×B)` (or the same on Bob's side), where
/// `part0` is one part and the rest of the side is the other.
pub fn check_subadditivity(
    a: &[BitString],
    b: &[BitString],
    part0: &[BitString],
    side: Player,
    budget: SearchBudget,
) -> Result<SubadditivityReport> {
    let pool = match side {
        Player::Alice => a,
        Player::Bob => b,
    };
    if let Some(s) = part0.iter().find(|s| !pool.contains(s)) {
        return Err(Error::invalid(format!("{s} is not in the side being partitioned")));
    }
    let rel = kw_rectangle(a, b)?;
    let mut game = RectangleGame::new(&rel, budget)?;
    let m0 = part0.iter().fold(0u64, |acc, s| acc | 1 << pool.iter().position(|p| p == s).unwrap());
    let full = side_mask(&game, side);
    let whole = complexity(&mut game, full, side)?;
    let l0 = complexity(&mut game, m0, side)?;
    let l1 = complexity(&mut game, full & !m0, side)?;
    Ok(SubadditivityReport { whole, part0: l0, part1: l1, holds: whole <= l0 + l1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolcore::TruthTable;

    fn sides(f: &TruthTable) -> (Vec<BitString>, Vec<BitString>) {
        let m = f.arity();
        let to = |v: Vec<u32>| v.into_iter().map(|x| BitString::new(m, x)).collect();
        (to(f.preimage(true)), to(f.preimage(false)))
    }

    #[test]
    fn trivial_fortification_cases() {
        let b = SearchBudget::default();
        let (a, bb) = sides(&TruthTable::parity(2));
        assert!(is_fortified(&a[..1], &bb, 1.0, Player::Alice, b).unwrap());
        assert!(is_fortified(&a, &bb, 0.0, Player::Alice, b).unwrap());
        let r = find_fortified_subset(&a[..1], &bb, 0.5, Player::Alice, b).unwrap();
        assert_eq!(r.subset, a[..1].to_vec());
    }

    #[test]
    fn cheap_half_fails_high_rho() {
        // One element of A is far from B (cheap), one is close to it.
        let b = SearchBudget::default();
        let a: Vec<BitString> = ["1111", "0001"].iter().map(|s| s.parse().unwrap()).collect();
        let bb: Vec<BitString> = ["0000", "0011", "0101", "1001"].iter().map(|s| s.parse().unwrap()).collect();
        assert!(!is_fortified(&a, &bb, 1.0, Player::Alice, b).unwrap());
    }

    #[test]
    fn xor_fortified_subset_keeps_a_quarter() {
        let b = SearchBudget::default();
        let (a, bb) = sides(&TruthTable::parity(2));
        let r = find_fortified_subset(&a, &bb, 1.0 / 8.0, Player::Alice, b).unwrap();
        assert!(4 * r.complexity >= r.full_complexity);
    }

    #[test]
    fn subadditivity_cases() {
        let b = SearchBudget::default();
        let (a, bb) = sides(&TruthTable::parity(3));
        let r = check_subadditivity(&a, &bb, &a, Player::Alice, b).unwrap();
        assert_eq!((r.part0, r.part1, r.holds), (r.whole, 0, true));
        let r = check_subadditivity(&a, &bb, &a[..1], Player::Alice, b).unwrap();
        assert!(r.holds);
        let r = check_subadditivity(&a, &bb, &bb[1..3], Player::Bob, b).unwrap();
        assert!(r.holds);
        assert!(check_subadditivity(&a, &bb, &bb[..1], Player::Alice, b).is_err());
    }
}
