use crate::boolcore::{Depth, TruthTable};
use crate::{Error, Result};

pub const MAX_ORACLE_ARITY: usize = 3;
pub const MAX_SIZE_CAP: usize = 12;

/// Formula size and depth found by enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleResult {
    /// `None` when no formula of size at most the cap computes `f`.
    pub size: Option<u64>,
    pub depth: Depth,
}

type FnSet = [u64; 4];

fn has(s: &FnSet, f: usize) -> bool {
    s[f / 64] >> (f % 64) & 1 == 1
}

fn put(s: &mut FnSet, f: usize) -> bool {
    let fresh = !has(s, f);
    s[f / 64] |= 1 << (f % 64);
    fresh
}

/// Minimum de Morgan formula size (up to `size_cap`) and minimum depth of
/// `f`, by dynamic programming over the set of functions computable at each
/// size and at each depth. Constants get `(0, NegInf)`.
///
/// The depth search is not limited by the size cap: with at most three
/// variables it always terminates.
pub fn formula_oracle(f: &TruthTable, size_cap: usize) -> Result<OracleResult> {
    let n = f.arity();
    if n == 0 || n > MAX_ORACLE_ARITY {
        return Err(Error::invalid(format!("oracle arity {n} outside 1..={MAX_ORACLE_ARITY}")));
    }
    if size_cap > MAX_SIZE_CAP {
        return Err(Error::invalid(format!("size cap {size_cap} exceeds {MAX_SIZE_CAP}")));
    }
    if f.is_constant() {
        return Ok(OracleResult { size: Some(0), depth: Depth::NegInf });
    }
    let target = f.index().expect("small arity") as usize;
    let width = 1usize << n;
    let all = (1usize << width) - 1;
    let literals: Vec<usize> = (0..n)
        .flat_map(|v| {
            let t = TruthTable::literal(n, v).index().unwrap() as usize;
            [t, all ^ t]
        })
        .collect();

    // by_size[s]: functions whose minimum size is exactly s.
    let mut seen: FnSet = [0; 4];
    let mut by_size: Vec<Vec<usize>> = vec![Vec::new(), Vec::new()];
    for &l in &literals {
        if put(&mut seen, l) {
            by_size[1].push(l);
        }
    }
    let mut size = has(&seen, target).then_some(1u64);
    let mut s = 2;
    while size.is_none() && s <= size_cap {
        let mut fresh = Vec::new();
        for s1 in 1..=s / 2 {
            for &a in &by_size[s1] {
                for &b in &by_size[s - s1] {
                    for c in [a & b, a | b] {
                        if put(&mut seen, c) {
                            fresh.push(c);
                        }
                    }
                }
            }
        }
        if has(&seen, target) {
            size = Some(s as u64);
        }
        by_size.push(fresh);
        s += 1;
    }

    let mut level: FnSet = [0; 4];
    for &l in &literals {
        put(&mut level, l);
    }
    let mut d = 0u32;
    while !has(&level, target) {
        let members: Vec<usize> = (0..=all).filter(|&g| has(&level, g)).collect();
        let mut next = level;
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i..] {
                put(&mut next, a & b);
                put(&mut next, a | b);
            }
        }
        assert_ne!(next, level, "depth search stalled");
        level = next;
        d += 1;
    }
    Ok(OracleResult { size, depth: Depth::Finite(d) })
}
