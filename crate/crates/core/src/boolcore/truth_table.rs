use std::fmt;

use crate::{Error, Result};

/// A Boolean function on `arity` bits, stored as its full output vector.
///
/// Inputs are indexed as integers with `x1` as the most significant bit, so
/// the input `x1 x2 = 10` has index 2. The hex form is the integer whose bit
/// `i` is the output on input `i`; AND on two bits is `"8"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    arity: usize,
    words: Vec<u64>,
}

pub const MAX_ARITY: usize = 20;

impl TruthTable {
    pub fn from_fn(arity: usize, f: impl Fn(u32) -> bool) -> Self {
        assert!(arity <= MAX_ARITY, "arity {arity} too large");
        let size = 1usize << arity;
        let mut words = vec![0u64; size.div_ceil(64)];
        for x in 0..size {
            if f(x as u32) {
                words[x / 64] |= 1 << (x % 64);
            }
        }
        TruthTable { arity, words }
    }

    pub fn from_bits(arity: usize, bits: &[bool]) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::invalid(format!("arity {arity} exceeds {MAX_ARITY}")));
        }
        if bits.len() != 1 << arity {
            return Err(Error::ArityMismatch { expected: 1 << arity, found: bits.len() });
        }
        Ok(Self::from_fn(arity, |x| bits[x as usize]))
    }

    /// Table whose bit `i` is bit `i` of `index`; only for arity ≤ 6.
    pub fn from_index(arity: usize, index: u64) -> Self {
        assert!(arity <= 6);
        Self::from_fn(arity, |x| index >> x & 1 == 1)
    }

    pub fn index(&self) -> Option<u64> {
        (self.arity <= 6).then(|| self.words[0])
    }

    pub fn constant(arity: usize, value: bool) -> Self {
        Self::from_fn(arity, |_| value)
    }

    /// The projection `x_{var+1}` (0-based `var`).
    pub fn literal(arity: usize, var: usize) -> Self {
        assert!(var < arity);
        Self::from_fn(arity, move |x| x >> (arity - 1 - var) & 1 == 1)
    }

    pub fn and(arity: usize) -> Self {
        let all = (1u32 << arity) - 1;
        Self::from_fn(arity, move |x| x == all)
    }

    pub fn or(arity: usize) -> Self {
        Self::from_fn(arity, |x| x != 0)
    }

    pub fn parity(arity: usize) -> Self {
        Self::from_fn(arity, |x| x.count_ones() % 2 == 1)
    }

    pub fn majority(arity: usize) -> Self {
        Self::from_fn(arity, move |x| 2 * x.count_ones() as usize > arity)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        1 << self.arity
    }

    pub fn eval(&self, x: u32) -> bool {
        let x = x as usize;
        debug_assert!(x < self.size());
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_constant(&self) -> bool {
        let w = self.weight();
        w == 0 || w == self.size()
    }

    pub fn is_balanced(&self) -> bool {
        2 * self.weight() == self.size()
    }

    /// All inputs on which the function takes `value`, in increasing order.
    pub fn preimage(&self, value: bool) -> Vec<u32> {
        (0..self.size() as u32).filter(|&x| self.eval(x) == value).collect()
    }

    pub fn complement(&self) -> Self {
        Self::from_fn(self.arity, |x| !self.eval(x))
    }

    /// Every function of the given arity, ordered by index; arity ≤ 4.
    pub fn all(arity: usize) -> Vec<TruthTable> {
        assert!(arity <= 4, "2^2^{arity} functions is too many to list");
        (0..1u64 << (1 << arity)).map(|i| Self::from_index(arity, i)).collect()
    }

    /// Every balanced function of the given arity, ordered by index; arity ≤ 4.
    pub fn balanced(arity: usize) -> Vec<TruthTable> {
        Self::all(arity).into_iter().filter(|t| t.is_balanced()).collect()
    }

    pub fn to_hex(&self) -> String {
        let digits = self.size().div_ceil(4);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let mut v = 0u32;
            for b in 0..4 {
                let x = 4 * d + b;
                if x < self.size() && self.eval(x as u32) {
                    v |= 1 << b;
                }
            }
            s.push(char::from_digit(v, 16).unwrap());
        }
        s
    }

    pub fn from_hex(arity: usize, hex: &str) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::invalid(format!("arity {arity} exceeds {MAX_ARITY}")));
        }
        let hex = hex.trim();
        let hex = hex.strip_prefix("0x").unwrap_or(hex);
        if hex.is_empty() {
            return Err(Error::parse("empty truth table"));
        }
        let size = 1usize << arity;
        let mut bits = vec![false; size];
        for (d, c) in hex.chars().rev().enumerate() {
            let v = c.to_digit(16).ok_or_else(|| Error::parse(format!("bad hex digit {c:?} in {hex:?}")))?;
            for b in 0..4 {
                if v >> b & 1 == 1 {
                    let x = 4 * d + b;
                    if x >= size {
                        return Err(Error::parse(format!("{hex:?} has more than 2^{arity} bits")));
                    }
                    bits[x] = true;
                }
            }
        }
        Self::from_bits(arity, &bits)
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}:{})", self.arity, self.to_hex())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Serialized as its hex string.
impl serde::Serialize for TruthTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_tables_hex() {
        assert_eq!(TruthTable::and(2).to_hex(), "8");
        assert_eq!(TruthTable::or(2).to_hex(), "e");
        assert_eq!(TruthTable::parity(2).to_hex(), "6");
        assert_eq!(TruthTable::literal(2, 0).to_hex(), "c");
        assert_eq!(TruthTable::and(3).to_hex(), "80");
        assert_eq!(TruthTable::literal(1, 0).to_hex(), "2");
    }

    #[test]
    fn hex_roundtrip_and_errors() {
        for t in TruthTable::all(3) {
            assert_eq!(TruthTable::from_hex(3, &t.to_hex()).unwrap(), t);
        }
        assert!(TruthTable::from_hex(2, "1g").is_err());
        assert!(TruthTable::from_hex(2, "18").is_err());
        assert_eq!(TruthTable::from_hex(2, "0x8").unwrap(), TruthTable::and(2));
    }

    #[test]
    fn balanced_count() {
        assert_eq!(TruthTable::balanced(2).len(), 6);
        assert_eq!(TruthTable::balanced(3).len(), 70);
        assert_eq!(TruthTable::all(1).len(), 4);
    }
}
