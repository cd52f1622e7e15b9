use std::fmt;

use serde::{Deserialize, Serialize};

use super::TruthTable;
use crate::{Error, Result};

/// A bit string of length ≤ 32 with coordinate 1 as the most significant bit.
///
/// The integer value doubles as the truth-table input index, which is why
/// strings and column vectors share this type.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BitString {
    len: u8,
    value: u32,
}

impl BitString {
    pub fn new(len: usize, value: u32) -> Self {
        assert!(len <= 32);
        assert!(len == 32 || value >> len == 0, "value {value} does not fit in {len} bits");
        BitString { len: len as u8, value }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let value = bits.iter().fold(0u32, |acc, &b| acc << 1 | b as u32);
        Self::new(bits.len(), value)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    /// Coordinate `i`, 0-based from the left.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len());
        self.value >> (self.len() - 1 - i) & 1 == 1
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.bit(i)).collect()
    }

    pub fn weight(&self) -> usize {
        self.value.count_ones() as usize
    }

    pub fn differing(&self, other: &BitString) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.bit(i) != other.bit(i)).collect()
    }

    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << len).map(move |v| BitString::new(len, v as u32))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl std::str::FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > 32 {
            return Err(Error::parse(format!("bit string {s:?} longer than 32")));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::parse(format!("bad bit {c:?} in {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BitString::from_bits(&bits))
    }
}

/// An m×n Boolean matrix. Row `i` is stored as an n-bit [`BitString`] value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BooleanMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl BooleanMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows);
        assert!(cols <= 32 && data.iter().all(|&r| cols == 32 || r >> cols == 0));
        BooleanMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[BitString]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::ArityMismatch { expected: cols, found: r.len() });
        }
        Ok(Self::new(rows.len(), cols, rows.iter().map(|r| r.value()).collect()))
    }

    /// The matrix whose row-major concatenation, read as a binary number
    /// with the first entry most significant, equals `index`.
    pub fn from_index(rows: usize, cols: usize, index: u64) -> Self {
        assert!(rows * cols <= 63);
        let mask = (1u64 << cols) - 1;
        let data = (0..rows).map(|i| (index >> ((rows - 1 - i) * cols) & mask) as u32).collect();
        Self::new(rows, cols, data)
    }

    pub fn index(&self) -> u64 {
        self.data.iter().fold(0u64, |acc, &r| acc << self.cols | r as u64)
    }

    /// All 2^{mn} matrices in index order.
    pub fn all(rows: usize, cols: usize) -> impl Iterator<Item = BooleanMatrix> {
        assert!(rows * cols <= 24, "too many matrices to enumerate");
        (0..1u64 << (rows * cols)).map(move |i| Self::from_index(rows, cols, i))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> BitString {
        BitString::new(self.cols, self.data[i])
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.row(i).bit(j)
    }

    pub fn with_row(&self, i: usize, row: BitString) -> Self {
        assert_eq!(row.len(), self.cols);
        let mut data = self.data.clone();
        data[i] = row.value();
        Self::new(self.rows, self.cols, data)
    }

    pub fn parse(rows: usize, cols: usize, s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace() && *c != '/').collect();
        if s.len() != rows * cols {
            return Err(Error::parse(format!("expected {} bits, got {:?}", rows * cols, s)));
        }
        let data = (0..rows)
            .map(|i| s[i * cols..(i + 1) * cols].parse::<BitString>().map(|b| b.value()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(rows, cols, data))
    }
}

impl fmt::Display for BooleanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BooleanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// The column vector `(g(X_1), ..., g(X_m))`.
pub fn apply_rowwise(g: &TruthTable, x: &BooleanMatrix) -> Result<BitString> {
    if g.arity() != x.cols() {
        return Err(Error::ArityMismatch { expected: g.arity(), found: x.cols() });
    }
    let bits: Vec<bool> = (0..x.rows()).map(|i| g.eval(x.row(i).value())).collect();
    Ok(BitString::from_bits(&bits))
}

/// `f(g(X_1), ..., g(X_m))`.
pub fn eval_composition(f: &TruthTable, g: &TruthTable, x: &BooleanMatrix) -> Result<bool> {
    if f.arity() != x.rows() {
        return Err(Error::ArityMismatch { expected: f.arity(), found: x.rows() });
    }
    Ok(f.eval(apply_rowwise(g, x)?.value()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> BooleanMatrix {
        let rows: Vec<&str> = s.split('/').collect();
        BooleanMatrix::parse(rows.len(), rows[0].len(), s).unwrap()
    }

    #[test]
    fn composition_examples() {
        let and = TruthTable::and(2);
        let or = TruthTable::or(2);
        assert!(!eval_composition(&and, &or, &m("10/00")).unwrap());
        assert!(eval_composition(&and, &or, &m("10/01")).unwrap());
        let one = TruthTable::constant(2, true);
        for x in BooleanMatrix::all(2, 2) {
            assert_eq!(eval_composition(&and, &one, &x).unwrap(), and.eval(3));
        }
    }

    #[test]
    fn rowwise_examples() {
        let xor = TruthTable::parity(2);
        assert_eq!(apply_rowwise(&xor, &m("10/11")).unwrap().to_string(), "10");
        let zero = TruthTable::constant(2, false);
        assert_eq!(apply_rowwise(&zero, &m("11/11/01")).unwrap().to_string(), "000");
        let or = TruthTable::or(2);
        assert_eq!(apply_rowwise(&or, &m("00/01/11")).unwrap().to_string(), "011");
    }

    #[test]
    fn arity_errors() {
        let and3 = TruthTable::and(3);
        let or = TruthTable::or(2);
        assert!(matches!(
            eval_composition(&and3, &or, &m("10/00")),
            Err(Error::ArityMismatch { expected: 3, found: 2 })
        ));
        assert!(apply_rowwise(&and3, &m("10/00")).is_err());
    }

    #[test]
    fn matrix_index_roundtrip() {
        for x in BooleanMatrix::all(2, 3) {
            assert_eq!(BooleanMatrix::from_index(2, 3, x.index()), x);
            assert_eq!(BooleanMatrix::parse(2, 3, &x.to_string()).unwrap(), x);
        }
        assert_eq!(m("10/01").index(), 0b1001);
    }
}
