//! Communication relations as explicit finite objects.
//!
//! A [`Relation`] lists Alice's inputs, Bob's inputs and the possible
//! outputs, and precomputes for every input pair the bitmask of valid
//! outputs. Inputs are indexed densely so the solvers can work on bitsets.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::boolcore::{apply_rowwise, eval_composition, BitString, BooleanMatrix, TruthTable};
use crate::{Error, Result};

/// An input of one player.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Point {
    Str(BitString),
    Matrix(BooleanMatrix),
    Mux { func: TruthTable, input: BitString },
    MuxMatrix { func: TruthTable, matrix: BooleanMatrix },
}

impl Point {
    pub fn func(&self) -> Option<&TruthTable> {
        match self {
            Point::Mux { func, .. } | Point::MuxMatrix { func, .. } => Some(func),
            _ => None,
        }
    }

    pub fn matrix(&self) -> Option<&BooleanMatrix> {
        match self {
            Point::Matrix(x) | Point::MuxMatrix { matrix: x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn string(&self) -> Option<BitString> {
        match self {
            Point::Str(s) | Point::Mux { input: s, .. } => Some(*s),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Str(s) => write!(f, "{s}"),
            Point::Matrix(x) => write!(f, "{x}"),
            Point::Mux { func, input } => write!(f, "({func},{input})"),
            Point::MuxMatrix { func, matrix } => write!(f, "({func},{matrix})"),
        }
    }
}

/// Output symbols. Coordinates and entries are 0-based internally and
/// printed 1-based.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Output {
    Coord(usize),
    Entry(usize, usize),
    Bottom,
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Output::Coord(i) => write!(f, "{}", i + 1),
            Output::Entry(i, j) => write!(f, "({},{})", i + 1, j + 1),
            Output::Bottom => f.write_str("⊥"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationKind {
    Kw,
    KwRect,
    ComposeStd,
    ComposeStrong,
    Mux,
    MuxComposeStd,
    MuxComposeStrong,
    Custom,
}

pub const MAX_OUTPUTS: usize = 64;
const MAX_PAIRS: usize = 1 << 22;

#[derive(Clone)]
pub struct Relation {
    kind: RelationKind,
    x: Vec<Point>,
    y: Vec<Point>,
    outputs: Vec<Output>,
    valid: Vec<u64>,
    x_index: HashMap<Point, usize>,
    y_index: HashMap<Point, usize>,
    descriptor: Option<RelationDescriptor>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Relation")
            .field("kind", &self.kind)
            .field("x_len", &self.x.len())
            .field("y_len", &self.y.len())
            .field("outputs", &self.outputs)
            .finish()
    }
}

impl Relation {
    /// Builds a relation from an explicit predicate. Totality is not checked;
    /// see [`Relation::totality_violations`].
    pub fn from_predicate(
        kind: RelationKind,
        x: Vec<Point>,
        y: Vec<Point>,
        outputs: Vec<Output>,
        solves: impl Fn(&Point, &Point, &Output) -> bool,
    ) -> Result<Self> {
        if outputs.len() > MAX_OUTPUTS {
            return Err(Error::invalid(format!("{} outputs exceed {MAX_OUTPUTS}", outputs.len())));
        }
        if x.len().saturating_mul(y.len()) > MAX_PAIRS {
            return Err(Error::budget(format!("{}×{} input pairs", x.len(), y.len())));
        }
        let mut valid = vec![0u64; x.len() * y.len()];
        for (xi, xp) in x.iter().enumerate() {
            for (yi, yp) in y.iter().enumerate() {
                let mut mask = 0u64;
                for (oi, o) in outputs.iter().enumerate() {
                    if solves(xp, yp, o) {
                        mask |= 1 << oi;
                    }
                }
                valid[xi * y.len() + yi] = mask;
            }
        }
        let x_index = index_of(&x)?;
        let y_index = index_of(&y)?;
        Ok(Relation { kind, x, y, outputs, valid, x_index, y_index, descriptor: None })
    }

    fn checked_total(self) -> Result<Self> {
        match self.totality_violations().first() {
            None => Ok(self),
            Some(&(xi, yi)) => {
                Err(Error::invalid(format!("relation not total: no valid output on ({}, {})", self.x[xi], self.y[yi])))
            }
        }
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    pub fn descriptor(&self) -> Option<&RelationDescriptor> {
        self.descriptor.as_ref()
    }

    pub fn x_len(&self) -> usize {
        self.x.len()
    }

    pub fn y_len(&self) -> usize {
        self.y.len()
    }

    pub fn x_points(&self) -> &[Point] {
        &self.x
    }

    pub fn y_points(&self) -> &[Point] {
        &self.y
    }

    pub fn x_point(&self, i: usize) -> &Point {
        &self.x[i]
    }

    pub fn y_point(&self, i: usize) -> &Point {
        &self.y[i]
    }

    pub fn x_index(&self, p: &Point) -> Option<usize> {
        self.x_index.get(p).copied()
    }

    pub fn y_index(&self, p: &Point) -> Option<usize> {
        self.y_index.get(p).copied()
    }

    pub fn outputs(&self) -> &[Output] {
        &self.outputs
    }

    pub fn output_index(&self, o: &Output) -> Option<usize> {
        self.outputs.iter().position(|p| p == o)
    }

    /// Bitmask over [`Relation::outputs`] of the outputs valid on `(xi, yi)`.
    pub fn valid_mask(&self, xi: usize, yi: usize) -> u64 {
        self.valid[xi * self.y.len() + yi]
    }

    pub fn solves(&self, xi: usize, yi: usize, o: &Output) -> bool {
        self.output_index(o).is_some_and(|oi| self.valid_mask(xi, yi) >> oi & 1 == 1)
    }

    pub fn valid_outputs(&self, xi: usize, yi: usize) -> Vec<Output> {
        crate::bits::mask_iter(self.valid_mask(xi, yi)).map(|oi| self.outputs[oi]).collect()
    }

    /// Input pairs with no valid output.
    pub fn totality_violations(&self) -> Vec<(usize, usize)> {
        let ny = self.y.len();
        (0..self.valid.len()).filter(|&k| self.valid[k] == 0).map(|k| (k / ny, k % ny)).collect()
    }

    pub fn is_total(&self) -> bool {
        self.valid.iter().all(|&m| m != 0)
    }

    pub fn content_hash(&self) -> Option<String> {
        self.descriptor.as_ref().map(|d| d.content_hash())
    }
}

fn index_of(points: &[Point]) -> Result<HashMap<Point, usize>> {
    let mut map = HashMap::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if map.insert(p.clone(), i).is_some() {
            return Err(Error::invalid(format!("duplicate input {p}")));
        }
    }
    Ok(map)
}

fn coord_outputs(m: usize) -> Vec<Output> {
    (0..m).map(Output::Coord).collect()
}

fn entry_outputs(m: usize, n: usize) -> Vec<Output> {
    (0..m).flat_map(|i| (0..n).map(move |j| Output::Entry(i, j))).collect()
}

/// `KW_{A×B}`: find a coordinate where `x` and `y` differ.
pub fn kw_rectangle(a: &[BitString], b: &[BitString]) -> Result<Relation> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("KW rectangle sides must be nonempty"));
    }
    let m = a[0].len();
    if let Some(s) = a.iter().chain(b).find(|s| s.len() != m) {
        return Err(Error::ArityMismatch { expected: m, found: s.len() });
    }
    if let Some(s) = a.iter().find(|s| b.contains(s)) {
        return Err(Error::invalid(format!("{s} lies on both sides")));
    }
    let x = a.iter().map(|&s| Point::Str(s)).collect();
    let y = b.iter().map(|&s| Point::Str(s)).collect();
    let mut r = Relation::from_predicate(RelationKind::KwRect, x, y, coord_outputs(m), kw_solves)?;
    r.descriptor = Some(RelationDescriptor::KwRect {
        m,
        a: a.iter().map(|s| s.to_string()).collect(),
        b: b.iter().map(|s| s.to_string()).collect(),
    });
    Ok(r)
}

fn kw_solves(x: &Point, y: &Point, o: &Output) -> bool {
    match (x.string(), y.string(), o) {
        (Some(x), Some(y), Output::Coord(i)) => x.bit(*i) != y.bit(*i),
        _ => false,
    }
}

/// `KW_f`, with sides `f⁻¹(1)` and `f⁻¹(0)` in increasing order.
pub fn kw(f: &TruthTable) -> Result<Relation> {
    non_constant(f)?;
    let m = f.arity();
    let a: Vec<BitString> = f.preimage(true).into_iter().map(|v| BitString::new(m, v)).collect();
    let b: Vec<BitString> = f.preimage(false).into_iter().map(|v| BitString::new(m, v)).collect();
    let mut r = kw_rectangle(&a, &b)?;
    r.kind = RelationKind::Kw;
    r.descriptor = Some(RelationDescriptor::Kw { f: f.to_hex(), m });
    Ok(r)
}

fn non_constant(f: &TruthTable) -> Result<()> {
    if f.is_constant() {
        Err(Error::invalid(format!("function {f} is constant")))
    } else {
        Ok(())
    }
}

/// Both sides of the composed function `f⋄g`: matrices in index order.
pub fn composition_domain(f: &TruthTable, g: &TruthTable) -> (Vec<BooleanMatrix>, Vec<BooleanMatrix>) {
    let (m, n) = (f.arity(), g.arity());
    let (mut ones, mut zeros) = (Vec::new(), Vec::new());
    for x in BooleanMatrix::all(m, n) {
        if eval_composition(f, g, &x).expect("arity checked") {
            ones.push(x);
        } else {
            zeros.push(x);
        }
    }
    (ones, zeros)
}

fn compose(f: &TruthTable, g: &TruthTable, strong: bool) -> Result<Relation> {
    non_constant(f)?;
    non_constant(g)?;
    let (m, n) = (f.arity(), g.arity());
    if m * n > 16 {
        return Err(Error::budget(format!("{m}×{n} matrices are too many to enumerate")));
    }
    let (ones, zeros) = composition_domain(f, g);
    let x = ones.into_iter().map(Point::Matrix).collect();
    let y = zeros.into_iter().map(Point::Matrix).collect();
    let kind = if strong { RelationKind::ComposeStrong } else { RelationKind::ComposeStd };
    let g2 = g.clone();
    let r = Relation::from_predicate(kind, x, y, entry_outputs(m, n), move |xp, yp, o| {
        entry_solves(xp.matrix(), yp.matrix(), o, strong.then_some((&g2, &g2)))
    })?;
    let mut r = r.checked_total()?;
    let (f, g) = (f.to_hex(), g.to_hex());
    r.descriptor = Some(if strong {
        RelationDescriptor::ComposeStrong { f, m, g, n }
    } else {
        RelationDescriptor::ComposeStd { f, m, g, n }
    });
    Ok(r)
}

// X_{i,j} ≠ Y_{i,j}, plus g_A(X_i) ≠ g_B(Y_i) when inner functions are given.
fn entry_solves(
    x: Option<&BooleanMatrix>,
    y: Option<&BooleanMatrix>,
    o: &Output,
    inner: Option<(&TruthTable, &TruthTable)>,
) -> bool {
    let (Some(x), Some(y), Output::Entry(i, j)) = (x, y, o) else {
        return false;
    };
    if x.entry(*i, *j) == y.entry(*i, *j) {
        return false;
    }
    match inner {
        Some((ga, gb)) => ga.eval(x.row(*i).value()) != gb.eval(y.row(*i).value()),
        None => true,
    }
}

/// `KW_f ⊛ KW_g`: an entry `(i,j)` with `a_i ≠ b_i` and `X_{i,j} ≠ Y_{i,j}`.
pub fn compose_strong(f: &TruthTable, g: &TruthTable) -> Result<Relation> {
    compose(f, g, true)
}

/// `KW_f ⋄ KW_g`: an entry `(i,j)` with `X_{i,j} ≠ Y_{i,j}`.
pub fn compose_standard(f: &TruthTable, g: &TruthTable) -> Result<Relation> {
    compose(f, g, false)
}

/// `MUX_n` over all functions on `n` bits, ordered by function index.
pub fn mux(n: usize) -> Result<Relation> {
    if n == 0 || n > 3 {
        return Err(Error::budget(format!("MUX_{n} outside 1..=3")));
    }
    let funcs = TruthTable::all(n);
    let mut x = Vec::new();
    let mut y = Vec::new();
    for g in &funcs {
        for v in g.preimage(true) {
            x.push(Point::Mux { func: g.clone(), input: BitString::new(n, v) });
        }
        for v in g.preimage(false) {
            y.push(Point::Mux { func: g.clone(), input: BitString::new(n, v) });
        }
    }
    let mut outputs = coord_outputs(n);
    outputs.push(Output::Bottom);
    let r = Relation::from_predicate(RelationKind::Mux, x, y, outputs, |xp, yp, o| match o {
        Output::Bottom => xp.func() != yp.func(),
        Output::Coord(i) => {
            let (a, b) = (xp.string().unwrap(), yp.string().unwrap());
            a.bit(*i) != b.bit(*i)
        }
        Output::Entry(..) => false,
    })?;
    let mut r = r.checked_total()?;
    r.descriptor = Some(RelationDescriptor::Mux { n });
    Ok(r)
}

/// `KW_f ⋄ MUX_n` or, with `strong`, `KW_f ⊛ MUX_n`.
pub fn mux_compose(f: &TruthTable, n: usize, strong: bool) -> Result<Relation> {
    non_constant(f)?;
    let m = f.arity();
    if n == 0 || m * n > 8 || n > 3 {
        return Err(Error::budget(format!("multiplexor composition with m={m}, n={n} is too large")));
    }
    let mut x = Vec::new();
    let mut y = Vec::new();
    for g in TruthTable::all(n) {
        let (ones, zeros) = composition_domain(f, &g);
        x.extend(ones.into_iter().map(|matrix| Point::MuxMatrix { func: g.clone(), matrix }));
        y.extend(zeros.into_iter().map(|matrix| Point::MuxMatrix { func: g.clone(), matrix }));
    }
    let mut outputs = entry_outputs(m, n);
    outputs.push(Output::Bottom);
    let kind = if strong { RelationKind::MuxComposeStrong } else { RelationKind::MuxComposeStd };
    let r = Relation::from_predicate(kind, x, y, outputs, |xp, yp, o| {
        let (ga, gb) = (xp.func().unwrap(), yp.func().unwrap());
        match o {
            Output::Bottom => ga != gb,
            _ => entry_solves(xp.matrix(), yp.matrix(), o, strong.then_some((ga, gb))),
        }
    })?;
    let mut r = r.checked_total()?;
    r.descriptor = Some(RelationDescriptor::MuxCompose { f: f.to_hex(), m, n, strong });
    Ok(r)
}

/// Row values `g(X)` for a matrix input of a (multiplexor) composition.
pub fn inner_values(g: &TruthTable, p: &Point) -> Option<BitString> {
    p.matrix().map(|x| apply_rowwise(g, x).expect("matching arity"))
}

/// Configuration-level description of a relation.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RelationDescriptor {
    Kw { f: String, m: usize },
    KwRect { m: usize, a: Vec<String>, b: Vec<String> },
    ComposeStd { f: String, m: usize, g: String, n: usize },
    ComposeStrong { f: String, m: usize, g: String, n: usize },
    Mux { n: usize },
    MuxCompose { f: String, m: usize, n: usize, strong: bool },
}

impl RelationDescriptor {
    /// Rewrites hex and bit strings into their canonical forms.
    pub fn canonical(&self) -> Result<RelationDescriptor> {
        let hex = |s: &str, k: usize| TruthTable::from_hex(k, s).map(|t| t.to_hex());
        let strings = |v: &[String], m: usize| -> Result<Vec<String>> {
            let mut out = v
                .iter()
                .map(|s| {
                    let b: BitString = s.parse()?;
                    if b.len() != m {
                        return Err(Error::ArityMismatch { expected: m, found: b.len() });
                    }
                    Ok(b.to_string())
                })
                .collect::<Result<Vec<_>>>()?;
            out.sort();
            out.dedup();
            Ok(out)
        };
        Ok(match self {
            RelationDescriptor::Kw { f, m } => RelationDescriptor::Kw { f: hex(f, *m)?, m: *m },
            RelationDescriptor::KwRect { m, a, b } => {
                RelationDescriptor::KwRect { m: *m, a: strings(a, *m)?, b: strings(b, *m)? }
            }
            RelationDescriptor::ComposeStd { f, m, g, n } => {
                RelationDescriptor::ComposeStd { f: hex(f, *m)?, m: *m, g: hex(g, *n)?, n: *n }
            }
            RelationDescriptor::ComposeStrong { f, m, g, n } => {
                RelationDescriptor::ComposeStrong { f: hex(f, *m)?, m: *m, g: hex(g, *n)?, n: *n }
            }
            RelationDescriptor::Mux { n } => RelationDescriptor::Mux { n: *n },
            RelationDescriptor::MuxCompose { f, m, n, strong } => {
                RelationDescriptor::MuxCompose { f: hex(f, *m)?, m: *m, n: *n, strong: *strong }
            }
        })
    }

    /// SHA-256 over the canonical JSON form.
    pub fn content_hash(&self) -> String {
        let canon = self.canonical().unwrap_or_else(|_| self.clone());
        let json = serde_json::to_string(&canon).expect("descriptor serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    pub fn build(&self) -> Result<Relation> {
        let bits = |v: &[String]| v.iter().map(|s| s.parse()).collect::<Result<Vec<BitString>>>();
        let canon = self.canonical()?;
        let mut r = match &canon {
            RelationDescriptor::Kw { f, m } => kw(&TruthTable::from_hex(*m, f)?)?,
            RelationDescriptor::KwRect { a, b, .. } => kw_rectangle(&bits(a)?, &bits(b)?)?,
            RelationDescriptor::ComposeStd { f, m, g, n } => {
                compose_standard(&TruthTable::from_hex(*m, f)?, &TruthTable::from_hex(*n, g)?)?
            }
            RelationDescriptor::ComposeStrong { f, m, g, n } => {
                compose_strong(&TruthTable::from_hex(*m, f)?, &TruthTable::from_hex(*n, g)?)?
            }
            RelationDescriptor::Mux { n } => mux(*n)?,
            RelationDescriptor::MuxCompose { f, m, n, strong } => {
                mux_compose(&TruthTable::from_hex(*m, f)?, *n, *strong)?
            }
        };
        r.descriptor = Some(canon);
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn m2(s: &str) -> BooleanMatrix {
        BooleanMatrix::parse(2, 2, s).unwrap()
    }

    #[test]
    fn kw_rectangle_examples() {
        let r = kw_rectangle(&[bs("11")], &[bs("00")]).unwrap();
        assert_eq!(r.valid_outputs(0, 0), vec![Output::Coord(0), Output::Coord(1)]);
        let r = kw_rectangle(&[bs("10")], &[bs("01")]).unwrap();
        assert_eq!(r.valid_outputs(0, 0).len(), 2);
        assert!(kw_rectangle(&[bs("10")], &[bs("10")]).is_err());
        let and = TruthTable::and(2);
        let r = kw(&and).unwrap();
        assert_eq!(r.x_len(), 1);
        assert_eq!(r.y_len(), 3);
        assert!(r.is_total());
    }

    #[test]
    fn strong_composition_example() {
        let and = TruthTable::and(2);
        let or = TruthTable::or(2);
        let strong = compose_strong(&and, &or).unwrap();
        let std = compose_standard(&and, &or).unwrap();
        let xi = strong.x_index(&Point::Matrix(m2("10/01"))).unwrap();
        let yi = strong.y_index(&Point::Matrix(m2("00/01"))).unwrap();
        assert_eq!(strong.valid_outputs(xi, yi), vec![Output::Entry(0, 0)]);
        assert!(std.valid_outputs(xi, yi).contains(&Output::Entry(0, 0)));
        let count = |r: &Relation| -> u32 {
            (0..r.x_len())
                .flat_map(|x| (0..r.y_len()).map(move |y| (x, y)))
                .map(|(x, y)| r.valid_mask(x, y).count_ones())
                .sum()
        };
        assert!(count(&std) > count(&strong));
    }

    #[test]
    fn strong_subset_of_standard() {
        for f in TruthTable::all(2).into_iter().filter(|t| !t.is_constant()) {
            for g in TruthTable::all(2).into_iter().filter(|t| !t.is_constant()) {
                let s = compose_strong(&f, &g).unwrap();
                let d = compose_standard(&f, &g).unwrap();
                assert_eq!(s.x_points(), d.x_points());
                for xi in 0..s.x_len() {
                    for yi in 0..s.y_len() {
                        let (sm, dm) = (s.valid_mask(xi, yi), d.valid_mask(xi, yi));
                        assert_eq!(sm & !dm, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn mux_examples() {
        let r = mux(2).unwrap();
        assert_eq!(r.x_len(), 32);
        let xor = TruthTable::parity(2);
        let xi = r.x_index(&Point::Mux { func: xor.clone(), input: bs("10") }).unwrap();
        let yi = r.y_index(&Point::Mux { func: xor.clone(), input: bs("00") }).unwrap();
        assert_eq!(r.valid_outputs(xi, yi), vec![Output::Coord(0)]);
        let and = TruthTable::and(2);
        let yi = r.y_index(&Point::Mux { func: and, input: bs("10") }).unwrap();
        assert_eq!(r.valid_outputs(xi, yi), vec![Output::Bottom]);
        assert!(mux(4).is_err());
    }

    #[test]
    fn mux_compose_total_and_nested() {
        let and = TruthTable::and(2);
        let std = mux_compose(&and, 2, false).unwrap();
        let strong = mux_compose(&and, 2, true).unwrap();
        assert!(std.is_total() && strong.is_total());
        let bottom = strong.output_index(&Output::Bottom).unwrap();
        for xi in 0..strong.x_len() {
            for yi in 0..strong.y_len() {
                let (s, d) = (strong.valid_mask(xi, yi), std.valid_mask(xi, yi));
                assert_eq!(s & !d, 0);
                if strong.x_point(xi).func() == strong.y_point(yi).func() {
                    assert_ne!(s & !(1 << bottom), 0);
                }
            }
        }
    }

    #[test]
    fn descriptor_roundtrip_and_hash() {
        let d = RelationDescriptor::Kw { f: "0x8".into(), m: 2 };
        let c = RelationDescriptor::Kw { f: "8".into(), m: 2 };
        assert_eq!(d.content_hash(), c.content_hash());
        let r = d.build().unwrap();
        assert_eq!(r.descriptor(), Some(&c));
        let other = RelationDescriptor::Kw { f: "6".into(), m: 2 };
        assert_ne!(other.content_hash(), c.content_hash());
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"kind":"kw","f":"8","m":2}"#);
        assert!(RelationDescriptor::Kw { f: "zz".into(), m: 2 }.build().is_err());
    }
}
