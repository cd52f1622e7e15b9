use serde::{Deserialize, Serialize};

use super::binary_entropy;
use crate::{Error, Result};

/// Binary linear code. Words are integers with coordinate 1 as the MSB.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LinearCode {
    length: usize,
    basis: Vec<u32>,
    distance: Option<usize>,
}

pub const MAX_CODE_LENGTH: usize = 24;

impl LinearCode {
    pub fn new(length: usize, basis: Vec<u32>) -> Result<Self> {
        if length == 0 || length > MAX_CODE_LENGTH {
            return Err(Error::invalid(format!("code length {length} outside 1..={MAX_CODE_LENGTH}")));
        }
        if let Some(v) = basis.iter().find(|&&v| v >> length != 0) {
            return Err(Error::invalid(format!("basis vector {v:#x} longer than {length} bits")));
        }
        if rank(&basis) != basis.len() {
            return Err(Error::invalid("basis vectors are linearly dependent"));
        }
        let mut code = LinearCode { length, basis, distance: None };
        code.distance = code.codewords().into_iter().filter(|&c| c != 0).map(|c| c.count_ones() as usize).min();
        Ok(code)
    }

    pub fn repetition(length: usize) -> Self {
        let all = if length == 32 { u32::MAX } else { (1u32 << length) - 1 };
        Self::new(length, vec![all]).expect("valid repetition code")
    }

    pub fn from_hex(length: usize, basis: &[&str]) -> Result<Self> {
        let basis = basis
            .iter()
            .map(|s| {
                let s = s.trim();
                u32::from_str_radix(s.strip_prefix("0x").unwrap_or(s), 16)
                    .map_err(|e| Error::parse(format!("basis vector {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(length, basis)
    }

    pub fn basis_hex(&self) -> Vec<String> {
        self.basis.iter().map(|v| format!("{v:x}")).collect()
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Minimum weight of a nonzero codeword; `None` for the zero code.
    pub fn distance(&self) -> Option<usize> {
        self.distance
    }

    /// All 2^k codewords, in the order of their coefficient vectors.
    pub fn codewords(&self) -> Vec<u32> {
        let mut words = vec![0u32];
        for &b in &self.basis {
            let extra: Vec<u32> = words.iter().map(|&c| c ^ b).collect();
            words.extend(extra);
        }
        words
    }

    pub fn contains(&self, v: u32) -> bool {
        let mut with = self.basis.clone();
        with.push(v);
        rank(&with) == self.basis.len()
    }

    pub fn same_coset(&self, a: u32, b: u32) -> bool {
        self.contains(a ^ b)
    }
}

fn rank(vectors: &[u32]) -> usize {
    let mut pivots: Vec<u32> = Vec::new();
    for &v in vectors {
        let mut v = v;
        for &p in &pivots {
            v = v.min(v ^ p);
        }
        if v != 0 {
            pivots.push(v);
            pivots.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    pivots.len()
}

/// Outcome of [`find_linear_code`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodeSearch {
    pub code: LinearCode,
    pub greedy_dimension: usize,
    /// Best of the Singleton, Hamming and Griesmer bounds.
    pub upper_bound: usize,
    /// `Some(true)` when the exhaustive search ran to completion, so the
    /// dimension is optimal; `None` when it was not attempted.
    pub exhaustive_complete: Option<bool>,
    /// `(1 - H(d/m))·m`, reported for comparison only.
    pub varshamov_dimension: f64,
}

const EXHAUSTIVE_MAX_LENGTH: usize = 14;
const EXHAUSTIVE_NODE_BUDGET: u64 = 2_000_000;

/// Finds a length-`m` code of distance at least `d` with as large a
/// dimension as the search can establish.
pub fn find_linear_code(m: usize, d: usize) -> Result<CodeSearch> {
    if d == 0 || d > m || m > 20 {
        return Err(Error::invalid(format!("need 1 ≤ d ≤ m ≤ 20, got m={m}, d={d}")));
    }
    let upper_bound = dimension_upper_bound(m, d);
    let greedy = greedy_basis(m, d);
    let greedy_dimension = greedy.len();
    let (basis, exhaustive_complete) = if greedy_dimension < upper_bound && m <= EXHAUSTIVE_MAX_LENGTH {
        let mut search = Exhaustive { m, best: greedy.clone(), nodes: 0, upper_bound };
        let covered = Ball::new(m, d);
        search.dfs(&mut Vec::new(), &[0], covered, 0);
        let complete = search.nodes <= EXHAUSTIVE_NODE_BUDGET;
        (search.best, Some(complete))
    } else if greedy_dimension == upper_bound {
        (greedy, Some(true))
    } else {
        (greedy, None)
    };
    let code = LinearCode::new(m, basis)?;
    debug_assert!(code.distance().unwrap_or(usize::MAX) >= d);
    Ok(CodeSearch {
        code,
        greedy_dimension,
        upper_bound,
        exhaustive_complete,
        varshamov_dimension: (1.0 - binary_entropy(d as f64 / m as f64)?) * m as f64,
    })
}

// Set of words within distance d-1 of the current code.
#[derive(Clone)]
struct Ball {
    words: Vec<u64>,
    count: usize,
}

impl Ball {
    fn new(m: usize, d: usize) -> Self {
        let size = 1usize << m;
        let mut ball = Ball { words: vec![0; size.div_ceil(64)], count: 0 };
        for v in 0..size {
            if (v.count_ones() as usize) < d {
                ball.insert(v);
            }
        }
        ball
    }

    fn insert(&mut self, v: usize) {
        let w = &mut self.words[v / 64];
        if *w >> (v % 64) & 1 == 0 {
            *w |= 1 << (v % 64);
            self.count += 1;
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.words[v / 64] >> (v % 64) & 1 == 1
    }

    // Covered set for the code extended by `v`: covered ∪ (v ⊕ covered).
    fn extend(&self, v: usize, size: usize) -> Ball {
        let mut out = self.clone();
        for u in 0..size {
            if self.contains(u) {
                out.insert(u ^ v);
            }
        }
        out
    }
}

fn greedy_basis(m: usize, d: usize) -> Vec<u32> {
    let size = 1usize << m;
    let mut covered = Ball::new(m, d);
    let mut basis = Vec::new();
    for v in 1..size {
        if !covered.contains(v) {
            basis.push(v as u32);
            covered = covered.extend(v, size);
        }
    }
    basis
}

struct Exhaustive {
    m: usize,
    best: Vec<u32>,
    nodes: u64,
    upper_bound: usize,
}

impl Exhaustive {
    // Bases are enumerated in increasing order with each new vector the
    // smallest element of its coset, which reaches every code at least once.
    fn dfs(&mut self, basis: &mut Vec<u32>, code: &[u32], covered: Ball, last: u32) {
        self.nodes += 1;
        if self.nodes > EXHAUSTIVE_NODE_BUDGET || self.best.len() >= self.upper_bound {
            return;
        }
        if basis.len() > self.best.len() {
            self.best = basis.clone();
        }
        let size = 1usize << self.m;
        // Every word of a larger code outside the current one is uncovered.
        let uncovered = size - covered.count;
        let gain = ((uncovered / code.len() + 1) as f64).log2().floor() as usize;
        if basis.len() + gain <= self.best.len() {
            return;
        }
        for v in (last as usize + 1)..size {
            if covered.contains(v) || code.iter().any(|&c| (c ^ v as u32) < v as u32) {
                continue;
            }
            let next_code: Vec<u32> = code.iter().flat_map(|&c| [c, c ^ v as u32]).collect();
            let next_cover = covered.extend(v, size);
            basis.push(v as u32);
            self.dfs(basis, &next_code, next_cover, v as u32);
            basis.pop();
            if self.nodes > EXHAUSTIVE_NODE_BUDGET || self.best.len() >= self.upper_bound {
                return;
            }
        }
    }
}

fn dimension_upper_bound(m: usize, d: usize) -> usize {
    let t = (d - 1) / 2;
    let ball: u128 = (0..=t as u64).map(|i| super::binomial(m as u64, i)).sum();
    (0..=m)
        .rev()
        .find(|&k| {
            let singleton = k + d <= m + 1;
            let hamming = (1u128 << k) * ball <= 1u128 << m;
            let griesmer = (0..k).map(|i| d.div_ceil(1 << i)).sum::<usize>() <= m;
            singleton && hamming && griesmer
        })
        .unwrap_or(0)
}

/// Smallest representative of every coset of `code`, in increasing order.
pub fn cosets(code: &LinearCode) -> Result<Vec<u32>> {
    let m = code.length();
    if m > 20 {
        return Err(Error::invalid(format!("code length {m} too large to enumerate cosets")));
    }
    let words = code.codewords();
    let size = 1usize << m;
    let mut hits = vec![0u8; size];
    let mut reps = Vec::new();
    for v in 0..size {
        if hits[v] == 0 {
            reps.push(v as u32);
            for &c in &words {
                hits[v ^ c as usize] += 1;
            }
        }
    }
    assert!(hits.iter().all(|&h| h == 1), "cosets do not partition the space");
    assert_eq!(reps.len(), 1 << (m - code.dimension()));
    Ok(reps)
}
