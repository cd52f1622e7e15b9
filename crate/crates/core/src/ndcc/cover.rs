use std::fmt;

use serde::Serialize;

use super::graph::{chromatic_number, SimpleGraph};
use crate::report::{Check, Status};
use crate::{Error, Result};

pub const MAX_COVER_SIDE: usize = 16;
const NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum Cell {
    Yes,
    No,
    DontCare,
}

/// A partial Boolean matrix over `rows × cols`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PromiseMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

impl PromiseMatrix {
    pub fn new(rows: usize, cols: usize, fill: Cell) -> Self {
        PromiseMatrix { rows, cols, cells: vec![fill; rows * cols] }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Cell) -> Self {
        let cells = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        PromiseMatrix { rows, cols, cells }
    }

    /// Total matrix from a Boolean predicate; 1 is `Yes`.
    pub fn from_bool(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        Self::from_fn(rows, cols, |r, c| if f(r, c) { Cell::Yes } else { Cell::No })
    }

    /// The equality matrix on `t` elements.
    pub fn equality(t: usize) -> Self {
        Self::from_bool(t, t, |r, c| r == c)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Cell {
        self.cells[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, cell: Cell) {
        self.cells[r * self.cols + c] = cell;
    }

    pub fn count(&self, cell: Cell) -> usize {
        self.cells.iter().filter(|&&c| c == cell).count()
    }

    pub fn is_total(&self) -> bool {
        self.count(Cell::DontCare) == 0
    }

    /// Swaps `Yes` and `No`.
    pub fn negate(&self) -> PromiseMatrix {
        let cells = self
            .cells
            .iter()
            .map(|c| match c {
                Cell::Yes => Cell::No,
                Cell::No => Cell::Yes,
                Cell::DontCare => Cell::DontCare,
            })
            .collect();
        PromiseMatrix { rows: self.rows, cols: self.cols, cells }
    }
}

impl fmt::Debug for PromiseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: String = (0..self.cols)
                .map(|c| match self.get(r, c) {
                    Cell::Yes => '1',
                    Cell::No => '0',
                    Cell::DontCare => '*',
                })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoverResult {
    /// Minimum number of rectangles; 0 when there is no yes cell.
    pub count: usize,
    /// `log2(count)`, or negative infinity when `count` is 0.
    pub log2: f64,
    /// An optimal cover as (row mask, column mask) pairs.
    pub rectangles: Vec<(u32, u32)>,
}

type CellSet = [u64; 4];

fn cell_bit(set: &mut CellSet, k: usize) {
    set[k / 64] |= 1 << (k % 64);
}

fn and_count(a: &CellSet, b: &CellSet) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

fn is_empty(a: &CellSet) -> bool {
    a.iter().all(|&w| w == 0)
}

/// Exact minimum number of rectangles free of `No` cells that together cover
/// every `Yes` cell.
pub fn min_rect_cover(p: &PromiseMatrix) -> Result<CoverResult> {
    if p.rows > MAX_COVER_SIDE || p.cols > MAX_COVER_SIDE {
        return Err(Error::budget(format!("{}x{} matrix exceeds side {MAX_COVER_SIDE}", p.rows, p.cols)));
    }
    let all_cols = (1u32 << p.cols) - 1;
    // ok[r]: columns c where (r, c) is not a no cell.
    let ok: Vec<u32> =
        (0..p.rows).map(|r| (0..p.cols).filter(|&c| p.get(r, c) != Cell::No).fold(0, |m, c| m | 1 << c)).collect();
    let mut yes = CellSet::default();
    for r in 0..p.rows {
        for c in 0..p.cols {
            if p.get(r, c) == Cell::Yes {
                cell_bit(&mut yes, r * p.cols + c);
            }
        }
    }
    if is_empty(&yes) {
        return Ok(CoverResult { count: 0, log2: f64::NEG_INFINITY, rectangles: vec![] });
    }

    // Maximal valid rectangles: close every row subset under its common
    // columns and back.
    let mut rects: Vec<(u32, u32, CellSet)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for rows in 1u32..1 << p.rows {
        let cols = crate::bits::mask_iter(rows as u64).fold(all_cols, |m, r| m & ok[r]);
        if cols == 0 {
            continue;
        }
        let closed = (0..p.rows).filter(|&r| ok[r] & cols == cols).fold(0u32, |m, r| m | 1 << r);
        if !seen.insert(closed) {
            continue;
        }
        let mut cells = CellSet::default();
        for r in crate::bits::mask_iter(closed as u64) {
            for c in crate::bits::mask_iter(cols as u64) {
                cell_bit(&mut cells, r * p.cols + c);
            }
        }
        for w in 0..4 {
            cells[w] &= yes[w];
        }
        if !is_empty(&cells) {
            rects.push((closed, cols, cells));
        }
    }

    // Greedy incumbent.
    let mut best: Vec<usize> = Vec::new();
    let mut left = yes;
    while !is_empty(&left) {
        let (i, _) = rects.iter().enumerate().max_by_key(|(_, r)| and_count(&r.2, &left)).unwrap();
        best.push(i);
        for w in 0..4 {
            left[w] &= !rects[i].2[w];
        }
    }
    let max_cells = rects.iter().map(|r| and_count(&r.2, &yes)).max().unwrap_or(1);

    struct Search<'a> {
        rects: &'a [(u32, u32, CellSet)],
        best: Vec<usize>,
        chosen: Vec<usize>,
        nodes: u64,
        max_cells: u32,
    }
    impl Search<'_> {
        fn run(&mut self, left: CellSet) -> bool {
            self.nodes += 1;
            if self.nodes > NODE_BUDGET {
                return false;
            }
            let remaining: u32 = left.iter().map(|w| w.count_ones()).sum();
            if remaining == 0 {
                if self.chosen.len() < self.best.len() {
                    self.best = self.chosen.clone();
                }
                return true;
            }
            let bound = remaining.div_ceil(self.max_cells) as usize;
            if self.chosen.len() + bound.max(1) >= self.best.len() {
                return true;
            }
            // Branch on the uncovered cell with fewest covering rectangles.
            let mut pick: Option<Vec<usize>> = None;
            for w in 0..4 {
                let mut bits = left[w];
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let opts: Vec<usize> =
                        (0..self.rects.len()).filter(|&i| self.rects[i].2[w] >> b & 1 == 1).collect();
                    if pick.as_ref().is_none_or(|p| opts.len() < p.len()) {
                        pick = Some(opts);
                    }
                }
            }
            let mut opts = pick.unwrap();
            opts.sort_by_key(|&i| std::cmp::Reverse(and_count(&self.rects[i].2, &left)));
            for i in opts {
                let mut next = left;
                for w in 0..4 {
                    next[w] &= !self.rects[i].2[w];
                }
                self.chosen.push(i);
                let ok = self.run(next);
                self.chosen.pop();
                if !ok {
                    return false;
                }
            }
            true
        }
    }
    let mut s = Search { rects: &rects, best, chosen: vec![], nodes: 0, max_cells };
    if !s.run(yes) {
        return Err(Error::budget(format!("set cover exceeded {NODE_BUDGET} nodes")));
    }
    let count = s.best.len();
    Ok(CoverResult {
        count,
        log2: (count as f64).log2(),
        rectangles: s.best.iter().map(|&i| (rects[i].0, rects[i].1)).collect(),
    })
}

/// Vertices equal is yes, adjacent is no, anything else is unconstrained.
pub fn graph_eq(g: &SimpleGraph) -> PromiseMatrix {
    let n = g.vertex_count();
    PromiseMatrix::from_fn(n, n, |u, v| {
        if u == v {
            Cell::Yes
        } else if g.has_edge(u, v) {
            Cell::No
        } else {
            Cell::DontCare
        }
    })
}

pub fn graph_ineq(g: &SimpleGraph) -> PromiseMatrix {
    graph_eq(g).negate()
}

const MAX_VERIFY_VERTICES: usize = 12;

fn verify_size(g: &SimpleGraph) -> Result<()> {
    if g.vertex_count() > MAX_VERIFY_VERTICES {
        Err(Error::budget(format!("{} vertices exceed {MAX_VERIFY_VERTICES}", g.vertex_count())))
    } else {
        Ok(())
    }
}

/// Checks that the equality cover count equals the chromatic number.
pub fn verify_graph_eq_ncc(g: &SimpleGraph) -> Result<Check> {
    verify_size(g)?;
    let cover = min_rect_cover(&graph_eq(g))?.count;
    let chi = chromatic_number(g)?;
    Ok(Check::from_bool(
        "graph-eq-ncc",
        cover == chi,
        format!("cover {cover}, chi {chi} on {} vertices", g.vertex_count()),
    )
    .with_margin(chi as f64 - cover as f64))
}

/// Checks `log log χ ≤ log cover(GraphIneq) ≤ log log χ + 1`; vacuous when
/// `χ = 1`.
pub fn verify_graph_ineq_bounds(g: &SimpleGraph) -> Result<Check> {
    verify_size(g)?;
    let chi = chromatic_number(g)?;
    let id = "graph-ineq-bounds";
    if chi <= 1 {
        return Ok(Check::new(id, Status::Vacuous, format!("chi {chi}: no inequality cells to cover")));
    }
    let cover = min_rect_cover(&graph_ineq(g))?.count;
    let lower = (chi as f64).log2().log2();
    let upper = lower + 1.0;
    let value = (cover as f64).log2();
    let slack = crate::boolcore::LOG_SLACK;
    let margin = (value - lower).min(upper - value);
    Ok(Check::from_bool(
        id,
        value >= lower - slack && value <= upper + slack,
        format!("chi {chi}, cover {cover}: {lower:.4} <= {value:.4} <= {upper:.4}"),
    )
    .with_margin(margin))
}

/// Count form of the bound between a function's cover and its complement's:
/// `cover(yes) ≤ 2^cover(no)`.
pub fn verify_ncc_vs_concc(p: &PromiseMatrix) -> Result<Check> {
    if !p.is_total() {
        return Err(Error::invalid("matrix has unconstrained cells"));
    }
    if p.rows > 12 || p.cols > 12 {
        return Err(Error::budget(format!("{}x{} exceeds side 12", p.rows, p.cols)));
    }
    let c1 = min_rect_cover(p)?.count;
    let c0 = min_rect_cover(&p.negate())?.count;
    let rhs = 1u64 << c0.min(63);
    Ok(Check::from_bool("ncc-vs-concc", (c1 as u64) <= rhs, format!("cover1 {c1} <= 2^cover0 = 2^{c0}"))
        .with_margin(rhs as f64 - c1 as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Oracle: try every family of k rectangles drawn from all rectangles.
    fn cover_brute(p: &PromiseMatrix) -> usize {
        let valid = |rm: u32, cm: u32| {
            (0..p.rows())
                .all(|r| rm >> r & 1 == 0 || (0..p.cols()).all(|c| cm >> c & 1 == 0 || p.get(r, c) != Cell::No))
        };
        let mut rects = vec![];
        for rm in 1u32..1 << p.rows() {
            for cm in 1u32..1 << p.cols() {
                if valid(rm, cm) {
                    rects.push((rm, cm));
                }
            }
        }
        let yes: Vec<(usize, usize)> = (0..p.rows())
            .flat_map(|r| (0..p.cols()).map(move |c| (r, c)))
            .filter(|&(r, c)| p.get(r, c) == Cell::Yes)
            .collect();
        fn go(k: usize, start: usize, rects: &[(u32, u32)], left: &[(usize, usize)]) -> bool {
            if left.is_empty() {
                return true;
            }
            if k == 0 {
                return false;
            }
            (start..rects.len()).any(|i| {
                let (rm, cm) = rects[i];
                let rest: Vec<_> =
                    left.iter().copied().filter(|&(r, c)| !(rm >> r & 1 == 1 && cm >> c & 1 == 1)).collect();
                rest.len() < left.len() && go(k - 1, i + 1, rects, &rest)
            })
        }
        (0..).find(|&k| go(k, 0, &rects, &yes)).unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(min_rect_cover(&PromiseMatrix::new(3, 4, Cell::Yes)).unwrap().count, 1);
        let eq = min_rect_cover(&PromiseMatrix::equality(5)).unwrap();
        assert_eq!(eq.count, 5);
        assert!((eq.log2 - 5f64.log2()).abs() < 1e-12);
        assert_eq!(min_rect_cover(&graph_eq(&SimpleGraph::empty(6))).unwrap().count, 1);
        assert_eq!(graph_eq(&SimpleGraph::complete(2)), PromiseMatrix::equality(2));
        let c5 = graph_eq(&SimpleGraph::cycle(5));
        assert_eq!((c5.count(Cell::Yes), c5.count(Cell::No), c5.count(Cell::DontCare)), (5, 10, 10));
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let p = PromiseMatrix::from_fn(r, c, |_, _| match rng.gen_range(0..3) {
                0 => Cell::Yes,
                1 => Cell::No,
                _ => Cell::DontCare,
            });
            assert_eq!(min_rect_cover(&p).unwrap().count, cover_brute(&p), "{p:?}");
        }
    }

    #[test]
    fn equality_complement_cover() {
        // Covering the off-diagonal of EQ_4 needs four rectangles, not two.
        let eq4 = PromiseMatrix::equality(4);
        assert_eq!(min_rect_cover(&eq4.negate()).unwrap().count, 4);
        assert_eq!(cover_brute(&eq4.negate()), 4);
        assert!(verify_ncc_vs_concc(&eq4).unwrap().passed());
    }

    #[test]
    fn graph_checks() {
        assert!(verify_graph_eq_ncc(&SimpleGraph::complete(3)).unwrap().passed());
        assert!(verify_graph_eq_ncc(&SimpleGraph::petersen()).unwrap().passed());
        let k4 = verify_graph_ineq_bounds(&SimpleGraph::complete(4)).unwrap();
        assert!(k4.passed(), "{k4:?}");
        assert!(verify_graph_ineq_bounds(&SimpleGraph::complete(2)).unwrap().passed());
        assert_eq!(verify_graph_ineq_bounds(&SimpleGraph::empty(4)).unwrap().status, Status::Vacuous);
    }
}
