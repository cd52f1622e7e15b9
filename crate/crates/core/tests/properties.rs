//! Randomized invariants checked against small brute-force oracles.

use std::collections::{BTreeSet, VecDeque};

use krwlab::boolcore::{binomial_entropy_bounds, BitString, Depth, LinearCode, TruthTable};
use krwlab::detcc::{exact_cc, formula_complexity_rect, optimal_protocol, validate_protocol, SearchBudget};
use krwlab::ndcc::{chromatic_number, clique_number, min_rect_cover, Cell, PromiseMatrix, SimpleGraph};
use krwlab::prefixthick::{
    brute_force_winning_set, intersect_witness, is_prefix_thick, project_family_bound, winning_set, AlphabetProfile,
    StringSet,
};
use krwlab::relations::kw;
use proptest::prelude::*;

fn string_set(q: usize, m: usize, mask: u64) -> StringSet {
    let universe = StringSet::full(AlphabetProfile::uniform(m, q));
    let mask = if universe.len() >= 64 { mask } else { mask & ((1 << universe.len()) - 1) };
    StringSet::from_mask(&universe, mask)
}

// Smallest number of colors by trying every assignment.
fn brute_chromatic(g: &SimpleGraph) -> usize {
    let n = g.vertex_count();
    if n == 0 {
        return 0;
    }
    (1..=n)
        .find(|&k| {
            let total = k.pow(n as u32);
            (0..total).any(|code| {
                let color = |v: usize| (code / k.pow(v as u32)) % k;
                g.edges().iter().all(|&(u, v)| color(u) != color(v))
            })
        })
        .expect("n colors always suffice")
}

// Fewest No-free rectangles covering every Yes cell, by breadth-first search
// over covered-cell masks.
fn brute_cover(p: &PromiseMatrix) -> usize {
    let (r, c) = (p.rows(), p.cols());
    let cell = |i: usize, j: usize| 1u32 << (i * c + j);
    let target: u32 = (0..r)
        .flat_map(|i| (0..c).map(move |j| (i, j)))
        .filter(|&(i, j)| p.get(i, j) == Cell::Yes)
        .map(|(i, j)| cell(i, j))
        .sum();
    let mut rects = Vec::new();
    for rm in 1u32..1 << r {
        for cm in 1u32..1 << c {
            let cells: Vec<(usize, usize)> = (0..r)
                .filter(|i| rm >> i & 1 == 1)
                .flat_map(|i| (0..c).filter(move |j| cm >> j & 1 == 1).map(move |j| (i, j)))
                .collect();
            if cells.iter().all(|&(i, j)| p.get(i, j) != Cell::No) {
                rects.push(cells.iter().map(|&(i, j)| cell(i, j)).sum::<u32>() & target);
            }
        }
    }
    let mut dist = vec![usize::MAX; 1 << (r * c)];
    dist[0] = 0;
    let mut queue = VecDeque::from([0u32]);
    while let Some(s) = queue.pop_front() {
        if s == target {
            return dist[s as usize];
        }
        for &rect in &rects {
            let t = s | rect;
            if dist[t as usize] == usize::MAX {
                dist[t as usize] = dist[s as usize] + 1;
                queue.push_back(t);
            }
        }
    }
    unreachable!("single cells cover every Yes cell")
}

fn bit_strings(m: usize, mask: u32) -> Vec<BitString> {
    (0..1u32 << m).filter(|v| mask >> v & 1 == 1).map(|v| BitString::new(m, v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn winning_set_matches_subtree_search(q in 2usize..=4, m in 1usize..=3, mask: u64) {
        let x = string_set(q, m, mask);
        prop_assume!(x.len() <= 14);
        let w = winning_set(&x).unwrap();
        prop_assert_eq!(w.len(), x.len());
        prop_assert_eq!(w, brute_force_winning_set(&x).unwrap());
    }

    #[test]
    fn thick_sets_share_a_witness(q in 3usize..=4, m in 1usize..=3, a: [u64; 3], b: [u64; 3]) {
        // Dense sets, so that thickness is common.
        let (x, y) = (string_set(q, m, a[0] | a[1] | a[2]), string_set(q, m, b[0] | b[1] | b[2]));
        let t = q as f64 / 2.0;
        prop_assume!(is_prefix_thick(&x, t).0 && is_prefix_thick(&y, t).0);
        let w = intersect_witness(&x, &y).unwrap().expect("thick sets intersect");
        prop_assert!(x.contains(&w) && y.contains(&w));
    }

    #[test]
    fn thick_part_is_a_thick_subset(q in 2usize..=4, m in 1usize..=3, mask: u64, t in 0.0f64..3.0) {
        let x = string_set(q, m, mask);
        if let (true, Some(part)) = is_prefix_thick(&x, t) {
            prop_assert!(part.is_subset(&x));
            prop_assert!(is_prefix_thick(&part, t).0);
        }
    }

    #[test]
    fn projection_bound_holds(q in 2usize..=3, m in 1usize..=3, mask: u64, eps in 0.0f64..0.5) {
        let x = string_set(q, m, mask);
        let b = project_family_bound(&x, eps).unwrap();
        prop_assert!(b.holds && b.image_holds && b.image_is_subfamily && b.downward_closed, "{:?}", b);
    }

    #[test]
    fn chromatic_number_matches_colorings(n in 1usize..=6, code: u64) {
        let g = SimpleGraph::from_edge_code(n, code & ((1 << (n * (n - 1) / 2)) - 1));
        let chi = chromatic_number(&g).unwrap();
        prop_assert_eq!(chi, brute_chromatic(&g));
        prop_assert!(clique_number(&g).unwrap() <= chi);
    }

    #[test]
    fn graph6_round_trips(n in 0usize..=10, code: u64) {
        let pairs = n * n.saturating_sub(1) / 2;
        let g = SimpleGraph::from_edge_code(n, if pairs >= 64 { code } else { code & ((1 << pairs) - 1) });
        prop_assert_eq!(SimpleGraph::from_graph6(&g.to_graph6()).unwrap(), g);
    }

    #[test]
    fn rectangle_cover_is_minimal(rows in 1usize..=3, cols in 1usize..=4, cells in prop::collection::vec(0u8..3, 12)) {
        let p = PromiseMatrix::from_fn(rows, cols, |i, j| match cells[i * cols + j] {
            0 => Cell::Yes,
            1 => Cell::No,
            _ => Cell::DontCare,
        });
        let cover = min_rect_cover(&p).unwrap();
        prop_assert_eq!(cover.count, brute_cover(&p));
        prop_assert_eq!(cover.rectangles.len(), cover.count);
        for i in 0..rows {
            for j in 0..cols {
                let hits = cover.rectangles.iter().filter(|(rm, cm)| rm >> i & 1 == 1 && cm >> j & 1 == 1).count();
                match p.get(i, j) {
                    Cell::Yes => prop_assert!(hits > 0),
                    Cell::No => prop_assert_eq!(hits, 0),
                    Cell::DontCare => {}
                }
            }
        }
    }

    #[test]
    fn formula_size_is_subadditive(ones: u8, split: u8, zeros_mask: u8) {
        let a = ones as u32;
        let b = !a & 0xff & zeros_mask as u32;
        prop_assume!(a != 0 && b != 0);
        let budget = SearchBudget::default();
        let (l, d) = formula_complexity_rect(&bit_strings(3, a), &bit_strings(3, b), budget).unwrap();
        let (l1, _) = formula_complexity_rect(&bit_strings(3, a & split as u32), &bit_strings(3, b), budget).unwrap();
        let (l2, _) = formula_complexity_rect(&bit_strings(3, a & !(split as u32)), &bit_strings(3, b), budget).unwrap();
        prop_assert!(l <= l1 + l2);
        let depth = d.finite().unwrap();
        prop_assert!(l <= 1u64 << depth && depth as u64 <= l);
    }

    #[test]
    fn optimal_kw_protocol_validates(index in 1u64..255) {
        let f = TruthTable::from_index(3, index);
        let rel = kw(&f).unwrap();
        let budget = SearchBudget::default();
        let p = optimal_protocol(&rel, budget).unwrap();
        prop_assert!(validate_protocol(&p, &rel).is_valid());
        prop_assert_eq!(Depth::Finite(p.depth()), exact_cc(&rel, budget).unwrap());
    }

    #[test]
    fn truth_table_hex_round_trips(arity in 0usize..=6, index: u64) {
        let size = 1u64 << arity;
        let f = TruthTable::from_fn(arity, |x| index >> (x as u64 % 64) & 1 == 1 && size > 0);
        prop_assert_eq!(TruthTable::from_hex(arity, &f.to_hex()).unwrap(), f);
    }

    #[test]
    fn code_distance_is_min_weight(len in 1usize..=10, basis in prop::collection::vec(1u32..1024, 1..4)) {
        let basis: Vec<u32> = basis.into_iter().map(|v| v & ((1 << len) - 1)).filter(|&v| v != 0).collect();
        if let Ok(code) = LinearCode::new(len, basis) {
            let words: BTreeSet<u32> = code.codewords().into_iter().collect();
            prop_assert_eq!(words.len(), 1 << code.dimension());
            let min = words.iter().filter(|&&w| w != 0).map(|w| w.count_ones() as usize).min();
            prop_assert_eq!(code.distance(), min);
        }
    }

    #[test]
    fn binomial_within_entropy_bounds(n in 1u64..=60, k in 0u64..=60) {
        prop_assume!(k <= n);
        let b = binomial_entropy_bounds(n, k).unwrap();
        let e = b.exact as f64;
        prop_assert!(b.lower <= e * (1.0 + 1e-9) && e <= b.upper * (1.0 + 1e-9));
    }
}
