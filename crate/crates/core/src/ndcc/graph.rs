use std::fmt;

use rand::Rng;

use crate::bits::mask_iter;
use crate::{Error, Result};

pub const MAX_VERTICES: usize = 32;

/// Undirected simple graph on at most 32 vertices, as adjacency bitmasks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u32>,
}

/// Serialized as its graph6 string.
impl serde::Serialize for SimpleGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_graph6())
    }
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        SimpleGraph { n, adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::invalid(format!("{n} vertices exceed {MAX_VERTICES}")));
        }
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            g.add_edge(u, (u + 1) % n).unwrap();
        }
        g
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Self::from_edges(10, &edges).unwrap()
    }

    /// Each edge present independently with probability `p`.
    pub fn random(n: usize, p: f64, rng: &mut impl Rng) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    /// The graph whose edge set is given by the bits of `code` over the pairs
    /// `(u,v)`, `u < v`, in lexicographic order.
    pub fn from_edge_code(n: usize, code: u64) -> Self {
        let mut g = Self::empty(n);
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if code >> k & 1 == 1 {
                    g.add_edge(u, v).unwrap();
                }
                k += 1;
            }
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::invalid(format!("self-loop at {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::invalid(format!("edge ({u},{v}) outside {} vertices", self.n)));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn neighbors(&self, u: usize) -> u32 {
        self.adj[u]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|u| mask_iter(self.adj[u] as u64).filter(move |&v| v > u).map(move |v| (u, v))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn complement(&self) -> SimpleGraph {
        let all = if self.n == 32 { u32::MAX } else { (1u32 << self.n) - 1 };
        let adj = (0..self.n).map(|u| all & !self.adj[u] & !(1 << u)).collect();
        SimpleGraph { n: self.n, adj }
    }

    pub fn to_graph6(&self) -> String {
        assert!(self.n <= 62);
        let mut out = String::new();
        out.push((self.n as u8 + 63) as char);
        let mut bits = Vec::new();
        for v in 1..self.n {
            for u in 0..v {
                bits.push(self.has_edge(u, v));
            }
        }
        for chunk in bits.chunks(6) {
            let mut c = 0u8;
            for k in 0..6 {
                c = c << 1 | chunk.get(k).copied().unwrap_or(false) as u8;
            }
            out.push((c + 63) as char);
        }
        out
    }

    pub fn from_graph6(s: &str) -> Result<Self> {
        let bytes = s.trim().as_bytes();
        let (&first, rest) = bytes.split_first().ok_or_else(|| Error::parse("empty graph6 string"))?;
        if !(63..=126).contains(&first) || first - 63 > MAX_VERTICES as u8 {
            return Err(Error::parse(format!("unsupported graph6 size byte {first}")));
        }
        let n = (first - 63) as usize;
        let needed = (n * n.saturating_sub(1) / 2).div_ceil(6);
        if rest.len() != needed {
            return Err(Error::parse(format!("graph6 body has {} bytes, expected {needed}", rest.len())));
        }
        let mut bits = Vec::new();
        for &c in rest {
            if !(63..=126).contains(&c) {
                return Err(Error::parse(format!("bad graph6 byte {c}")));
            }
            let v = c - 63;
            for k in (0..6).rev() {
                bits.push(v >> k & 1 == 1);
            }
        }
        let mut g = Self::empty(n);
        let mut k = 0;
        for v in 1..n {
            for u in 0..v {
                if bits[k] {
                    g.add_edge(u, v)?;
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// Lines `v: u w ...` with 0-based vertices. A line `n = K` fixes the
    /// vertex count; otherwise it is one more than the largest index seen.
    /// `#` starts a comment.
    pub fn parse_adjacency_list(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut edges = Vec::new();
        let mut max_seen = None::<usize>;
        let num = |t: &str| t.trim().parse::<usize>().map_err(|e| Error::parse(format!("{t:?}: {e}")));
        for line in text.lines() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("n") {
                if let Some(v) = rest.trim().strip_prefix('=') {
                    declared = Some(num(v)?);
                    continue;
                }
            }
            let (head, tail) =
                line.split_once(':').ok_or_else(|| Error::parse(format!("expected `v: neighbors`, got {line:?}")))?;
            let u = num(head)?;
            max_seen = max_seen.max(Some(u));
            for t in tail.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let v = num(t)?;
                max_seen = max_seen.max(Some(v));
                edges.push((u, v));
            }
        }
        let n = declared.unwrap_or(max_seen.map_or(0, |m| m + 1));
        Self::from_edges(n, &edges)
    }

    pub fn to_adjacency_list(&self) -> String {
        let mut out = format!("n = {}\n", self.n);
        for u in 0..self.n {
            let nb: Vec<String> = mask_iter(self.adj[u] as u64).map(|v| v.to_string()).collect();
            out.push_str(&format!("{u}: {}\n", nb.join(" ")));
        }
        out
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph({}, {:?})", self.n, self.edges())
    }
}

pub const MAX_EXACT_VERTICES: usize = 24;

fn check_exact(g: &SimpleGraph) -> Result<()> {
    if g.n > MAX_EXACT_VERTICES {
        Err(Error::budget(format!("{} vertices exceed {MAX_EXACT_VERTICES} for exact invariants", g.n)))
    } else {
        Ok(())
    }
}

/// Maximum clique size by branch and bound; 0 for the null graph.
pub fn clique_number(g: &SimpleGraph) -> Result<usize> {
    check_exact(g)?;
    fn expand(g: &SimpleGraph, size: usize, mut cand: u32, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            expand(g, size + 1, cand & g.adj[v], best);
        }
    }
    let mut best = 0;
    let all = if g.n == 32 { u32::MAX } else { (1u32 << g.n) - 1 };
    expand(g, 0, all, &mut best);
    Ok(best)
}

pub fn independence_number(g: &SimpleGraph) -> Result<usize> {
    clique_number(&g.complement())
}

/// Chromatic number by DSATUR-ordered branch and bound with the clique
/// number as lower bound; 0 for the null graph.
pub fn chromatic_number(g: &SimpleGraph) -> Result<usize> {
    check_exact(g)?;
    if g.n == 0 {
        return Ok(0);
    }
    let lower = clique_number(g)?;
    let mut colors = vec![usize::MAX; g.n];
    let mut best = g.n + 1;
    dsatur(g, &mut colors, 0, 0, &mut best, lower);
    Ok(best)
}

fn dsatur(g: &SimpleGraph, colors: &mut [usize], colored: usize, used: usize, best: &mut usize, lower: usize) {
    if used >= *best || *best == lower {
        return;
    }
    if colored == g.n {
        *best = used;
        return;
    }
    // Uncolored vertex with the most distinct neighbor colors, then the most
    // uncolored neighbors.
    let mut pick = None;
    let mut key = (0usize, 0usize);
    for v in (0..g.n).filter(|&v| colors[v] == usize::MAX) {
        let mut seen = 0u64;
        let mut free = 0;
        for u in mask_iter(g.adj[v] as u64) {
            if colors[u] == usize::MAX {
                free += 1;
            } else {
                seen |= 1 << colors[u];
            }
        }
        let k = (seen.count_ones() as usize, free);
        if pick.is_none() || k > key {
            pick = Some((v, seen));
            key = k;
        }
    }
    let (v, seen) = pick.unwrap();
    for c in 0..=used {
        if c < used && seen >> c & 1 == 1 {
            continue;
        }
        let next_used = used.max(c + 1);
        if next_used >= *best {
            continue;
        }
        colors[v] = c;
        dsatur(g, colors, colored + 1, next_used, best, lower);
        colors[v] = usize::MAX;
        if *best == lower {
            return;
        }
    }
}

/// `(χ, cl, α)`.
pub fn graph_invariants(g: &SimpleGraph) -> Result<(usize, usize, usize)> {
    Ok((chromatic_number(g)?, clique_number(g)?, independence_number(g)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Brute force: smallest k admitting a proper k-coloring.
    fn chromatic_brute(g: &SimpleGraph) -> usize {
        if g.n == 0 {
            return 0;
        }
        (1..=g.n)
            .find(|&k| {
                let mut colors = vec![0usize; g.n];
                loop {
                    if g.edges().iter().all(|&(u, v)| colors[u] != colors[v]) {
                        return true;
                    }
                    let mut i = 0;
                    loop {
                        if i == g.n {
                            return false;
                        }
                        colors[i] += 1;
                        if colors[i] < k {
                            break;
                        }
                        colors[i] = 0;
                        i += 1;
                    }
                }
            })
            .unwrap()
    }

    #[test]
    fn named_graphs() {
        assert_eq!(graph_invariants(&SimpleGraph::complete(3)).unwrap(), (3, 3, 1));
        assert_eq!(graph_invariants(&SimpleGraph::cycle(5)).unwrap(), (3, 2, 2));
        assert_eq!(graph_invariants(&SimpleGraph::empty(6)).unwrap(), (1, 1, 6));
        assert_eq!(graph_invariants(&SimpleGraph::petersen()).unwrap(), (3, 2, 4));
    }

    #[test]
    fn dsatur_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=7);
            let g = SimpleGraph::random(n, rng.gen_range(0.2..0.8), &mut rng);
            assert_eq!(chromatic_number(&g).unwrap(), chromatic_brute(&g), "{g:?}");
        }
    }

    #[test]
    fn formats_roundtrip() {
        let p = SimpleGraph::petersen();
        assert_eq!(SimpleGraph::from_graph6(&p.to_graph6()).unwrap(), p);
        assert_eq!(SimpleGraph::parse_adjacency_list(&p.to_adjacency_list()).unwrap(), p);
        // K3 in graph6 is "Bw".
        assert_eq!(SimpleGraph::complete(3).to_graph6(), "Bw");
        let g = SimpleGraph::parse_adjacency_list("# triangle\n0: 1 2\n1: 2\n").unwrap();
        assert_eq!(g, SimpleGraph::complete(3));
        assert!(SimpleGraph::parse_adjacency_list("0: 0").is_err());
        assert!(SimpleGraph::from_graph6("B").is_err());
    }
}
