use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAX_Q: usize = 255;

/// `m` alphabets of a common size `q`. Symbols are indices `0..q`; each
/// coordinate keeps a table of labels for display and parsing.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AlphabetProfile {
    labels: Vec<Vec<String>>,
}

impl AlphabetProfile {
    /// The same alphabet `0..q` at every coordinate.
    pub fn uniform(m: usize, q: usize) -> Self {
        assert!((1..=MAX_Q).contains(&q));
        AlphabetProfile { labels: vec![(0..q).map(|s| s.to_string()).collect(); m] }
    }

    pub fn with_labels(labels: Vec<Vec<String>>) -> Result<Self> {
        let q = labels.first().map_or(1, Vec::len);
        if q == 0 || q > MAX_Q {
            return Err(Error::invalid(format!("alphabet size {q} outside 1..={MAX_Q}")));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.len() != q {
                return Err(Error::invalid(format!("alphabet {} has size {}, expected {q}", i + 1, l.len())));
            }
            let mut sorted = l.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != q {
                return Err(Error::invalid(format!("alphabet {} repeats a label", i + 1)));
            }
        }
        Ok(AlphabetProfile { labels })
    }

    pub fn m(&self) -> usize {
        self.labels.len()
    }

    pub fn q(&self) -> usize {
        self.labels.first().map_or(1, Vec::len)
    }

    pub fn label(&self, coord: usize, symbol: u8) -> &str {
        &self.labels[coord][symbol as usize]
    }

    pub fn symbol(&self, coord: usize, label: &str) -> Option<u8> {
        self.labels[coord].iter().position(|l| l == label).map(|s| s as u8)
    }

    /// Keeps the coordinates whose bit is set in `mask` (bit `i` is
    /// coordinate `i`, 0-based).
    pub fn project(&self, mask: u32) -> AlphabetProfile {
        let labels = (0..self.m()).filter(|&i| mask >> i & 1 == 1).map(|i| self.labels[i].clone()).collect();
        AlphabetProfile { labels }
    }
}

/// A set of strings over an alphabet profile, kept sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct StringSet {
    profile: AlphabetProfile,
    strings: Vec<Vec<u8>>,
}

impl StringSet {
    pub fn new(profile: AlphabetProfile, mut strings: Vec<Vec<u8>>) -> Result<Self> {
        let (m, q) = (profile.m(), profile.q());
        for s in &strings {
            if s.len() != m || s.iter().any(|&c| c as usize >= q) {
                return Err(Error::invalid(format!("string {s:?} is not in the {m}-coordinate, size-{q} profile")));
            }
        }
        strings.sort_unstable();
        strings.dedup();
        Ok(StringSet { profile, strings })
    }

    pub fn empty(profile: AlphabetProfile) -> Self {
        StringSet { profile, strings: Vec::new() }
    }

    pub fn full(profile: AlphabetProfile) -> Self {
        let (m, q) = (profile.m(), profile.q());
        let mut strings = vec![vec![]];
        for _ in 0..m {
            strings = strings
                .into_iter()
                .flat_map(|s| {
                    (0..q as u8).map(move |c| {
                        let mut t = s.clone();
                        t.push(c);
                        t
                    })
                })
                .collect();
        }
        StringSet { profile, strings }
    }

    /// The subset of `universe` selected by the bits of `mask`; strings past
    /// the 64th are never selected.
    pub fn from_mask(universe: &StringSet, mask: u64) -> Self {
        let strings = universe
            .strings
            .iter()
            .take(64)
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, s)| s.clone())
            .collect();
        StringSet { profile: universe.profile.clone(), strings }
    }

    /// Parses strings written with labels separated by whitespace or commas,
    /// one string per line; single-character labels may also be run together.
    pub fn parse(profile: AlphabetProfile, text: &str) -> Result<Self> {
        let mut strings = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let tokens: Vec<String> = if line.contains(|c: char| c.is_whitespace() || c == ',') {
                line.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(String::from)
                    .collect()
            } else {
                line.chars().map(String::from).collect()
            };
            if tokens.len() != profile.m() {
                return Err(Error::parse(format!("{line:?} has {} symbols, expected {}", tokens.len(), profile.m())));
            }
            let s = tokens
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    profile.symbol(i, t).ok_or_else(|| Error::parse(format!("unknown symbol {t:?} at {}", i + 1)))
                })
                .collect::<Result<Vec<u8>>>()?;
            strings.push(s);
        }
        Self::new(profile, strings)
    }

    pub fn profile(&self) -> &AlphabetProfile {
        &self.profile
    }

    pub fn m(&self) -> usize {
        self.profile.m()
    }

    pub fn q(&self) -> usize {
        self.profile.q()
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn strings(&self) -> &[Vec<u8>] {
        &self.strings
    }

    pub fn contains(&self, s: &[u8]) -> bool {
        self.strings.binary_search_by(|t| t.as_slice().cmp(s)).is_ok()
    }

    pub fn is_subset(&self, other: &StringSet) -> bool {
        self.strings.iter().all(|s| other.contains(s))
    }

    /// `X|_I` for the coordinates in `mask`.
    pub fn project(&self, mask: u32) -> StringSet {
        let keep: Vec<usize> = (0..self.m()).filter(|&i| mask >> i & 1 == 1).collect();
        let strings = self.strings.iter().map(|s| keep.iter().map(|&i| s[i]).collect()).collect();
        StringSet::new(self.profile.project(mask), strings).expect("projection stays in profile")
    }

    pub fn intersection(&self, other: &StringSet) -> StringSet {
        let strings = self.strings.iter().filter(|s| other.contains(s)).cloned().collect();
        StringSet { profile: self.profile.clone(), strings }
    }

    pub fn display_string(&self, s: &[u8]) -> String {
        let parts: Vec<&str> = s.iter().enumerate().map(|(i, &c)| self.profile.label(i, c)).collect();
        if parts.iter().all(|p| p.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(",")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrieNode {
    pub depth: usize,
    pub children: BTreeMap<u8, usize>,
}

/// The trie of a string set; node 0 is the empty prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixTree {
    pub nodes: Vec<TrieNode>,
}

impl PrefixTree {
    pub fn new(x: &StringSet) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::invalid("prefix tree of an empty set"));
        }
        let mut nodes = vec![TrieNode { depth: 0, children: BTreeMap::new() }];
        for s in x.strings() {
            let mut v = 0;
            for &c in s {
                v = match nodes[v].children.get(&c) {
                    Some(&w) => w,
                    None => {
                        let depth = nodes[v].depth + 1;
                        nodes.push(TrieNode { depth, children: BTreeMap::new() });
                        let w = nodes.len() - 1;
                        nodes[v].children.insert(c, w);
                        w
                    }
                };
            }
        }
        Ok(PrefixTree { nodes })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nodes[v].children.len()
    }

    pub fn node_at(&self, prefix: &[u8]) -> Option<usize> {
        prefix.iter().try_fold(0, |v, c| self.nodes[v].children.get(c).copied())
    }

    /// Minimum degree over internal vertices (vertices above depth `m`).
    pub fn min_degree(&self, m: usize) -> usize {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.depth < m)
            .map(|(v, _)| self.degree(v))
            .min()
            .unwrap_or(usize::MAX)
    }

    /// The common degree at each depth, if every level is uniform.
    pub fn uniform_profile(&self, m: usize) -> Option<Vec<u8>> {
        let mut w = vec![None; m];
        for (v, n) in self.nodes.iter().enumerate() {
            if n.depth < m {
                let d = self.degree(v) as u8;
                match w[n.depth] {
                    None => w[n.depth] = Some(d),
                    Some(e) if e == d => {}
                    Some(_) => return None,
                }
            }
        }
        w.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trie_degrees() {
        let p = AlphabetProfile::with_labels(vec![vec!["a".into(), "b".into()]; 2]).unwrap();
        let x = StringSet::parse(p, "aa\nab\nba").unwrap();
        let t = PrefixTree::new(&x).unwrap();
        assert_eq!(t.degree(0), 2);
        assert_eq!(t.degree(t.node_at(&[0]).unwrap()), 2);
        assert_eq!(t.degree(t.node_at(&[1]).unwrap()), 1);
        assert!(t.nodes.len() <= 2 * x.len() + 1);
        assert_eq!(t.uniform_profile(2), None);
        let single = StringSet::new(AlphabetProfile::uniform(3, 4), vec![vec![1, 2, 3]]).unwrap();
        assert_eq!(PrefixTree::new(&single).unwrap().uniform_profile(3), Some(vec![1, 1, 1]));
        let full = StringSet::full(AlphabetProfile::uniform(2, 3));
        assert_eq!(PrefixTree::new(&full).unwrap().uniform_profile(2), Some(vec![3, 3]));
        assert!(PrefixTree::new(&StringSet::empty(AlphabetProfile::uniform(1, 2))).is_err());
    }

    #[test]
    fn profiles_reject_bad_labels() {
        assert!(AlphabetProfile::with_labels(vec![vec!["a".into()], vec!["a".into(), "b".into()]]).is_err());
        assert!(AlphabetProfile::with_labels(vec![vec!["a".into(), "a".into()]]).is_err());
        assert!(StringSet::new(AlphabetProfile::uniform(2, 2), vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn projection() {
        let x =
            StringSet::new(AlphabetProfile::uniform(3, 3), vec![vec![0, 1, 2], vec![0, 2, 2], vec![1, 1, 0]]).unwrap();
        assert_eq!(x.project(0b101).strings(), &[vec![0, 2], vec![1, 0]]);
        assert_eq!(x.project(0).strings(), &[Vec::<u8>::new()]);
    }
}
