//! Finite simple graphs, stable sets and perfect-graph recognition.

use std::fmt;

use crate::canon::{self, LevelCode};
use crate::error::{Error, Result};
use crate::family::{bits, full_mask, SubsetFamily, MAX_GROUND};
use crate::poset::{EnumMode, MAX_ENUM_ORDER};

/// Largest graph accepted by the brute-force chromatic number check.
pub const MAX_BRUTE_FORCE_ORDER: usize = 8;

/// A loopless undirected graph on `{0, .., d-1}` (printed 1-based).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; {:?})", self.len(), self.edges())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddStructureKind {
    Hole,
    Antihole,
}

/// An induced odd cycle of length at least five, in `G` (hole) or in the
/// complement of `G` (antihole). `cycle` lists 0-based vertices in cycle
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddStructure {
    pub kind: OddStructureKind,
    pub cycle: Vec<usize>,
}

impl Graph {
    pub fn empty(d: usize) -> Self {
        assert!(d <= MAX_GROUND, "graph too large");
        Self { adj: vec![0; d] }
    }

    pub fn complete(d: usize) -> Self {
        let all = full_mask(d);
        Self {
            adj: (0..d).map(|i| all & !(1 << i)).collect(),
        }
    }

    pub fn cycle(d: usize) -> Self {
        let edges: Vec<_> = (0..d).map(|i| (i, (i + 1) % d)).collect();
        Self::from_edges(d, &edges).expect("cycle edges are valid")
    }

    pub fn path(d: usize) -> Self {
        let edges: Vec<_> = (1..d).map(|i| (i - 1, i)).collect();
        Self::from_edges(d, &edges).expect("path edges are valid")
    }

    /// Builds a graph from 0-based edges. Loops and out-of-range endpoints
    /// are rejected; repeated edges collapse.
    pub fn from_edges(d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if d > MAX_GROUND {
            return Err(Error::TooLarge {
                what: "graph",
                size: d,
                max: MAX_GROUND,
            });
        }
        let mut adj = vec![0u64; d];
        for &(i, j) in edges {
            if i >= d || j >= d {
                return Err(Error::InvalidInput(format!(
                    "edge {} {} outside vertex set of size {d}",
                    i + 1,
                    j + 1
                )));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("loop at vertex {}", i + 1)));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        Ok(Self { adj })
    }

    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self> {
        let d = adj.len();
        for i in 0..d {
            if adj[i] >> i & 1 == 1 || adj[i] & !full_mask(d) != 0 {
                return Err(Error::InvalidInput(format!("bad adjacency row {}", i + 1)));
            }
            if bits(adj[i]).any(|j| adj[j] >> i & 1 == 0) {
                return Err(Error::InvalidInput("adjacency is not symmetric".into()));
            }
        }
        Ok(Self { adj })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i] >> j & 1 == 1
    }

    pub fn neighbors(&self, i: usize) -> u64 {
        self.adj[i]
    }

    pub fn has_no_edges(&self) -> bool {
        self.adj.iter().all(|&a| a == 0)
    }

    /// Edges `(i, j)` with `i < j`, 0-based, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| bits(self.adj[i] >> i >> 1).map(move |j| (i, i + 1 + j)))
            .collect()
    }

    pub fn complement(&self) -> Self {
        let all = full_mask(self.len());
        Self {
            adj: (0..self.len())
                .map(|i| !self.adj[i] & all & !(1 << i))
                .collect(),
        }
    }

    /// Graph obtained by appending `extra` isolated vertices.
    pub fn with_isolated(&self, extra: usize) -> Self {
        let mut adj = self.adj.clone();
        adj.extend(std::iter::repeat_n(0, extra));
        Self { adj }
    }

    /// Induced subgraph on `subset`, relabelled in increasing label order.
    pub fn induced(&self, subset: u64) -> Self {
        let keep: Vec<usize> = bits(subset & full_mask(self.len())).collect();
        let adj = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .enumerate()
                    .filter(|(_, &j)| self.has_edge(i, j))
                    .fold(0u64, |acc, (nj, _)| acc | 1 << nj)
            })
            .collect();
        Self { adj }
    }

    pub fn is_stable(&self, set: u64) -> bool {
        bits(set).all(|i| self.adj[i] & set == 0)
    }

    /// All stable (independent) sets, including `∅` and every singleton.
    pub fn stable_sets(&self) -> SubsetFamily {
        SubsetFamily::new(self.len(), self.stable_masks(full_mask(self.len())))
    }

    fn stable_masks(&self, within: u64) -> Vec<u64> {
        fn walk(g: &Graph, cand: u64, cur: u64, out: &mut Vec<u64>) {
            out.push(cur);
            let mut rest = cand;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                walk(g, rest & !g.adj[v], cur | 1 << v, out);
            }
        }
        let mut out = Vec::new();
        walk(self, within, 0, &mut out);
        out
    }

    /// Largest clique inside `within`.
    pub fn clique_number_in(&self, within: u64) -> usize {
        self.complement()
            .stable_masks(within)
            .iter()
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Chromatic number of the subgraph induced on `within`, by exhaustive
    /// colouring with pruning.
    pub fn chromatic_number_in(&self, within: u64) -> usize {
        let verts: Vec<usize> = bits(within).collect();
        if verts.is_empty() {
            return 0;
        }
        let lower = self.clique_number_in(within).max(1);
        (lower..=verts.len())
            .find(|&k| {
                let mut colour = vec![usize::MAX; self.len()];
                self.colourable(&verts, 0, k, &mut colour)
            })
            .expect("n colours always suffice")
    }

    fn colourable(&self, verts: &[usize], idx: usize, k: usize, colour: &mut [usize]) -> bool {
        if idx == verts.len() {
            return true;
        }
        let v = verts[idx];
        let used = verts[..idx]
            .iter()
            .filter(|&&u| self.has_edge(u, v))
            .fold(0u64, |acc, &u| acc | 1 << colour[u]);
        // colours are interchangeable: never open more than one fresh colour
        let opened = verts[..idx]
            .iter()
            .map(|&u| colour[u] + 1)
            .max()
            .unwrap_or(0);
        for c in 0..k.min(opened + 1) {
            if used >> c & 1 == 0 {
                colour[v] = c;
                if self.colourable(verts, idx + 1, k, colour) {
                    return true;
                }
            }
        }
        colour[v] = usize::MAX;
        false
    }

    /// Searches for an odd hole, then for an odd antihole, scanning odd
    /// subset sizes `5 ≤ k ≤ d` in increasing order.
    pub fn find_odd_structure(&self) -> Option<OddStructure> {
        if let Some(cycle) = self.find_odd_hole() {
            return Some(OddStructure {
                kind: OddStructureKind::Hole,
                cycle,
            });
        }
        self.complement().find_odd_hole().map(|cycle| OddStructure {
            kind: OddStructureKind::Antihole,
            cycle,
        })
    }

    fn find_odd_hole(&self) -> Option<Vec<usize>> {
        let d = self.len();
        let mut k = 5;
        while k <= d {
            let mut found = None;
            for_each_subset_of_size(d, k, |s| {
                if found.is_none() {
                    found = self.induced_cycle_order(s);
                }
            });
            if found.is_some() {
                return found;
            }
            k += 2;
        }
        None
    }

    /// If `set` induces a chordless cycle, its vertices in cycle order.
    pub fn induced_cycle_order(&self, set: u64) -> Option<Vec<usize>> {
        let n = set.count_ones() as usize;
        if n < 3 || bits(set).any(|v| (self.adj[v] & set).count_ones() != 2) {
            return None;
        }
        let start = set.trailing_zeros() as usize;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = bits(self.adj[cur] & set).find(|&u| u != prev)?;
            if next == start {
                break;
            }
            order.push(next);
            prev = cur;
            cur = next;
        }
        (order.len() == n).then_some(order)
    }

    /// Perfection via the absence of odd holes and odd antiholes.
    pub fn is_perfect(&self) -> bool {
        self.find_odd_structure().is_none()
    }

    /// Perfection from the definition: `χ(H) = ω(H)` for every induced
    /// subgraph `H`.
    pub fn perfection_by_definition(&self) -> Result<bool> {
        if self.len() > MAX_BRUTE_FORCE_ORDER {
            return Err(Error::TooLarge {
                what: "brute-force perfection test",
                size: self.len(),
                max: MAX_BRUTE_FORCE_ORDER,
            });
        }
        Ok((1..=full_mask(self.len()))
            .all(|h| self.chromatic_number_in(h) == self.clique_number_in(h)))
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        let d = self.len();
        let mut inv = vec![0usize; d];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        Self {
            adj: perm
                .iter()
                .map(|&old| bits(self.adj[old]).fold(0u64, |acc, j| acc | 1 << inv[j]))
                .collect(),
        }
    }

    /// Smallest edge code over all relabelings (upper triangle read level by
    /// level).
    pub fn canonical_code(&self) -> Result<u64> {
        check_canon_size(self.len())?;
        Ok(canon::minimize(self).0)
    }

    pub fn canonical_form(&self) -> Result<Self> {
        check_canon_size(self.len())?;
        let (_, perm) = canon::minimize(self);
        Ok(self.relabel(&perm))
    }

    pub fn is_isomorphic(&self, other: &Graph) -> Result<bool> {
        Ok(self.len() == other.len() && self.canonical_code()? == other.canonical_code()?)
    }
}

fn check_canon_size(d: usize) -> Result<()> {
    if d > 11 {
        return Err(Error::TooLarge {
            what: "canonical labelling",
            size: d,
            max: 11,
        });
    }
    Ok(())
}

impl LevelCode for Graph {
    fn points(&self) -> usize {
        self.len()
    }

    fn level_width(&self, k: usize) -> u32 {
        k as u32
    }

    fn level_bits(&self, perm: &[usize], k: usize) -> u64 {
        let row = self.adj[perm[k]];
        perm[..k]
            .iter()
            .fold(0u64, |acc, &pi| (acc << 1) | (row >> pi & 1))
    }
}

pub(crate) fn for_each_subset_of_size<F: FnMut(u64)>(d: usize, k: usize, mut f: F) {
    if k > d {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    // Gosper's hack
    let mut s: u64 = (1u64 << k) - 1;
    let limit = 1u64 << d;
    while s < limit {
        f(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

/// Visits every labelled graph on `[d]`, ordered by edge bitmask.
pub fn for_each_labeled_graph<F: FnMut(&Graph)>(d: usize, mut visit: F) -> Result<()> {
    if d > MAX_ENUM_ORDER {
        return Err(Error::TooLarge {
            what: "graph enumeration",
            size: d,
            max: MAX_ENUM_ORDER,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (i + 1..d).map(move |j| (i, j)))
        .collect();
    for mask in 0u64..1 << pairs.len() {
        let mut adj = vec![0u64; d];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
        visit(&Graph { adj });
    }
    Ok(())
}

/// All simple graphs on `[d]`, labelled or one canonical representative per
/// isomorphism class (sorted by canonical code).
pub fn enumerate_graphs(d: usize, mode: EnumMode) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    match mode {
        EnumMode::Labeled => for_each_labeled_graph(d, |g| out.push(g.clone()))?,
        EnumMode::UpToIso => {
            let identity: Vec<usize> = (0..d).collect();
            let mut reps = Vec::new();
            for_each_labeled_graph(d, |g| {
                if canon::is_minimal(g) {
                    reps.push((canon::code(g, &identity), g.clone()));
                }
            })?;
            reps.sort_by_key(|(c, _)| *c);
            out = reps.into_iter().map(|(_, g)| g).collect();
        }
    }
    Ok(out)
}
