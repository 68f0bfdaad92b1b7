//! Finite posets on `[d]` and the combinatorics performed on them.

use std::collections::HashMap;
use std::fmt;

use crate::canon::{self, LevelCode};
use crate::error::{Error, Result};
use crate::family::{bits, full_mask, SubsetFamily, MAX_GROUND};
use crate::graph::Graph;

/// Largest ground set accepted by the exhaustive enumerators.
pub const MAX_ENUM_ORDER: usize = 7;

/// Whether an enumeration lists every labelled object or one canonical
/// representative per isomorphism class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnumMode {
    Labeled,
    UpToIso,
}

/// A strict partial order on `{0, .., d-1}` (printed 1-based).
///
/// The relation is always stored transitively closed, as a pair of bitmask
/// tables: `up[i]` holds every `j` with `i < j`, `down[i]` every `j` with
/// `j < i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    up: Vec<u64>,
    down: Vec<u64>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({}; {:?})", self.len(), self.cover_relations())
    }
}

impl Poset {
    /// The antichain on `d` elements.
    pub fn antichain(d: usize) -> Self {
        assert!(d <= MAX_GROUND, "poset too large");
        Self {
            up: vec![0; d],
            down: vec![0; d],
        }
    }

    /// The chain `0 < 1 < ... < d-1`.
    pub fn chain(d: usize) -> Self {
        let pairs: Vec<_> = (1..d).map(|i| (i - 1, i)).collect();
        Self::from_relations(d, &pairs).expect("a chain is acyclic")
    }

    /// Builds a poset from 0-based pairs `(i, j)` meaning `i < j`, closing
    /// the relation transitively. Cycles are rejected with the offending
    /// elements (1-based) as witness.
    pub fn from_relations(d: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if d > MAX_GROUND {
            return Err(Error::TooLarge {
                what: "poset",
                size: d,
                max: MAX_GROUND,
            });
        }
        let mut up = vec![0u64; d];
        for &(i, j) in pairs {
            if i >= d || j >= d {
                return Err(Error::InvalidInput(format!(
                    "relation {} < {} outside ground set of size {d}",
                    i + 1,
                    j + 1
                )));
            }
            up[i] |= 1 << j;
        }
        for k in 0..d {
            for i in 0..d {
                if up[i] >> k & 1 == 1 {
                    up[i] |= up[k];
                }
            }
        }
        if let Some(i) = (0..d).find(|&i| up[i] >> i & 1 == 1) {
            let mut cycle: Vec<usize> = (0..d)
                .filter(|&j| up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1)
                .map(|j| j + 1)
                .collect();
            cycle.sort_unstable();
            return Err(Error::Cycle(cycle));
        }
        Ok(Self::from_up(up))
    }

    fn from_up(up: Vec<u64>) -> Self {
        let d = up.len();
        let mut down = vec![0u64; d];
        for (i, &u) in up.iter().enumerate() {
            for j in bits(u) {
                down[j] |= 1 << i;
            }
        }
        Self { up, down }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    /// `i < j` (0-based).
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.up[i] >> j & 1 == 1
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.lt(i, j) || self.lt(j, i)
    }

    /// Elements strictly above `i`.
    pub fn up_set(&self, i: usize) -> u64 {
        self.up[i]
    }

    /// Elements strictly below `i`.
    pub fn down_set(&self, i: usize) -> u64 {
        self.down[i]
    }

    pub fn is_antichain(&self) -> bool {
        self.up.iter().all(|&u| u == 0)
    }

    /// Cover relations `(i, j)`, 0-based, sorted.
    pub fn cover_relations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in bits(self.up[i]) {
                if self.up[i] & self.down[j] == 0 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// All strict relations `(i, j)`, 0-based, sorted.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|i| bits(self.up[i]).map(move |j| (i, j)))
            .collect()
    }

    /// Elements of `set` that are maximal within `set`.
    pub fn maximal_in(&self, set: u64) -> u64 {
        bits(set)
            .filter(|&i| self.up[i] & set == 0)
            .fold(0, |acc, i| acc | 1 << i)
    }

    /// Some linear extension, as a list of elements bottom to top.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut placed = 0u64;
        let mut out = Vec::with_capacity(self.len());
        while out.len() < self.len() {
            let next = (0..self.len())
                .find(|&i| placed >> i & 1 == 0 && self.down[i] & !placed == 0)
                .expect("poset relation is acyclic");
            placed |= 1 << next;
            out.push(next);
        }
        out
    }

    pub fn is_ideal(&self, set: u64) -> bool {
        bits(set).all(|i| self.down[i] & !set == 0)
    }

    /// The downward-closed subsets (poset ideals), including `∅` and `[d]`.
    pub fn ideals(&self) -> SubsetFamily {
        SubsetFamily::new(self.len(), self.ideal_masks())
    }

    fn ideal_masks(&self) -> Vec<u64> {
        fn walk(p: &Poset, order: &[usize], k: usize, cur: u64, out: &mut Vec<u64>) {
            if k == order.len() {
                out.push(cur);
                return;
            }
            let x = order[k];
            walk(p, order, k + 1, cur, out);
            if p.down[x] & !cur == 0 {
                walk(p, order, k + 1, cur | 1 << x, out);
            }
        }
        let order = self.linear_extension();
        let mut out = Vec::new();
        walk(self, &order, 0, 0, &mut out);
        out
    }

    /// The subsets of pairwise incomparable elements, including `∅` and all
    /// singletons.
    pub fn antichains(&self) -> SubsetFamily {
        fn walk(p: &Poset, k: usize, cur: u64, out: &mut Vec<u64>) {
            if k == p.len() {
                out.push(cur);
                return;
            }
            walk(p, k + 1, cur, out);
            if (p.up[k] | p.down[k]) & cur == 0 {
                walk(p, k + 1, cur | 1 << k, out);
            }
        }
        let mut out = Vec::new();
        walk(self, 0, 0, &mut out);
        SubsetFamily::new(self.len(), out)
    }

    /// The dual poset: `i <* j` iff `j < i`.
    pub fn dual(&self) -> Self {
        Self {
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// `self ⊕ other`: the elements of `other` are relabelled after those of
    /// `self` and placed above all of them.
    pub fn ordinal_sum(&self, other: &Poset) -> Result<Self> {
        let (p, q) = (self.len(), other.len());
        if p + q > MAX_GROUND {
            return Err(Error::TooLarge {
                what: "ordinal sum",
                size: p + q,
                max: MAX_GROUND,
            });
        }
        let top = full_mask(p + q) & !full_mask(p);
        let mut up: Vec<u64> = self.up.iter().map(|&u| u | top).collect();
        up.extend(other.up.iter().map(|&u| u << p));
        Ok(Self::from_up(up))
    }

    /// Restriction to the elements of `subset`, relabelled `0..|subset|` in
    /// increasing order of their old labels.
    pub fn induced(&self, subset: u64) -> Self {
        let keep: Vec<usize> = bits(subset & full_mask(self.len())).collect();
        let up = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .enumerate()
                    .filter(|(_, &j)| self.lt(i, j))
                    .fold(0u64, |acc, (nj, _)| acc | 1 << nj)
            })
            .collect();
        Self::from_up(up)
    }

    /// Number of linear extensions, by counting maximal chains of the ideal
    /// lattice: `e(I) = Σ_{x ∈ max I} e(I \ {x})`.
    pub fn linear_extension_count(&self) -> u64 {
        let mut memo: HashMap<u64, u64> = HashMap::new();
        memo.insert(0, 1);
        self.count_from(full_mask(self.len()), &mut memo)
    }

    fn count_from(&self, ideal: u64, memo: &mut HashMap<u64, u64>) -> u64 {
        if let Some(&v) = memo.get(&ideal) {
            return v;
        }
        let total = bits(self.maximal_in(ideal))
            .map(|x| self.count_from(ideal & !(1 << x), memo))
            .sum();
        memo.insert(ideal, total);
        total
    }

    /// Graph joining every comparable pair.
    pub fn comparability_graph(&self) -> Graph {
        let adj = (0..self.len()).map(|i| self.up[i] | self.down[i]).collect();
        Graph::from_adjacency(adj).expect("comparability relation is symmetric and loopless")
    }

    /// True iff `self` and `other` admit a common linear extension, i.e. the
    /// union of both relations is acyclic.
    pub fn common_linear_extension_exists(&self, other: &Poset) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let d = self.len();
        let below: Vec<u64> = (0..d).map(|i| self.down[i] | other.down[i]).collect();
        let mut placed = 0u64;
        for _ in 0..d {
            match (0..d).find(|&i| placed >> i & 1 == 0 && below[i] & !placed == 0) {
                Some(i) => placed |= 1 << i,
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Relabels by `perm`: new element `i` is old element `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let d = self.len();
        let mut inv = vec![0usize; d];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let up = perm
            .iter()
            .map(|&old| bits(self.up[old]).fold(0u64, |acc, j| acc | 1 << inv[j]))
            .collect();
        Self::from_up(up)
    }

    /// Canonical code: the smallest relation code over all relabelings.
    ///
    /// Entries are read level by level, `(i, k)` then `(k, i)` for
    /// `i < k`, `k = 1, .., d-1`.
    pub fn canonical_code(&self) -> Result<u64> {
        check_canon_size(self.len())?;
        Ok(canon::minimize(self).0)
    }

    /// The relabelled representative attaining the canonical code.
    pub fn canonical_form(&self) -> Result<Self> {
        check_canon_size(self.len())?;
        let (_, perm) = canon::minimize(self);
        Ok(self.relabel(&perm))
    }

    pub fn is_isomorphic(&self, other: &Poset) -> Result<bool> {
        Ok(self.len() == other.len() && self.canonical_code()? == other.canonical_code()?)
    }

    pub(crate) fn is_canonical(&self) -> bool {
        canon::is_minimal(self)
    }
}

fn check_canon_size(d: usize) -> Result<()> {
    if d > 8 {
        return Err(Error::TooLarge {
            what: "canonical labelling",
            size: d,
            max: 8,
        });
    }
    Ok(())
}

impl LevelCode for Poset {
    fn points(&self) -> usize {
        self.len()
    }

    fn level_width(&self, k: usize) -> u32 {
        2 * k as u32
    }

    fn level_bits(&self, perm: &[usize], k: usize) -> u64 {
        let pk = perm[k];
        let (up, down) = (self.up[pk], self.down[pk]);
        let mut acc = 0u64;
        for &pi in &perm[..k] {
            acc = (acc << 2) | ((down >> pi & 1) << 1) | (up >> pi & 1);
        }
        acc
    }
}

/// Visits every labelled poset on `[d]` in a fixed order.
///
/// Posets are grown one element at a time: the new element `k` is attached
/// below a filter `U` and above an ideal `B` of the poset on `0..k`, with
/// every element of `B` already below every element of `U`.
pub fn for_each_labeled_poset<F: FnMut(&Poset)>(d: usize, mut visit: F) -> Result<()> {
    if d > MAX_ENUM_ORDER {
        return Err(Error::TooLarge {
            what: "poset enumeration",
            size: d,
            max: MAX_ENUM_ORDER,
        });
    }
    grow(&Poset::antichain(0), d, &mut visit);
    Ok(())
}

fn grow<F: FnMut(&Poset)>(p: &Poset, d: usize, visit: &mut F) {
    let k = p.len();
    if k == d {
        visit(p);
        return;
    }
    let all = full_mask(k);
    let ideals = p.ideal_masks();
    let mut ordered = ideals.clone();
    ordered.sort_by(|a, b| crate::family::lex_cmp(*a, *b));
    for &below in &ordered {
        let allowed = bits(below).fold(all, |acc, b| acc & p.up[b]) & !below;
        for &complement in &ordered {
            let above = all & !complement;
            if above & !allowed != 0 {
                continue;
            }
            let mut up = p.up.clone();
            for b in bits(below) {
                up[b] |= 1 << k;
            }
            up.push(above);
            grow(&Poset::from_up(up), d, visit);
        }
    }
}

/// All posets on `[d]`, either every labelled one or one canonical
/// representative per isomorphism class (sorted by canonical code).
pub fn enumerate_posets(d: usize, mode: EnumMode) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    match mode {
        EnumMode::Labeled => for_each_labeled_poset(d, |p| out.push(p.clone()))?,
        EnumMode::UpToIso => {
            let mut reps = Vec::new();
            for_each_labeled_poset(d, |p| {
                if p.is_canonical() {
                    reps.push((canon::code(p, &(0..d).collect::<Vec<_>>()), p.clone()));
                }
            })?;
            reps.sort_by_key(|(c, _)| *c);
            out = reps.into_iter().map(|(_, p)| p).collect();
        }
    }
    Ok(out)
}
