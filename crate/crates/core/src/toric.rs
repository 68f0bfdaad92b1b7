//! Degree-truncated toric ideals of point configurations.
//!
//! Variables are bound to lattice points; a monomial maps to the sum of the
//! points of its variables. Within one degree two monomials lie in the same
//! fiber iff those sums agree. For a toric ideal the standard monomials of
//! degree `k` under a term order are exactly the order-minima of the
//! degree-`k` fibers, so everything here is fiber bookkeeping.
//!
//! The orders are graded reverse lexicographic. Writing a monomial as the
//! ascending list of the ranks of its variables (rank 0 is the smallest
//! variable), two monomials of equal degree compare as those lists compare
//! lexicographically. Enumerating multisets of ranks in lexicographic order
//! therefore visits each fiber's minimum first.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::family::{bits, lex_cmp};
use crate::geometry::{LatticePolytope, Point};
use crate::graph::Graph;
use crate::poset::Poset;
use crate::Limits;

/// Largest supported truncation degree.
pub const MAX_DEGREE: usize = 4;
pub const DEFAULT_DEGREE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    /// `x_I` for an ideal `I` (bitmask).
    X(u64),
    /// `y_S` for a nonempty stable set `S`.
    Y(u64),
    Z,
}

impl Variable {
    fn block(self) -> u8 {
        match self {
            Variable::X(_) => 2,
            Variable::Y(_) => 1,
            Variable::Z => 0,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set = |f: &mut fmt::Formatter<'_>, m: u64| {
            let items: Vec<String> = bits(m).map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", items.join(","))
        };
        match *self {
            Variable::X(m) => {
                write!(f, "x_")?;
                set(f, m)
            }
            Variable::Y(m) => {
                write!(f, "y_")?;
                set(f, m)
            }
            Variable::Z => write!(f, "z"),
        }
    }
}

/// Variables bound injectively to lattice points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableTable {
    vars: Vec<Variable>,
    points: Vec<Point>,
}

impl VariableTable {
    pub fn new(vars: Vec<Variable>, points: Vec<Point>) -> Result<Self> {
        if vars.len() != points.len() {
            return Err(Error::DimensionMismatch {
                expected: vars.len(),
                got: points.len(),
            });
        }
        if let Some(p) = points.iter().find(|p| p.len() != points[0].len()) {
            return Err(Error::DimensionMismatch {
                expected: points[0].len(),
                got: p.len(),
            });
        }
        let mut seen = HashSet::new();
        for (v, p) in vars.iter().zip(&points) {
            if !seen.insert(p) {
                return Err(Error::InvalidInput(format!("{v} repeats point {p:?}")));
            }
        }
        if vars.iter().collect::<HashSet<_>>().len() != vars.len() {
            return Err(Error::InvalidInput("repeated variable".into()));
        }
        if vars.len() > u16::MAX as usize {
            return Err(Error::TooLarge {
                what: "variable table",
                size: vars.len(),
                max: u16::MAX as usize,
            });
        }
        Ok(Self { vars, points })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn index_of(&self, v: Variable) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.to_string()).collect()
    }

    /// Sum of the bound points of a monomial.
    pub fn image(&self, m: &Monomial) -> Point {
        let mut out = vec![0i64; self.points.first().map_or(0, Vec::len)];
        for &v in &m.vars {
            for (o, x) in out.iter_mut().zip(&self.points[v]) {
                *o += x;
            }
        }
        out
    }

    pub fn format(&self, m: &Monomial) -> String {
        if m.vars.is_empty() {
            return "1".into();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < m.vars.len() {
            let v = m.vars[i];
            let e = m.vars[i..].iter().take_while(|&&w| w == v).count();
            if e == 1 {
                parts.push(self.vars[v].to_string());
            } else {
                parts.push(format!("{}^{e}", self.vars[v]));
            }
            i += e;
        }
        parts.join(" ")
    }

    /// Sub-table on the variables accepted by `keep`, with the old index of
    /// each kept variable.
    pub fn restrict(&self, keep: impl Fn(Variable) -> bool) -> Result<(Self, Vec<usize>)> {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(self.vars[i])).collect();
        let table = Self::new(
            idx.iter().map(|&i| self.vars[i]).collect(),
            idx.iter().map(|&i| self.points[i].clone()).collect(),
        )?;
        Ok((table, idx))
    }
}

/// `x_I ↦ ρ(I)` for every ideal `I`, including `x_∅ ↦ 0`.
pub fn order_variable_table(p: &Poset) -> VariableTable {
    let d = p.len();
    let (vars, points) = p
        .ideals()
        .iter()
        .map(|m| (Variable::X(m), crate::family::indicator(m, d)))
        .unzip();
    VariableTable::new(vars, points).expect("indicator vectors are distinct")
}

/// `y_S ↦ ρ(S)` for nonempty stable sets, and `z ↦ 0` for the empty one.
pub fn stable_set_variable_table(g: &Graph) -> VariableTable {
    let d = g.len();
    let (vars, points) = g
        .stable_sets()
        .iter()
        .map(|m| {
            let v = if m == 0 { Variable::Z } else { Variable::Y(m) };
            (v, crate::family::indicator(m, d))
        })
        .unzip();
    VariableTable::new(vars, points).expect("indicator vectors are distinct")
}

/// `x_I ↦ (ρ(I), 1)`, `y_S ↦ (ρ(S), 0)` for `S ≠ ∅`, `z ↦ 0`. The
/// homogenizing coordinate is implicit: fibers are only formed within a
/// degree.
pub fn cayley_variable_table(p: &Poset, g: &Graph) -> Result<VariableTable> {
    let d = p.len();
    if g.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: g.len(),
        });
    }
    let mut vars = Vec::new();
    let mut points = Vec::new();
    for m in p.ideals().iter() {
        vars.push(Variable::X(m));
        let mut pt = crate::family::indicator(m, d);
        pt.push(1);
        points.push(pt);
    }
    for m in g.stable_sets().iter().filter(|&m| m != 0) {
        vars.push(Variable::Y(m));
        let mut pt = crate::family::indicator(m, d);
        pt.push(0);
        points.push(pt);
    }
    vars.push(Variable::Z);
    points.push(vec![0; d + 1]);
    VariableTable::new(vars, points)
}

/// How `make_order` settles pairs the structural constraints leave open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieBreak {
    /// Among the variables free to take the next highest rank: larger set
    /// first, then lexicographically smaller indicator vector.
    #[default]
    LargerFirst,
    /// Smaller set first, then lexicographically larger indicator vector.
    SmallerFirst,
}

/// A ranking of the variables of a table; monomials compare graded reverse
/// lexicographically with respect to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    /// `rank[v]`, 0 for the smallest variable.
    rank: Vec<u16>,
    /// `by_rank[r]` is the variable of rank `r`.
    by_rank: Vec<usize>,
}

impl MonomialOrder {
    /// Order from variables listed smallest first.
    pub fn from_ascending(ascending: Vec<usize>) -> Result<Self> {
        let n = ascending.len();
        let mut rank = vec![u16::MAX; n];
        for (r, &v) in ascending.iter().enumerate() {
            if v >= n || rank[v] != u16::MAX {
                return Err(Error::InvalidInput("ranking is not a permutation".into()));
            }
            rank[v] = r as u16;
        }
        Ok(Self {
            rank,
            by_rank: ascending,
        })
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v] as usize
    }

    /// Variables from smallest to largest.
    pub fn ascending(&self) -> &[usize] {
        &self.by_rank
    }

    fn ranks_of(&self, m: &Monomial) -> Vec<u16> {
        let mut r: Vec<u16> = m.vars.iter().map(|&v| self.rank[v]).collect();
        r.sort_unstable();
        r
    }

    fn monomial_of(&self, ranks: &[u16]) -> Monomial {
        Monomial::from_vars(ranks.iter().map(|&r| self.by_rank[r as usize]).collect())
    }

    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| self.ranks_of(a).cmp(&self.ranks_of(b)))
    }

    /// The order induced on a sub-table (`idx[i]` is the old index of the
    /// new variable `i`).
    pub fn restrict(&self, idx: &[usize]) -> Self {
        let mut new: Vec<usize> = (0..idx.len()).collect();
        new.sort_by_key(|&i| self.rank[idx[i]]);
        Self::from_ascending(new).expect("restriction of a permutation")
    }
}

/// A ranking with `z` below every `y_S` below every `x_I`, `x_{I'}` below
/// `x_I` when `I' ⊋ I`, and `y_{S'}` below `y_S` when `S' ⊊ S`. Within each
/// block ranks are handed out from the top by a topological sort, the tie
/// break choosing among the variables whose required superiors are placed.
pub fn make_order(table: &VariableTable, tie: TieBreak) -> Result<MonomialOrder> {
    let vars = table.variables();
    // `must_exceed(a, b)`: a is required to rank above b
    let must_exceed = |a: Variable, b: Variable| match (a, b) {
        (Variable::X(i), Variable::X(j)) => i != j && i & j == i,
        (Variable::Y(s), Variable::Y(t)) => s != t && s & t == t,
        _ => false,
    };
    let prefer = |a: Variable, b: Variable| -> Ordering {
        let set = |v: Variable| match v {
            Variable::X(m) | Variable::Y(m) => m,
            Variable::Z => 0,
        };
        let (sa, sb) = (set(a), set(b));
        let by_size = sb.count_ones().cmp(&sa.count_ones());
        match tie {
            TieBreak::LargerFirst => by_size.then(lex_cmp(sa, sb)),
            TieBreak::SmallerFirst => by_size.reverse().then(lex_cmp(sb, sa)),
        }
    };
    let mut descending = Vec::with_capacity(vars.len());
    for block in [2u8, 1, 0] {
        let mut rest: Vec<usize> = (0..vars.len())
            .filter(|&i| vars[i].block() == block)
            .collect();
        while !rest.is_empty() {
            let pick = rest
                .iter()
                .enumerate()
                .filter(|&(_, &v)| !rest.iter().any(|&u| must_exceed(vars[u], vars[v])))
                .min_by(|a, b| prefer(vars[*a.1], vars[*b.1]))
                .map(|(pos, _)| pos)
                .ok_or_else(|| Error::Internal("order constraints are cyclic".into()))?;
            descending.push(rest.remove(pick));
        }
    }
    descending.reverse();
    MonomialOrder::from_ascending(descending)
}

/// A monomial as the sorted multiset of its variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    vars: Vec<usize>,
}

impl Monomial {
    pub fn from_vars(mut vars: Vec<usize>) -> Self {
        vars.sort_unstable();
        Self { vars }
    }

    pub fn from_exponents(exps: &[u32]) -> Self {
        let vars = exps
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        Self { vars }
    }

    pub fn variables(&self) -> &[usize] {
        &self.vars
    }

    pub fn exponents(&self, n: usize) -> Vec<u32> {
        let mut e = vec![0; n];
        for &v in &self.vars {
            e[v] += 1;
        }
        e
    }

    pub fn degree(&self) -> usize {
        self.vars.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.vars.windows(2).all(|w| w[0] != w[1])
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let mut it = other.vars.iter();
        self.vars.iter().all(|v| it.by_ref().any(|w| w == v))
    }

    fn remap(&self, idx: &[usize]) -> Self {
        Self::from_vars(self.vars.iter().map(|&v| idx[v]).collect())
    }
}

/// `lead − trail`, in the kernel of the table's monomial map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial {
    pub lead: Monomial,
    pub trail: Monomial,
}

impl Binomial {
    /// Orients `a − b` by the order and checks kernel membership.
    pub fn new(
        a: Monomial,
        b: Monomial,
        table: &VariableTable,
        order: &MonomialOrder,
    ) -> Result<Self> {
        let show = || format!("{} - {}", table.format(&a), table.format(&b));
        if a.degree() != b.degree() || table.image(&a) != table.image(&b) {
            return Err(Error::NotInKernel(show()));
        }
        match order.compare(&a, &b) {
            Ordering::Greater => Ok(Self { lead: a, trail: b }),
            Ordering::Less => Ok(Self { lead: b, trail: a }),
            Ordering::Equal => Err(Error::InvalidInput(format!("trivial binomial {}", show()))),
        }
    }

    pub fn format(&self, table: &VariableTable) -> String {
        format!(
            "{} - {}",
            table.format(&self.lead),
            table.format(&self.trail)
        )
    }
}

/// Visits every multiset of `k` ranks below `n` in lexicographic order.
fn for_each_multiset(n: usize, k: usize, mut f: impl FnMut(&[u16])) {
    if k == 0 {
        f(&[]);
        return;
    }
    if n == 0 {
        return;
    }
    let mut cur = vec![0u16; k];
    loop {
        f(&cur);
        let Some(i) = (0..k).rev().find(|&i| (cur[i] as usize) + 1 < n) else {
            return;
        };
        let v = cur[i] + 1;
        cur[i..].fill(v);
    }
}

fn multiset_count(n: usize, k: usize) -> u128 {
    // C(n + k - 1, k)
    (0..k as u128).fold(1u128, |acc, i| acc * (n as u128 + i) / (i + 1))
}

fn check_budget(n: usize, max_degree: usize, limits: &Limits) -> Result<()> {
    if max_degree > MAX_DEGREE {
        return Err(Error::TooLarge {
            what: "truncation degree",
            size: max_degree,
            max: MAX_DEGREE,
        });
    }
    let total: u128 = (0..=max_degree).map(|k| multiset_count(n, k)).sum();
    if total > limits.max_monomials as u128 {
        return Err(Error::BudgetExceeded {
            what: "monomial",
            limit: limits.max_monomials,
        });
    }
    Ok(())
}

/// Packs a fiber image into one integer key.
struct FiberKey {
    lo: Vec<i64>,
    radix: Vec<u128>,
}

impl FiberKey {
    fn new(
        table: &VariableTable,
        order: &MonomialOrder,
        k: usize,
    ) -> Result<(Self, Vec<Vec<i64>>)> {
        let dim = table.points().first().map_or(0, Vec::len);
        let ranked: Vec<Vec<i64>> = order
            .ascending()
            .iter()
            .map(|&v| table.points()[v].clone())
            .collect();
        let mut lo = vec![0i64; dim];
        let mut radix = Vec::with_capacity(dim);
        let mut total: u128 = 1;
        for c in 0..dim {
            let min = ranked.iter().map(|p| p[c]).min().unwrap_or(0);
            let max = ranked.iter().map(|p| p[c]).max().unwrap_or(0);
            lo[c] = min * k as i64;
            let span = ((max - min) as u128) * k as u128 + 1;
            radix.push(total);
            total = total
                .checked_mul(span)
                .ok_or(Error::Overflow("fiber key"))?;
        }
        Ok((Self { lo, radix }, ranked))
    }

    fn key(&self, ranked: &[Vec<i64>], ranks: &[u16]) -> u128 {
        let mut key = 0u128;
        for (c, (&lo, &radix)) in self.lo.iter().zip(&self.radix).enumerate() {
            let s: i64 = ranks.iter().map(|&r| ranked[r as usize][c]).sum();
            key += (s - lo) as u128 * radix;
        }
        key
    }
}

/// Fiber minima of one degree, as rank lists.
fn fiber_minima(
    table: &VariableTable,
    order: &MonomialOrder,
    k: usize,
) -> Result<HashMap<u128, Vec<u16>>> {
    let (fk, ranked) = FiberKey::new(table, order, k)?;
    let mut minima: HashMap<u128, Vec<u16>> = HashMap::new();
    for_each_multiset(table.len(), k, |m| {
        minima
            .entry(fk.key(&ranked, m))
            .or_insert_with(|| m.to_vec());
    });
    Ok(minima)
}

/// Each distinct monomial obtained by dropping one variable.
fn drop_one(m: &[u16]) -> impl Iterator<Item = Vec<u16>> + '_ {
    (0..m.len())
        .filter(move |&i| i == 0 || m[i] != m[i - 1])
        .map(move |i| [&m[..i], &m[i + 1..]].concat())
}

/// Truncated initial ideal data for one table and order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialIdeal {
    pub max_degree: usize,
    /// Minimal generators with their fiber minima, sorted by the order.
    pub reduced: Vec<Binomial>,
    /// `fibers[k]`: number of distinct degree-`k` images.
    pub fibers: Vec<u64>,
}

impl InitialIdeal {
    pub fn generators(&self) -> Vec<Monomial> {
        self.reduced.iter().map(|b| b.lead.clone()).collect()
    }
}

pub fn initial_ideal(
    table: &VariableTable,
    order: &MonomialOrder,
    max_degree: usize,
    limits: &Limits,
) -> Result<InitialIdeal> {
    check_budget(table.len(), max_degree, limits)?;
    let n = table.len();
    let mut reduced = Vec::new();
    let mut fibers = vec![1u64];
    let mut prev_standard: HashSet<Vec<u16>> = HashSet::from([Vec::new()]);
    for k in 1..=max_degree {
        let (fk, ranked) = FiberKey::new(table, order, k)?;
        let minima = fiber_minima(table, order, k)?;
        let standard: HashSet<Vec<u16>> = minima.values().cloned().collect();
        for_each_multiset(n, k, |m| {
            if standard.contains(m) || !drop_one(m).all(|q| prev_standard.contains(&q)) {
                return;
            }
            let trail = &minima[&fk.key(&ranked, m)];
            reduced.push(Binomial {
                lead: order.monomial_of(m),
                trail: order.monomial_of(trail),
            });
        });
        fibers.push(minima.len() as u64);
        prev_standard = standard;
    }
    Ok(InitialIdeal {
        max_degree,
        reduced,
        fibers,
    })
}

/// Minimal generators of degree at most `max_degree` of the initial ideal.
pub fn truncated_initial_ideal(
    table: &VariableTable,
    order: &MonomialOrder,
    max_degree: usize,
    limits: &Limits,
) -> Result<Vec<Monomial>> {
    Ok(initial_ideal(table, order, max_degree, limits)?.generators())
}

/// Reduced Gröbner basis elements with leads of degree at most `max_degree`.
pub fn reduced_groebner_truncated(
    table: &VariableTable,
    order: &MonomialOrder,
    max_degree: usize,
    limits: &Limits,
) -> Result<Vec<Binomial>> {
    Ok(initial_ideal(table, order, max_degree, limits)?.reduced)
}

/// The three families of binomials whose union is claimed to be a Gröbner
/// basis for the Cayley sum of `O_P` and `Q_G`:
///
/// * `x_I x_J − x_{I∩J} x_{I∪J}` for incomparable ideals `I`, `J`;
/// * `x_I y_S − x_{I∪{s}} y_{S∖{s}}` for `s ∈ S ∖ I` with `I ∪ {s}` an
///   ideal, reading `y_∅` as `z`;
/// * the reduced basis of the `y`/`z` sub-table up to `max_degree`.
///
/// Every element is checked for kernel membership; the result is sorted and
/// deduplicated.
pub fn claimed_basis(
    p: &Poset,
    g: &Graph,
    table: &VariableTable,
    order: &MonomialOrder,
    max_degree: usize,
    limits: &Limits,
) -> Result<Vec<Binomial>> {
    let expected = cayley_variable_table(p, g)?;
    if *table != expected {
        return Err(Error::InvalidInput(
            "table is not the Cayley table of (P, G)".into(),
        ));
    }
    let var = |v: Variable| {
        table
            .index_of(v)
            .ok_or_else(|| Error::Internal(format!("missing variable {v}")))
    };
    let y = |s: u64| if s == 0 { Variable::Z } else { Variable::Y(s) };
    let ideals = p.ideals();
    let mut out = Vec::new();
    for (a, &i) in ideals.masks().iter().enumerate() {
        for &j in &ideals.masks()[a + 1..] {
            if i & j != i && i & j != j {
                out.push(Binomial::new(
                    Monomial::from_vars(vec![var(Variable::X(i))?, var(Variable::X(j))?]),
                    Monomial::from_vars(vec![var(Variable::X(i & j))?, var(Variable::X(i | j))?]),
                    table,
                    order,
                )?);
            }
        }
    }
    for i in ideals.iter() {
        for s in g.stable_sets().iter().filter(|&s| s != 0) {
            for e in bits(s & !i) {
                let up = i | 1 << e;
                if !ideals.contains(up) {
                    continue;
                }
                out.push(Binomial::new(
                    Monomial::from_vars(vec![var(Variable::X(i))?, var(Variable::Y(s))?]),
                    Monomial::from_vars(vec![var(Variable::X(up))?, var(y(s & !(1 << e)))?]),
                    table,
                    order,
                )?);
            }
        }
    }
    let (sub, idx) = table.restrict(|v| !matches!(v, Variable::X(_)))?;
    let sub_order = order.restrict(&idx);
    for b in reduced_groebner_truncated(&sub, &sub_order, max_degree, limits)? {
        out.push(Binomial::new(
            b.lead.remap(&idx),
            b.trail.remap(&idx),
            table,
            order,
        )?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// First place where the claimed leads and the true initial ideal disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisFailure {
    pub degree: usize,
    pub monomial: Monomial,
    /// True when the monomial is a fiber minimum yet divisible by a claimed
    /// lead; false when it is not a fiber minimum and no lead divides it.
    pub spurious: bool,
}

/// Checks degree by degree up to `max_degree` that the monomials divisible by
/// a claimed lead are exactly the non-minimal monomials of their fibers.
/// Returns the smallest disagreement.
pub fn verify_basis(
    claimed: &[Binomial],
    table: &VariableTable,
    order: &MonomialOrder,
    max_degree: usize,
    limits: &Limits,
) -> Result<Option<BasisFailure>> {
    check_budget(table.len(), max_degree, limits)?;
    for b in claimed {
        if b.lead.degree() != b.trail.degree() || table.image(&b.lead) != table.image(&b.trail) {
            return Err(Error::NotInKernel(b.format(table)));
        }
    }
    let leads: HashSet<Vec<u16>> = claimed.iter().map(|b| order.ranks_of(&b.lead)).collect();
    let max_lead = leads.iter().map(Vec::len).max().unwrap_or(0);
    for k in 1..=max_degree {
        let minima = fiber_minima(table, order, k)?;
        let standard: HashSet<&Vec<u16>> = minima.values().collect();
        let mut failure = None;
        for_each_multiset(table.len(), k, |m| {
            if failure.is_some() {
                return;
            }
            let divisible = sub_multisets(m, max_lead).any(|s| leads.contains(&s));
            let is_standard = standard.contains(&m.to_vec());
            if divisible == is_standard {
                failure = Some(BasisFailure {
                    degree: k,
                    monomial: order.monomial_of(m),
                    spurious: is_standard,
                });
            }
        });
        if failure.is_some() {
            return Ok(failure);
        }
    }
    Ok(None)
}

/// Distinct nonempty sub-multisets of a sorted list, of size at most `max`.
fn sub_multisets(m: &[u16], max: usize) -> impl Iterator<Item = Vec<u16>> {
    let mut out: Vec<Vec<u16>> = (1u32..1 << m.len())
        .filter(|mask| mask.count_ones() as usize <= max)
        .map(|mask| {
            (0..m.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| m[i])
                .collect()
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out.into_iter()
}

/// `(every generator squarefree, largest generator degree)`.
pub fn squarefree_profile(gens: &[Monomial]) -> (bool, usize) {
    (
        gens.iter().all(Monomial::is_squarefree),
        gens.iter().map(Monomial::degree).max().unwrap_or(0),
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertRow {
    pub degree: usize,
    /// Monomials divisible by no generator of the truncated initial ideal.
    pub standard: u64,
    pub fibers: u64,
    pub lattice_points: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertComparison {
    pub rows: Vec<HilbertRow>,
    pub idp: bool,
    /// Standard counts equal fiber counts in every degree, and equal the
    /// lattice-point counts when `idp`.
    pub holds: bool,
}

/// Compares, for `k ≤ max_degree`, the monomials standard with respect to the
/// truncated initial ideal (by divisibility), the distinct fibers, and the
/// lattice points of `kP`.
pub fn hilbert_vs_ehrhart(
    table: &VariableTable,
    order: &MonomialOrder,
    max_degree: usize,
    polytope: &LatticePolytope,
    limits: &Limits,
) -> Result<HilbertComparison> {
    let ideal = initial_ideal(table, order, max_degree, limits)?;
    let gens: HashSet<Vec<u16>> = ideal
        .reduced
        .iter()
        .map(|b| order.ranks_of(&b.lead))
        .collect();
    let idp = polytope.is_idp(max_degree.max(1) as u64, limits)?.holds;
    let mut rows = Vec::new();
    for k in 1..=max_degree {
        let mut standard = 0u64;
        for_each_multiset(table.len(), k, |m| {
            if !sub_multisets(m, k).any(|s| gens.contains(&s)) {
                standard += 1;
            }
        });
        rows.push(HilbertRow {
            degree: k,
            standard,
            fibers: ideal.fibers[k],
            lattice_points: polytope.count_lattice_points(k as u64, false, limits)?,
        });
    }
    let holds = rows
        .iter()
        .all(|r| r.standard == r.fibers && (!idp || r.fibers == r.lattice_points));
    Ok(HilbertComparison { rows, idp, holds })
}

/// Summary of the Gröbner check for one `(P, G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricReport {
    pub degree: usize,
    pub tie_break: TieBreak,
    pub claimed_size: usize,
    pub failure: Option<BasisFailure>,
    pub squarefree: bool,
    pub max_generator_degree: usize,
    pub generator_count: usize,
}

impl ToricReport {
    pub fn verified(&self) -> bool {
        self.failure.is_none()
    }
}

pub fn toric_report(
    p: &Poset,
    g: &Graph,
    max_degree: usize,
    tie: TieBreak,
    limits: &Limits,
) -> Result<ToricReport> {
    let table = cayley_variable_table(p, g)?;
    let order = make_order(&table, tie)?;
    let claimed = claimed_basis(p, g, &table, &order, max_degree, limits)?;
    let failure = verify_basis(&claimed, &table, &order, max_degree, limits)?;
    let gens = truncated_initial_ideal(&table, &order, max_degree, limits)?;
    let (squarefree, max_generator_degree) = squarefree_profile(&gens);
    Ok(ToricReport {
        degree: max_degree,
        tie_break: tie,
        claimed_size: claimed.len(),
        failure,
        squarefree,
        max_generator_degree,
        generator_count: gens.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cayley_sum, order_polytope, stable_set_polytope};

    fn lim() -> Limits {
        Limits::default()
    }

    fn v(t: &VariableTable, var: Variable) -> usize {
        t.index_of(var).unwrap()
    }

    fn mono(t: &VariableTable, vars: &[Variable]) -> Monomial {
        Monomial::from_vars(vars.iter().map(|&x| v(t, x)).collect())
    }

    /// Oracle: group all monomials of degree `k` by image with a plain map
    /// and pick minima with `MonomialOrder::compare`.
    fn brute_minima(t: &VariableTable, o: &MonomialOrder, k: usize) -> HashSet<Monomial> {
        let mut best: HashMap<Point, Monomial> = HashMap::new();
        let n = t.len();
        let mut stack = vec![(Vec::<usize>::new(), 0usize)];
        while let Some((cur, start)) = stack.pop() {
            if cur.len() == k {
                let m = Monomial::from_vars(cur);
                let img = t.image(&m);
                match best.get(&img) {
                    Some(b) if o.compare(b, &m) != Ordering::Greater => {}
                    _ => {
                        best.insert(img, m);
                    }
                }
                continue;
            }
            for i in start..n {
                let mut next = cur.clone();
                next.push(i);
                stack.push((next, i));
            }
        }
        best.into_values().collect()
    }

    #[test]
    fn variable_counts() {
        let t = cayley_variable_table(&Poset::antichain(1), &Graph::empty(1)).unwrap();
        assert_eq!(t.names(), vec!["x_{}", "x_{1}", "y_{1}", "z"]);
        let t = cayley_variable_table(&Poset::antichain(2), &Graph::empty(2)).unwrap();
        assert_eq!(t.len(), 8);
        assert!(cayley_variable_table(&Poset::antichain(2), &Graph::empty(3)).is_err());
        assert!(
            VariableTable::new(vec![Variable::Z, Variable::Y(1)], vec![vec![0], vec![0]]).is_err()
        );
    }

    #[test]
    fn order_constraints() {
        let t = cayley_variable_table(&Poset::antichain(2), &Graph::empty(2)).unwrap();
        for tie in [TieBreak::LargerFirst, TieBreak::SmallerFirst] {
            let o = make_order(&t, tie).unwrap();
            let r = |var| o.rank(v(&t, var));
            assert!(r(Variable::X(0)) > r(Variable::X(1)));
            assert!(r(Variable::X(2)) > r(Variable::X(3)));
            assert!(r(Variable::X(3)) > r(Variable::Y(3)));
            assert!(r(Variable::Y(3)) > r(Variable::Y(1)));
            assert!(r(Variable::Y(2)) > r(Variable::Z));
            assert_eq!(r(Variable::Z), 0);
        }
    }

    #[test]
    fn revlex_comparison() {
        let o = MonomialOrder::from_ascending(vec![0, 1, 2]).unwrap();
        // x2^2 x0 < x1^2 x0? ranks [0,2,2] vs [0,1,1]: the second has more of
        // nothing smaller... its smallest differing variable is 1
        let a = Monomial::from_vars(vec![0, 2, 2]);
        let b = Monomial::from_vars(vec![0, 1, 1]);
        assert_eq!(o.compare(&a, &b), Ordering::Greater);
        let c = Monomial::from_vars(vec![0, 0, 2]);
        assert_eq!(o.compare(&c, &b), Ordering::Less);
        assert_eq!(o.compare(&Monomial::from_vars(vec![0]), &c), Ordering::Less);
    }

    #[test]
    fn monomial_helpers() {
        let m = Monomial::from_exponents(&[2, 0, 1]);
        assert_eq!(m.variables(), &[0, 0, 2]);
        assert_eq!(m.exponents(3), vec![2, 0, 1]);
        assert!(!m.is_squarefree());
        assert!(Monomial::from_vars(vec![0, 2]).divides(&m));
        assert!(!Monomial::from_vars(vec![2, 2]).divides(&m));
        assert_eq!(
            squarefree_profile(&[Monomial::from_vars(vec![0, 1])]),
            (true, 2)
        );
        assert_eq!(
            squarefree_profile(&[Monomial::from_vars(vec![0, 0])]),
            (false, 2)
        );
    }

    #[test]
    fn multisets_in_order() {
        let mut seen = Vec::new();
        for_each_multiset(3, 2, |m| seen.push(m.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 1],
                vec![1, 2],
                vec![2, 2]
            ]
        );
        assert_eq!(multiset_count(3, 2), 6);
        assert_eq!(multiset_count(130, 4), 12_457_445);
    }

    #[test]
    fn empty_graph_on_two() {
        let t = stable_set_variable_table(&Graph::empty(2));
        let o = make_order(&t, TieBreak::default()).unwrap();
        let gens = truncated_initial_ideal(&t, &o, 2, &lim()).unwrap();
        assert_eq!(gens, vec![mono(&t, &[Variable::Y(1), Variable::Y(2)])]);
        let gb = reduced_groebner_truncated(&t, &o, 2, &lim()).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0].trail, mono(&t, &[Variable::Z, Variable::Y(3)]));
        assert!(reduced_groebner_truncated(&t, &o, 1, &lim())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn simplex_has_no_relations() {
        let t = stable_set_variable_table(&Graph::complete(3));
        let o = make_order(&t, TieBreak::default()).unwrap();
        assert!(truncated_initial_ideal(&t, &o, 4, &lim())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn order_polytope_generators_are_incomparable_pairs() {
        let posets = [
            Poset::antichain(2),
            Poset::antichain(3),
            Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap(),
            Poset::from_relations(3, &[(0, 1)]).unwrap(),
        ];
        for p in &posets {
            let t = order_variable_table(p);
            let o = make_order(&t, TieBreak::default()).unwrap();
            let gens: HashSet<Monomial> = truncated_initial_ideal(&t, &o, 3, &lim())
                .unwrap()
                .into_iter()
                .collect();
            let ideals = p.ideals();
            let mut expect = HashSet::new();
            for &i in ideals.masks() {
                for &j in ideals.masks() {
                    if i & j != i && i & j != j {
                        expect.insert(mono(&t, &[Variable::X(i), Variable::X(j)]));
                    }
                }
            }
            assert_eq!(gens, expect);
        }
    }

    #[test]
    fn v3_order_polytope_binomial() {
        let p = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        let t = order_variable_table(&p);
        let o = make_order(&t, TieBreak::default()).unwrap();
        let gb = reduced_groebner_truncated(&t, &o, 3, &lim()).unwrap();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0].lead, mono(&t, &[Variable::X(1), Variable::X(2)]));
        assert_eq!(gb[0].trail, mono(&t, &[Variable::X(0), Variable::X(3)]));
    }

    #[test]
    fn fiber_minima_match_brute_force() {
        let p = Poset::from_relations(2, &[(0, 1)]).unwrap();
        let t = cayley_variable_table(&p, &Graph::empty(2)).unwrap();
        let o = make_order(&t, TieBreak::SmallerFirst).unwrap();
        for k in 1..=3 {
            let fast: HashSet<Monomial> = fiber_minima(&t, &o, k)
                .unwrap()
                .values()
                .map(|r| o.monomial_of(r))
                .collect();
            assert_eq!(fast, brute_minima(&t, &o, k));
        }
    }

    #[test]
    fn claimed_basis_examples() {
        let (p, g) = (Poset::antichain(2), Graph::empty(2));
        let t = cayley_variable_table(&p, &g).unwrap();
        let o = make_order(&t, TieBreak::default()).unwrap();
        let claimed = claimed_basis(&p, &g, &t, &o, 3, &lim()).unwrap();
        let has = |a: &[Variable], b: &[Variable]| {
            claimed
                .iter()
                .any(|x| x.lead == mono(&t, a) && x.trail == mono(&t, b))
        };
        assert!(has(
            &[Variable::X(1), Variable::X(2)],
            &[Variable::X(0), Variable::X(3)]
        ));
        assert!(has(
            &[Variable::X(0), Variable::Y(1)],
            &[Variable::X(1), Variable::Z]
        ));
        assert_eq!(verify_basis(&claimed, &t, &o, 3, &lim()).unwrap(), None);

        let (p, g) = (Poset::chain(2), Graph::complete(2));
        let t = cayley_variable_table(&p, &g).unwrap();
        let o = make_order(&t, TieBreak::default()).unwrap();
        let claimed = claimed_basis(&p, &g, &t, &o, 3, &lim()).unwrap();
        assert!(claimed.iter().all(|b| b
            .lead
            .variables()
            .iter()
            .any(|&x| !matches!(t.variables()[x], Variable::X(_)))));
    }

    #[test]
    fn deletion_is_detected() {
        let (p, g) = (Poset::antichain(2), Graph::empty(2));
        let t = cayley_variable_table(&p, &g).unwrap();
        let o = make_order(&t, TieBreak::default()).unwrap();
        let mut claimed = claimed_basis(&p, &g, &t, &o, 3, &lim()).unwrap();
        let lead = mono(&t, &[Variable::X(0), Variable::Y(1)]);
        claimed.retain(|b| b.lead != lead);
        let f = verify_basis(&claimed, &t, &o, 3, &lim()).unwrap().unwrap();
        assert_eq!(f.degree, 2);
        assert_eq!(f.monomial, lead);
        assert!(!f.spurious);
    }

    #[test]
    fn kernel_violation_is_rejected() {
        let t = stable_set_variable_table(&Graph::empty(2));
        let o = make_order(&t, TieBreak::default()).unwrap();
        let bad = Binomial::new(
            mono(&t, &[Variable::Y(1), Variable::Y(1)]),
            mono(&t, &[Variable::Z, Variable::Y(3)]),
            &t,
            &o,
        );
        assert!(matches!(bad, Err(Error::NotInKernel(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let t = stable_set_variable_table(&Graph::empty(3));
        let o = make_order(&t, TieBreak::default()).unwrap();
        let tight = Limits {
            max_monomials: 10,
            ..Limits::default()
        };
        assert!(matches!(
            initial_ideal(&t, &o, 3, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            initial_ideal(&t, &o, 5, &lim()),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn hilbert_examples() {
        let g = Graph::empty(2);
        let t = stable_set_variable_table(&g);
        let o = make_order(&t, TieBreak::default()).unwrap();
        let h = hilbert_vs_ehrhart(&t, &o, 2, &stable_set_polytope(&g), &lim()).unwrap();
        assert!(h.holds && h.idp);
        assert_eq!(h.rows[1].standard, 9);
        assert_eq!(h.rows[1].lattice_points, 9);
        assert_eq!(h.rows[0].standard, t.len() as u64);

        let p = Poset::from_relations(3, &[(0, 2), (1, 2)]).unwrap();
        let g = Graph::path(3);
        let t = cayley_variable_table(&p, &g).unwrap();
        let o = make_order(&t, TieBreak::default()).unwrap();
        let c = cayley_sum(&[&order_polytope(&p), &stable_set_polytope(&g)]).unwrap();
        assert!(hilbert_vs_ehrhart(&t, &o, 3, &c, &lim()).unwrap().holds);
    }

    #[test]
    fn tie_breaks_agree_and_restriction_is_independent() {
        let p = Poset::from_relations(3, &[(0, 1)]).unwrap();
        let g = Graph::path(3);
        let a = toric_report(&p, &g, 3, TieBreak::LargerFirst, &lim()).unwrap();
        let b = toric_report(&p, &g, 3, TieBreak::SmallerFirst, &lim()).unwrap();
        assert!(a.verified() && b.verified());
        assert!(a.squarefree && b.squarefree);

        let t = cayley_variable_table(&p, &g).unwrap();
        let (sub, idx) = t.restrict(|v| !matches!(v, Variable::X(_))).unwrap();
        let r1 = make_order(&t, TieBreak::LargerFirst)
            .unwrap()
            .restrict(&idx);
        let r2 = make_order(&sub, TieBreak::LargerFirst).unwrap();
        assert_eq!(r1, r2);
    }

    #[test]
    fn odd_cycle_is_not_squarefree_or_fails() {
        // C5 is not perfect; the toric ideal of its stable set polytope still
        // has a truncated initial ideal, and the machinery runs
        let t = stable_set_variable_table(&Graph::cycle(5));
        let o = make_order(&t, TieBreak::default()).unwrap();
        let ideal = initial_ideal(&t, &o, 2, &lim()).unwrap();
        assert_eq!(ideal.fibers[1], 11);
    }
}
