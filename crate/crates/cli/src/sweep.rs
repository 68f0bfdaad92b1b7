//! Corpus sweeps over enumerated posets and graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use polycay::ehrhart::{
    delta_polynomial, gorenstein_index_of, normalized_volume, volume_by_linear_extensions,
};
use polycay::{
    cayley_sum, chain_polytope, enumerate_graphs, enumerate_posets, minkowski_sum, oda_failure,
    order_polytope, stable_set_polytope, EnumMode, Error, Graph, IdpReport, Poset,
};

use crate::cache::Cache;
use crate::report::{run_instance_report, ReportOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SweepKind {
    MainTheorem,
    VolumeIdentity,
    OrderCayley,
    ChainCayleyIdpSearch,
    StableCayley,
}

impl SweepKind {
    pub const ALL: [SweepKind; 5] = [
        SweepKind::MainTheorem,
        SweepKind::VolumeIdentity,
        SweepKind::OrderCayley,
        SweepKind::ChainCayleyIdpSearch,
        SweepKind::StableCayley,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::MainTheorem => "main-theorem",
            SweepKind::VolumeIdentity => "volume-identity",
            SweepKind::OrderCayley => "order-cayley",
            SweepKind::ChainCayleyIdpSearch => "chain-cayley-idp-search",
            SweepKind::StableCayley => "stable-cayley",
        }
    }

    /// Largest `d` accepted.
    pub fn max_d(self) -> usize {
        match self {
            SweepKind::MainTheorem => 6,
            SweepKind::VolumeIdentity | SweepKind::OrderCayley => 5,
            SweepKind::StableCayley => 6,
            SweepKind::ChainCayleyIdpSearch => 7,
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown sweep kind `{s}`"))
    }
}

/// What the witness search looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchTarget {
    /// Cayley sum not IDP, Minkowski sum IDP.
    CayleyOnly,
    /// Neither sum IDP.
    Both,
}

impl SearchTarget {
    pub fn default_for(d: usize) -> Self {
        if d <= 5 {
            SearchTarget::CayleyOnly
        } else {
            SearchTarget::Both
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SearchTarget::CayleyOnly => "cayley-only",
            SearchTarget::Both => "both",
        }
    }
}

impl FromStr for SearchTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cayley-only" => Ok(SearchTarget::CayleyOnly),
            "both" => Ok(SearchTarget::Both),
            _ => Err(format!("unknown search target `{s}`")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub kind: SweepKind,
    pub d: usize,
    pub mode: EnumMode,
    pub jobs: usize,
    /// Keep searching after the first witness.
    pub all: bool,
    pub target: Option<SearchTarget>,
    pub report: ReportOptions,
    pub cache: Option<Cache>,
}

impl SweepOptions {
    pub fn new(kind: SweepKind, d: usize, mode: EnumMode) -> Self {
        Self {
            kind,
            d,
            mode,
            jobs: 1,
            all: false,
            target: None,
            report: ReportOptions::default(),
            cache: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepFailure {
    pub instance: Value,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: String,
    pub kind: String,
    pub d: usize,
    pub mode: String,
    pub instance_count: usize,
    pub pass_count: usize,
    pub failures: Vec<SweepFailure>,
    pub budget_exceeded: bool,
    /// Kind-specific tallies.
    pub summary: BTreeMap<String, u64>,
    /// Witness-search results.
    pub witnesses: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && !self.budget_exceeded
    }
}

fn mode_name(mode: EnumMode) -> &'static str {
    match mode {
        EnumMode::Labeled => "labeled",
        EnumMode::UpToIso => "iso",
    }
}

fn rels(p: &Poset) -> Value {
    json!(p
        .cover_relations()
        .iter()
        .map(|&(i, j)| [i + 1, j + 1])
        .collect::<Vec<_>>())
}

fn edges(g: &Graph) -> Value {
    json!(g
        .edges()
        .iter()
        .map(|&(i, j)| [i + 1, j + 1])
        .collect::<Vec<_>>())
}

/// Outcome of checking one corpus item.
enum Outcome {
    Pass,
    Fail(Vec<String>),
    Budget(String),
}

fn outcome_of(r: Result<Vec<String>, Error>) -> Result<Outcome, Error> {
    match r {
        Ok(v) if v.is_empty() => Ok(Outcome::Pass),
        Ok(v) => Ok(Outcome::Fail(v)),
        Err(e @ (Error::BudgetExceeded { .. } | Error::TooLarge { .. })) => {
            Ok(Outcome::Budget(e.to_string()))
        }
        Err(e) => Err(e),
    }
}

fn par_map<T: Sync, R: Send>(
    items: &[T],
    jobs: usize,
    f: impl Fn(&T) -> R + Sync + Send,
) -> Vec<R> {
    if jobs <= 1 {
        return items.iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
        Err(_) => items.iter().map(f).collect(),
    }
}

pub fn run_sweep(opts: &SweepOptions) -> Result<SweepReport, Error> {
    let (kind, d) = (opts.kind, opts.d);
    if d == 0 || d > kind.max_d() {
        return Err(Error::TooLarge {
            what: "sweep order",
            size: d,
            max: kind.max_d(),
        });
    }
    let start = Instant::now();
    let mut report = SweepReport {
        schema: crate::report::SCHEMA.to_string(),
        kind: kind.name().to_string(),
        d,
        mode: mode_name(opts.mode).to_string(),
        instance_count: 0,
        pass_count: 0,
        failures: Vec::new(),
        budget_exceeded: false,
        summary: BTreeMap::new(),
        witnesses: Vec::new(),
        wall_time_ms: None,
    };
    let items: Vec<(Value, Outcome)> = match kind {
        SweepKind::MainTheorem => main_theorem(opts, &mut report.summary)?,
        SweepKind::VolumeIdentity => volume_identity(opts)?,
        SweepKind::OrderCayley => order_cayley(opts, &mut report.summary)?,
        SweepKind::StableCayley => stable_cayley(opts, &mut report.summary)?,
        SweepKind::ChainCayleyIdpSearch => {
            let (w, stats, budget) = chain_search(opts)?;
            report.witnesses = w;
            report.summary = stats;
            report.budget_exceeded = budget;
            Vec::new()
        }
    };
    report.instance_count = items.len();
    for (instance, outcome) in items {
        match outcome {
            Outcome::Pass => report.pass_count += 1,
            Outcome::Fail(violations) => report.failures.push(SweepFailure {
                instance,
                violations,
            }),
            Outcome::Budget(msg) => {
                report.budget_exceeded = true;
                report.failures.push(SweepFailure {
                    instance,
                    violations: vec![format!("incomplete: {msg}")],
                });
            }
        }
    }
    if opts.report.timings {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

fn main_theorem(
    opts: &SweepOptions,
    summary: &mut BTreeMap<String, u64>,
) -> Result<Vec<(Value, Outcome)>, Error> {
    let posets = enumerate_posets(opts.d, opts.mode)?;
    let graphs = enumerate_graphs(opts.d, opts.mode)?;
    let pairs: Vec<(&Poset, &Graph)> = posets
        .iter()
        .flat_map(|p| graphs.iter().map(move |g| (p, g)))
        .collect();
    let ropts = ReportOptions {
        timings: false,
        ..opts.report
    };
    let results = par_map(&pairs, opts.jobs, |&(p, g)| {
        let key = opts.cache.as_ref().map(|_| Cache::key(p, g, &ropts));
        if let (Some(c), Some(k)) = (&opts.cache, &key) {
            if let Some(r) = c.get(k) {
                return Ok(r);
            }
        }
        let r = run_instance_report(p, g, &ropts)?;
        if let (Some(c), Some(k)) = (&opts.cache, &key) {
            // a failed write only costs a recomputation later
            let _ = c.put(k, &r);
        }
        Ok(r)
    });
    let mut out = Vec::with_capacity(pairs.len());
    for r in results {
        let r = r?;
        *summary.entry("perfect".into()).or_default() += u64::from(r.is_perfect);
        *summary.entry("gorenstein_cayley".into()).or_default() +=
            u64::from(r.gorenstein_cayley_index.is_some());
        let instance = serde_json::to_value(&r.instance).unwrap_or(Value::Null);
        let outcome = if let Some(msg) = r.incomplete {
            Outcome::Budget(msg)
        } else if r.violations.is_empty() {
            Outcome::Pass
        } else {
            Outcome::Fail(r.violations)
        };
        out.push((instance, outcome));
    }
    Ok(out)
}

fn poset_pairs(opts: &SweepOptions) -> Result<Vec<(Poset, Poset)>, Error> {
    let posets = enumerate_posets(opts.d, opts.mode)?;
    Ok(posets
        .iter()
        .flat_map(|p| posets.iter().map(move |q| (p.clone(), q.clone())))
        .collect())
}

fn volume_identity(opts: &SweepOptions) -> Result<Vec<(Value, Outcome)>, Error> {
    let pairs = poset_pairs(opts)?;
    let lim = opts.report.limits;
    par_map(&pairs, opts.jobs, |(p, q)| {
        let check = || -> Result<Vec<String>, Error> {
            let lhs = volume_by_linear_extensions(p, q)?;
            let rhs = normalized_volume(
                &cayley_sum(&[&order_polytope(p), &chain_polytope(q)])?,
                &lim,
            )?;
            Ok(if lhs == rhs {
                vec![]
            } else {
                vec![format!(
                    "linear-extension sum {lhs} differs from normalized volume {rhs}"
                )]
            })
        };
        let inst = json!({"p": rels(p), "q": rels(q)});
        outcome_of(check()).map(|o| (inst, o))
    })
    .into_iter()
    .collect()
}

fn order_cayley(
    opts: &SweepOptions,
    summary: &mut BTreeMap<String, u64>,
) -> Result<Vec<(Value, Outcome)>, Error> {
    let pairs = poset_pairs(opts)?;
    let lim = opts.report.limits;
    let kmax = opts.d as u64 + 1;
    let results = par_map(&pairs, opts.jobs, |(p, q)| {
        let check = || -> Result<(Vec<String>, bool), Error> {
            let c = cayley_sum(&[&order_polytope(p), &order_polytope(q)])?;
            let mut v = Vec::new();
            let idp = c.is_idp(kmax, &lim)?;
            if !idp.holds {
                v.push(format!("O_P * O_Q is not IDP: {:?}", idp.failure));
            }
            let index = gorenstein_index_of(&delta_polynomial(&c, &lim)?);
            let cle = p.dual().common_linear_extension_exists(q)?;
            if (index == Some(2)) != cle {
                v.push(format!(
                    "Gorenstein index {index:?} but common linear extension of P^* and Q is {cle}"
                ));
            }
            if p == q && index.is_some() != p.is_antichain() {
                v.push(format!(
                    "O_P * O_P Gorenstein is {} but antichain is {}",
                    index.is_some(),
                    p.is_antichain()
                ));
            }
            Ok((v, index.is_some()))
        };
        let inst = json!({"p": rels(p), "q": rels(q)});
        match check() {
            Ok((v, gor)) => outcome_of(Ok(v)).map(|o| (inst, o, gor)),
            Err(e) => outcome_of(Err(e)).map(|o| (inst, o, false)),
        }
    });
    let mut out = Vec::new();
    for r in results {
        let (inst, o, gor) = r?;
        *summary.entry("gorenstein".into()).or_default() += u64::from(gor);
        out.push((inst, o));
    }
    Ok(out)
}

fn stable_cayley(
    opts: &SweepOptions,
    summary: &mut BTreeMap<String, u64>,
) -> Result<Vec<(Value, Outcome)>, Error> {
    let graphs: Vec<Graph> = enumerate_graphs(opts.d, opts.mode)?
        .into_iter()
        .filter(Graph::is_perfect)
        .collect();
    let lim = opts.report.limits;
    let results = par_map(&graphs, opts.jobs, |g| {
        let check = || -> Result<(Vec<String>, bool), Error> {
            let q = stable_set_polytope(g);
            let c = cayley_sum(&[&q, &q])?;
            let gor = gorenstein_index_of(&delta_polynomial(&c, &lim)?).is_some();
            let v = if gor != g.has_no_edges() {
                vec![format!(
                    "Q_G * Q_G Gorenstein is {gor} but empty graph is {}",
                    g.has_no_edges()
                )]
            } else {
                vec![]
            };
            Ok((v, gor))
        };
        let inst = json!({"graph": edges(g)});
        match check() {
            Ok((v, gor)) => outcome_of(Ok(v)).map(|o| (inst, o, gor)),
            Err(e) => outcome_of(Err(e)).map(|o| (inst, o, false)),
        }
    });
    let mut out = Vec::new();
    for r in results {
        let (inst, o, gor) = r?;
        *summary.entry("gorenstein".into()).or_default() += u64::from(gor);
        out.push((inst, o));
    }
    Ok(out)
}

fn idp_json(r: &IdpReport) -> Value {
    json!({
        "holds": r.holds,
        "k_max": r.k_max,
        "failure": r.failure.as_ref().map(|f| json!({"k": f.k, "point": f.point})),
    })
}

const BOTH_MINKOWSKI_BOUND: u64 = 2;

/// Witnesses, counters, and whether any pair hit a budget.
type SearchOutcome = (Vec<Value>, BTreeMap<String, u64>, bool);

/// Pairs `(P, Q)` with `C_P * C_Q` not IDP, and `C_P + C_Q` IDP or not
/// according to the target. `P` runs over isomorphism classes and `Q` over
/// labeled posets, each deduplicated by comparability graph (`C_P` depends on
/// nothing else). Candidates are pairs where the Oda equation fails, which
/// already breaks IDP of the Cayley sum in its second dilate; the failure is
/// then confirmed directly. IDP bounds are `dim - 1`, beyond which the
/// decomposition always exists. When both sums must fail, the Minkowski sum
/// is only tested up to `BOTH_MINKOWSKI_BOUND`: a failure there is already a
/// certificate, and proving IDP for every candidate is what makes d = 6 slow.
fn chain_search(opts: &SweepOptions) -> Result<SearchOutcome, Error> {
    let d = opts.d;
    let target = opts.target.unwrap_or(SearchTarget::default_for(d));
    let lim = opts.report.limits;
    let dedup = |mode| -> Result<Vec<Poset>, Error> {
        let mut seen = BTreeSet::new();
        Ok(enumerate_posets(d, mode)?
            .into_iter()
            .filter(|p| seen.insert(p.comparability_graph().edges()))
            .collect())
    };
    let lefts = dedup(EnumMode::UpToIso)?;
    let rights = dedup(EnumMode::Labeled)?;
    let mut stats = BTreeMap::new();
    let mut witnesses = Vec::new();
    let mut budget = false;
    'outer: for p in &lefts {
        let cp = chain_polytope(p);
        for q in &rights {
            *stats.entry("pairs_scanned".to_string()).or_default() += 1;
            let cq = chain_polytope(q);
            let step = || -> Result<Option<Value>, Error> {
                let Some(oda_point) = oda_failure(&cp, &cq, &lim)? else {
                    return Ok(None);
                };
                let cayley = cayley_sum(&[&cp, &cq])?;
                let ic = cayley.is_idp(cayley.dim() as u64 - 1, &lim)?;
                if ic.holds {
                    return Err(Error::Internal(
                        "Oda failure without Cayley IDP failure".into(),
                    ));
                }
                let mink = minkowski_sum(&cp, &cq)?;
                let bound = match target {
                    SearchTarget::CayleyOnly => mink.dim() as u64 - 1,
                    SearchTarget::Both => BOTH_MINKOWSKI_BOUND.min(mink.dim() as u64 - 1),
                };
                let im = mink.is_idp(bound, &lim)?;
                let wanted = match target {
                    SearchTarget::CayleyOnly => im.holds,
                    SearchTarget::Both => !im.holds,
                };
                Ok(wanted.then(|| {
                    json!({
                        "p": rels(p),
                        "q": rels(q),
                        "oda_failure": oda_point,
                        "cayley_idp": idp_json(&ic),
                        "minkowski_idp": idp_json(&im),
                    })
                }))
            };
            match step() {
                Ok(Some(w)) => {
                    witnesses.push(w);
                    if !opts.all {
                        break 'outer;
                    }
                }
                Ok(None) => {}
                Err(Error::BudgetExceeded { .. } | Error::TooLarge { .. }) => {
                    budget = true;
                    *stats.entry("pairs_over_budget".to_string()).or_default() += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
    stats.insert(
        "target_both".into(),
        u64::from(target == SearchTarget::Both),
    );
    stats.insert("witnesses".into(), witnesses.len() as u64);
    Ok((witnesses, stats, budget))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_roundtrip() {
        for k in SweepKind::ALL {
            assert_eq!(k.name().parse::<SweepKind>().unwrap(), k);
        }
        assert!("nope".parse::<SweepKind>().is_err());
    }

    #[test]
    fn main_theorem_small() {
        let r = run_sweep(&SweepOptions::new(
            SweepKind::MainTheorem,
            2,
            EnumMode::UpToIso,
        ))
        .unwrap();
        assert_eq!(r.instance_count, 4);
        assert!(r.all_pass(), "{:?}", r.failures);
    }

    #[test]
    fn order_cayley_small() {
        let r = run_sweep(&SweepOptions::new(
            SweepKind::OrderCayley,
            2,
            EnumMode::Labeled,
        ))
        .unwrap();
        assert_eq!(r.instance_count, 9);
        assert!(r.all_pass(), "{:?}", r.failures);
    }

    #[test]
    fn d_cap_is_enforced() {
        assert!(run_sweep(&SweepOptions::new(
            SweepKind::VolumeIdentity,
            9,
            EnumMode::Labeled
        ))
        .is_err());
    }

    #[test]
    fn jobs_do_not_change_output() {
        let mut o = SweepOptions::new(SweepKind::StableCayley, 3, EnumMode::Labeled);
        let a = run_sweep(&o).unwrap();
        o.jobs = 2;
        assert_eq!(run_sweep(&o).unwrap(), a);
    }
}
