//! Per-instance report for a pair `(P, G)`.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use polycay::ehrhart::{codegree_checked, delta_polynomial, gorenstein_index_of, is_reflexive};
use polycay::toric::{toric_report, TieBreak};
use polycay::{
    cayley_sum, gamma, minkowski_sum, oda_holds, order_polytope, stable_set_polytope, Error, Graph,
    IdpReport, LatticePolytope, Limits, Poset,
};

pub const SCHEMA: &str = "polycay.report.v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// IDP bound for the Cayley sum; the Minkowski sum uses one less.
    /// `None` means `d + 1`.
    pub kmax: Option<u64>,
    /// Truncation degree of the Gröbner check; 0 skips it.
    pub toric_degree: usize,
    pub timings: bool,
    pub limits: Limits,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            kmax: None,
            toric_degree: polycay::toric::DEFAULT_DEGREE,
            timings: false,
            limits: Limits::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Descriptor {
    pub d: usize,
    /// 1-based cover relations `i < j`.
    pub poset: Vec<[usize; 2]>,
    /// 1-based edges.
    pub graph: Vec<[usize; 2]>,
}

impl Descriptor {
    pub fn new(p: &Poset, g: &Graph) -> Self {
        Self {
            d: p.len(),
            poset: p
                .cover_relations()
                .iter()
                .map(|&(i, j)| [i + 1, j + 1])
                .collect(),
            graph: g.edges().iter().map(|&(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricSummary {
    pub degree: usize,
    /// Largest degree up to which the claimed leads match the initial ideal.
    pub verified_degree: usize,
    pub squarefree: bool,
    pub max_generator_degree: usize,
    pub generator_count: usize,
    pub claimed_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub schema: String,
    pub instance: Descriptor,
    pub is_perfect: bool,
    pub codegree_cayley: Option<u64>,
    pub codegree_minkowski: Option<u64>,
    pub gorenstein_cayley_index: Option<u64>,
    pub gorenstein_minkowski_index: Option<u64>,
    /// Largest `k` with `P ∩ Z + kP ∩ Z = (k+1)P ∩ Z` verified (up to the bound).
    pub idp_cayley_upto: Option<u64>,
    pub idp_minkowski_upto: Option<u64>,
    pub idp_cayley_bound: u64,
    pub idp_minkowski_bound: u64,
    pub oda: Option<bool>,
    pub delta_cayley: Option<Vec<u64>>,
    pub delta_gamma: Option<Vec<u64>>,
    pub volume_cayley: Option<u64>,
    pub volume_gamma: Option<u64>,
    pub reflexive_gamma: Option<bool>,
    pub toric: Option<ToricSummary>,
    /// Theorem clauses that failed on this instance.
    pub violations: Vec<String>,
    /// Set when a resource cap stopped the computation.
    pub incomplete: Option<String>,
    pub budget_exceeded: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings_ms: Option<BTreeMap<String, u64>>,
}

impl InstanceReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty() && self.incomplete.is_none()
    }
}

fn upto(r: &IdpReport) -> u64 {
    match &r.failure {
        Some(f) => f.k - 1,
        None => r.k_max,
    }
}

struct Clock {
    on: bool,
    map: BTreeMap<String, u64>,
}

impl Clock {
    fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.on {
            *self.map.entry(name.to_string()).or_default() += start.elapsed().as_millis() as u64;
        }
        out
    }
}

pub fn run_instance_report(
    p: &Poset,
    g: &Graph,
    opts: &ReportOptions,
) -> Result<InstanceReport, Error> {
    if p.len() != g.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: g.len(),
        });
    }
    let d = p.len() as u64;
    let kmax = opts.kmax.unwrap_or(d + 1);
    let mut report = InstanceReport {
        schema: SCHEMA.to_string(),
        instance: Descriptor::new(p, g),
        is_perfect: g.is_perfect(),
        codegree_cayley: None,
        codegree_minkowski: None,
        gorenstein_cayley_index: None,
        gorenstein_minkowski_index: None,
        idp_cayley_upto: None,
        idp_minkowski_upto: None,
        idp_cayley_bound: kmax,
        idp_minkowski_bound: kmax.saturating_sub(1).max(1),
        oda: None,
        delta_cayley: None,
        delta_gamma: None,
        volume_cayley: None,
        volume_gamma: None,
        reflexive_gamma: None,
        toric: None,
        violations: Vec::new(),
        incomplete: None,
        budget_exceeded: false,
        timings_ms: None,
    };
    let mut clock = Clock {
        on: opts.timings,
        map: BTreeMap::new(),
    };
    match fill(&mut report, p, g, opts, &mut clock) {
        Ok(()) => check(&mut report),
        Err(e @ (Error::BudgetExceeded { .. } | Error::TooLarge { .. })) => {
            report.budget_exceeded = true;
            report.incomplete = Some(e.to_string());
        }
        Err(e) => return Err(e),
    }
    if opts.timings {
        report.timings_ms = Some(clock.map);
    }
    Ok(report)
}

fn fill(
    r: &mut InstanceReport,
    p: &Poset,
    g: &Graph,
    opts: &ReportOptions,
    clock: &mut Clock,
) -> Result<(), Error> {
    let lim = &opts.limits;
    let (op, qg) = (order_polytope(p), stable_set_polytope(g));
    let cayley = cayley_sum(&[&op, &qg])?;
    let mink = minkowski_sum(&op, &qg)?;
    let gam = gamma(&op, &qg)?;

    let dc = clock.time("delta_cayley", || delta_polynomial(&cayley, lim))?;
    r.codegree_cayley =
        Some(clock.time("codegree_cayley", || codegree_checked(&cayley, &dc, lim))?);
    r.gorenstein_cayley_index = gorenstein_index_of(&dc);
    r.volume_cayley = Some(dc.normalized_volume());
    r.delta_cayley = Some(dc.coeffs().to_vec());

    let dm = clock.time("delta_minkowski", || delta_polynomial(&mink, lim))?;
    r.codegree_minkowski =
        Some(clock.time("codegree_minkowski", || codegree_checked(&mink, &dm, lim))?);
    r.gorenstein_minkowski_index = gorenstein_index_of(&dm);

    let dg = clock.time("delta_gamma", || delta_polynomial(&gam, lim))?;
    r.volume_gamma = Some(dg.normalized_volume());
    r.delta_gamma = Some(dg.coeffs().to_vec());
    r.reflexive_gamma = Some(is_reflexive(&gam)?);

    let ic = clock.time("idp_cayley", || cayley.is_idp(r.idp_cayley_bound, lim))?;
    r.idp_cayley_upto = Some(upto(&ic));
    let im = clock.time("idp_minkowski", || mink.is_idp(r.idp_minkowski_bound, lim))?;
    r.idp_minkowski_upto = Some(upto(&im));
    r.oda = Some(clock.time("oda", || oda_holds(&op, &qg, lim))?);

    if r.gorenstein_cayley_index == Some(2) {
        let ok = clock.time("reflexive_cayley", || normalized_reflexive(&cayley))?;
        if !ok {
            r.violations
                .push("Cayley sum of Gorenstein index 2: 2P - (1,..,1) is not reflexive".into());
        }
    }

    if opts.toric_degree > 0 {
        let t = clock.time("toric", || {
            toric_report(p, g, opts.toric_degree, TieBreak::default(), lim)
        })?;
        r.toric = Some(ToricSummary {
            degree: t.degree,
            verified_degree: t.failure.as_ref().map_or(t.degree, |f| f.degree - 1),
            squarefree: t.squarefree,
            max_generator_degree: t.max_generator_degree,
            generator_count: t.generator_count,
            claimed_size: t.claimed_size,
        });
    }
    Ok(())
}

/// Whether `2P - (1, .., 1)` is reflexive.
pub fn normalized_reflexive(p: &LatticePolytope) -> Result<bool, Error> {
    let shifted = p.dilate(2)?.translate(&vec![-1; p.dim()])?;
    is_reflexive(&shifted)
}

fn check(r: &mut InstanceReport) {
    let mut v = Vec::new();
    if r.codegree_cayley != Some(2) {
        v.push(format!(
            "codegree of the Cayley sum is {:?}, not 2",
            r.codegree_cayley
        ));
    }
    if r.codegree_minkowski != Some(1) {
        v.push(format!(
            "codegree of the Minkowski sum is {:?}, not 1",
            r.codegree_minkowski
        ));
    }
    if (r.gorenstein_cayley_index == Some(2)) != r.is_perfect {
        v.push(format!(
            "Cayley Gorenstein index {:?} disagrees with perfection ({})",
            r.gorenstein_cayley_index, r.is_perfect
        ));
    }
    if (r.gorenstein_minkowski_index == Some(1)) != r.is_perfect {
        v.push(format!(
            "Minkowski Gorenstein index {:?} disagrees with perfection ({})",
            r.gorenstein_minkowski_index, r.is_perfect
        ));
    }
    if r.reflexive_gamma != Some(r.is_perfect) {
        v.push(format!(
            "Γ(O_P, Q_G) reflexive is {:?} but perfection is {}",
            r.reflexive_gamma, r.is_perfect
        ));
    }
    if r.is_perfect {
        if r.idp_cayley_upto != Some(r.idp_cayley_bound) {
            v.push(format!(
                "Cayley sum fails IDP after k = {:?}",
                r.idp_cayley_upto
            ));
        }
        if r.idp_minkowski_upto != Some(r.idp_minkowski_bound) {
            v.push(format!(
                "Minkowski sum fails IDP after k = {:?}",
                r.idp_minkowski_upto
            ));
        }
        if r.oda != Some(true) {
            v.push("Oda equation fails".into());
        }
        if r.delta_cayley != r.delta_gamma {
            v.push(format!(
                "δ of the Cayley sum {:?} differs from δ of Γ {:?}",
                r.delta_cayley, r.delta_gamma
            ));
        }
        if r.volume_cayley != r.volume_gamma {
            v.push("normalized volumes of the Cayley sum and Γ differ".into());
        }
        if let Some(t) = &r.toric {
            if t.verified_degree < t.degree {
                v.push(format!(
                    "claimed Gröbner basis fails in degree {}",
                    t.verified_degree + 1
                ));
            }
            if !t.squarefree {
                v.push("initial ideal is not squarefree".into());
            }
        }
    }
    r.violations.extend(v);
}
