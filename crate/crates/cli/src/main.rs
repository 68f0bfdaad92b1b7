use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polycay::ehrhart::{
    codegree, delta_polynomial, gorenstein_index, is_reflexive, normalized_volume,
};
use polycay::toric::{
    cayley_variable_table, claimed_basis, make_order, squarefree_profile, truncated_initial_ideal,
    verify_basis, TieBreak, MAX_DEGREE,
};
use polycay::{
    chain_polytope, oda_failure, order_polytope, stable_set_polytope, EnumMode, Error, Graph,
    LatticePolytope, Limits, Poset,
};
use polycay_cli::cache::Cache;
use polycay_cli::io::{read_any, read_instance, Instance, InstanceKind};
use polycay_cli::{
    limits_from_env, run_instance_report, run_sweep, to_json, ReportOptions, SearchTarget,
    SweepKind, SweepOptions,
};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(
    name = "polycay",
    version,
    about = "Exact checks on Cayley and Minkowski sums of order and stable set polytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one poset and one graph.
    Report(ReportArgs),
    /// Run a check over an enumerated corpus.
    Sweep(SweepArgs),
    /// A single computation on one or two polytopes.
    Compute(ComputeArgs),
    /// Gröbner basis verification for one poset and one graph.
    Toric(ToricArgs),
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    poset: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    /// IDP bound for the Cayley sum (default d + 1; the Minkowski sum uses one less).
    #[arg(long)]
    kmax: Option<u64>,
    /// Truncation degree of the Gröbner check (0 skips it).
    #[arg(long, default_value_t = polycay::toric::DEFAULT_DEGREE)]
    toric_degree: usize,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
    /// Include timings (breaks byte-identical output).
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    MainTheorem,
    VolumeIdentity,
    OrderCayley,
    ChainCayleyIdpSearch,
    StableCayley,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    CayleyOnly,
    Both,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long)]
    d: usize,
    /// Enumerate labeled objects.
    #[arg(long, conflicts_with = "iso")]
    labeled: bool,
    /// Enumerate isomorphism classes (the default).
    #[arg(long)]
    iso: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Write the JSON report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Witness search: continue past the first witness.
    #[arg(long)]
    all: bool,
    /// Witness search: what to look for (default by d).
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    #[arg(long, default_value_t = polycay::toric::DEFAULT_DEGREE)]
    toric_degree: usize,
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Delta,
    Codegree,
    Volume,
    Idp,
    Gorenstein,
    Reflexive,
    Oda,
}

#[derive(Clone, Copy, ValueEnum)]
enum PosetAs {
    Order,
    Chain,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long, value_enum)]
    op: Op,
    /// One file, or two separated by a comma for `oda`.
    #[arg(long, value_delimiter = ',', num_args = 1..=2)]
    input: Vec<PathBuf>,
    /// Polytope built from a poset file.
    #[arg(long = "as", value_enum, default_value = "order")]
    poset_as: PosetAs,
    /// IDP bound (default dimension - 1).
    #[arg(long)]
    kmax: Option<u64>,
}

#[derive(Args)]
struct ToricArgs {
    #[arg(long)]
    poset: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = polycay::toric::DEFAULT_DEGREE)]
    degree: usize,
    /// Print the claimed basis and the initial ideal generators.
    #[arg(long)]
    verbose: bool,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::TooLarge { .. } => Failure::Budget(e.to_string()),
            Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::NotFullDimensional { .. }
            | Error::Cycle(_)
            | Error::OriginNotContained => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Report(a) => report(a),
        Command::Sweep(a) => sweep(a),
        Command::Compute(a) => compute(a),
        Command::Toric(a) => toric(a),
    };
    match result {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn limits() -> Result<Limits, Failure> {
    limits_from_env().map_err(usage)
}

fn read_pair(poset: &Path, graph: &Path) -> Result<(Poset, Graph), Failure> {
    let Instance::Poset(p) = read_instance(poset, InstanceKind::Poset).map_err(usage)? else {
        unreachable!()
    };
    let Instance::Graph(g) = read_instance(graph, InstanceKind::Graph).map_err(usage)? else {
        unreachable!()
    };
    if p.len() != g.len() {
        return Err(usage(format!(
            "poset has {} elements but graph has {} vertices",
            p.len(),
            g.len()
        )));
    }
    Ok((p, g))
}

fn show<T: std::fmt::Debug>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".into(), |x| format!("{x:?}"))
}

fn report(a: ReportArgs) -> Result<bool, Failure> {
    let (p, g) = read_pair(&a.poset, &a.graph)?;
    let opts = ReportOptions {
        kmax: a.kmax,
        toric_degree: a.toric_degree,
        timings: a.timings,
        limits: limits()?,
    };
    if opts.toric_degree > MAX_DEGREE {
        return Err(usage(format!("--toric-degree is at most {MAX_DEGREE}")));
    }
    let cache = Cache::from_env();
    let key = Cache::key(&p, &g, &opts);
    let cached = if opts.timings {
        None
    } else {
        cache.as_ref().and_then(|c| c.get(&key))
    };
    let r = match cached {
        Some(r) => r,
        None => {
            let r = run_instance_report(&p, &g, &opts)?;
            if let Some(c) = &cache {
                let _ = c.put(&key, &r);
            }
            r
        }
    };
    if a.json {
        println!("{}", to_json(&r));
    } else {
        let rows: Vec<(&str, String)> = vec![
            ("d", r.instance.d.to_string()),
            ("perfect", r.is_perfect.to_string()),
            ("codegree cayley", show(&r.codegree_cayley)),
            ("codegree minkowski", show(&r.codegree_minkowski)),
            ("gorenstein index cayley", show(&r.gorenstein_cayley_index)),
            (
                "gorenstein index minkowski",
                show(&r.gorenstein_minkowski_index),
            ),
            (
                "idp cayley up to",
                format!(
                    "{} (bound {})",
                    show(&r.idp_cayley_upto),
                    r.idp_cayley_bound
                ),
            ),
            (
                "idp minkowski up to",
                format!(
                    "{} (bound {})",
                    show(&r.idp_minkowski_upto),
                    r.idp_minkowski_bound
                ),
            ),
            ("oda", show(&r.oda)),
            ("delta cayley", show(&r.delta_cayley)),
            ("delta gamma", show(&r.delta_gamma)),
            ("volume cayley", show(&r.volume_cayley)),
            ("volume gamma", show(&r.volume_gamma)),
            ("gamma reflexive", show(&r.reflexive_gamma)),
            (
                "toric",
                r.toric.as_ref().map_or("-".into(), |t| {
                    format!(
                        "verified to degree {}/{}, squarefree {}, max generator degree {}",
                        t.verified_degree, t.degree, t.squarefree, t.max_generator_degree
                    )
                }),
            ),
        ];
        for (k, v) in rows {
            println!("{k:<28}{v}");
        }
        if let Some(t) = &r.timings_ms {
            for (k, ms) in t {
                println!("{:<28}{ms} ms", format!("time {k}"));
            }
        }
        for v in &r.violations {
            println!("VIOLATION: {v}");
        }
        if let Some(m) = &r.incomplete {
            println!("INCOMPLETE: {m}");
        }
        println!("{}", if r.pass() { "PASS" } else { "FAIL" });
    }
    if r.budget_exceeded {
        return Err(Failure::Budget(r.incomplete.unwrap_or_default()));
    }
    Ok(r.pass())
}

fn sweep(a: SweepArgs) -> Result<bool, Failure> {
    let kind = match a.kind {
        KindArg::MainTheorem => SweepKind::MainTheorem,
        KindArg::VolumeIdentity => SweepKind::VolumeIdentity,
        KindArg::OrderCayley => SweepKind::OrderCayley,
        KindArg::ChainCayleyIdpSearch => SweepKind::ChainCayleyIdpSearch,
        KindArg::StableCayley => SweepKind::StableCayley,
    };
    if a.d == 0 || a.d > kind.max_d() {
        return Err(usage(format!(
            "--d for {kind} must be in 1..={}",
            kind.max_d()
        )));
    }
    if a.toric_degree > MAX_DEGREE {
        return Err(usage(format!("--toric-degree is at most {MAX_DEGREE}")));
    }
    let mode = if a.labeled {
        EnumMode::Labeled
    } else {
        EnumMode::UpToIso
    };
    let mut opts = SweepOptions::new(kind, a.d, mode);
    opts.jobs = a.jobs.max(1);
    opts.all = a.all;
    opts.target = a.target.map(|t| match t {
        TargetArg::CayleyOnly => SearchTarget::CayleyOnly,
        TargetArg::Both => SearchTarget::Both,
    });
    opts.report.toric_degree = a.toric_degree;
    opts.report.timings = a.timings;
    opts.report.limits = limits()?;
    opts.cache = Cache::from_env();
    let r = run_sweep(&opts)?;
    if let Some(path) = &a.json {
        std::fs::write(path, to_json(&r) + "\n")
            .map_err(|e| Failure::Other(format!("{}: {e}", path.display())))?;
    }
    println!("{:<20}{}", "kind", r.kind);
    println!("{:<20}{}", "d", r.d);
    println!("{:<20}{}", "mode", r.mode);
    for (k, v) in &r.summary {
        println!("{k:<20}{v}");
    }
    if kind == SweepKind::ChainCayleyIdpSearch {
        for w in &r.witnesses {
            println!("{:<20}{w}", "witness");
        }
        if r.witnesses.is_empty() {
            println!("no witness found");
        }
        if r.budget_exceeded {
            return Err(Failure::Budget(
                "some pairs exceeded the lattice point budget".into(),
            ));
        }
        return Ok(!r.witnesses.is_empty());
    }
    println!("{:<20}{}", "instances", r.instance_count);
    println!("{:<20}{}", "passed", r.pass_count);
    for f in &r.failures {
        println!("FAIL {} {}", f.instance, f.violations.join("; "));
    }
    if let Some(ms) = r.wall_time_ms {
        println!("{:<20}{ms} ms", "wall time");
    }
    if r.budget_exceeded {
        return Err(Failure::Budget(
            "some instances exceeded a resource budget".into(),
        ));
    }
    Ok(r.all_pass())
}

fn polytope_of(inst: Instance, as_: PosetAs) -> LatticePolytope {
    match inst {
        Instance::Poset(p) => match as_ {
            PosetAs::Order => order_polytope(&p),
            PosetAs::Chain => chain_polytope(&p),
        },
        Instance::Graph(g) => stable_set_polytope(&g),
        Instance::Vrep(v) => v,
    }
}

fn compute(a: ComputeArgs) -> Result<bool, Failure> {
    let lim = limits()?;
    let mut polys = Vec::new();
    for path in &a.input {
        polys.push(polytope_of(read_any(path).map_err(usage)?, a.poset_as));
    }
    let needed = if matches!(a.op, Op::Oda) { 2 } else { 1 };
    if polys.len() != needed {
        return Err(usage(format!(
            "this operation takes {needed} input file(s)"
        )));
    }
    let p = &polys[0];
    if !p.is_full_dimensional()? && !matches!(a.op, Op::Oda) {
        return Err(Error::NotFullDimensional {
            ambient: p.dim(),
            actual: p.affine_dimension()?,
        }
        .into());
    }
    let out: Value = match a.op {
        Op::Delta => json!({"delta": delta_polynomial(p, &lim)?.coeffs()}),
        Op::Codegree => json!({"codegree": codegree(p, &lim)?}),
        Op::Volume => json!({"normalized_volume": normalized_volume(p, &lim)?}),
        Op::Gorenstein => json!({"gorenstein_index": gorenstein_index(p, &lim)?}),
        Op::Reflexive => json!({"reflexive": is_reflexive(p)?}),
        Op::Idp => {
            let k = a.kmax.unwrap_or((p.dim() as u64).saturating_sub(1).max(1));
            let r = p.is_idp(k, &lim)?;
            json!({
                "idp": r.holds,
                "k_max": r.k_max,
                "failure": r.failure.map(|f| json!({"k": f.k, "point": f.point})),
            })
        }
        Op::Oda => {
            let f = oda_failure(p, &polys[1], &lim)?;
            json!({"oda": f.is_none(), "failure": f})
        }
    };
    println!("{}", to_json(&out));
    Ok(true)
}

fn toric(a: ToricArgs) -> Result<bool, Failure> {
    let (p, g) = read_pair(&a.poset, &a.graph)?;
    if a.degree == 0 || a.degree > MAX_DEGREE {
        return Err(usage(format!("--degree must be in 1..={MAX_DEGREE}")));
    }
    let lim = limits()?;
    let table = cayley_variable_table(&p, &g)?;
    let perfect = g.is_perfect();
    if !perfect {
        eprintln!("warning: the graph is not perfect");
    }
    println!("variables {}", table.len());
    let mut all_ok = true;
    for (name, tie) in [
        ("larger-first", TieBreak::LargerFirst),
        ("smaller-first", TieBreak::SmallerFirst),
    ] {
        let order = make_order(&table, tie)?;
        let claimed = claimed_basis(&p, &g, &table, &order, a.degree, &lim)?;
        let failure = verify_basis(&claimed, &table, &order, a.degree, &lim)?;
        let gens = truncated_initial_ideal(&table, &order, a.degree, &lim)?;
        let (squarefree, max_deg) = squarefree_profile(&gens);
        println!("tie-break {name}");
        println!("  claimed basis size       {}", claimed.len());
        println!("  initial ideal generators {}", gens.len());
        println!("  squarefree               {squarefree}");
        println!("  max generator degree     {max_deg}");
        match &failure {
            None => println!("  verified up to degree    {}", a.degree),
            Some(f) => {
                println!(
                    "  FAILS in degree {} at {} ({})",
                    f.degree,
                    table.format(&f.monomial),
                    if f.spurious {
                        "standard monomial divisible by a claimed lead"
                    } else {
                        "missing lead"
                    }
                );
            }
        }
        if a.verbose {
            for b in &claimed {
                println!("  claimed  {}", b.format(&table));
            }
            for m in &gens {
                println!("  in_<     {}", table.format(m));
            }
        }
        if perfect && (failure.is_some() || !squarefree) {
            all_ok = false;
        }
    }
    Ok(all_ok)
}
