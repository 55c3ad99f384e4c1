mod manifest;

use clap::{Args, Parser, Subcommand, ValueEnum};
use manifest::{sha256_file, RunManifest};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;
use subspar::cuts::{
    min_st_cut_approx, sparsest_cut_driver, CutSubroutine, MinCutConfig, SparsestCutConfig,
};
use subspar::expander::ExpanderMode;
use subspar::hardness::{
    binomial_anticoncentration, build_gkp, build_theorem7_instance, build_theorem8_instance,
    default_grid, distinguishing_query_experiment, estimator_deviation_experiment, DeviationConfig,
    GadgetOverride,
};
use subspar::sparsifier::{
    overlay_graph, sublinear_sparsify, SparsifyConfig, DEFAULT_Q_MULTIPLIER,
};
use subspar::spectral::{
    check_cut_sandwich, check_lower_bound, check_upper_bound, verify_resistance_sandwich,
    DEFAULT_C_MAX, DEFAULT_RESISTANCE_C_MAX,
};
use subspar::{
    implicit_backend, load_edge_list, store_edge_list, BackendSpec, OracleHandle, QueryCounts,
    StaticGraph,
};

const DEFAULT_OUT_DIR: &str = "subspar-out";

#[derive(Parser, Serialize)]
#[command(
    name = "subspar",
    version,
    about = "Sublinear-query spectral sparsification and friends"
)]
struct Cli {
    /// Directory for outputs and the run manifest [default: subspar-out]
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for independent trials
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Sparsify a graph read through its oracles
    Sparsify(SparsifyArgs),
    /// Check a sparsifier against its input graph
    Verify(VerifyArgs),
    /// Approximate sparsest cut by the δ-halving driver
    SparsestCut(SparsestCutArgs),
    /// Approximate minimum s-t cut on a sparsifier
    MinStCut(MinStCutArgs),
    /// Build a four-block gadget graph
    Gadget(GadgetArgs),
    /// Exact binomial anti-concentration check
    Binom(BinomArgs),
    /// Query counts of the pipeline on implicit complete graphs (CSV)
    BenchQueries(BenchArgs),
    /// Estimator-deviation experiment on gadgets
    Deviation(DeviationArgs),
    /// Random edge probes needed to find a crossing edge
    Distinguish(DistinguishArgs),
    /// Lower-bound instance families
    LowerBoundInstance(InstanceArgs),
    /// Re-run a command from its manifest and compare output hashes
    Replay(ReplayArgs),
}

#[derive(Args, Serialize, Clone)]
#[group(required = true, multiple = false)]
struct GraphSource {
    /// Edge-list file
    #[arg(long)]
    input: Option<PathBuf>,
    /// Implicit graph: complete:N or sbm:S1,S2:ROW/ROW
    #[arg(long)]
    implicit: Option<String>,
}

#[derive(Args, Serialize)]
struct SparsifyArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_Q_MULTIPLIER)]
    q_multiplier: f64,
    #[arg(long, default_value = "random-regular")]
    expander: ExpanderMode,
    #[arg(long)]
    no_resparsify: bool,
    /// C₁ in the resparsify target C₁·n·ln n/ε²
    #[arg(long)]
    resparsify_constant: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum VerifyMode {
    Spectral,
    Cuts,
    Resistance,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Required for spectral and cuts modes
    #[arg(long)]
    sparsifier: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long)]
    delta: f64,
    #[arg(long, value_enum, default_value = "spectral")]
    mode: VerifyMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    c_max: Option<f64>,
    /// Resistance mode: check the graph as given instead of adding the expander overlay
    #[arg(long)]
    no_overlay: bool,
}

#[derive(Args, Serialize)]
struct SparsestCutArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value = "sweep")]
    subroutine: CutSubroutine,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_Q_MULTIPLIER)]
    q_multiplier: f64,
    #[arg(long)]
    max_iterations: Option<usize>,
}

#[derive(Args, Serialize)]
struct MinStCutArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_Q_MULTIPLIER)]
    q_multiplier: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum OverrideArg {
    AllOnes,
    AllZeros,
}

#[derive(Args, Serialize)]
struct GadgetArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "override", value_enum)]
    force: Option<OverrideArg>,
}

#[derive(Args, Serialize)]
struct BinomArgs {
    #[arg(long, required_unless_present = "grid")]
    p: Option<f64>,
    #[arg(long, required_unless_present = "grid")]
    n: Option<usize>,
    /// Check the built-in 20-point grid instead
    #[arg(long, conflicts_with_all = ["p", "n"])]
    grid: bool,
}

#[derive(Args, Serialize)]
struct BenchArgs {
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, value_delimiter = ',', default_value = "500,1000,2000,4000")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_Q_MULTIPLIER)]
    q_multiplier: f64,
}

#[derive(Args, Serialize)]
struct DeviationArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    allow_over_budget: bool,
    /// Include every trial in the report
    #[arg(long)]
    per_trial: bool,
}

#[derive(Args, Serialize)]
struct DistinguishArgs {
    #[arg(long, default_value_t = 100)]
    k: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.8,0.4,0.2,0.1")]
    eps: Vec<f64>,
    #[arg(long, default_value_t = 400)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    probe_cap: u64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    /// Disjoint union of gadgets sized from ε and δ
    DisjointUnion,
    /// One gadget with cliques inside its blocks, p = ε/k
    CliqueBlocks,
}

#[derive(Args, Serialize)]
struct InstanceArgs {
    #[arg(long, value_enum, default_value = "disjoint-union")]
    family: Family,
    /// Target vertex count (disjoint-union)
    #[arg(long)]
    n: Option<usize>,
    /// Block size (clique-blocks)
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
}

enum Failure {
    Io(String),
    Validation(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Check(_) => 3,
        }
    }
    fn message(&self) -> &str {
        match self {
            Failure::Io(m) | Failure::Validation(m) | Failure::Check(m) => m,
        }
    }
}

impl From<subspar::Error> for Failure {
    fn from(e: subspar::Error) -> Self {
        use subspar::Error as E;
        let msg = e.to_string();
        match e {
            E::Io(_) => Failure::Io(msg),
            E::Domain(_) | E::Precondition(_) | E::Config(_) | E::Parse { .. } | E::Budget(_) => {
                Failure::Validation(msg)
            }
            E::Construction(_) | E::Numerical(_) => Failure::Check(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Bookkeeping shared by every command: where outputs go and what was read.
struct Ctx {
    out_dir: PathBuf,
    inputs: Vec<PathBuf>,
    outputs: Vec<String>,
    seed: Option<u64>,
    queries: Option<QueryCounts>,
}

impl Ctx {
    fn write(&mut self, name: &str, contents: &[u8]) -> Result<(), Failure> {
        fs::write(self.out_dir.join(name), contents)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
        self.write(name, text.as_bytes())
    }

    fn write_graph(&mut self, name: &str, g: &StaticGraph) -> Result<(), Failure> {
        store_edge_list(g, self.out_dir.join(name))?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn read_graph(&mut self, path: &Path) -> Result<StaticGraph, Failure> {
        let g = load_edge_list(path).map_err(|e| match Failure::from(e) {
            Failure::Io(m) => Failure::Io(format!("{}: {m}", path.display())),
            Failure::Validation(m) => Failure::Validation(format!("{}: {m}", path.display())),
            other => other,
        })?;
        self.inputs.push(path.to_path_buf());
        Ok(g)
    }

    fn open(&mut self, source: &GraphSource) -> Result<OracleHandle, Failure> {
        match (&source.input, &source.implicit) {
            (Some(path), _) => Ok(OracleHandle::from_graph(self.read_graph(path)?)),
            (None, Some(spec)) => Ok(implicit_backend(BackendSpec::parse(spec)?)?),
            (None, None) => Err(Failure::Validation(
                "one of --input or --implicit is required".into(),
            )),
        }
    }
}

fn sparsify(a: &SparsifyArgs, ctx: &mut Ctx) -> Outcome {
    let mut h = ctx.open(&a.source)?;
    let mut cfg = SparsifyConfig::new(a.eps, a.delta, a.seed);
    cfg.q_multiplier = a.q_multiplier;
    cfg.expander_mode = a.expander;
    cfg.resparsify = !a.no_resparsify;
    if let Some(c) = a.resparsify_constant {
        cfg.resparsify_config.edge_constant = c;
    }
    ctx.seed = Some(a.seed);
    let out = sublinear_sparsify(&mut h, &cfg)?;
    let report = out.report(&cfg, &h);
    ctx.queries = Some(report.queries);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    ctx.write_graph("sparsifier.txt", &out.graph)?;
    ctx.write_json("report.json", &report)?;
    let m = report
        .input_edges
        .map_or("?".to_string(), |m| m.to_string());
    println!(
        "n={} m={m} samples={} edges={} queries={}",
        report.n, report.samples, report.output_edges, report.query_total
    );
    Ok(true)
}

fn verify(a: &VerifyArgs, ctx: &mut Ctx) -> Outcome {
    let g = ctx.read_graph(&a.graph)?;
    ctx.seed = Some(a.seed);
    let reports = match a.mode {
        VerifyMode::Spectral | VerifyMode::Cuts => {
            let path = a.sparsifier.as_ref().ok_or_else(|| {
                Failure::Validation("--sparsifier is required for this mode".into())
            })?;
            let h = ctx.read_graph(path)?;
            if a.mode == VerifyMode::Spectral {
                vec![
                    check_lower_bound(&g, &h, a.eps)?,
                    check_upper_bound(
                        &g,
                        &h,
                        a.eps,
                        a.delta,
                        a.c_max.unwrap_or(DEFAULT_C_MAX),
                        a.seed,
                    )?,
                ]
            } else {
                vec![check_cut_sandwich(&g, &h, a.eps, a.delta, a.seed)?]
            }
        }
        VerifyMode::Resistance => {
            let tg = if a.no_overlay {
                g
            } else {
                overlay_graph(
                    &mut OracleHandle::from_graph(g),
                    &SparsifyConfig::new(a.eps, a.delta, a.seed),
                )?
            };
            vec![verify_resistance_sandwich(
                &tg,
                a.delta,
                a.c_max.unwrap_or(DEFAULT_RESISTANCE_C_MAX),
            )?]
        }
    };
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
        println!(
            "{} {}: measured={} threshold={}",
            r.check,
            if r.pass { "PASS" } else { "FAIL" },
            r.measured,
            r.threshold
        );
    }
    #[derive(Serialize)]
    struct Verification<'a> {
        mode: VerifyMode,
        pass: bool,
        reports: &'a [subspar::spectral::VerificationReport],
    }
    ctx.write_json(
        "verify.json",
        &Verification {
            mode: a.mode,
            pass,
            reports: &reports,
        },
    )?;
    Ok(pass)
}

fn print_cut(r: &subspar::cuts::CutResult) {
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    let ratio = r.ratio.map_or(String::new(), |x| format!(" ratio={x}"));
    println!(
        "|U|={} cut={}{ratio} iterations={} queries={}",
        r.set.len(),
        r.value,
        r.iterations,
        r.queries.total()
    );
}

fn sparsest_cut(a: &SparsestCutArgs, ctx: &mut Ctx) -> Outcome {
    let mut h = ctx.open(&a.source)?;
    let mut cfg = SparsestCutConfig::new(a.alpha, a.seed);
    cfg.sparsify.q_multiplier = a.q_multiplier;
    cfg.max_iterations = a.max_iterations;
    ctx.seed = Some(a.seed);
    let sub = a.subroutine;
    let r = sparsest_cut_driver(&mut h, |g| sub.find(g), &cfg)?;
    ctx.queries = Some(r.queries);
    print_cut(&r);
    ctx.write_json("cut.json", &r)?;
    Ok(true)
}

fn min_st_cut(a: &MinStCutArgs, ctx: &mut Ctx) -> Outcome {
    let mut h = ctx.open(&a.source)?;
    let mut cfg = MinCutConfig::new(a.eps, a.seed);
    cfg.sparsify.q_multiplier = a.q_multiplier;
    ctx.seed = Some(a.seed);
    let r = min_st_cut_approx(&mut h, a.s, a.t, &cfg)?;
    ctx.queries = Some(r.queries);
    print_cut(&r);
    ctx.write_json("cut.json", &r)?;
    Ok(true)
}

fn gadget(a: &GadgetArgs, ctx: &mut Ctx) -> Outcome {
    let force = match a.force {
        None => GadgetOverride::None,
        Some(OverrideArg::AllOnes) => GadgetOverride::AllOnes,
        Some(OverrideArg::AllZeros) => GadgetOverride::AllZeros,
    };
    ctx.seed = Some(a.seed);
    let g = build_gkp(a.k, a.p, a.seed, force)?;
    ctx.write_graph("gadget.txt", &g.graph)?;
    ctx.write_json("gadget.json", &g.sidecar(force))?;
    g.verify()?;
    println!(
        "vertices={} edges={} cut_s={} invariants PASS",
        g.graph.n(),
        g.graph.num_edges(),
        g.cut_s()
    );
    Ok(true)
}

fn binom(a: &BinomArgs, ctx: &mut Ctx) -> Outcome {
    let points = if a.grid {
        default_grid()
    } else {
        vec![(a.p.unwrap_or(0.0), a.n.unwrap_or(0))]
    };
    let mut reports = Vec::with_capacity(points.len());
    for (p, n) in points {
        let r = binomial_anticoncentration(p, n)?;
        println!(
            "p={p} n={n} threshold={} min_theta_probability={} at_mean={} {}",
            r.threshold,
            r.minimum,
            r.at_mean,
            if r.pass { "PASS" } else { "FAIL" }
        );
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    ctx.write_json("binom.json", &reports)?;
    Ok(pass)
}

fn bench_queries(a: &BenchArgs, ctx: &mut Ctx) -> Outcome {
    ctx.seed = Some(a.seed);
    let mut csv = String::from("n,m,queries,ratio\n");
    let mut totals = QueryCounts::default();
    let mut ratios = Vec::new();
    for &n in &a.sizes {
        let mut h = implicit_backend(BackendSpec::Complete { n })?;
        let mut cfg = SparsifyConfig::new(a.eps, a.delta, a.seed);
        cfg.q_multiplier = a.q_multiplier;
        // resparsification reads no oracles, so it cannot change the counts
        cfg.resparsify = false;
        let out = sublinear_sparsify(&mut h, &cfg)?;
        let q = out.query_report;
        totals.vertex += q.vertex;
        totals.degree += q.degree;
        totals.edge += q.edge;
        let m = n * (n - 1) / 2;
        let ratio = q.total() as f64 / m as f64;
        ratios.push(ratio);
        writeln!(csv, "{n},{m},{},{ratio}", q.total()).expect("write to string");
    }
    ctx.queries = Some(totals);
    print!("{csv}");
    ctx.write("bench.csv", csv.as_bytes())?;
    let decreasing = ratios.windows(2).all(|w| w[1] < w[0]);
    if !decreasing {
        eprintln!("query/m ratio is not strictly decreasing in n");
    }
    Ok(decreasing)
}

fn deviation(a: &DeviationArgs, ctx: &mut Ctx) -> Outcome {
    ctx.seed = Some(a.seed);
    let mut cfg = DeviationConfig::new(a.k, a.p, a.budget, a.trials, a.seed);
    cfg.allow_over_budget = a.allow_over_budget;
    let r = estimator_deviation_experiment(&cfg, a.per_trial)?;
    // over-budget runs are controls, judged only against the exact law
    let pass = if 2 * a.budget > a.k * a.k {
        r.within_three_sigma
    } else {
        r.pass
    };
    println!(
        "frequency={} exact={} sigma={} max_edge_queries={} {}",
        r.frequency,
        r.exact_probability,
        r.sigma,
        r.max_edge_queries,
        if pass { "PASS" } else { "FAIL" }
    );
    ctx.write_json("deviation.json", &r)?;
    Ok(pass)
}

fn distinguish(a: &DistinguishArgs, ctx: &mut Ctx) -> Outcome {
    ctx.seed = Some(a.seed);
    let r = distinguishing_query_experiment(a.k, &a.eps, a.trials, a.seed, a.probe_cap)?;
    for p in &r.points {
        println!(
            "eps={} median_probes={} censored={}",
            p.epsilon, p.median, p.censored
        );
    }
    match r.slope {
        Some(s) => println!("log-log slope={s} {}", if r.pass { "PASS" } else { "FAIL" }),
        None => println!("log-log slope undefined FAIL"),
    }
    ctx.write_json("distinguish.json", &r)?;
    Ok(r.pass)
}

fn lower_bound_instance(a: &InstanceArgs, ctx: &mut Ctx) -> Outcome {
    ctx.seed = Some(a.seed);
    let missing = |flag: &str| Failure::Validation(format!("--{flag} is required for this family"));
    match a.family {
        Family::DisjointUnion => {
            let n = a.n.ok_or_else(|| missing("n"))?;
            let delta = a.delta.ok_or_else(|| missing("delta"))?;
            let inst = build_theorem7_instance(n, a.eps, delta, a.seed)?;
            #[derive(Serialize)]
            struct Meta<'a> {
                family: Family,
                case: subspar::hardness::Theorem7Case,
                k: usize,
                p: f64,
                copies: usize,
                vertices: usize,
                edges: usize,
                cuts: &'a [Vec<usize>],
                cut_values: &'a [f64],
            }
            ctx.write_graph("instance.txt", &inst.graph)?;
            ctx.write_json(
                "instance.json",
                &Meta {
                    family: a.family,
                    case: inst.case,
                    k: inst.k,
                    p: inst.p,
                    copies: inst.copies,
                    vertices: inst.graph.n(),
                    edges: inst.graph.num_edges(),
                    cuts: &inst.cuts,
                    cut_values: &inst.cut_values,
                },
            )?;
            println!(
                "k={} p={} copies={} vertices={} edges={}",
                inst.k,
                inst.p,
                inst.copies,
                inst.graph.n(),
                inst.graph.num_edges()
            );
        }
        Family::CliqueBlocks => {
            let k = a.k.ok_or_else(|| missing("k"))?;
            let inst = build_theorem8_instance(k, a.eps, a.seed, a.density)?;
            #[derive(Serialize)]
            struct Meta<'a> {
                family: Family,
                k: usize,
                epsilon: f64,
                p: f64,
                density: f64,
                vertices: usize,
                edges: usize,
                s: &'a [usize],
                h: Vec<String>,
                cut_s: f64,
                planted_ratio: f64,
            }
            let cut_s = inst.graph.cut_value_of(&inst.s)?;
            ctx.write_graph("instance.txt", &inst.graph)?;
            ctx.write_json(
                "instance.json",
                &Meta {
                    family: a.family,
                    k,
                    epsilon: inst.epsilon,
                    p: inst.p,
                    density: inst.density,
                    vertices: inst.graph.n(),
                    edges: inst.graph.num_edges(),
                    s: &inst.s,
                    h: inst.h.rows(),
                    cut_s,
                    planted_ratio: inst.planted_ratio,
                },
            )?;
            println!(
                "vertices={} edges={} planted_ratio={}",
                inst.graph.n(),
                inst.graph.num_edges(),
                inst.planted_ratio
            );
        }
    }
    Ok(true)
}

fn dispatch(command: &Command, ctx: &mut Ctx) -> Outcome {
    match command {
        Command::Sparsify(a) => sparsify(a, ctx),
        Command::Verify(a) => verify(a, ctx),
        Command::SparsestCut(a) => sparsest_cut(a, ctx),
        Command::MinStCut(a) => min_st_cut(a, ctx),
        Command::Gadget(a) => gadget(a, ctx),
        Command::Binom(a) => binom(a, ctx),
        Command::BenchQueries(a) => bench_queries(a, ctx),
        Command::Deviation(a) => deviation(a, ctx),
        Command::Distinguish(a) => distinguish(a, ctx),
        Command::LowerBoundInstance(a) => lower_bound_instance(a, ctx),
        Command::Replay(_) => unreachable!("replay is handled before dispatch"),
    }
}

fn command_name(command: &Command) -> String {
    let value = serde_json::to_value(command).expect("arguments serialize");
    value
        .as_object()
        .and_then(|o| o.keys().next().cloned())
        .unwrap_or_else(|| "unknown".into())
}

/// Runs one command into `out_dir` and writes its manifest; returns the exit code.
fn execute(cli: &Cli, args: &[String], out_dir: &Path) -> i32 {
    if let Err(e) = fs::create_dir_all(out_dir) {
        eprintln!("error: cannot create {}: {e}", out_dir.display());
        return 1;
    }
    let mut ctx = Ctx {
        out_dir: out_dir.to_path_buf(),
        inputs: Vec::new(),
        outputs: Vec::new(),
        seed: None,
        queries: None,
    };
    let start = Instant::now();
    let code = match dispatch(&cli.command, &mut ctx) {
        Ok(true) => 0,
        Ok(false) => 3,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    };
    let hash_all =
        |paths: &mut dyn Iterator<Item = (String, PathBuf)>| -> BTreeMap<String, String> {
            paths
                .filter_map(|(key, path)| sha256_file(&path).ok().map(|h| (key, h)))
                .collect()
        };
    let manifest = RunManifest {
        command: command_name(&cli.command),
        args: args.to_vec(),
        cwd: std::env::current_dir().unwrap_or_default(),
        params: serde_json::to_value(cli).expect("arguments serialize"),
        seed: ctx.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
        inputs: hash_all(
            &mut ctx
                .inputs
                .iter()
                .map(|p| (p.display().to_string(), p.clone())),
        ),
        outputs: hash_all(&mut ctx.outputs.iter().map(|n| (n.clone(), out_dir.join(n)))),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        queries: ctx.queries,
        exit_code: code,
    };
    if let Err(e) = manifest.store(out_dir) {
        eprintln!("error: cannot write manifest: {e}");
        return 1;
    }
    code
}

fn replay(a: &ReplayArgs, out_dir: Option<&Path>) -> i32 {
    let original = match RunManifest::load(&a.manifest) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", a.manifest.display());
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(&original.args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: manifest arguments do not parse: {e}");
            return 2;
        }
    };
    if matches!(cli.command, Command::Replay(_)) {
        eprintln!("error: manifest records a replay, not a command");
        return 2;
    }
    let target = out_dir
        .map(Path::to_path_buf)
        .unwrap_or_else(|| a.manifest.parent().unwrap_or(Path::new(".")).join("replay"));
    let target = match std::path::absolute(&target) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    if let Err(e) = std::env::set_current_dir(&original.cwd) {
        eprintln!(
            "error: cannot enter recorded directory {}: {e}",
            original.cwd.display()
        );
        return 1;
    }
    let code = execute(&cli, &original.args, &target);
    let mut identical = code == original.exit_code;
    for (name, hash) in &original.outputs {
        let now = sha256_file(&target.join(name)).ok();
        let same = now.as_deref() == Some(hash.as_str());
        identical &= same;
        println!("{} {name}", if same { "MATCH" } else { "DIFF" });
    }
    if identical {
        println!("replay PASS: outputs are byte-identical");
        0
    } else {
        println!("replay FAIL");
        3
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            std::process::exit(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    let code = match &cli.command {
        Command::Replay(a) => replay(a, cli.out_dir.as_deref()),
        _ => execute(
            &cli,
            &args,
            cli.out_dir.as_deref().unwrap_or(Path::new(DEFAULT_OUT_DIR)),
        ),
    };
    std::process::exit(code);
}
