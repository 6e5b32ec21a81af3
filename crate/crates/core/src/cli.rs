//! The `cfchroma` command line.
//!
//! Exit codes: 0 success or feasible, 1 infeasible or algorithmic failure,
//! 2 usage or input error, 3 unknown (node limit or palette cap reached).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::colorers::{
    extend_ind0, find_layering, greedy_max_color, layered_extend, reduce_via_witness, AvoidMap,
    GreedyScope,
};
use crate::coloring::{is_cf, is_weak_cf, PartialColoring};
use crate::error::Error;
use crate::generators::{
    gen_affine_lines, gen_grid_gadget, gen_lift0, gen_product_gadget, gen_quad, gen_union,
    refute_product_coloring, LiftOptions, ProductParams, DEFAULT_LIFT_CAP,
};
use crate::io::{emit, read_coloring, read_text, report, to_pretty, Instance};
use crate::solver::{
    brute_oracle_capped, export_cnf, feasible_with, minimize, Backend, Chromatic, EdgeRule,
    ExtensionProblem, Mode, SolveResult, SolverConfig, Verdict, DEFAULT_ORACLE_CAP, NODE_LIMIT_ENV,
};
use crate::system::{ADParams, SetSystem};

#[derive(Debug, Parser)]
#[command(
    name = "cfchroma",
    version,
    about = "Conflict-free chromatic numbers of finite set systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Decide an extension problem or compute a chromatic number.
    Solve(SolveArgs),
    /// Run a constructive colorer.
    Color(ColorArgs),
    /// Check a coloring against an instance.
    Verify(VerifyArgs),
    /// Find a homogeneous set refuting a coloring of a product gadget.
    Refute(RefuteArgs),
    /// Export the extension problem as DIMACS CNF.
    Cnf(CnfArgs),
    /// Run a parameter sweep and print CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(subcommand)]
    pub family: Family,
    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// Lines of the affine plane over F_q.
    Affine {
        #[arg(long)]
        q: usize,
    },
    /// Product gadget on [lambda]^(n-1) x k.
    Product {
        #[arg(long)]
        lambda: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: usize,
    },
    /// Grid-lines gadget with its precoloring.
    Grid {
        #[arg(long, default_value_t = 4)]
        rows: usize,
        #[arg(long, default_value_t = 6)]
        cols: usize,
    },
    /// 4-sets of 0..m with two even and two odd elements.
    Quad {
        #[arg(long)]
        m: usize,
    },
    /// 2t copies of a base instance plus all transversals.
    Lift {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = DEFAULT_LIFT_CAP)]
        cap: u64,
        /// Sample `cap` transversals when there are more.
        #[arg(long)]
        sample: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Disjoint union of instance files.
    Union {
        #[arg(required = true)]
        parts: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Weak,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Weak => Mode::Weak,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Cf,
    Proper,
}

impl From<RuleArg> for EdgeRule {
    fn from(r: RuleArg) -> EdgeRule {
        match r {
            RuleArg::Cf => EdgeRule::ConflictFree,
            RuleArg::Proper => EdgeRule::Proper,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Search,
    Sat,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Backend {
        match b {
            BackendArg::Search => Backend::Search,
            BackendArg::Sat => Backend::Sat,
        }
    }
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long, env = NODE_LIMIT_ENV)]
    pub node_limit: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Search)]
    pub backend: BackendArg,
    /// Largest palette tried by --optimize; above it the answer is a lower bound.
    #[arg(long)]
    pub max_palette: Option<usize>,
}

impl EngineArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            node_limit: self.node_limit,
            threads: self.threads.max(1),
            backend: self.backend.into(),
            max_palette: self.max_palette,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = RuleArg::Cf)]
    pub rule: RuleArg,
    /// Palette size; defaults to the palette of the instance's fixed part.
    #[arg(long, conflicts_with = "optimize")]
    pub palette: Option<usize>,
    /// Find the smallest feasible palette.
    #[arg(long)]
    pub optimize: bool,
    /// Declared bound on |A ∩ dom(fixed)|.
    #[arg(long)]
    pub spill_bound: Option<usize>,
    /// Cross-check the verdict by exhaustive enumeration when within the cap.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: u128,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    GreedyMax,
    Disjointify,
    Ind0,
    Layered,
    WitnessReduce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    AllVertices,
    MaxVertices,
}

#[derive(Debug, Args)]
pub struct ColorArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    /// Palette size; defaults to the fixed part's palette where one exists.
    #[arg(long)]
    pub palette: Option<usize>,
    /// Almost-disjointness parameter; defaults to the smallest that holds.
    #[arg(long)]
    pub d: Option<usize>,
    /// Precolored points per edge (ind0), or layering spill (layered;
    /// defaults to k + d - 1).
    #[arg(long)]
    pub spill: Option<usize>,
    /// Witness size for witness-reduce.
    #[arg(long, default_value_t = 2)]
    pub tau: usize,
    #[arg(long, value_enum, default_value_t = ScopeArg::AllVertices)]
    pub scope: ScopeArg,
    /// JSON list of forbidden witness colors per edge (greedy-max).
    #[arg(long)]
    pub avoid: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    /// A coloring, or a report containing one.
    pub coloring: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RefuteArgs {
    pub instance: PathBuf,
    pub coloring: PathBuf,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CnfArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Strict)]
    pub mode: ModeArg,
    #[arg(long)]
    pub palette: Option<usize>,
    /// Also write the variable layout needed to decode a model.
    #[arg(long)]
    pub layout: Option<PathBuf>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Quad,
    Affine,
    Lift,
    All,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Largest m of the quad sweep (starting at 4).
    #[arg(long, default_value_t = 10)]
    pub max_m: usize,
    /// Orders of the affine sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 5])]
    pub q: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BackendArg::Sat)]
    pub backend: BackendArg,
    /// Largest palette tried per column; above it the cell reads `>=p`.
    #[arg(long)]
    pub max_palette: Option<usize>,
    /// Palette cap for the lift suite, whose lifted rows get hard fast.
    #[arg(long, default_value_t = 4)]
    pub lift_max_palette: usize,
    #[arg(long, env = NODE_LIMIT_ENV)]
    pub node_limit: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn failure(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

trait Context<T> {
    /// Bad input or parameters: exit 2.
    fn usage(self) -> CliResult<T>;
    /// The algorithm ran and failed: exit 1.
    fn failed(self) -> CliResult<T>;
}

impl<T> Context<T> for crate::error::Result<T> {
    fn usage(self) -> CliResult<T> {
        self.map_err(|e| CliError::usage(e.to_string()))
    }

    fn failed(self) -> CliResult<T> {
        self.map_err(|e| match e {
            Error::Io(_) | Error::Json(_) | Error::Format(_) => CliError::usage(e.to_string()),
            other => CliError::failure(other.to_string()),
        })
    }
}

pub fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Color(a) => cmd_color(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Refute(a) => cmd_refute(a),
        Command::Cnf(a) => cmd_cnf(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn load(path: &Path) -> CliResult<Instance> {
    Instance::read(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn write_json(value: &Value, out: Option<&Path>) -> CliResult<()> {
    emit(&to_pretty(value), out).usage()
}

/// Smallest `mu` at which every pair of edges shares fewer than `mu` points.
fn smallest_mu(system: &SetSystem) -> usize {
    (1..=system.max_edge_size().max(1))
        .find(|&mu| {
            system
                .is_almost_disjoint(ADParams::pairwise(mu))
                .map(|c| c.holds)
                .unwrap_or(false)
        })
        .unwrap_or(system.max_edge_size() + 1)
}

fn cmd_gen(args: GenArgs) -> CliResult<i32> {
    let instance = match &args.family {
        Family::Affine { q } => Instance::new(gen_affine_lines(*q).usage()?),
        Family::Product { lambda, n, k, t } => {
            Instance::new(gen_product_gadget(&ProductParams::new(*lambda, *n, *k, *t)).usage()?)
        }
        Family::Grid { rows, cols } => {
            let g = gen_grid_gadget(*rows, *cols).usage()?;
            Instance::with_fixed(g.system, g.fixed)
        }
        Family::Quad { m } => Instance::new(gen_quad(*m).usage()?),
        Family::Lift {
            base,
            t,
            cap,
            sample,
            seed,
        } => {
            let base = load(base)?;
            let options = LiftOptions {
                cap: *cap,
                sample_seed: sample.then_some(*seed),
            };
            Instance::new(gen_lift0(&base.system, *t, options).usage()?)
        }
        Family::Union { parts } => {
            let systems = parts
                .iter()
                .map(|p| load(p).map(|i| i.system))
                .collect::<CliResult<Vec<_>>>()?;
            Instance::new(gen_union(&systems).usage()?)
        }
    };
    let system = &instance.system;
    let advertised = system
        .meta()
        .get("family")
        .and_then(Value::as_str)
        .and_then(|family| match (family, system.meta().get("params")) {
            ("affine" | "grid", _) => Some(2),
            ("product", Some(p)) => p.get("k").and_then(Value::as_u64).map(|k| k as usize + 1),
            ("lift0", Some(p)) => p.get("t").and_then(Value::as_u64).map(|t| 2 * t as usize),
            _ => None,
        });
    let mut summary = format!(
        "{} vertices, {} edges",
        system.ground_size(),
        system.num_edges()
    );
    if let Some(mu) = advertised {
        let holds = system
            .is_almost_disjoint(ADParams::pairwise(mu))
            .usage()?
            .holds;
        if !holds {
            return Err(CliError::failure(format!(
                "generated system is not {mu}-almost disjoint"
            )));
        }
        let _ = write!(summary, ", {mu}-almost disjoint verified");
    }
    if let Some(f) = &instance.fixed {
        let _ = write!(summary, ", {} precolored", f.len());
    }
    emit(&instance.to_json(), args.out.as_deref()).usage()?;
    if args.out.as_deref().is_some_and(|p| p.as_os_str() != "-") {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(0)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Feasible => 0,
        Verdict::Infeasible => 1,
        Verdict::Unknown => 3,
    }
}

fn oracle_check(
    problem: &ExtensionProblem,
    rule: EdgeRule,
    cap: u128,
    expected: Verdict,
) -> CliResult<Value> {
    match brute_oracle_capped(problem, rule, cap) {
        Ok(r) => {
            let agrees = r.verdict == expected;
            if !agrees {
                return Err(CliError::failure(format!(
                    "oracle disagrees at palette {}: solver {:?}, oracle {:?}",
                    problem.palette(),
                    expected,
                    r.verdict
                )));
            }
            Ok(json!({ "palette": problem.palette(), "verdict": r.verdict, "agrees": agrees }))
        }
        Err(Error::OracleCapExceeded { assignments, cap }) => Ok(json!({
            "palette": problem.palette(),
            "skipped": format!("{assignments} assignments exceed the cap of {cap}"),
        })),
        Err(e) => Err(CliError::failure(e.to_string())),
    }
}

fn result_json(result: &SolveResult) -> Value {
    serde_json::to_value(result).expect("results serialize")
}

fn cmd_solve(args: SolveArgs) -> CliResult<i32> {
    let inst = load(&args.instance)?;
    let mode: Mode = args.mode.into();
    let rule: EdgeRule = args.rule.into();
    let config = args.engine.config();
    let fixed = inst.fixed.clone();
    let mut body = json!({
        "mode": mode,
        "rule": rule,
        "backend": config.backend,
    });
    let (code, oracle_runs) = if args.optimize {
        let start = fixed.clone().unwrap_or_else(|| PartialColoring::new(1));
        let (chromatic, result) = minimize(&inst.system, &start, mode, rule, &config).failed()?;
        let code = match chromatic {
            Chromatic::Exact { .. } => 0,
            Chromatic::Unknown { .. } => 3,
            Chromatic::Impossible => 1,
        };
        merge(&mut body, result_json(&result));
        body["chromatic"] = serde_json::to_value(chromatic).expect("serializes");
        let mut checks = Vec::new();
        if let Chromatic::Exact { value } = chromatic {
            checks.push((value, Verdict::Feasible));
            if value > 1 && value > start.assignment().values().max().map_or(0, |c| c + 1) {
                checks.push((value - 1, Verdict::Infeasible));
            }
        }
        (
            code,
            checks
                .into_iter()
                .map(|(p, v)| (start.with_palette(p), v))
                .collect::<Vec<_>>(),
        )
    } else {
        let palette = args
            .palette
            .or(fixed.as_ref().map(PartialColoring::palette))
            .ok_or_else(|| CliError::usage("give --palette or --optimize"))?;
        let f = match &fixed {
            Some(f) => f.with_palette(palette).usage()?,
            None => PartialColoring::new(palette),
        };
        body["palette"] = json!(palette);
        let mut problem = ExtensionProblem::new(inst.system.clone(), f.clone(), mode);
        if let Some(k) = args.spill_bound {
            problem = problem.with_spill_bound(k);
        }
        let result = feasible_with(&problem, rule, &config).usage()?;
        merge(&mut body, result_json(&result));
        (verdict_code(result.verdict), vec![(Ok(f), result.verdict)])
    };
    if args.oracle {
        let mut checks = Vec::new();
        for (f, expected) in oracle_runs {
            if expected == Verdict::Unknown {
                continue;
            }
            let problem = ExtensionProblem::new(inst.system.clone(), f.usage()?, mode);
            checks.push(oracle_check(&problem, rule, args.oracle_cap, expected)?);
        }
        body["oracle"] = Value::Array(checks);
    }
    write_json(&report("solve", body), args.out.as_deref())?;
    Ok(code)
}

fn merge(into: &mut Value, from: Value) {
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
}

fn verification(system: &SetSystem, f: &PartialColoring) -> CliResult<Value> {
    let total = system.covered().iter().all(|&v| f.is_assigned(v));
    let report = if total {
        is_cf(system, f)
    } else {
        is_weak_cf(system, f)
    }
    .failed()?;
    Ok(json!({
        "mode": if total { "strict" } else { "weak" },
        "passed": report.passed(),
        "violations": report.violations().map(|e| e.edge).collect::<Vec<_>>(),
    }))
}

fn cmd_color(args: ColorArgs) -> CliResult<i32> {
    let inst = load(&args.instance)?;
    let system = &inst.system;
    let fixed_or_palette = || -> CliResult<PartialColoring> {
        match (&inst.fixed, args.palette) {
            (Some(f), Some(p)) => f.with_palette(p).usage(),
            (Some(f), None) => Ok(f.clone()),
            (None, Some(p)) => Ok(PartialColoring::new(p)),
            (None, None) => Err(CliError::usage(
                "give --palette or an instance with a fixed part",
            )),
        }
    };
    let d = args.d.unwrap_or_else(|| smallest_mu(system));
    let (coloring, certificate) = match args.algorithm {
        Algorithm::GreedyMax => {
            let avoid = match &args.avoid {
                Some(path) => {
                    let sets = serde_json::from_str(&read_text(path).usage()?)
                        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
                    AvoidMap::from_sets(sets)
                }
                None => AvoidMap::empty(system.num_edges()),
            };
            let palette = args
                .palette
                .unwrap_or(system.covered().len() + avoid.max_len());
            let scope = match args.scope {
                ScopeArg::AllVertices => GreedyScope::AllVertices,
                ScopeArg::MaxVertices => GreedyScope::MaxVertices,
            };
            let out = greedy_max_color(system, &avoid, palette, scope).failed()?;
            (
                out.coloring,
                json!({ "scope": scope, "witness": out.witness }),
            )
        }
        Algorithm::Disjointify => {
            let palette = args
                .palette
                .ok_or_else(|| CliError::usage("disjointify needs --palette"))?;
            let out = crate::colorers::disjointify_color(system, palette).failed()?;
            (out.coloring, json!({ "edges": out.edges }))
        }
        Algorithm::Ind0 => {
            let mut problem =
                ExtensionProblem::new(system.clone(), fixed_or_palette()?, Mode::Weak);
            if let Some(k) = args.spill {
                problem = problem.with_spill_bound(k);
            }
            let out = extend_ind0(&problem, d).failed()?;
            (
                out.coloring,
                serde_json::to_value(out.certificate).expect("serializes"),
            )
        }
        Algorithm::Layered => {
            let problem = ExtensionProblem::new(system.clone(), fixed_or_palette()?, Mode::Weak);
            let spill = args.spill.unwrap_or(problem.spill() + d - 1);
            let layering = find_layering(system, spill).map_err(|f| {
                CliError::failure(format!(
                    "no layering with spill {}: edge {} has {} earlier vertices",
                    f.spill, f.edge, f.earlier
                ))
            })?;
            let out = layered_extend(&problem, &layering, d).failed()?;
            (
                out.coloring,
                json!({ "layering": layering, "blocks": out.blocks }),
            )
        }
        Algorithm::WitnessReduce => {
            let out = reduce_via_witness(system, args.tau).failed()?;
            (
                out.coloring,
                json!({ "witness": out.witness, "removal": out.removal, "edges": out.edges }),
            )
        }
    };
    let check = verification(system, &coloring)?;
    // disjointify promises bounded deficiency, not conflict-freeness
    if args.algorithm != Algorithm::Disjointify && check["passed"] != json!(true) {
        return Err(CliError::failure(format!(
            "colorer output failed verification: {check}"
        )));
    }
    let algorithm = args
        .algorithm
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let body = json!({
        "algorithm": algorithm,
        "d": d,
        "coloring": coloring,
        "certificate": certificate,
        "verification": check,
    });
    write_json(&report("color", body), args.out.as_deref())?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<i32> {
    let inst = load(&args.instance)?;
    let f = read_coloring(&args.coloring).usage()?;
    f.check_domain(inst.system.ground_size()).usage()?;
    let mode: Mode = args.mode.into();
    let result = match mode {
        Mode::Strict => is_cf(&inst.system, &f),
        Mode::Weak => is_weak_cf(&inst.system, &f),
    };
    let body = match result {
        Ok(r) => json!({ "mode": mode, "passed": r.passed(), "report": r }),
        Err(e @ Error::NotTotal { .. }) => {
            json!({ "mode": mode, "passed": false, "error": e.to_string() })
        }
        Err(e) => return Err(CliError::usage(e.to_string())),
    };
    let passed = body["passed"] == json!(true);
    write_json(&report("verify", body), args.out.as_deref())?;
    Ok(if passed { 0 } else { 1 })
}

fn cmd_refute(args: RefuteArgs) -> CliResult<i32> {
    let inst = load(&args.instance)?;
    let meta = inst.system.meta();
    if meta.get("family").and_then(Value::as_str) != Some("product") {
        return Err(CliError::usage(
            "refute needs an instance with meta.family = product",
        ));
    }
    let params: ProductParams = meta
        .get("params")
        .cloned()
        .ok_or_else(|| CliError::usage("product instance without meta.params"))
        .and_then(|p| serde_json::from_value(p).map_err(|e| CliError::usage(e.to_string())))?;
    let f = read_coloring(&args.coloring).usage()?;
    let found = refute_product_coloring(&inst.system, &params, &f).usage()?;
    let code = if found.is_some() { 0 } else { 1 };
    let body = json!({ "params": params, "refutation": found });
    write_json(&report("refute", body), args.out.as_deref())?;
    Ok(code)
}

fn cmd_cnf(args: CnfArgs) -> CliResult<i32> {
    let inst = load(&args.instance)?;
    let palette = args
        .palette
        .or(inst.fixed.as_ref().map(PartialColoring::palette))
        .ok_or_else(|| CliError::usage("give --palette or an instance with a fixed part"))?;
    let fixed = match &inst.fixed {
        Some(f) => f.with_palette(palette).usage()?,
        None => PartialColoring::new(palette),
    };
    let problem = ExtensionProblem::new(inst.system, fixed, args.mode.into());
    let (cnf, layout) = export_cnf(&problem).usage()?;
    emit(&cnf.to_dimacs(), args.out.as_deref()).usage()?;
    if let Some(path) = &args.layout {
        let value = report(
            "cnf-layout",
            serde_json::to_value(layout).expect("serializes"),
        );
        write_json(&value, Some(path))?;
    }
    Ok(0)
}

fn chromatic_cell(c: crate::error::Result<Chromatic>) -> (String, Option<String>) {
    match c {
        Ok(Chromatic::Exact { value }) => (value.to_string(), None),
        Ok(Chromatic::Unknown { lower_bound }) => (format!(">={lower_bound}"), None),
        Ok(Chromatic::Impossible) => ("none".into(), None),
        Err(e) => (String::new(), Some(e.to_string())),
    }
}

fn cmd_bench(args: BenchArgs) -> CliResult<i32> {
    let config = SolverConfig {
        node_limit: args.node_limit,
        threads: args.threads.max(1),
        backend: args.backend.into(),
        max_palette: args.max_palette,
    };
    let lift_cap = args
        .max_palette
        .unwrap_or(usize::MAX)
        .min(args.lift_max_palette);
    let mut rows: Vec<(&str, String, crate::error::Result<SetSystem>)> = Vec::new();
    let suites = |s: Suite| args.suite == s || args.suite == Suite::All;
    if suites(Suite::Quad) {
        for m in 4..=args.max_m {
            rows.push(("quad", format!("m={m}"), gen_quad(m)));
        }
    }
    if suites(Suite::Affine) {
        for &q in &args.q {
            rows.push(("affine", format!("q={q}"), gen_affine_lines(q)));
        }
    }
    if suites(Suite::Lift) {
        let bases = [
            ("AG(2,3)", gen_affine_lines(3)),
            (
                "K3",
                SetSystem::new(3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]),
            ),
        ];
        for (name, base) in bases {
            match base {
                Ok(base) => {
                    let lifted = gen_lift0(&base, 2, LiftOptions::default());
                    rows.push(("lift", format!("{name} depth=0"), Ok(base)));
                    rows.push(("lift", format!("{name} depth=1 t=2"), lifted));
                }
                Err(e) => rows.push(("lift", format!("{name} depth=0"), Err(e))),
            }
        }
    }
    let mut csv = String::from("suite,instance,vertices,edges,chi,chi_cf,wchi_cf,status\n");
    let mut any_error = false;
    for (suite, name, system) in rows {
        let line = match system {
            Ok(s) => {
                let config = if suite == "lift" {
                    SolverConfig {
                        max_palette: Some(lift_cap),
                        ..config
                    }
                } else {
                    config
                };
                let mut errors = Vec::new();
                let mut cell = |c| {
                    let (v, e) = chromatic_cell(c);
                    errors.extend(e);
                    v
                };
                let chi = cell(crate::solver::chi_with(&s, &config));
                let chi_cf = cell(crate::solver::chi_cf_with(&s, &config));
                let wchi = cell(crate::solver::wchi_cf_with(&s, &config));
                let status = if errors.is_empty() {
                    "ok".to_string()
                } else {
                    any_error = true;
                    format!("error: {}", errors.join("; "))
                };
                format!(
                    "{suite},{name},{},{},{chi},{chi_cf},{wchi},{}",
                    s.ground_size(),
                    s.num_edges(),
                    csv_field(&status)
                )
            }
            Err(e) => {
                any_error = true;
                format!("{suite},{name},,,,,,{}", csv_field(&format!("error: {e}")))
            }
        };
        csv.push_str(&line);
        csv.push('\n');
    }
    emit(&csv, args.out.as_deref()).usage()?;
    Ok(if any_error { 1 } else { 0 })
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
