//! The `gtsp` command line: `gen`, `reduce`, `solve`, `lift`, `verify`,
//! `bench`.
//!
//! Exit codes: 0 on success, 1 on domain errors (infeasible or invalid
//! input), 2 on usage and parse errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::genbench::{
    generate, run_bench_to_file, BenchConfig, BenchCover, Family, GenSpec, Probability,
};
use crate::graph::{verify_tour, Weight};
use crate::instance::{content_lines, GtspInstance};
use crate::kernel::{lift, lift_verified, reduce_detailed, CoverStrategy, KernelResult};
use crate::solvers::{
    solve_exact, solve_heuristic, solve_permutation_bruteforce, SolveError, DEFAULT_EXACT_LIMIT,
};

#[derive(Debug, Parser)]
#[command(
    name = "gtsp",
    version,
    about = "Vertex-cover kernel for the graphical TSP"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded random instance.
    Gen(GenArgs),
    /// Reduce an instance to its kernel.
    Reduce(ReduceArgs),
    /// Solve an instance exactly or heuristically.
    Solve(SolveArgs),
    /// Lift a kernel tour back to the original instance.
    Lift(LiftArgs),
    /// Check a tour against an instance.
    Verify(VerifyArgs),
    /// Benchmark kernel sizes and solve times over generated instances.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverFlag {
    Approx,
    Exact,
    File(PathBuf),
}

impl FromStr for CoverFlag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "approx" => Ok(CoverFlag::Approx),
            "exact" => Ok(CoverFlag::Exact),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(CoverFlag::File(path.into())),
                _ => Err(format!("expected approx, exact or file:<path>, got `{s}`")),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Decision,
    Optimization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Heuristic,
    Bruteforce,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Smallest edge weight.
    #[arg(long, default_value_t = 1)]
    pub wmin: Weight,
    /// Largest edge weight.
    #[arg(long, default_value_t = 20)]
    pub wmax: Weight,
    /// Edge probability as `a/b`.
    #[arg(long = "p", default_value = "1/3")]
    pub probability: Probability,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Planted cover size (planted_cover only).
    #[arg(long, default_value_t = 1)]
    pub cover_size: usize,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Write a decision instance with this budget.
    #[arg(long)]
    pub budget: Option<Weight>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    pub input: PathBuf,
    /// Kernel instance output.
    #[arg(long)]
    pub out: PathBuf,
    /// Kernel metadata output.
    #[arg(long)]
    pub meta: PathBuf,
    /// approx, exact, or file:<path> with one vertex id per line.
    #[arg(long, default_value = "approx")]
    pub cover: CoverFlag,
    /// Override the mode implied by the instance file.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Dump the hop graph to this path.
    #[arg(long)]
    pub emit_hopgraph: Option<PathBuf>,
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Vertex-count guard for the exact solvers.
    #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
    pub limit: usize,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Also write the tour to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    /// Tour of the kernel, in kernel vertex ids.
    pub tour: PathBuf,
    #[arg(long)]
    pub meta: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Original instance; when given, the lifted tour is verified on it.
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub tour: PathBuf,
    /// Budget to check against; defaults to the instance budget, if any.
    #[arg(long)]
    pub budget: Option<Weight>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Vertex counts, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<usize>,
    /// Instances per vertex count.
    #[arg(long, default_value_t = 10)]
    pub count: u64,
    /// First seed; instance `i` of each size uses `seed + i`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub cover_size: usize,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long, value_enum, default_value = "exact")]
    pub cover: BenchCover,
    /// Largest graph handed to the exact solver.
    #[arg(long, default_value_t = 10)]
    pub limit: usize,
    /// Write `-` in the timing columns, making the CSV reproducible.
    #[arg(long)]
    pub no_timing: bool,
    /// Skip computing the vertex cover number under `--cover approx`.
    #[arg(long)]
    pub no_tau: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable or malformed files.
    Usage(String),
    /// Valid input the operation rejects.
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<GtspInstance, CliError> {
    GtspInstance::parse(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_ids(path: &Path) -> Result<Vec<usize>, CliError> {
    let text = read(path)?;
    let mut ids = Vec::new();
    for (line, content) in content_lines(&text) {
        for token in content.split_whitespace() {
            let id = token.parse().map_err(|_| {
                usage(format!(
                    "{}: line {line}: invalid vertex id `{token}`",
                    path.display()
                ))
            })?;
            ids.push(id);
        }
    }
    Ok(ids)
}

fn tour_line(vertices: &[usize]) -> String {
    let ids: Vec<String> = vertices.iter().map(usize::to_string).collect();
    format!("{}\n", ids.join(" "))
}

fn apply_mode(inst: &mut GtspInstance, mode: Option<Mode>) -> Result<(), CliError> {
    match mode {
        Some(Mode::Optimization) => inst.budget = None,
        Some(Mode::Decision) if inst.budget.is_none() => {
            return Err(domain("decision mode needs an instance with a budget"));
        }
        _ => {}
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let spec = GenSpec {
        family: args.family,
        n: args.n,
        edge_probability: args.weights.probability,
        weight_range: (args.weights.wmin, args.weights.wmax),
        cover_size: args.cover_size,
        seed: args.seed,
    };
    let mut inst = generate(&spec).map_err(usage)?;
    inst.budget = args.budget;
    write(&args.out, &inst.to_text())?;
    writeln!(
        out,
        "{} {}",
        inst.graph.vertex_count(),
        inst.graph.edge_count()
    )
    .map_err(domain)
}

fn cmd_reduce(args: &ReduceArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let mut inst = read_instance(&args.input)?;
    apply_mode(&mut inst, args.mode)?;
    let strategy = match &args.cover {
        CoverFlag::Approx => CoverStrategy::Approx,
        CoverFlag::Exact => CoverStrategy::Exact,
        CoverFlag::File(path) => CoverStrategy::Given(read_ids(path)?),
    };
    let red = reduce_detailed(&inst, &strategy).map_err(domain)?;
    let kr = &red.result;
    write(&args.out, &kr.kernel.to_text())?;
    write(&args.meta, &kr.to_meta_text())?;
    if let Some(path) = &args.emit_hopgraph {
        let mut dump = Vec::new();
        red.hop_graph.write_dump(&mut dump).map_err(domain)?;
        write(path, &String::from_utf8(dump).expect("ascii dump"))?;
    }
    if args.verbose {
        let _ = writeln!(
            err,
            "cover ({:?}, {} vertices): {:?}\nhop graph: {} x-nodes, {} y-nodes, {} edges\n\
             matching: {} pairs, cost {}\nkept: {:?}",
            red.cover.kind(),
            red.cover.len(),
            red.cover.vertices(),
            red.hop_graph.x_nodes().len(),
            red.hop_graph.y_nodes().len(),
            red.hop_graph.edges().len(),
            red.matching.cardinality,
            red.matching.total_cost,
            kr.id_map,
        );
        if kr.infeasible {
            let _ = writeln!(
                err,
                "budget is below the loop offset: instance is infeasible"
            );
        }
    }
    writeln!(
        out,
        "{} {} {} {} {}",
        inst.graph.vertex_count(),
        kr.kernel.graph.vertex_count(),
        inst.graph.edge_count(),
        kr.kernel.graph.edge_count(),
        kr.delta
    )
    .map_err(domain)
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut inst = read_instance(&args.input)?;
    apply_mode(&mut inst, args.mode)?;
    let result = match args.method {
        Method::Exact => solve_exact(&inst, args.limit),
        Method::Heuristic => solve_heuristic(&inst, args.seed),
        Method::Bruteforce => solve_permutation_bruteforce(&inst, args.limit),
    }
    .map_err(|e: SolveError| domain(e))?;
    let line = tour_line(result.tour.vertices());
    if let Some(path) = &args.out {
        write(path, &line)?;
    }
    writeln!(out, "{line}weight {}", result.tour.weight()).map_err(domain)?;
    if let Some(w) = inst.budget {
        writeln!(out, "within_budget {}", result.tour.weight() <= w).map_err(domain)?;
    }
    Ok(())
}

fn cmd_lift(args: &LiftArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let kr = KernelResult::parse_meta(&read(&args.meta)?)
        .map_err(|e| usage(format!("{}: {e}", args.meta.display())))?;
    let walk = read_ids(&args.tour)?;
    let lifted = match &args.instance {
        Some(path) => lift_verified(&kr, &read_instance(path)?.graph, &walk),
        None => lift(&kr, &walk),
    }
    .map_err(domain)?;
    write(&args.out, &tour_line(lifted.vertices()))?;
    writeln!(out, "weight {}", lifted.weight()).map_err(domain)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inst = read_instance(&args.instance)?;
    let walk = read_ids(&args.tour)?;
    let tour = verify_tour(&inst.graph, &walk).map_err(domain)?;
    writeln!(out, "weight {}", tour.weight()).map_err(domain)?;
    match args.budget.or(inst.budget) {
        Some(w) if tour.weight() > w => Err(domain(format!(
            "weight {} exceeds budget {w}",
            tour.weight()
        ))),
        _ => Ok(()),
    }
}

fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let specs: Vec<GenSpec> = args
        .n
        .iter()
        .flat_map(|&n| {
            (0..args.count).map(move |i| GenSpec {
                family: args.family,
                n,
                edge_probability: args.weights.probability,
                weight_range: (args.weights.wmin, args.weights.wmax),
                cover_size: args.cover_size,
                seed: args.seed + i,
            })
        })
        .collect();
    let config = BenchConfig {
        cover: args.cover,
        oracle_limit: args.limit,
        compute_tau: !args.no_tau,
        timing: !args.no_timing,
    };
    let outcomes = run_bench_to_file(&specs, &config, &args.out)
        .map_err(|e| domain(format!("{}: {e}", args.out.display())))?;
    let mut failures = 0;
    let mut violations = 0;
    for outcome in &outcomes {
        match outcome {
            Ok(r) => {
                for v in &r.violations {
                    violations += 1;
                    let _ = writeln!(err, "{}: {v}", r.id);
                }
            }
            Err(e) => {
                failures += 1;
                let _ = writeln!(err, "{e}");
            }
        }
    }
    writeln!(
        out,
        "records {} failures {failures} violations {violations}",
        outcomes.len() - failures
    )
    .map_err(domain)?;
    if failures + violations > 0 {
        return Err(domain(format!(
            "{failures} failed instances, {violations} violated checks"
        )));
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = write!(err, "{}", e.render());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a, out),
        Command::Reduce(a) => cmd_reduce(a, out, err),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Lift(a) => cmd_lift(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
