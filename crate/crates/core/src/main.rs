//! Command-line interface over the treebalance library.
//!
//! Exit codes: 0 success, 1 usage or input errors, 2 a verification check
//! failed, 3 a resource guard refused the request.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use treebalance::builders::BuilderKind;
use treebalance::census::{
    enumerate_shapes_guarded, CensusError, CountTable, DEFAULT_ENUM_GUARD,
};
use treebalance::indices::report;
use treebalance::minima::{max_min_bound, min_colless_explicit, MinimaTable};
use treebalance::shape::TreeShape;
use treebalance::verify::run_all;
use treebalance::{BuildError, NewickError};

/// Largest leaf count accepted for direct construction and curve sweeps.
const SIZE_CAP: u64 = 1 << 20;
/// Largest n accepted by closed-form evaluation (shifts stay in u64).
const FORMULA_CAP: u64 = 1 << 62;
/// Largest table the counting recursions will fill from the CLI.
const COUNT_CAP: u64 = 512;
/// Largest formula sweep the verify battery will run from the CLI.
const VERIFY_FORMULA_CAP: u64 = 1 << 22;

#[derive(Parser)]
#[command(
    name = "treebalance",
    version,
    about = "Balance indices of rooted binary tree shapes",
    long_about = "Computes Colless and Sackin indices of rooted binary tree shapes, the \
                  minimal Colless value attainable on n leaves, the trees that attain it, \
                  and exact counts of those trees."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Balance statistics of one shape.
    Index(IndexArgs),
    /// The minimal Colless index c(n) over shapes with n leaves.
    Min(MinArgs),
    /// Construct a named shape and print it as Newick.
    Build(BuildArgs),
    /// Root partitions that Colless-minimal shapes on n leaves can have.
    Qb(QbArgs),
    /// All shapes on n leaves, one Newick per line (guarded).
    Enumerate(EnumerateArgs),
    /// Exact counts of minimal shapes for each n up to a bound.
    Count(CountArgs),
    /// CSV of n, c(n), and the strict upper bound 2^(ceil(log2 n) - 1).
    Curve(CurveArgs),
    /// Run the library's self-check battery.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Caterpillar,
    FullyBalanced,
    MaximallyBalanced,
    Gfb,
}

impl From<KindArg> for BuilderKind {
    fn from(kind: KindArg) -> BuilderKind {
        match kind {
            KindArg::Caterpillar => BuilderKind::Caterpillar,
            KindArg::FullyBalanced => BuilderKind::FullyBalanced,
            KindArg::MaximallyBalanced => BuilderKind::MaximallyBalanced,
            KindArg::Gfb => BuilderKind::GreedyFromBottom,
        }
    }
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).multiple(false)))]
struct IndexArgs {
    /// Newick string of the shape (labels and branch lengths are ignored).
    #[arg(long, group = "source")]
    newick: Option<String>,
    /// Read the Newick from standard input.
    #[arg(long, group = "source")]
    stdin: bool,
    /// Build a named shape instead of parsing one.
    #[arg(long, value_enum, group = "source")]
    build: Option<KindArg>,
    /// Leaf count for --build.
    #[arg(long, requires = "build")]
    n: Option<u64>,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Bottom-up recursion over all smaller sizes.
    Recursive,
    /// Integer closed form, O(log n).
    Explicit,
    /// Both, printed side by side.
    Both,
}

#[derive(Args)]
struct MinArgs {
    /// Leaf count.
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value = "explicit")]
    method: MethodArg,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(value_enum)]
    kind: KindArg,
    /// Leaf count.
    #[arg(long, conflicts_with = "k")]
    n: Option<u64>,
    /// Height of the fully balanced tree (fully-balanced only); n = 2^k.
    #[arg(long)]
    k: Option<u32>,
}

#[derive(Args)]
struct QbArgs {
    /// Leaf count, at least 2.
    #[arg(long)]
    n: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Leaf count.
    #[arg(long)]
    n: u64,
    /// Print only the number of shapes.
    #[arg(long)]
    count_only: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CountKind {
    /// Shapes attaining the minimal Colless index.
    Colless,
    /// Shapes attaining the minimal Sackin index.
    Sackin,
    /// The partition-filtered recursion bounding the Colless count.
    BoundB,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, value_enum)]
    kind: CountKind,
    /// Count for every n from 1 to this bound.
    #[arg(long)]
    max: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CurveArgs {
    /// Last row of the CSV.
    #[arg(long)]
    max_n: u64,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Ceiling for enumeration-backed checks.
    #[arg(long, default_value_t = 16)]
    max_n_enum: u64,
    /// Ceiling for formula sweeps.
    #[arg(long, default_value_t = 4096)]
    max_n_formula: u64,
    #[arg(long)]
    json: bool,
}

/// A failed run, tagged with its process exit code.
enum Failure {
    /// Bad arguments, malformed input, or I/O trouble: exit 1.
    Usage(String),
    /// A verification check failed: exit 2.
    Checks,
    /// A resource guard refused the request: exit 3.
    Limit(String),
}

impl From<NewickError> for Failure {
    fn from(e: NewickError) -> Failure {
        Failure::Usage(format!("bad newick: {e}"))
    }
}

impl From<BuildError> for Failure {
    fn from(e: BuildError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

impl From<CensusError> for Failure {
    fn from(e: CensusError) -> Failure {
        Failure::Limit(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Checks) => ExitCode::from(2),
        Err(Failure::Limit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Index(args) => cmd_index(args),
        Command::Min(args) => cmd_min(args),
        Command::Build(args) => cmd_build(args),
        Command::Qb(args) => cmd_qb(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Count(args) => cmd_count(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

/// The enumeration ceiling, overridable via TREEBALANCE_ENUM_GUARD.
fn enum_guard() -> Result<u64, Failure> {
    match std::env::var("TREEBALANCE_ENUM_GUARD") {
        Ok(raw) => raw.trim().parse().map_err(|_| {
            Failure::Usage(format!("TREEBALANCE_ENUM_GUARD must be an integer, got {raw:?}"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_ENUM_GUARD),
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

fn check_size_cap(n: u64) -> Result<(), Failure> {
    if n > SIZE_CAP {
        return Err(Failure::Limit(format!("n = {n} exceeds the size cap ({SIZE_CAP})")));
    }
    Ok(())
}

fn cmd_index(args: IndexArgs) -> Result<(), Failure> {
    let shape = if let Some(text) = &args.newick {
        TreeShape::parse_newick(text)?
    } else if args.stdin {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        TreeShape::parse_newick(&text)?
    } else {
        let kind = args.build.expect("clap guarantees one source");
        let n = args
            .n
            .ok_or_else(|| Failure::Usage("--build needs --n".to_string()))?;
        check_size_cap(n)?;
        BuilderKind::from(kind).build(n)?
    };
    let r = report(&shape);
    if args.json {
        println!("{}", serde_json::to_string(&r).expect("report serializes"));
    } else {
        println!("n: {}", r.leaves);
        println!("colless: {}", r.colless);
        println!("sackin: {}", r.sackin);
        println!("height: {}", r.height);
        println!("cherries: {}", r.cherries);
        println!("root partition: ({}, {})", r.root_partition.0, r.root_partition.1);
    }
    Ok(())
}

fn cmd_min(args: MinArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure::Usage("shapes have at least one leaf".to_string()));
    }
    let explicit = |n: u64| -> Result<u64, Failure> {
        if n > FORMULA_CAP {
            return Err(Failure::Limit(format!("n = {n} exceeds the formula cap (2^62)")));
        }
        Ok(min_colless_explicit(n))
    };
    let recursive = |n: u64| -> Result<u64, Failure> {
        // The recursion tabulates every size up to n.
        check_size_cap(n)?;
        Ok(MinimaTable::new().min_colless(n))
    };
    let values = match args.method {
        MethodArg::Recursive => (Some(recursive(args.n)?), None),
        MethodArg::Explicit => (None, Some(explicit(args.n)?)),
        MethodArg::Both => (Some(recursive(args.n)?), Some(explicit(args.n)?)),
    };
    if args.json {
        let mut obj = serde_json::Map::new();
        obj.insert("n".to_string(), json!(args.n));
        if let Some(v) = values.0 {
            obj.insert("recursive".to_string(), json!(v));
        }
        if let Some(v) = values.1 {
            obj.insert("explicit".to_string(), json!(v));
        }
        println!("{}", serde_json::Value::Object(obj));
    } else {
        match values {
            (Some(r), Some(e)) => println!("{r}, {e}"),
            (Some(r), None) => println!("{r}"),
            (None, Some(e)) => println!("{e}"),
            (None, None) => unreachable!("some method ran"),
        }
    }
    Ok(())
}

fn cmd_build(args: BuildArgs) -> Result<(), Failure> {
    let shape = match (args.n, args.k) {
        (Some(n), None) => {
            check_size_cap(n)?;
            BuilderKind::from(args.kind).build(n)?
        }
        (None, Some(k)) => {
            if args.kind != KindArg::FullyBalanced {
                return Err(Failure::Usage(
                    "--k only applies to fully-balanced; use --n".to_string(),
                ));
            }
            // SIZE_CAP = 2^20, so height 20 is the last buildable tree.
            if k > 20 {
                return Err(Failure::Limit(format!(
                    "k = {k} would build 2^{k} leaves, over the size cap ({SIZE_CAP})"
                )));
            }
            treebalance::fully_balanced(k)
        }
        (None, None) => return Err(Failure::Usage("pass --n (or --k) to size the shape".to_string())),
        (Some(_), Some(_)) => unreachable!("clap rejects --n with --k"),
    };
    println!("{}", shape.to_newick());
    Ok(())
}

fn cmd_qb(args: QbArgs) -> Result<(), Failure> {
    if args.n < 2 {
        return Err(Failure::Usage("root partitions need at least two leaves".to_string()));
    }
    check_size_cap(args.n)?;
    let set = treebalance::qb_set(args.n);
    if args.json {
        println!("{}", json!(set));
    } else {
        for (a, b) in set {
            println!("{a} {b}");
        }
    }
    Ok(())
}

fn cmd_enumerate(args: EnumerateArgs) -> Result<(), Failure> {
    if args.n == 0 {
        return Err(Failure::Usage("shapes have at least one leaf".to_string()));
    }
    let guard = enum_guard()?;
    let shapes = enumerate_shapes_guarded(args.n, guard)?;
    if args.count_only {
        println!("{}", shapes.count());
    } else {
        let stdout = std::io::stdout().lock();
        let mut out = std::io::BufWriter::new(stdout);
        use std::io::Write;
        for shape in shapes {
            writeln!(out, "{}", shape.to_newick())?;
        }
        out.flush()?;
    }
    Ok(())
}

fn cmd_count(args: CountArgs) -> Result<(), Failure> {
    if args.max == 0 {
        return Err(Failure::Usage("--max must be at least 1".to_string()));
    }
    if args.max > COUNT_CAP {
        return Err(Failure::Limit(format!(
            "--max {} exceeds the counting cap ({COUNT_CAP})",
            args.max
        )));
    }
    let mut table = CountTable::new();
    let mut count = |n: u64| match args.kind {
        CountKind::Colless => table.colless_minimal_count(n),
        CountKind::Sackin => table.sackin_minimal_count(n),
        CountKind::BoundB => table.bound_b_count(n),
    };
    if args.json {
        let rows: Vec<serde_json::Value> = (1..=args.max)
            .map(|n| json!({ "n": n, "count": count(n).to_string() }))
            .collect();
        println!("{}", json!(rows));
    } else {
        for n in 1..=args.max {
            println!("{n} {}", count(n));
        }
    }
    Ok(())
}

fn cmd_curve(args: CurveArgs) -> Result<(), Failure> {
    if args.max_n == 0 {
        return Err(Failure::Usage("--max-n must be at least 1".to_string()));
    }
    check_size_cap(args.max_n)?;
    let mut csv = String::from("n,c_n,g_n\n");
    for n in 1..=args.max_n {
        let c = min_colless_explicit(n);
        match max_min_bound(n) {
            // n = 1: the bound is not an integer, so the field is empty.
            None => csv.push_str(&format!("{n},{c},\n")),
            Some(g) => csv.push_str(&format!("{n},{c},{g}\n")),
        }
    }
    match &args.out {
        None => print!("{csv}"),
        Some(path) => std::fs::write(path, csv)?,
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    if args.max_n_formula > VERIFY_FORMULA_CAP {
        return Err(Failure::Limit(format!(
            "--max-n-formula {} exceeds the sweep cap ({VERIFY_FORMULA_CAP})",
            args.max_n_formula
        )));
    }
    let guard = enum_guard()?;
    let report = run_all(args.max_n_enum, args.max_n_formula, guard)?;
    if args.json {
        let rows: Vec<serde_json::Value> = report
            .checks
            .iter()
            .map(|c| json!({ "name": c.name, "passed": c.passed, "detail": c.detail }))
            .collect();
        println!("{}", json!({ "checks": rows, "all_passed": report.all_passed() }));
    } else {
        for check in &report.checks {
            let status = if check.passed { "ok  " } else { "FAIL" };
            println!("{status} {} ({})", check.name, check.detail);
        }
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        if failed == 0 {
            println!("all {} checks passed", report.checks.len());
        } else {
            println!("{failed} of {} checks failed", report.checks.len());
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}
