use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use nodim::experiment::{bench_suite, run_experiment, Command, ExperimentConfig, Mode};
use nodim::instance::{generate, InstanceFile, GENERATORS};
use nodim::report::{write_reports, BoundReport, Format, TheoremTag};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

fn tags_help() -> String {
    format!(
        "Report tags (theorem_tag column):\n{}\n\nExit codes: 0 all rows pass, 1 some bound violated, 2 usage or input error.",
        TheoremTag::vocabulary()
    )
}

#[derive(Parser, Debug)]
#[command(name = "nodim", version, about = "No-dimension convexity algorithms and bound checks", after_help = tags_help())]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Single point set: transversal of r copies against the centroid.
    Caratheodory(RunArgs),
    /// Weighted family with a common target.
    ColorfulCaratheodory(RunArgs),
    /// Frank-Wolfe transversal of a weighted family.
    FrankWolfe(RunArgs),
    /// Uncolored partition of a point set, or colored partition of a colored family.
    Tverberg(RunArgs),
    /// Minimax center of a single body family under the k-wise hypothesis.
    HellyVerify(RunArgs),
    /// Count transversals far from the anchor.
    HellyCount(RunArgs),
    /// Fractional Helly witness search.
    FractionalHelly(RunArgs),
    /// Simplex inequality (--mode affine|cone).
    SimplexCheck(RunArgs),
    /// Selection point and exhaustive hit count.
    Selection(RunArgs),
    /// Weak epsilon-net (--mode exhaustive|heuristic).
    Epsnet(RunArgs),
    /// Centerpoint construction and halfspace check.
    Centerpoint(RunArgs),
    /// Fixed instance mix with timings.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Generator name.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(GENERATORS))]
    generator: String,
    /// Generator parameter as key=value; values are JSON (e.g. m=[2,3]) or bare strings.
    #[arg(short, long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record per-trial wall-clock time (runtime_ms is 0 otherwise).
    #[arg(long)]
    timing: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Slack of the pass verdict (default depends on the command).
    #[arg(long)]
    tol: Option<f64>,
    /// derandomized | random | frank_wolfe | affine | cone | exhaustive | heuristic.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    /// Number of sets or subset size.
    #[arg(long)]
    r: Option<usize>,
    /// Parts, intersection order, face size or centerpoint depth.
    #[arg(long)]
    k: Option<usize>,
    /// Frank-Wolfe hypothesis order.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    /// Perturbation for colorful-caratheodory (derandomized mode).
    #[arg(long)]
    eta: Option<f64>,
    /// Per-family far radii for helly-count, comma separated.
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<f64>>,
    /// Require a colored family (tverberg).
    #[arg(long)]
    colored: bool,
    /// Random directions for centerpoint.
    #[arg(long, default_value_t = 256)]
    directions: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: nodim::Error| e.to_string())
}

/// Failure that maps to an exit code.
enum Failure {
    Usage(String),
    Violation,
}

impl From<nodim::Error> for Failure {
    fn from(e: nodim::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(reports: &[BoundReport], out: &OutputArgs) -> Result<(), Failure> {
    let mut w = open_out(&out.out)?;
    write_reports(&mut w, reports, out.format.into())?;
    w.flush()?;
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Violation)
    }
}

fn parse_params(raw: &[String]) -> Result<Map<String, Value>, Failure> {
    let mut map = Map::new();
    for item in raw {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("parameter {item:?} is not KEY=VALUE")))?;
        let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
        map.insert(k.to_string(), value);
    }
    Ok(map)
}

fn run(command: Command, args: &RunArgs) -> Result<(), Failure> {
    let instance = InstanceFile::load(&args.instance)
        .map_err(|e| Failure::Usage(format!("{}: {e}", args.instance.display())))?;
    let cfg = ExperimentConfig {
        seed: args.seed,
        trials: args.trials,
        tol: args.tol,
        mode: args.mode,
        r: args.r,
        k: args.k,
        t: args.t,
        eps: args.eps,
        eta: args.eta,
        rho: args.rho.clone(),
        colored: args.colored,
        directions: args.directions,
        timing: args.output.timing,
    };
    let reports = run_experiment(command, &instance, &args.instance.display().to_string(), &cfg)?;
    emit(&reports, &args.output)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let (command, args) = match cli.command {
        Sub::Gen(g) => {
            let file = generate(&g.generator, &parse_params(&g.params)?, g.seed)?;
            let mut w = open_out(&g.out)?;
            writeln!(w, "{}", file.to_json()?)?;
            w.flush()?;
            return Ok(());
        }
        Sub::Bench(b) => {
            let mut reports = Vec::new();
            for (command, iref, inst, mut cfg) in bench_suite(b.seed)? {
                cfg.timing = b.output.timing;
                reports.extend(run_experiment(command, &inst, &iref, &cfg)?);
            }
            return emit(&reports, &b.output);
        }
        Sub::Caratheodory(a) => (Command::Caratheodory, a),
        Sub::ColorfulCaratheodory(a) => (Command::ColorfulCaratheodory, a),
        Sub::FrankWolfe(a) => (Command::FrankWolfe, a),
        Sub::Tverberg(a) => (Command::Tverberg, a),
        Sub::HellyVerify(a) => (Command::HellyVerify, a),
        Sub::HellyCount(a) => (Command::HellyCount, a),
        Sub::FractionalHelly(a) => (Command::FractionalHelly, a),
        Sub::SimplexCheck(a) => (Command::SimplexCheck, a),
        Sub::Selection(a) => (Command::Selection, a),
        Sub::Epsnet(a) => (Command::Epsnet, a),
        Sub::Centerpoint(a) => (Command::Centerpoint, a),
    };
    run(command, &args)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(EXIT_VIOLATION),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
