//! Command-line front end for the predecoding lab.
//!
//! Exit status: 0 on success, 1 for configuration or usage errors, 2 when a
//! structural invariant or simulation step fails.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pinball::config::RunConfig;
use pinball::harness::{self, CodeSetup};
use pinball::Error;

const THREADS_ENV: &str = "PINBALL_THREADS";

#[derive(Parser)]
#[command(name = "pinball-lab", version, about = "Surface code predecoding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one (d, p) cell.
    Run(RunArgs),
    /// Simulate every combination of the d, p and predecoder lists.
    Sweep(RunArgs),
    /// Print the decoding graph, one edge per line.
    DumpGraph(DumpArgs),
    /// Print the nine pipeline stages and their primitives.
    DumpPipeline(DumpArgs),
    /// Run the structural self-checks.
    Validate(ValidateArgs),
    /// Histogram of the longest error chain per block.
    Histogram(HistogramArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Code distances, comma separated.
    #[arg(long)]
    d: Option<String>,
    /// Physical error rates, comma separated.
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// pinball, clique or none, comma separated.
    #[arg(long)]
    predecoder: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// Any configuration key, as key=value. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 1e-3)]
    p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Distances to check, comma separated.
    #[arg(long, default_value = "3,5,7")]
    d: String,
    /// Also decode every single-edge block.
    #[arg(long)]
    single_edges: bool,
}

#[derive(Args)]
struct HistogramArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Io(_) | Error::InvalidDistance(_) | Error::InvalidRate(_) => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn resolve(args: &RunArgs, single: bool) -> Result<RunConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(n) = std::env::var(THREADS_ENV).ok().filter(|_| cfg.threads.is_none()) {
        cfg.apply("threads", &n)?;
    }
    let flags = [
        ("d", args.d.clone()),
        ("p", args.p.clone()),
        ("shots", args.shots.map(|x| x.to_string())),
        ("seed", args.seed.map(|x| x.to_string())),
        ("predecoder", args.predecoder.clone()),
        ("threads", args.threads.map(|x| x.to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.apply(k, &v)?;
        }
    }
    for kv in &args.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Failure::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        cfg.apply(k, v)?;
    }
    cfg.validate()?;
    if single && (cfg.distances.len() != 1 || cfg.rates.len() != 1) {
        return Err(Failure::Config("run takes a single d and p; use sweep for lists".into()));
    }
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| Failure::Runtime(e.to_string()))
        }
    }
}

fn parse_distances(s: &str) -> Result<Vec<usize>, Failure> {
    let mut cfg = RunConfig::default();
    cfg.apply("d", s)?;
    cfg.validate()?;
    Ok(cfg.distances)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(args) => experiment(&args, true),
        Command::Sweep(args) => experiment(&args, false),
        Command::DumpGraph(args) => {
            parse_distances(&args.d.to_string())?;
            let setup = CodeSetup::new(args.d, args.p)?;
            emit(args.out.as_deref(), &setup.graph.dump())
        }
        Command::DumpPipeline(args) => {
            parse_distances(&args.d.to_string())?;
            let setup = CodeSetup::new(args.d, args.p)?;
            emit(args.out.as_deref(), &setup.pipeline.dump())
        }
        Command::Validate(args) => {
            for d in parse_distances(&args.d)? {
                let setup = CodeSetup::new(d, 1e-3)?;
                let s = harness::validate_structure(&setup)?;
                println!(
                    "d={} ok: {} faults, {} edges, {} primitives in {} stages",
                    s.d, s.faults, s.edges, s.primitives, s.stages
                );
                if args.single_edges {
                    let n = harness::validate_single_edges(&setup)?;
                    println!("d={d} ok: {n} single-edge blocks decoded");
                }
            }
            Ok(())
        }
        Command::Histogram(args) => {
            parse_distances(&args.d.to_string())?;
            let setup = CodeSetup::new(args.d, args.p)?;
            let hist = harness::chain_length_histogram(&setup, args.shots, args.seed);
            let mut text =
                format!("# d = {}\n# p = {}\n# shots = {}\n# seed = {}\nlength,count\n", args.d, args.p, args.shots, args.seed);
            for (len, n) in hist.iter().enumerate() {
                text.push_str(&format!("{len},{n}\n"));
            }
            emit(args.out.as_deref(), &text)
        }
    }
}

fn experiment(args: &RunArgs, single: bool) -> Result<(), Failure> {
    let cfg = resolve(args, single)?;
    log::info!("master seed {}", cfg.seed);
    let report = harness::run_experiment(&cfg)?;
    let text = match args.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json()? + "\n",
    };
    emit(args.out.as_deref(), &text)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
