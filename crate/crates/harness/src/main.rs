use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use percolab::{ExperimentConfig, ExperimentKind, HarnessError};
use percolab_core::conformal_cardy::cardy_f;

#[derive(Parser)]
#[command(name = "percolab", version, about = "Critical percolation experiments on the hexagonal lattice")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Crossing probabilities against Cardy's formula
    Crossing(RunArgs),
    /// Exit points of the exploration on a semicircle
    Hitting(RunArgs),
    /// Driving-function statistics of exploration paths
    Kappa(RunArgs),
    /// Algorithmic against direct loop extraction
    Loops(RunArgs),
    /// Three-arm probabilities in semi-annuli
    Arms(RunArgs),
    /// Exhaustive excursion pasting comparison
    Pasting(RunArgs),
    /// Print F(eta) with its series error bound
    CardyEval {
        #[arg(long)]
        eta: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration; defaults are used for missing fields
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    mesh: Option<f64>,
    /// Directory that receives one subdirectory per run
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(kind: ExperimentKind, args: RunArgs) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => ExperimentConfig::default_for(kind),
    };
    if cfg.kind != kind {
        return Err(HarnessError::Config(format!("config is for {:?}, not {kind:?}", cfg.kind)));
    }
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    cfg.n_samples = args.samples.unwrap_or(cfg.n_samples);
    cfg.mesh = args.mesh.unwrap_or(cfg.mesh);
    if args.out.is_some() {
        cfg.output = args.out;
    }
    Ok(cfg)
}

fn execute(command: Command) -> Result<bool, HarnessError> {
    let (kind, args) = match command {
        Command::CardyEval { eta, tol } => {
            let v = cardy_f(eta, tol)?;
            println!("{}", serde_json::json!({ "eta": eta, "F": v.probability, "terms": v.series_terms, "errorBound": v.error_bound }));
            return Ok(true);
        }
        Command::Crossing(a) => (ExperimentKind::Crossing, a),
        Command::Hitting(a) => (ExperimentKind::Hitting, a),
        Command::Kappa(a) => (ExperimentKind::Kappa, a),
        Command::Loops(a) => (ExperimentKind::LoopsEquivalence, a),
        Command::Arms(a) => (ExperimentKind::ArmDecay, a),
        Command::Pasting(a) => (ExperimentKind::ExcursionPasting, a),
    };
    let cfg = load(kind, args)?;
    let report = percolab::run(&cfg)?;
    let root = cfg.output.clone().unwrap_or_else(|| PathBuf::from("runs"));
    let dir = report.persist(&root)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    eprintln!("written to {}", dir.display());
    Ok(report.passed)
}

fn main() -> ExitCode {
    match execute(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
