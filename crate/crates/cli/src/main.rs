use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qmut_core::analytics::Iv;
use qmut_core::campaign::{self, AnalyzeOptions, CampaignConfig, RecommendOptions, SeedMode};
use qmut_core::catalog::{Gate, GateType, SizeClass};
use qmut_core::corpus;
use qmut_core::mutation::{OperandStrategy, Operator};
use qmut_core::program::{AlgorithmGroup, OutputDominance};
use qmut_core::recommend::{Query, Scope};
use qmut_core::{Error, MutantRecord};

const EXIT_PARTIAL: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Gate-level mutation analysis for OpenQASM 2 circuits.
#[derive(Parser)]
#[command(name = "qmut", version)]
struct Cli {
    /// TOML campaign config; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate mutants and write mutant files plus specs.jsonl.
    Generate(CampaignArgs),
    /// Execute and judge pending mutants into records.jsonl.
    Run(CampaignArgs),
    /// Write SR tables, top interactions, correlations and heatmap data.
    Analyze(AnalyzeArgs),
    /// Print per-metric correlations between circuit complexity and SR.
    Correlations(StoreArgs),
    /// Select mutants matching characteristics and a target SR band.
    Recommend(RecommendArgs),
    /// Write the built-in desk corpus to a directory.
    Corpus {
        dir: PathBuf,
    },
    /// Print the effective configuration as TOML.
    Config(CampaignArgs),
}

#[derive(Args, Clone, Default)]
struct CampaignArgs {
    /// Input files, directories or glob patterns.
    inputs: Vec<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_parser = parse_seed_mode)]
    seed_mode: Option<SeedMode>,
    #[arg(long)]
    max_qubits: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Operand choice for inserted gates: anchor or exhaustive.
    #[arg(long)]
    strategy: Option<OperandStrategy>,
    /// Angle for parameterized insertions, in radians.
    #[arg(long)]
    angle: Option<f64>,
    #[arg(long)]
    max_mutants: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    operators: Option<Vec<Operator>>,
    #[arg(long, value_delimiter = ',')]
    gates: Option<Vec<Gate>>,
    #[arg(long, value_delimiter = ',')]
    positions: Option<Vec<u32>>,
}

#[derive(Args, Clone)]
struct StoreArgs {
    /// Campaign output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record store; defaults to records.jsonl in the output directory.
    #[arg(long)]
    store: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct AnalyzeArgs {
    #[command(flatten)]
    store: StoreArgs,
    /// Comma-separated IVs, repeatable; replaces the default one-IV tables.
    #[arg(long = "grouping", value_parser = parse_grouping)]
    groupings: Vec<Vec<Iv>>,
    #[arg(long, default_value_t = 5)]
    top: usize,
    /// Report directory; defaults to reports/ in the output directory.
    #[arg(long)]
    reports: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct RecommendArgs {
    #[command(flatten)]
    store: StoreArgs,
    #[arg(long, group = "scope")]
    algorithm: Option<String>,
    #[arg(long, group = "scope")]
    group: Option<AlgorithmGroup>,
    #[arg(long, group = "scope")]
    dominance: Option<OutputDominance>,
    #[arg(long, value_delimiter = ',')]
    operator: Option<Vec<Operator>>,
    #[arg(long, value_delimiter = ',')]
    gate: Option<Vec<Gate>>,
    #[arg(long, value_delimiter = ',')]
    gate_type: Option<Vec<GateType>>,
    #[arg(long, value_delimiter = ',')]
    gate_size: Option<Vec<SizeClass>>,
    #[arg(long, value_delimiter = ',')]
    position: Option<Vec<u32>>,
    /// Target SR band as `lo:hi`.
    #[arg(long, value_parser = parse_band, default_value = "0:1")]
    sr: (f64, f64),
    #[arg(long = "max", default_value_t = 10)]
    max_results: usize,
    /// Manifest path; defaults to manifest.json in the output directory.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Copy the selected mutant files into this directory.
    #[arg(long)]
    copy_to: Option<PathBuf>,
}

fn parse_seed_mode(s: &str) -> Result<SeedMode, String> {
    match s {
        "shared" => Ok(SeedMode::Shared),
        "per-mutant" => Ok(SeedMode::PerMutant),
        _ => Err(format!("expected `shared` or `per-mutant`, got `{s}`")),
    }
}

fn parse_grouping(s: &str) -> Result<Vec<Iv>, String> {
    Iv::parse_list(s).map_err(|e| e.to_string())
}

fn parse_band(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected `lo:hi`")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    Ok((lo, hi))
}

fn base_config(path: Option<&Path>) -> Result<CampaignConfig, Error> {
    match path {
        Some(p) => CampaignConfig::load(p),
        None => Ok(CampaignConfig::default()),
    }
}

fn campaign_config(path: Option<&Path>, a: &CampaignArgs) -> Result<CampaignConfig, Error> {
    let mut cfg = base_config(path)?;
    if !a.inputs.is_empty() {
        cfg.inputs = a.inputs.clone();
    }
    if let Some(v) = &a.out {
        cfg.out_dir = v.clone();
    }
    if let Some(v) = a.shots {
        cfg.shots = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.seed_mode {
        cfg.seed_mode = v;
    }
    if let Some(v) = a.max_qubits {
        cfg.max_qubits = v;
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    if let Some(v) = a.alpha {
        cfg.oracle.alpha = v;
    }
    let e = &mut cfg.enumeration;
    if let Some(v) = a.strategy {
        e.operand_strategy = v;
    }
    if let Some(v) = a.angle {
        e.default_angle = v;
    }
    if a.max_mutants.is_some() {
        e.max_mutants_per_circuit = a.max_mutants;
    }
    if a.operators.is_some() {
        e.operator_filter = a.operators.clone();
    }
    if a.gates.is_some() {
        e.gate_filter = a.gates.clone();
    }
    if a.positions.is_some() {
        e.position_filter = a.positions.clone();
    }
    if cfg.inputs.is_empty() {
        return Err(Error::NoCircuits("no inputs given".into()));
    }
    cfg.validate()?;
    Ok(cfg)
}

fn out_dir(config: Option<&Path>, a: &StoreArgs) -> Result<PathBuf, Error> {
    match &a.out {
        Some(o) => Ok(o.clone()),
        None => Ok(base_config(config)?.out_dir),
    }
}

fn load_store(config: Option<&Path>, a: &StoreArgs) -> Result<(PathBuf, Vec<MutantRecord>), Error> {
    let out = out_dir(config, a)?;
    let store = a.store.clone().unwrap_or_else(|| out.join("records.jsonl"));
    Ok((out, campaign::read_jsonl(&store)?))
}

fn partial_or_ok(failures: usize) -> ExitCode {
    if failures > 0 {
        ExitCode::from(EXIT_PARTIAL)
    } else {
        ExitCode::SUCCESS
    }
}

fn execute(cli: Cli) -> Result<ExitCode, Error> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Generate(a) => {
            let cfg = campaign_config(config, &a)?;
            let s = campaign::generate(&cfg)?;
            for (path, err) in &s.failures {
                eprintln!("error: {}: {err}", path.display());
            }
            println!("{s}");
            Ok(partial_or_ok(s.failures.len()))
        }
        Command::Run(a) => {
            let cfg = campaign_config(config, &a)?;
            let s = campaign::run(&cfg)?;
            for (origin, err) in &s.failures {
                eprintln!("error: {origin}: {err}");
            }
            println!("{s}");
            Ok(partial_or_ok(s.failures.len()))
        }
        Command::Analyze(a) => {
            let (out, records) = load_store(config, &a.store)?;
            let mut opts = AnalyzeOptions {
                top: a.top,
                ..Default::default()
            };
            if !a.groupings.is_empty() {
                opts.groupings = a.groupings;
            }
            let dir = a.reports.unwrap_or_else(|| out.join("reports"));
            println!("{}", campaign::analyze(&records, &opts, &dir)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Correlations(a) => {
            let (_, records) = load_store(config, &a)?;
            print!("{}", String::from_utf8_lossy(&campaign::correlations(&records)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Recommend(a) => {
            let (out, records) = load_store(config, &a.store)?;
            let scope = if let Some(x) = a.algorithm {
                Scope::Algorithm(x)
            } else if let Some(g) = a.group {
                Scope::AlgorithmGroup(g)
            } else if let Some(d) = a.dominance {
                Scope::OutputDominance(d)
            } else {
                Scope::All
            };
            let opts = RecommendOptions {
                query: Query {
                    scope,
                    operators: a.operator,
                    gates: a.gate,
                    gate_types: a.gate_type,
                    gate_sizes: a.gate_size,
                    position_buckets: a.position,
                    target_sr: a.sr,
                    max_results: a.max_results,
                },
                copy_to: a.copy_to,
            };
            let manifest = a.manifest.unwrap_or_else(|| out.join("manifest.json"));
            let m = campaign::recommend(&records, &opts, &out, &manifest)?;
            if let Some(w) = &m.warning {
                eprintln!("warning: {w}");
            }
            match m.set_sr {
                Some(sr) => println!("selected {} mutants, set SR {sr:.4}", m.items.len()),
                None => println!("selected 0 mutants"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus { dir } => {
            let cs = corpus::desk_corpus();
            corpus::export(&cs, &dir)?;
            println!("wrote {} circuits to {}", cs.len(), dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Config(a) => {
            let mut cfg = match campaign_config(config, &a) {
                Err(Error::NoCircuits(_)) => base_config(config)?,
                other => other?,
            };
            cfg.inputs.sort();
            print!("{}", cfg.to_toml());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
