use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qdba_core::experiments::{metrics_csv, run_ensemble, write_outputs, ConfigError, RawConfig};

#[derive(Parser)]
#[command(name = "qdba-sim", version, about = "Detectable Byzantine agreement simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the Pauli simplex at fixed p0.
    Ternary {
        #[arg(long, default_value_t = 0.975)]
        p0: f64,
        #[arg(long, default_value_t = 13)]
        resolution: usize,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Override sweep keys, e.g. `--param m=16:160:16`.
    Sweep {
        #[arg(long, required = true)]
        param: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; metrics go to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Extra `key=value` settings applied after the config file.
    #[arg(long = "set")]
    set: Vec<String>,
    /// Also write one row per lieutenant per shot.
    #[arg(long)]
    per_shot: bool,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(path: Option<&PathBuf>) -> Result<RawConfig, Failure> {
    match path {
        None => Ok(RawConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
            Ok(RawConfig::parse(&text)?)
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let (mut raw, common) = match cli.command {
        Command::Run { config, common } => (load(Some(&config))?, common),
        Command::Ternary {
            p0,
            resolution,
            config,
            common,
        } => {
            let mut raw = load(config.as_ref())?;
            for key in ["p0", "px", "py", "pz"] {
                raw.remove(key);
            }
            raw.set("profile", "logical")?;
            // Rounded so that p0 = 0.975 gives a total of exactly 0.025.
            let total: f64 = format!("{:.12}", 1.0 - p0).parse().unwrap_or(f64::NAN);
            raw.set("ternary_total", &total.to_string())?;
            raw.set("ternary_resolution", &resolution.to_string())?;
            for (key, default) in [("n", "3"), ("t", "1"), ("m", "112")] {
                if raw.get(key).is_none() {
                    raw.set(key, default)?;
                }
            }
            (raw, common)
        }
        Command::Sweep {
            param,
            config,
            common,
        } => {
            let mut raw = load(config.as_ref())?;
            for p in &param {
                raw.apply_override(p)?;
            }
            (raw, common)
        }
    };
    for s in &common.set {
        raw.apply_override(s)?;
    }
    if let Some(seed) = common.seed {
        raw.set("seed", &seed.to_string())?;
    }
    if common.workers == 0 {
        return Err(Failure::Config("workers: must be at least 1".into()));
    }
    let config = raw.build()?;
    for w in &config.warnings {
        eprintln!("warning: {w}");
    }

    let results = run_ensemble(&config, common.workers).map_err(|e| Failure::Runtime(e.to_string()))?;
    let out = common.out.or_else(|| config.output.as_ref().map(PathBuf::from));
    match out {
        Some(dir) => {
            let files = write_outputs(&results, &config, &dir, common.per_shot)
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            eprintln!("wrote {}", files.metrics.display());
        }
        None => {
            let csv = metrics_csv(results.iter().map(|r| &r.row))
                .map_err(|e| Failure::Runtime(e.to_string()))?;
            print!("{csv}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
