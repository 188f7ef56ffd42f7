use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use annulus_core::planner::{report, run_batch, ExperimentConfig, Method};
use annulus_core::PlanError;

mod checks;

#[derive(Parser)]
#[command(name = "plan", version, about = "Grow reliable unit disk formations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of trials and write summary.csv, curves.csv, trial_<i>.json
    /// and formation_<i>.svg to the output directory.
    Run {
        #[arg(long)]
        method: Option<Method>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON experiment config; defaults to the 15-ring setup.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-check fast code paths against slow reference implementations.
    OracleCheck {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 20)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Chart mean reliability per addition from a run directory's curves.csv.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Sweeps,
    Reliability,
    Geometry,
}

fn load_config(path: Option<&PathBuf>) -> Result<ExperimentConfig> {
    let Some(path) = path else {
        return Ok(ExperimentConfig::default());
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn run(
    method: Option<Method>,
    trials: Option<usize>,
    seed: Option<u64>,
    config: Option<&PathBuf>,
    out: &Path,
) -> Result<ExitCode> {
    let mut cfg = load_config(config)?;
    if let Some(m) = method {
        cfg.method = m;
    }
    if let Some(t) = trials {
        cfg.trials = t;
    }
    if let Some(s) = seed {
        cfg.rng_seed = s;
    }
    cfg.validate()?;
    log::info!("running {} trials of {}", cfg.trials, cfg.method);
    let summary = run_batch(&cfg, cfg.trials)?;
    report::write_batch(out, &summary, &cfg.region())?;
    println!(
        "{}: rel_a {:.4} ± {:.4}, lec {:.4} ± {:.4}, failed {}/{}",
        summary.method,
        summary.mean_rel_a,
        summary.sd_rel_a,
        summary.mean_lec,
        summary.sd_lec,
        summary.failed_trials,
        summary.trials.len()
    );
    if summary.saturation_dominated() {
        eprintln!("more than half of the trials failed");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { method, trials, seed, config, out } => run(*method, *trials, *seed, config.as_ref(), out),
        Command::OracleCheck { suite, instances, seed } => {
            let ok = match suite {
                Suite::Sweeps => checks::sweeps(*instances, *seed),
                Suite::Reliability => checks::reliability(*instances, *seed),
                Suite::Geometry => checks::geometry(*instances, *seed),
            };
            ok.map(|ok| if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Plot { input, out } => report::plot_dir(input, out).map(|()| ExitCode::SUCCESS).map_err(Into::into),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            if let Some(PlanError::RegionSaturated { .. }) = e.downcast_ref::<PlanError>() {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
