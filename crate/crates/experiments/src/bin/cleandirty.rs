use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cleandirty_experiments::collapse::{collapse_report, Pairing};
use cleandirty_experiments::config::SweepConfig;
use cleandirty_experiments::fit::{fit_report, DEFAULT_BURN_IN};
use cleandirty_experiments::ladder_report::ladder_analyze;
use cleandirty_experiments::sweep::{read_rows, run_sweep};
use cleandirty_experiments::verify::verify_bounds;
use cleandirty_experiments::{write_csv, ExperimentError, Result, OUT_DIR_ENV, WORKERS_ENV};

#[derive(Parser)]
#[command(name = "cleandirty", version, about = "Clean/dirty qubit noise experiments")]
struct Cli {
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true, env = OUT_DIR_ENV)]
    out_dir: Option<PathBuf>,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gradient-norm sweep of the Ising HVA over a config grid.
    HvaSweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare clean/dirty curves with rescaled curves by total error rate.
    Collapse {
        #[arg(long)]
        input: PathBuf,
        /// `nd_over_n` or `nd_minus_1_over_n`.
        #[arg(long, default_value = "nd_over_n")]
        pairing: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Fit ln(mean gradient norm) against L for every curve.
    Fit {
        #[arg(long)]
        input: PathBuf,
        /// Depths below this are left out of the fit.
        #[arg(long, default_value_t = DEFAULT_BURN_IN)]
        burn_in: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Randomized checks of one of the four bounds.
    VerifyBounds {
        /// Which bound to check, 1 to 4.
        #[arg(long)]
        prop: u8,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Master seed; trial i uses a seed derived from (seed, prop, i).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Ladder cycles, Z hits and the Γ comparison for one or all strings.
    LadderAnalyze {
        #[arg(long)]
        n: usize,
        /// `ZIZZ`- or `1011`-style word; all strings when omitted.
        #[arg(long)]
        string: Option<String>,
        /// Dirty qubits at the start of the chain.
        #[arg(long, default_value_t = 0)]
        nd: usize,
        /// Steps for the hit count (default 2^⌈log2 n⌉).
        #[arg(long)]
        layers: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn resolve(out_dir: Option<&Path>, path: &Path) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

fn sink(out_dir: Option<&Path>, output: Option<&Path>) -> Result<Box<dyn Write>> {
    match output {
        Some(p) => {
            let path = resolve(out_dir, p);
            if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Ok(Box::new(BufWriter::new(File::create(path)?)))
        }
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn load_rows(path: &Path) -> Result<Vec<cleandirty_experiments::sweep::SweepRow>> {
    let file = File::open(path).map_err(|e| ExperimentError::Config(format!("cannot open {}: {e}", path.display())))?;
    read_rows(file)
}

fn run(cli: Cli) -> Result<bool> {
    let out_dir = cli.out_dir.as_deref();
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    match cli.command {
        Command::HvaSweep { config, output } => {
            let cfg = SweepConfig::from_path(&config)?;
            let target = output.unwrap_or_else(|| cfg.output.clone());
            let out = sink(out_dir, Some(&target))?;
            let rows = run_sweep(&cfg, workers, out)?;
            eprintln!("wrote {} rows to {}", rows.len(), resolve(out_dir, &target).display());
        }
        Command::Collapse { input, pairing, output } => {
            let pairing: Pairing = pairing.parse()?;
            let report = collapse_report(&load_rows(&input)?, pairing);
            write_csv(&report, sink(out_dir, output.as_deref())?)?;
        }
        Command::Fit { input, burn_in, output } => {
            let report = fit_report(&load_rows(&input)?, burn_in);
            write_csv(&report, sink(out_dir, output.as_deref())?)?;
        }
        Command::VerifyBounds { prop, trials, seed, output } => {
            let rows = verify_bounds(prop, trials, seed, workers)?;
            write_csv(&rows, sink(out_dir, output.as_deref())?)?;
            let failed = rows.iter().filter(|r| !r.passed).count();
            eprintln!("proposition {prop}: {failed} of {trials} checks failed");
            return Ok(failed == 0);
        }
        Command::LadderAnalyze { n, string, nd, layers, output } => {
            let rows = ladder_analyze(n, string.as_deref(), nd, layers)?;
            write_csv(&rows, sink(out_dir, output.as_deref())?)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
