//! `glif`: train, ablate, simulate, gradient-check and export histograms.

mod simulate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use glif_core::checkpoint::load_checkpoint;
use glif_core::dynamics::export_param_histograms;
use glif_core::experiment::{prepare_output_dir, run_ablation, run_train, AblationGrid, ExperimentConfig};
use glif_core::gradcheck::{run_gradcheck, GradCheckConfig};
use glif_core::Error;

#[derive(Debug, Parser)]
#[command(name = "glif", version, about = "Gated LIF spiking networks: training, ablations and neuron traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train one network from a TOML experiment config.
    Train(TrainArgs),
    /// Train every model of an ablation grid on the same data and seed.
    Ablate(AblateArgs),
    /// Simulate a single neuron and write its trace as CSV.
    Simulate(simulate::SimulateArgs),
    /// Compare relaxed-mode BPTT against central finite differences.
    Gradcheck(GradcheckArgs),
    /// Write learned-parameter histograms of a checkpoint as CSV.
    ExportHist(ExportHistArgs),
}

#[derive(Debug, Args)]
struct OutputArgs {
    /// Output directory; overrides the config's `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replace the contents of a non-empty output directory.
    #[arg(long)]
    overwrite: bool,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Experiment config (TOML).
    config: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct AblateArgs {
    /// Experiment config (TOML).
    config: PathBuf,
    /// `full`, `simplex`, `gates`, `sharing`, or a comma-separated list such as `101,glif,glif_lw`.
    #[arg(long, default_value = "full")]
    grid: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct GradcheckArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random networks to check.
    #[arg(long, default_value_t = 20)]
    networks: usize,
    #[arg(long, default_value_t = 2)]
    max_layers: usize,
    #[arg(long, default_value_t = 8)]
    max_units: usize,
    #[arg(long, default_value_t = 8)]
    max_time_steps: usize,
    /// Finite-difference step.
    #[arg(long, default_value_t = 1e-6)]
    h: f64,
    /// Largest accepted relative error.
    #[arg(long, default_value_t = 1e-5)]
    tol: f64,
    /// Test hook: perturb the analytic gradients so the check must fail.
    #[arg(long, hide = true)]
    corrupt_backward: bool,
}

#[derive(Debug, Args)]
struct ExportHistArgs {
    /// Checkpoint written by `train` or `ablate`.
    checkpoint: PathBuf,
    /// Destination CSV.
    #[arg(long)]
    out: PathBuf,
    /// Equal-width bins over (0, 1).
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long)]
    overwrite: bool,
}

/// Configuration and usage problems exit with 2, everything else with 1.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::InvalidParameter(_) => 2,
        _ => 1,
    }
}

fn load_config(path: &Path) -> Result<ExperimentConfig, Error> {
    if !path.is_file() {
        return Err(Error::Config(format!("config file {} does not exist", path.display())));
    }
    ExperimentConfig::load(path)
}

fn output_dir(cfg: &ExperimentConfig, args: &OutputArgs) -> PathBuf {
    match &args.out {
        Some(dir) => dir.clone(),
        None => cfg.resolved_output_dir(),
    }
}

fn cmd_train(args: &TrainArgs) -> Result<(), Error> {
    let mut cfg = load_config(&args.config)?;
    let out = output_dir(&cfg, &args.output);
    cfg.output_dir = out.clone();
    let outcome = run_train(&cfg, &out, args.output.overwrite)?;
    if let Some(last) = outcome.history.last() {
        println!(
            "epoch {}: train loss {:.6}, train acc {:.4}, eval acc {:.4}",
            last.epoch, last.train_loss, last.train_acc, last.eval_acc
        );
    }
    println!("wrote metrics, checkpoint and config snapshot to {}", out.display());
    Ok(())
}

fn cmd_ablate(args: &AblateArgs) -> Result<(), Error> {
    let mut cfg = load_config(&args.config)?;
    let grid = AblationGrid::parse(&args.grid)?;
    let out = output_dir(&cfg, &args.output);
    cfg.output_dir = out.clone();
    let summary = run_ablation(&cfg, &grid, &out, args.output.overwrite)?;
    println!("{:<8} {:<8} {:<13} {:>9} {:>9}  status", "name", "mode", "sharing", "train acc", "eval acc");
    for row in &summary.rows {
        println!(
            "{:<8} {:<8} {:<13} {:>9.4} {:>9.4}  {}{}",
            row.name,
            row.mode,
            row.sharing,
            row.final_train_acc,
            row.final_eval_acc,
            row.status,
            if row.error.is_empty() { String::new() } else { format!(": {}", row.error) }
        );
    }
    match summary.glif_minus_simplex_median {
        Some(gap) => println!(
            "glif eval accuracy minus simplex median: {gap:+.4} ({})",
            if gap >= 0.0 { "glif at or above median" } else { "glif below median" }
        ),
        None => println!("glif vs simplex median: not available for this grid"),
    }
    let failed = summary.rows.iter().filter(|r| r.status != "ok").count();
    println!("summary written to {}", out.join(glif_core::experiment::ABLATION_FILE).display());
    if failed > 0 {
        return Err(Error::Dataset(format!("{failed} grid entries failed")));
    }
    Ok(())
}

fn cmd_gradcheck(args: &GradcheckArgs) -> Result<bool, Error> {
    if !(args.h > 0.0 && args.h.is_finite()) {
        return Err(Error::Config(format!("--h must be positive, got {}", args.h)));
    }
    if args.networks == 0 || args.max_layers == 0 || args.max_units == 0 || args.max_time_steps == 0 {
        return Err(Error::Config("network counts and sizes must be positive".into()));
    }
    let cfg = GradCheckConfig {
        seed: args.seed,
        networks: args.networks,
        max_layers: args.max_layers,
        max_units: args.max_units,
        max_time_steps: args.max_time_steps,
        h: args.h,
        tol: args.tol,
        corrupt_backward: args.corrupt_backward,
        ..GradCheckConfig::default()
    };
    let report = run_gradcheck(&cfg)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("{:<10} {:>8} {:>14}  worst", "parameter", "checked", "max rel err");
    for k in &report.kinds {
        println!("{:<10} {:>8} {:>14.3e}  {}", k.kind, k.checked, k.max_rel_err, k.worst);
    }
    println!(
        "{} networks checked ({} redrawn near kinks); max relative error {:.3e} vs tol {:.1e}: {}",
        report.networks_checked,
        report.networks_redrawn,
        report.max_rel_err,
        cfg.tol,
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(report.passed)
}

fn cmd_export_hist(args: &ExportHistArgs) -> Result<(), Error> {
    if args.bins == 0 {
        return Err(Error::Config("--bins must be positive".into()));
    }
    if args.out.exists() && !args.overwrite {
        return Err(Error::Config(format!(
            "{} exists (pass --overwrite to replace it)",
            args.out.display()
        )));
    }
    let net = load_checkpoint(&args.checkpoint)?;
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        prepare_output_dir(parent, true)?;
    }
    export_param_histograms(&net, &args.out, args.bins)?;
    println!("wrote histograms to {}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Train(a) => cmd_train(a).map(|()| true),
        Command::Ablate(a) => cmd_ablate(a).map(|()| true),
        Command::Simulate(a) => simulate::run(a).map(|()| true),
        Command::Gradcheck(a) => cmd_gradcheck(a),
        Command::ExportHist(a) => cmd_export_hist(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
