//! Command-line front end for the optical-to-spin conversion simulator.

// Validation is written `!(x > 0)` rather than `x <= 0` so NaN inputs are
// rejected instead of accepted.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod output;
mod presets;

use std::fs;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;

use afc_sim_core::efficiency::{fit_afc_decay, fit_residual, read_decay_csv};
use afc_sim_core::sweeps::{emit_mode_profiles, evaluate, optimize_control_waist, run_sweep, SweepSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{ConfigError, RunConfig};

/// Exit statuses: 0 success, 2 configuration error, 3 model/runtime error.
const EXIT_CONFIG: u8 = 2;
const EXIT_MODEL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "afc-pulse-sim",
    about = "Optical-to-spin conversion simulator for AFC spin-wave memories",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Bloch,
    Analytical,
}

#[derive(Args)]
struct CommonArgs {
    /// Configuration file: flat `key = value` text or JSON.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named preset applied before the config file.
    #[arg(long)]
    preset: Option<String>,
    /// Output file path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format for files.
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Single-pulse efficiency evaluation mode override.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Trailing `key=value` overrides, applied last.
    #[arg(value_name = "KEY=VALUE", trailing_var_arg = true)]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the model once and print the composed efficiencies.
    Simulate(CommonArgs),
    /// Run a one-parameter sweep and write a CSV/JSON curve.
    Sweep(CommonArgs),
    /// Maximize the squared optical control efficiency over the control waist.
    OptimizeWaist(CommonArgs),
    /// Fit the AFC echo decay model to a two-column CSV (delay_us,efficiency).
    FitAfc {
        /// Decay data file.
        input: PathBuf,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit transverse input/control/efficiency profiles along x.
    Profiles(CommonArgs),
}

enum CliError {
    Config(String),
    Model(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<afc_sim_core::Error> for CliError {
    fn from(e: afc_sim_core::Error) -> Self {
        CliError::Model(format!("model error: {e}"))
    }
}

type CommandFn = fn(&CommonArgs, RunConfig) -> Result<(), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, run): (&CommonArgs, CommandFn) = match &cli.command {
        Command::Simulate(c) => (c, run_simulate),
        Command::Sweep(c) => (c, run_sweep_cmd),
        Command::OptimizeWaist(c) => (c, run_optimize),
        Command::Profiles(c) => (c, run_profiles),
        Command::FitAfc { input, common } => {
            return finish(run_fit_afc(input, common));
        }
    };

    let cfg = match build_config(common) {
        Ok(cfg) => cfg,
        Err(e) => return finish(Err(e)),
    };
    finish(run(common, cfg))
}

fn finish(result: Result<(), CliError>) -> ExitCode {
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(CliError::Model(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_MODEL)
        }
    }
}

/// Defaults, then preset, then config file, then --mode/--threads flags,
/// then trailing key=value overrides.
fn build_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(name) = &args.preset {
        let bundle = presets::preset(name).ok_or_else(|| {
            CliError::Config(format!(
                "config error at `--preset`: unknown preset `{name}`; expected one of {}",
                presets::PRESET_NAMES.join("|")
            ))
        })?;
        for (k, v) in bundle {
            cfg.apply(k, v)?;
        }
    }
    if let Some(path) = &args.config {
        cfg.apply_file(path)?;
    }
    if let Some(mode) = args.mode {
        cfg.apply(
            "mode",
            match mode {
                ModeArg::Bloch => "bloch",
                ModeArg::Analytical => "analytical",
            },
        )?;
    }
    if let Some(threads) = args.threads {
        cfg.threads = threads;
    }
    for assignment in &args.overrides {
        let (key, value) = assignment.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "config error: override `{assignment}` is not of the form key=value"
            ))
        })?;
        cfg.apply(key.trim(), value.trim())?;
    }
    cfg.validate()?;

    if cfg.threads > 0 {
        // ignore the error if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    Ok(cfg)
}

/// Write to --out, or stdout when no path was given. The document is built
/// in memory first, so a failing run writes nothing.
fn deliver(args: &CommonArgs, document: String) -> Result<(), CliError> {
    match &args.out {
        Some(path) => fs::write(path, document)
            .map_err(|e| CliError::Model(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{document}");
            Ok(())
        }
    }
}

fn run_simulate(args: &CommonArgs, cfg: RunConfig) -> Result<(), CliError> {
    let result = evaluate(&cfg.model)?;
    if args.out.is_some() || args.format == OutputFormat::Json {
        deliver(args, output::simulate_json(&result, &cfg))?;
    }
    if args.out.is_some() || args.format == OutputFormat::Csv {
        print!("{}", output::simulate_text(&result));
    }
    Ok(())
}

fn run_sweep_cmd(args: &CommonArgs, cfg: RunConfig) -> Result<(), CliError> {
    let (parameter, values) = cfg.sweep_grid()?;
    let spec = SweepSpec {
        parameter,
        values,
        base: cfg.model,
    };
    let result = run_sweep(&spec)?;
    eprintln!(
        "sweep of {} over {} values finished in {:.1} s",
        parameter.name(),
        result.rows.len(),
        result.meta.wall_time.as_secs_f64()
    );
    let document = match args.format {
        OutputFormat::Csv => output::sweep_csv(&result, &cfg, args.preset.as_deref()),
        OutputFormat::Json => output::sweep_json(&result, &cfg, args.preset.as_deref()),
    };
    deliver(args, document)
}

fn run_optimize(_args: &CommonArgs, cfg: RunConfig) -> Result<(), CliError> {
    let resolved = cfg.model.resolve()?;
    let (waist, eta_oc_sq) =
        optimize_control_waist(&cfg.model, resolved.angle, resolved.waist_bounds)?;
    println!("optimal_control_waist = {:.3} um", waist * 1e6);
    println!("eta_oc_squared        = {eta_oc_sq:.8e}");
    Ok(())
}

fn run_profiles(args: &CommonArgs, cfg: RunConfig) -> Result<(), CliError> {
    let rows = emit_mode_profiles(&cfg.model, cfg.model.angle, cfg.profile_y, cfg.profile_z)?;
    let document = match args.format {
        OutputFormat::Csv => output::profiles_csv(&rows, &cfg, args.preset.as_deref()),
        OutputFormat::Json => output::profiles_json(&rows, &cfg, args.preset.as_deref()),
    };
    deliver(args, document)
}

fn run_fit_afc(input: &PathBuf, _common: &CommonArgs) -> Result<(), CliError> {
    let file = fs::File::open(input).map_err(|e| {
        CliError::Config(format!("config error: cannot read {}: {e}", input.display()))
    })?;
    let points: Vec<(f64, f64)> = read_decay_csv(BufReader::new(file))?;
    let params = fit_afc_decay(&points)?;
    let residual = fit_residual(&points, &params);
    println!("eta0         = {:.8e}", params.eta0);
    println!("t2_afc       = {:.8e} s", params.t2_afc);
    println!("rms_residual = {residual:.3e}");
    Ok(())
}
