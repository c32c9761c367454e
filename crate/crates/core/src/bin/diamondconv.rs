use clap::{Parser, Subcommand};
use diamondconv::cli::{self, CliError, RunConfig, ScenarioKind};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

/// Frequency up/down-conversion in a diamond-configuration atomic ensemble:
/// closed-form conversion spectra, pulse propagation and pump optimization.
#[derive(Parser)]
#[command(name = "diamondconv", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// TOML config file; defaults apply when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when omitted
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Optimizer RNG seed (overrides the config `seed` key)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for parallel sections (default: all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Override a config key, e.g. --set omega_a=33 or --set idler.hold=5
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Coupling coefficients and efficiencies at a single idler detuning
    Coeffs,
    /// Coefficient/efficiency table over a grid of idler detunings
    Spectrum,
    /// Dressed-state shifts, absorption peaks and transparency windows
    Dressed,
    /// Optimize pump parameters at a single optical depth
    Optimize,
    /// Optimized efficiency versus optical depth
    OpdCurve,
    /// Pulsed Maxwell-Bloch propagation: boundary traces and efficiency
    Pulse,
    /// Grid-refinement convergence check for the pulse scenario
    Convergence,
}

impl Command {
    fn scenario(&self) -> ScenarioKind {
        match self {
            Command::Coeffs => ScenarioKind::Coeffs,
            Command::Spectrum => ScenarioKind::Spectrum,
            Command::Dressed => ScenarioKind::Dressed,
            Command::Optimize => ScenarioKind::Optimize,
            Command::OpdCurve => ScenarioKind::OpdCurve,
            Command::Pulse => ScenarioKind::Pulse,
            Command::Convergence => ScenarioKind::Convergence,
        }
    }
}

fn load_config(args: &Args) -> Result<RunConfig, CliError> {
    let text = match &args.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut overrides = Vec::new();
    for set in &args.sets {
        let (key, value) = set
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--set expects KEY=VALUE, got {set:?}")))?;
        overrides.push((key.to_string(), value.to_string()));
    }
    if let Some(seed) = args.seed {
        overrides.push(("seed".to_string(), seed.to_string()));
    }
    cli::parse_config(&text, &overrides)
}

fn try_main(args: &Args) -> Result<(), CliError> {
    #[cfg(feature = "parallel")]
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = args.jobs;

    let config = load_config(args)?;
    let table = cli::run(args.command.scenario(), &config)?;
    let rendered = table.render();
    match &args.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match try_main(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("diamondconv: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
