//! `steerbound` command line: bound reports, witnesses, figure and threshold
//! reproduction, and the oracle verification suites.

mod commands;
mod failure;
mod inputs;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

#[derive(Debug, Parser)]
#[command(name = "steerbound", version, about = "Majorization uncertainty bounds as steering and entanglement witnesses")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Named measurement set for Bob (pauli-zx, pauli-zx-anti, gellmann-148, fig2:<theta>).
    #[arg(long, global = true)]
    pub builtin: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Subset-norm ladder, W vector and the derived bounds.
    Bounds(BoundsArgs),
    /// Evaluate S_Q on a state and compare it with every bound.
    Witness(WitnessArgs),
    /// Overlap, steering and entanglement bounds along the three-setting qubit family.
    SweepFig2(SweepArgs),
    /// Werner-family thresholds and a sweep over the mixing weight.
    Werner(WernerArgs),
    /// Fine-grained maxima for one outcome tuple.
    Zeta(ZetaArgs),
    /// Run the randomized oracle suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Bob's measurement set (JSON); overrides --builtin.
    pub measurements: Option<PathBuf>,
    /// Alice's set, enabling the entanglement bound.
    #[arg(long)]
    pub alice: Option<PathBuf>,
    #[arg(long, conflicts_with = "alice")]
    pub alice_builtin: Option<String>,
    /// Comma-separated spectrum of Bob's reduced state.
    #[arg(long)]
    pub spectrum: Option<String>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    /// Bipartite state (JSON).
    #[arg(long, required_unless_present = "werner", conflicts_with = "werner")]
    pub state: Option<PathBuf>,
    /// Built-in Werner state FAMILY:P, e.g. qubit:0.8.
    #[arg(long)]
    pub werner: Option<String>,
    #[arg(long)]
    pub alice: Option<PathBuf>,
    #[arg(long, conflicts_with = "alice")]
    pub alice_builtin: Option<String>,
    #[arg(long)]
    pub bob: Option<PathBuf>,
    /// Pair outcomes by the best relabelling per setting.
    #[arg(long)]
    pub maximize_pairing: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.0)]
    pub theta_min: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    pub theta_max: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

#[derive(Debug, Args)]
pub struct WernerArgs {
    #[arg(long, default_value = "qubit")]
    pub family: String,
    /// Number of evenly spaced p values in [0, 1].
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Also write the sweep as CSV here.
    #[arg(long)]
    pub sweep_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZetaClass {
    Quantum,
    Separable,
    Fgur,
    All,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    /// Bob's measurement set (JSON); overrides --builtin.
    #[arg(long)]
    pub bob: Option<PathBuf>,
    /// Alice's set; defaults to Bob's.
    #[arg(long)]
    pub alice: Option<PathBuf>,
    #[arg(long, conflicts_with = "alice")]
    pub alice_builtin: Option<String>,
    /// Alice's outcome per setting, comma-separated.
    #[arg(long)]
    pub outcomes: String,
    /// Bob's outcome paired with Alice's outcome a, comma-separated; identity when omitted.
    #[arg(long)]
    pub permutation: Option<String>,
    /// Setting weights; Alice's set weights when omitted.
    #[arg(long)]
    pub weights: Option<String>,
    /// Full joint weights p(x,y), rows by ';'. Applies to the quantum value only.
    #[arg(long)]
    pub joint_weights: Option<String>,
    #[arg(long, value_enum, default_value_t = ZetaClass::All)]
    pub class: ZetaClass,
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Azimuthal Bloch-grid points for the separable oracle.
    #[arg(long, default_value_t = 100)]
    pub grid_points: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// JSON {"steering": {name: bound}, "entanglement": {name: bound}} replacing computed bounds.
    #[arg(long)]
    pub bounds_file: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("steerbound: {}", failure.message());
            failure.exit_code()
        }
    }
}
