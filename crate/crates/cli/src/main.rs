//! `cosmic-vacuum`: file-based front end to the library pipelines.
//!
//! Every command writes its data file plus `<command>.manifest.json` into
//! `--out-dir`. `replay <manifest>` repeats a run from its manifest.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical or
//! fit failure, 3 I/O error.

// `!(x > 0.0)` also rejects NaN, which is the point.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cosmic_vacuum::Error;

use manifest::{RunManifest, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "cosmic-vacuum", version = TOOL_VERSION, about = "Vacuum correlations, renormalized energies and the Hubble-tension fit")]
pub struct Cli {
    /// Flat `key = value` file with cosmological parameters.
    #[arg(long, global = true, env = "COSMIC_VACUUM_CONFIG")]
    pub config: Option<PathBuf>,

    /// Directory for data files and manifests.
    #[arg(long, global = true, env = "COSMIC_VACUUM_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,

    /// Worker threads; 0 or unset uses all cores. Results do not depend on it.
    #[arg(long, global = true, env = "COSMIC_VACUUM_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance-matched Ω∞ and H|ₐ₌₁/H₀ for a coupling, or the coupling for a ratio.
    Tension(TensionArgs),
    /// Vacuum and anomaly energies in critical-density units on a time grid.
    VacuumEnergy(VacuumEnergyArgs),
    /// Correlation functions and consistency checks on a (time, r) grid.
    Correlate(CorrelateArgs),
    /// Synthesized vacuum noise on a (t, x) grid.
    Noise(NoiseArgs),
    /// Repeats the run recorded in a manifest.
    Replay { manifest: PathBuf },
}

/// Cosmological parameters. Flags override the config file, which
/// overrides the built-in defaults.
#[derive(Debug, Clone, Args)]
pub struct CosmologyArgs {
    /// Hubble constant in km/s/Mpc.
    #[arg(long, env = "COSMIC_VACUUM_H0")]
    pub h0: Option<f64>,
    #[arg(long, env = "COSMIC_VACUUM_OMEGA_M")]
    pub omega_m: Option<f64>,
    #[arg(long, env = "COSMIC_VACUUM_OMEGA_L")]
    pub omega_l: Option<f64>,
    #[arg(long, env = "COSMIC_VACUUM_OMEGA_R")]
    pub omega_r: Option<f64>,
    /// Scale factor at last scattering.
    #[arg(long, env = "COSMIC_VACUUM_A_STAR")]
    pub a_star: Option<f64>,
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false, args = ["kappa", "ell", "target_ratio"])]
pub struct TensionArgs {
    /// Vacuum coupling κ.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Cutoff length in Planck lengths.
    #[arg(long)]
    pub ell: Option<f64>,
    /// Measured H|ₐ₌₁/H₀ to fit κ against.
    #[arg(long)]
    pub target_ratio: Option<f64>,
    #[command(flatten)]
    pub cosmology: CosmologyArgs,
}

#[derive(Debug, Args)]
pub struct VacuumEnergyArgs {
    /// `desitter`, `power-law:P` (P may be a fraction such as 2/3), `lcdm` or `static`.
    #[arg(long, default_value = "lcdm")]
    pub history: String,
    /// Cutoff length in Planck lengths; defaults to the config `kappa` or the built-in cutoff.
    #[arg(long, conflicts_with = "kappa")]
    pub ell: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Times as `start:stop:count`, in units of 1/H₀.
    #[arg(long, default_value = "0.1:1:10", allow_hyphen_values = true)]
    pub t_grid: String,
    /// Late-time total ε∞ in critical units.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub eps_inf: f64,
    #[command(flatten)]
    pub cosmology: CosmologyArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrelateMode {
    Vacuum,
    DesitterThermal,
    KmsCheck,
    FdtCheck,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    #[arg(long, value_enum, default_value_t = CorrelateMode::Vacuum)]
    pub mode: CorrelateMode,
    /// Conformal times τ (or de Sitter times θ) as `start:stop:count`.
    #[arg(long, default_value = "-2:2:41", allow_hyphen_values = true)]
    pub times: String,
    /// Separations r as `start:stop:count`.
    #[arg(long, default_value = "0.05:2:40", allow_hyphen_values = true)]
    pub radii: String,
    /// Smoothing width for `fdt-check`.
    #[arg(long, default_value_t = 0.05)]
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Line,
    Isotropic,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[arg(long, env = "COSMIC_VACUUM_SEED", default_value_t = cosmic_vacuum::defaults::SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = cosmic_vacuum::defaults::NOISE_MODES)]
    pub modes: usize,
    /// Samples as `NTxNX`.
    #[arg(long, default_value = "120x160")]
    pub grid: String,
    /// `csv`, `pgm` or `svg`.
    #[arg(long, default_value = "svg")]
    pub format: String,
    /// History spec as for `vacuum-energy`.
    #[arg(long, default_value = "lcdm")]
    pub history: String,
    /// First time; defaults to the start of the history domain.
    #[arg(long, allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    /// Last time; defaults to the epoch a = 1.
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Half-width of the x range in units of c/H₀.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub x_max: f64,
    #[arg(long, value_enum, default_value_t = GeometryArg::Line)]
    pub geometry: GeometryArg,
    /// Spectral cutoff for the isotropic geometry.
    #[arg(long, default_value_t = 1.0)]
    pub k_cutoff: f64,
    /// Periodic box length; defaults to four times the x range.
    #[arg(long)]
    pub box_length: Option<f64>,
    #[command(flatten)]
    pub cosmology: CosmologyArgs,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => 3,
        Error::Config(_) | Error::Format(_) => 1,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<RunManifest, Error> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    std::fs::create_dir_all(&cli.out_dir).map_err(|e| manifest::io_error(&cli.out_dir, e))?;
    let ctx = commands::Context {
        config: cli.config.clone(),
        out_dir: cli.out_dir.clone(),
    };
    let (ctx, command) = match cli.command {
        Command::Replay { manifest } => {
            let recorded = RunManifest::read(&manifest)?;
            let mut argv = vec!["cosmic-vacuum".to_string()];
            argv.extend(recorded.to_args());
            let replayed = Cli::try_parse_from(argv).map_err(|e| Error::Config(format!("manifest arguments: {e}")))?;
            // The manifest already holds the resolved parameters.
            (commands::Context { config: None, ..ctx }, replayed.command)
        }
        other => (ctx, other),
    };
    let manifest = match command {
        Command::Tension(a) => commands::tension(&ctx, a)?,
        Command::VacuumEnergy(a) => commands::vacuum_energy(&ctx, a)?,
        Command::Correlate(a) => commands::correlate(&ctx, a)?,
        Command::Noise(a) => commands::noise(&ctx, a)?,
        Command::Replay { .. } => return Err(Error::Config("a manifest cannot record a replay".into())),
    };
    let path = manifest.write(&ctx.out_dir)?;
    eprintln!("manifest: {}", path.display());
    Ok(manifest)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
