use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "weber-dirac", version, about = "Bound states of the 1+1 Dirac equation in the scalar potential g|x|")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Omit the timestamp so repeated runs are byte-identical.
    #[arg(long, global = true)]
    pub deterministic: bool,
    /// Width at which a root in nu counts as refined.
    #[arg(long, allow_negative_numbers = true, default_value_t = weber_dirac::quantize::DEFAULT_TOL, global = true)]
    pub tol_nu: f64,
    /// Relative energy tolerance for oracle-compare.
    #[arg(long, allow_negative_numbers = true, default_value_t = 1e-4, global = true)]
    pub tol_energy: f64,
    /// Highest order the level search may reach.
    #[arg(long, allow_negative_numbers = true, default_value_t = weber_dirac::quantize::NU_CAP, global = true)]
    pub nu_cap: f64,
    /// Write the table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Either `--alpha` (with g = 1) or `--m` and `--g`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = true)]
pub struct ParamArgs {
    /// m / sqrt(g); implies g = 1.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["m", "g"])]
    pub alpha: Option<f64>,
    /// Mass.
    #[arg(long, allow_negative_numbers = true, requires = "g")]
    pub m: Option<f64>,
    /// Coupling.
    #[arg(long, allow_negative_numbers = true, requires = "m")]
    pub g: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Positive,
    Negative,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest levels from the matching condition.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        levels: u32,
        /// Scan step in nu.
        #[arg(long, allow_negative_numbers = true, default_value_t = weber_dirac::quantize::DEFAULT_STEP)]
        step: f64,
    },
    /// Matching residuals on a grid of orders, for plotting.
    Scan {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum)]
        branch: BranchArg,
        #[arg(long, allow_negative_numbers = true)]
        nu_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        nu_max: f64,
        #[arg(long, allow_negative_numbers = true, default_value_t = weber_dirac::quantize::DEFAULT_STEP)]
        step: f64,
    },
    /// Sample the bispinor of one level.
    Wavefunction {
        #[command(flatten)]
        params: ParamArgs,
        /// 1-based index into the spectrum.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        level: u32,
        #[arg(long, value_enum, default_value_t = SignArg::Positive)]
        energy_sign: SignArg,
        /// Defaults to minus the normalization halfwidth.
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        /// Defaults to the normalization halfwidth.
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// Defaults to 1/1000 of the range.
        #[arg(long, allow_negative_numbers = true)]
        dx: Option<f64>,
        #[arg(long)]
        normalize: bool,
    },
    /// Integer-order condition for n = 0..=n_max.
    HermiteCheck {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 250, value_parser = clap::value_parser!(u32).range(0..=250))]
        n_max: u32,
    },
    /// Compare the spectrum with the shooting solver.
    OracleCompare {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
        levels: u32,
        /// Domain halfwidth; defaults to 10/sqrt(g).
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// RK4 step; defaults to x_max/1000.
        #[arg(long, allow_negative_numbers = true)]
        h: Option<f64>,
        /// Energy scan step; defaults to 0.01 sqrt(g).
        #[arg(long, allow_negative_numbers = true)]
        e_step: Option<f64>,
        /// Accept h > x_max/1000.
        #[arg(long)]
        allow_coarse: bool,
    },
}
