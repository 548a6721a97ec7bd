use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "shglab", version, about = "Experiment runner for the quadratic Schrödinger system on the sphere")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub config: RunConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Transform, projector and propagator invariants.
    Selftest,
    /// Evolve random data and report mass/energy drift.
    Evolve,
    /// Count the resonance sets over a dyadic sweep.
    Count,
    /// Space-time bilinear scan with exponent fit.
    Strichartz,
    /// Products of random harmonics of fixed degrees (degrees from the N/L lists).
    ProjectorBilinear,
    /// Gagliardo–Nirenberg envelope and constant calibration.
    Gn,
    /// A-priori H¹ bound against an evolved trajectory.
    Bound,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Selftest => "selftest",
            Command::Evolve => "evolve",
            Command::Count => "count",
            Command::Strichartz => "strichartz",
            Command::ProjectorBilinear => "projector-bilinear",
            Command::Gn => "gn",
            Command::Bound => "bound",
        }
    }

    /// Subcommands that draw random data and therefore need `--seed`.
    pub fn is_stochastic(self) -> bool {
        !matches!(self, Command::Count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    SplitStep,
    Picard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignArg {
    Plus,
    Minus,
}

/// Every knob of every subcommand. Serialized verbatim into the run summary.
#[derive(Debug, Clone, Args, Serialize)]
pub struct RunConfig {
    /// Band limit K.
    #[arg(long, global = true, default_value_t = 16)]
    pub band_limit: usize,

    /// σ = β/θ as two positive integers.
    #[arg(long, global = true, num_args = 2, value_names = ["BETA", "THETA"], default_values_t = [1, 4])]
    pub sigma: Vec<u64>,

    #[arg(long, global = true, default_value_t = 0.5)]
    pub alpha: f64,

    /// ε₁ as real and imaginary part.
    #[arg(long, global = true, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true, default_values_t = [1.0, 0.0])]
    pub eps1: Vec<f64>,

    /// ε₂ as real and imaginary part.
    #[arg(long, global = true, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true, default_values_t = [1.0, 0.0])]
    pub eps2: Vec<f64>,

    /// Final time T.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub time: f64,

    /// Split-step time step.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub dt: f64,

    /// Dyadic N values (comma separated); degrees k for projector-bilinear.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [1, 2, 4, 8])]
    pub dyadic_n: Vec<u64>,

    /// Dyadic L values (comma separated); degrees ℓ for projector-bilinear.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = [1, 2, 4, 8])]
    pub dyadic_l: Vec<u64>,

    /// Random trials per cell (corpus size for gn).
    #[arg(long, global = true, default_value_t = 4)]
    pub trials: usize,

    /// RNG seed; required by every stochastic subcommand.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Output directory for data.csv and summary.json.
    #[arg(long, global = true, default_value = "shglab-out")]
    pub out: std::path::PathBuf,

    /// Fail unless β and θ are both perfect squares.
    #[arg(long, global = true)]
    pub require_square: bool,

    /// Amplitude of the random initial data.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub amplitude: f64,

    /// Initial coefficients decay like (1+k)^(-decay).
    #[arg(long, global = true, default_value_t = 2.5)]
    pub decay: f64,

    #[arg(long, global = true, value_enum, default_value_t = Solver::SplitStep)]
    pub solver: Solver,

    /// Record every n-th split-step sample.
    #[arg(long, global = true, default_value_t = 1)]
    pub sample_every: usize,

    /// Picard iteration cap.
    #[arg(long, global = true, default_value_t = 50)]
    pub max_iter: usize,

    /// Picard stopping tolerance (sup-in-time H¹ increment).
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,

    /// Sign of the σ-group in the space-time scan.
    #[arg(long, global = true, value_enum, default_value_t = SignArg::Plus)]
    pub sign: SignArg,

    /// Lebesgue exponent r of the Gagliardo–Nirenberg ratio.
    #[arg(long, global = true, default_value_t = 4.0)]
    pub gn_r: f64,

    /// Fixed constant B of the Gagliardo–Nirenberg bound.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub gn_b: f64,

    /// Bisection tolerance of the A calibration.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub gn_tol: f64,
}
