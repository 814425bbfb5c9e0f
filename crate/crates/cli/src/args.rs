use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use schwarz_core::{Polynomial, C64};

use crate::error::CliError;
use crate::input::{parse_complex, parse_polynomial, parse_range};

#[derive(Debug, Parser)]
#[command(name = "schwarz", version, about = "Schwarz functions, exponential transforms, line bundles and quadrature identities")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Settings shared by every verb. Flags take precedence over the
/// environment.
#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Convergence and check tolerance [default: 1e-10]
    #[arg(long, global = true, env = "SCHWARZ_TOL")]
    pub tol: Option<f64>,
    /// Pin the node count (power of two, at least 16); disables refinement
    #[arg(long = "n", global = true, env = "SCHWARZ_N")]
    pub n: Option<usize>,
    /// Largest node count refinement may reach
    #[arg(long, global = true, default_value_t = 1 << 16)]
    pub max_n: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tol: f64,
    /// Starting node count, or the only one when pinned.
    pub n: usize,
    pub pinned: bool,
    pub max_n: usize,
    pub format: Format,
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_N: usize = 256;

impl ConfigArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let tol = self.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0) {
            return Err(CliError::Parse(format!("tolerance must be positive, got {tol}")));
        }
        let good = |n: usize| n >= 16 && n.is_power_of_two();
        if !good(self.max_n) {
            return Err(CliError::Parse(format!("--max-n must be a power of two >= 16, got {}", self.max_n)));
        }
        let n = self.n.unwrap_or(DEFAULT_N.min(self.max_n));
        if !good(n) || n > self.max_n {
            return Err(CliError::Parse(format!("N must be a power of two in [16, {}], got {n}", self.max_n)));
        }
        Ok(RunConfig {
            tol,
            n,
            pinned: self.n.is_some(),
            max_n: self.max_n,
            format: self.format,
        })
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a curve file and report its annulus and area/π
    Validate { curve: PathBuf },
    /// Cauchy transform at z, or the double Cauchy and exponential transforms at (z, w)
    Transform {
        curve: PathBuf,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: C64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        w: Option<C64>,
    },
    /// Harmonic moments M_k for k_min <= k <= k_max
    Moments {
        curve: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k_min: i32,
        #[arg(long, default_value_t = 6, allow_hyphen_values = true)]
        k_max: i32,
    },
    /// Chern class and canonical holomorphic section of a line bundle
    Section {
        curve: PathBuf,
        #[command(flatten)]
        bundle: BundleArgs,
        /// Check the transition relation on 32 collar points
        #[arg(long)]
        verify: bool,
        /// Write the boundary log-density as JSON
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Residue quadrature of a polynomial against its oracle
    Quadrature {
        curve: PathBuf,
        #[arg(long, value_enum)]
        kind: QuadKind,
        /// Ascending coefficients, e.g. `0,0,1` for z²
        #[arg(long, value_parser = parse_polynomial, allow_hyphen_values = true)]
        f: Polynomial,
    },
    /// Fit F(z,w) = Q(z,w̄)/(P(z)P(w)̄) on exterior sample pairs
    RationalFit {
        curve: PathBuf,
        #[arg(long, default_value_t = 1)]
        deg_q: usize,
        #[arg(long, default_value_t = 1)]
        deg_p: usize,
        /// Number of sample pairs [default: three times the unknown count]
        #[arg(long)]
        samples: Option<usize>,
    },
    /// CSV samples for plotting
    Plotdata {
        curve: PathBuf,
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Real range `lo,hi` of the sample rectangle
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-2,2")]
        re: (f64, f64),
        /// Imaginary range `lo,hi` of the sample rectangle
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true, default_value = "-2,2")]
        im: (f64, f64),
        #[arg(long, default_value_t = 21)]
        nx: usize,
        #[arg(long, default_value_t = 21)]
        ny: usize,
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        k_min: i32,
        #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
        k_max: i32,
        #[command(flatten)]
        bundle: OptionalBundleArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BundleChoice {
    ExpSchwarz,
    SchwarzPole,
    TangentPower,
}

#[derive(Debug, Clone, Args)]
pub struct BundleArgs {
    #[arg(long, value_enum)]
    pub bundle: BundleChoice,
    /// Pole parameter of schwarz-pole, and w₀ for exp-transform plots
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub w: Option<C64>,
    /// Power of tangent-power
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i32>,
    /// Interior adjustment point for a nonzero Chern class
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<C64>,
}

#[derive(Debug, Clone, Args)]
pub struct OptionalBundleArgs {
    #[arg(long, value_enum)]
    pub bundle: Option<BundleChoice>,
    /// Pole parameter of schwarz-pole, and w₀ for exp-transform plots
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub w: Option<C64>,
    #[arg(long, allow_hyphen_values = true)]
    pub m: Option<i32>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuadKind {
    Classical,
    Abelian,
    Arclength,
    Corner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// |E(z, w₀)| and friends over a rectangle
    ExpTransform,
    /// The moment table
    Moments,
    /// Section values over a rectangle
    Section,
}
