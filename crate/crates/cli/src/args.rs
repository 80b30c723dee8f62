use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use modspace::PhiFunction;

#[derive(Debug, Parser)]
#[command(
    name = "modspace",
    version,
    about = "Metric modulars, GV-phi examples and Caratheodory ODE solves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Audit the modular axioms on a random point sample.
    Axioms(AxiomsArgs),
    /// Reproduce the x_alpha and x_beta example tables.
    Examples(ExamplesArgs),
    /// Solve a registry initial-value problem.
    Ode(OdeArgs),
    /// Lambda profile and convergence diagnostics of the x_beta sequence.
    Profile(ProfileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModularChoice {
    Velocity,
    Constant,
    Threshold,
    /// GV-phi modular with phi(u) = e^u - 1.
    GvphiExp,
    /// GV-phi modular with the phi given by --phi.
    Gvphi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeChoice {
    Pseudomodular,
    Modular,
    Strict,
    Convex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AxiomsArgs {
    #[arg(long, value_enum, default_value_t = ModularChoice::Velocity)]
    pub modular: ModularChoice,
    #[arg(long, value_enum, default_value_t = ModeChoice::Modular)]
    pub mode: ModeChoice,
    /// Number of sampled points.
    #[arg(long, default_value_t = 8)]
    pub points: usize,
    /// Phi function for --modular gvphi: exp, linear or power:<p>.
    #[arg(long, default_value = "exp", value_parser = parse_phi)]
    pub phi: PhiFunction,
    /// Comma-separated lambda grid.
    #[arg(long, value_delimiter = ',', default_value = "0.125,0.25,0.5,1,2,4,8")]
    pub lambda: Vec<f64>,
    /// Cells per GV-phi sample point.
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,1")]
    pub alpha: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.25,0.1,0.0625,0.015625")]
    pub beta: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,1.5,2,4")]
    pub lambda: Vec<f64>,
    /// Cells on [0, 1]; a power of two.
    #[arg(long, default_value_t = 4096)]
    pub grid: usize,
    /// Bisection tolerance of d_w*.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OdeArgs {
    /// decay, constant, cosine or logistic.
    #[arg(long)]
    pub problem: String,
    /// End of the interval; defaults to the problem's own.
    #[arg(long = "T")]
    pub t_end: Option<f64>,
    /// Upper bound for L times the segment length.
    #[arg(long, default_value_t = 0.5)]
    pub safety: f64,
    /// Cells per segment; a power of two.
    #[arg(long, default_value_t = 2048)]
    pub grid: usize,
    /// Node residual tolerance per unit length.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Also write the per-segment traces as JSON to this file.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    /// The sequence x_beta, one entry per value.
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "0.5,0.25,0.125,0.0625,0.03125,0.015625,0.0078125,0.00390625"
    )]
    pub beta: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,4,8")]
    pub lambda: Vec<f64>,
    /// Time of the Delta_2 probe.
    #[arg(long, default_value_t = 2.0)]
    pub lambda0: f64,
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    /// Smallness threshold of the convergence verdicts.
    #[arg(long, default_value_t = 5e-2)]
    pub tol: f64,
    /// Trailing terms inspected by the verdicts.
    #[arg(long, default_value_t = 2)]
    pub tail: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_phi(s: &str) -> Result<PhiFunction, String> {
    s.parse().map_err(|e: modspace::Error| e.to_string())
}
