use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "dephase-qfi", version, about = "Frequency-estimation precision bounds for dephasing qubits")]
pub struct Cli {
    /// key = value file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sweeps (default: DEPHASE_QFI_JOBS, then the CPU count).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Improvement of optimal measurement over Ramsey spectroscopy versus ν.
    Improvement(ImprovementArgs),
    /// Exact and variational QFI of one scenario, as JSON.
    Qfi(QfiArgs),
    /// Closed-form and QFI resolutions over a sweep of interrogation times.
    Resolution(ResolutionArgs),
    /// Cross-check suite over all modules.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct ImprovementArgs {
    #[arg(long)]
    pub nu_min: Option<f64>,
    #[arg(long)]
    pub nu_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Decay constant used by the numeric branch (ν < 1).
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Particle count used by the numeric branch.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub total_time: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorrelationArg {
    Uncorrelated,
    MaxCorrelated,
    Partial,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeArg {
    Product,
    Ghz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnsatzArg {
    Auto,
    Collective,
    TwoQubit,
    Complete,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DepthArg {
    Quick,
    Full,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    #[arg(long, value_enum)]
    pub correlation: Option<CorrelationArg>,
    /// GHZ amplitude A of the partially correlated environment.
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Mixing angle θ of the mixed correlation model.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, value_enum)]
    pub probe: Option<ProbeArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub total_time: Option<f64>,
    #[arg(long, value_enum)]
    pub ansatz: Option<AnsatzArg>,
}

#[derive(Debug, Args)]
pub struct QfiArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Interrogation time.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResolutionArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub depth: Option<DepthArg>,
    /// Relative offset applied to every closed form, to confirm the suite detects it.
    #[arg(long, hide = true)]
    pub perturb: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
