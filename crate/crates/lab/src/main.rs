use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fschro::experiments::Figure;
use fschro::{commands, ExperimentConfig, LabError};

/// Experiments for the regularized (fractional) Schrödinger equation with
/// singular potentials.
#[derive(Parser)]
#[command(name = "fschro", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single run; writes density snapshots and the energy trace.
    Simulate(Common),
    /// ε-sweep with moderateness fits.
    Sweep(Common),
    /// Perturb p_ε by ε^m·g and fit the deviation rate.
    Uniqueness(Common),
    /// Mollified bounded potential against the exact one.
    Consistency(Common),
    /// Data for figures 1 to 5.
    Figures {
        /// Comma list of fig1..fig5 (default: all).
        #[arg(long, value_delimiter = ',')]
        figure: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Ratio of energy maxima between the smallest and largest ε.
    EnergyScaling(Common),
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` file; keys are the flag names.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<String>,
    /// cn or spectral
    #[arg(long)]
    backend: Option<String>,
    /// Comma list, strictly descending.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// zero, one, harmonic, delta or delta2
    #[arg(long)]
    potential: Option<String>,
    /// Fractional order.
    #[arg(long)]
    s: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    #[arg(long)]
    nx: Option<String>,
    /// `a,b`
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
    #[arg(long)]
    mollify_data: bool,
    #[arg(long)]
    t_end: Option<String>,
    /// periodic or dirichlet (Crank–Nicolson only)
    #[arg(long)]
    boundary: Option<String>,
    #[arg(long)]
    record_every: Option<String>,
    /// Perturbation order for `uniqueness`.
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    jobs: Option<String>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, LabError> {
        let mut pairs = Vec::new();
        let options = [
            ("out", &self.out),
            ("backend", &self.backend),
            ("eps", &self.eps),
            ("potential", &self.potential),
            ("s", &self.s),
            ("dt", &self.dt),
            ("nx", &self.nx),
            ("domain", &self.domain),
            ("t-end", &self.t_end),
            ("boundary", &self.boundary),
            ("record-every", &self.record_every),
            ("m", &self.m),
            ("seed", &self.seed),
            ("jobs", &self.jobs),
        ];
        for (key, value) in options {
            if let Some(value) = value {
                pairs.push((key.to_string(), value.clone()));
            }
        }
        if self.mollify_data {
            pairs.push(("mollify-data".to_string(), "true".to_string()));
        }
        ExperimentConfig::load(self.config.as_deref(), &pairs)
    }
}

fn run(cli: Cli) -> Result<String, LabError> {
    match cli.command {
        Command::Simulate(c) => commands::simulate(&c.load()?),
        Command::Sweep(c) => commands::sweep(&c.load()?),
        Command::Uniqueness(c) => commands::uniqueness(&c.load()?),
        Command::Consistency(c) => commands::consistency(&c.load()?),
        Command::EnergyScaling(c) => commands::energy_scaling(&c.load()?),
        Command::Figures { figure, common } => {
            let cfg = common.load()?;
            let figures = figure.iter().map(|f| Figure::parse(f)).collect::<Result<Vec<_>, _>>()?;
            commands::figures(&cfg, &figures)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
