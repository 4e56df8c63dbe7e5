//! One function per subcommand. Each writes its files plus `manifest.txt`
//! into the configured output directory and returns a short text summary.

use fschro_core::{PotentialKind, SolverConfig};

use crate::config::{potential_name, ExperimentConfig};
use crate::error::Result;
use crate::experiments::{self, Figure, DEFAULT_T_END};
use crate::output::{self, OutputDir};

fn finish(name: &str, cfg: &ExperimentConfig, mut out: OutputDir, summary: String) -> Result<String> {
    out.write_manifest(name, &cfg.hash(), &cfg.canonical())?;
    Ok(summary)
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<String> {
    let kind = cfg.potential_or(PotentialKind::Delta);
    let eps = cfg.epsilons.as_ref().map_or(0.05, |e| e[0]);
    let t_end = cfg.t_end_or(DEFAULT_T_END);
    let traj = experiments::simulate_one(cfg, kind, eps, t_end)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut times = vec![0.0];
    times.extend(SolverConfig::FIGURE_TIMES.iter().filter(|&&t| t < t_end));
    times.push(t_end);
    for t in times {
        if let Some(state) = traj.state_at(t) {
            out.write(output::density_file_name(t, eps), &output::density_csv(state))?;
        }
    }
    out.write("energy.csv", &output::energy_csv(traj.observables()))?;
    let last = traj.observables().last().expect("trajectory is never empty");
    let summary = format!(
        "potential = {}\nepsilon = {eps}\nt_end = {}\nmass = {}\nenergy = {}\n",
        potential_name(kind),
        output::float(last.t),
        output::float(last.mass),
        output::float(last.energy)
    );
    finish("simulate", cfg, out, summary)
}

pub fn sweep(cfg: &ExperimentConfig) -> Result<String> {
    let report = experiments::epsilon_sweep(cfg)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    out.write("sweep.csv", &report.csv())?;
    let summary = report.summary();
    out.write("sweep_fits.txt", &summary)?;
    finish("sweep", cfg, out, summary)
}

pub fn uniqueness(cfg: &ExperimentConfig) -> Result<String> {
    let report = experiments::uniqueness_experiment(cfg)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    out.write("uniqueness.csv", &report.csv())?;
    let summary = report.summary();
    out.write("uniqueness_fit.txt", &summary)?;
    finish("uniqueness", cfg, out, summary)
}

pub fn consistency(cfg: &ExperimentConfig) -> Result<String> {
    let report = experiments::consistency_experiment(cfg)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    out.write("consistency.csv", &report.csv())?;
    let summary = report.summary();
    out.write("consistency.txt", &summary)?;
    finish("consistency", cfg, out, summary)
}

pub fn energy_scaling(cfg: &ExperimentConfig) -> Result<String> {
    let report = experiments::delta_squared_energy_scaling(cfg)?;
    let mut out = OutputDir::create(&cfg.output_dir)?;
    out.write("energy_scaling.csv", &report.csv())?;
    let summary = report.summary();
    out.write("energy_scaling.txt", &summary)?;
    finish("energy-scaling", cfg, out, summary)
}

/// Emits the listed figures (all five when `figures` is empty).
pub fn figures(cfg: &ExperimentConfig, figures: &[Figure]) -> Result<String> {
    let figures = if figures.is_empty() { &Figure::ALL[..] } else { figures };
    let mut out = OutputDir::create(&cfg.output_dir)?;
    let mut summary = String::new();
    for &figure in figures {
        let files = experiments::emit_figure_data(cfg, figure, &mut out)?;
        summary.push_str(&format!("{} = {} files\n", figure.name(), files.len()));
    }
    finish("figures", cfg, out, summary)
}
