//! ε-sweeps and the experiments built on them.
//!
//! Per-ε simulations run in parallel on a rayon pool sized by
//! `ExperimentConfig::jobs`; results are collected in ε order, so reports and
//! files do not depend on the number of workers.

use std::fmt::Write as _;

use fschro_core::fit::LogLogFit;
use fschro_core::grid::l2_norm;
use fschro_core::mollifier::{moderateness_exponent, mollify_field, mollify_potential, regularize_potential};
use fschro_core::observables::{composite_norm, count_local_maxima, position_density, splitting_floor, window_mass};
use fschro_core::solver::{initial_datum, simulate};
use fschro_core::{
    ComplexField, Epsilon, Grid, Mollifier, PotentialKind, PotentialSpec, RealField, RegularizedPotential,
    SolverConfig, Trajectory,
};
use rayon::prelude::*;

use crate::config::{potential_name, ExperimentConfig};
use crate::error::{LabError, Result};
use crate::output::{self, OutputDir};

pub const SWEEP_EPSILONS: [f64; 8] = [0.8, 0.4, 0.3, 0.15, 0.11, 0.08, 0.05, 0.035];
pub const UNIQUENESS_EPSILONS: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
pub const CONSISTENCY_EPSILONS: [f64; 4] = [0.8, 0.4, 0.2, 0.1];
pub const ENERGY_SCALING_EPSILONS: [f64; 4] = [0.5, 0.25, 0.15, 0.05];

/// Last figure time; default end of most runs.
pub const DEFAULT_T_END: f64 = 0.2996;
pub const CONSISTENCY_TIME: f64 = 0.214;

/// Window around the singularity site where accumulation is measured.
pub const SITE_WINDOW: (f64, f64) = (2.7, 3.3);

/// Band for the δ² energy ratio between ε = 0.05 and ε = 0.5.
pub const ENERGY_RATIO_BAND: (f64, f64) = (50.0, 800.0);

fn pool(cfg: &ExperimentConfig) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cfg.jobs {
        builder = builder.num_threads(jobs);
    }
    builder.build().map_err(|e| LabError::config(e.to_string()))
}

/// Runs `job` for every ε in parallel and returns results in input order.
fn per_epsilon<T: Send>(
    cfg: &ExperimentConfig,
    epsilons: &[f64],
    job: impl Fn(f64) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    pool(cfg)?.install(|| epsilons.par_iter().map(|&eps| job(eps)).collect())
}

fn epsilon(value: f64) -> Result<Epsilon> {
    Epsilon::new(value).map_err(|e| LabError::config(e.to_string()))
}

/// `p_ε` as used by the sweeps: singular kinds mollified, regular kinds
/// sampled exactly.
pub fn potential(kind: PotentialKind, eps: f64, grid: &Grid) -> Result<RegularizedPotential> {
    Ok(regularize_potential(
        &PotentialSpec::standard(kind),
        epsilon(eps)?,
        grid,
        &Mollifier::standard(),
    )?)
}

/// `u0`, mollified at `eps` when the config asks for it.
pub fn initial_data(cfg: &ExperimentConfig, grid: &Grid, eps: f64) -> Result<ComplexField> {
    let u0 = initial_datum(grid)?;
    if cfg.mollify_data {
        Ok(mollify_field(&u0, epsilon(eps)?, &Mollifier::standard())?)
    } else {
        Ok(u0)
    }
}

fn run(u0: &ComplexField, p: &RegularizedPotential, solver: &SolverConfig) -> Result<Trajectory> {
    simulate(u0, p, solver).map_err(|source| match source {
        fschro_core::Error::NumericalAbort { .. } => LabError::Numerical {
            epsilon: p.epsilon().get(),
            source,
        },
        other => LabError::Core(other),
    })
}

/// One trajectory of the configured problem at `eps`.
pub fn simulate_one(cfg: &ExperimentConfig, kind: PotentialKind, eps: f64, t_end: f64) -> Result<Trajectory> {
    let grid = cfg.grid()?;
    let p = potential(kind, eps, &grid)?;
    run(&initial_data(cfg, &grid, eps)?, &p, &cfg.solver(t_end))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub sup_norm_p: f64,
    pub final_mass: f64,
    pub final_energy: f64,
    pub final_composite_norm: f64,
    /// Max over recorded times of the composite norm.
    pub sup_composite_norm: f64,
    /// Mass in [`SITE_WINDOW`] at the final time.
    pub window_mass: f64,
    /// Density maxima at the final time above the splitting floor.
    pub n_maxima: usize,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub potential: PotentialKind,
    pub records: Vec<SweepRecord>,
    /// `None` when every `‖p_ε‖_∞` is zero.
    pub potential_fit: Option<LogLogFit>,
    pub solution_fit: Option<LogLogFit>,
    pub config_hash: String,
}

pub fn epsilon_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    let kind = cfg.potential_or(PotentialKind::Delta);
    let epsilons = cfg.epsilons_or(&SWEEP_EPSILONS);
    let t_end = cfg.t_end_or(DEFAULT_T_END);
    let grid = cfg.grid()?;
    let records = per_epsilon(cfg, &epsilons, |eps| {
        let p = potential(kind, eps, &grid)?;
        let traj = run(&initial_data(cfg, &grid, eps)?, &p, &cfg.solver(t_end))?;
        let last = traj.final_state();
        let summary = traj.observables().last().expect("trajectory is never empty");
        let density = position_density(last);
        Ok(SweepRecord {
            epsilon: eps,
            sup_norm_p: p.sup_norm(),
            final_mass: summary.mass,
            final_energy: summary.energy,
            final_composite_norm: composite_norm(last, cfg.order),
            sup_composite_norm: traj
                .states()
                .iter()
                .map(|u| composite_norm(u, cfg.order))
                .fold(0.0, f64::max),
            window_mass: window_mass(last, SITE_WINDOW.0, SITE_WINDOW.1),
            n_maxima: count_local_maxima(&density, splitting_floor(&density)),
        })
    })?;
    let potential_samples: Vec<(f64, f64)> = records.iter().map(|r| (r.epsilon, r.sup_norm_p)).collect();
    let solution_samples: Vec<(f64, f64)> = records.iter().map(|r| (r.epsilon, r.sup_composite_norm)).collect();
    Ok(SweepReport {
        potential: kind,
        potential_fit: moderateness_exponent(&potential_samples).ok(),
        solution_fit: moderateness_exponent(&solution_samples).ok(),
        records,
        config_hash: cfg.hash(),
    })
}

impl SweepReport {
    pub fn csv(&self) -> String {
        let mut out = String::from(output::SWEEP_HEADER);
        out.push('\n');
        for r in &self.records {
            let floats = [
                r.epsilon,
                r.sup_norm_p,
                r.final_mass,
                r.final_energy,
                r.final_composite_norm,
                r.window_mass,
            ];
            for v in floats {
                out.push_str(&output::float(v));
                out.push(',');
            }
            let _ = writeln!(out, "{}", r.n_maxima);
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "config_hash = {}", self.config_hash);
        let _ = writeln!(out, "potential = {}", potential_name(self.potential));
        fit_lines(&mut out, "potential_moderateness", self.potential_fit.as_ref());
        fit_lines(&mut out, "solution_moderateness", self.solution_fit.as_ref());
        out
    }
}

fn fit_lines(out: &mut String, name: &str, fit: Option<&LogLogFit>) {
    match fit {
        Some(fit) => {
            let _ = writeln!(out, "{name}_N = {}", output::float(fit.slope));
            let _ = writeln!(out, "{name}_residual = {}", output::float(fit.rms_residual));
            let _ = writeln!(out, "{name}_flagged = {}", fit.is_flagged());
        }
        None => {
            let _ = writeln!(out, "{name}_N = negligible");
        }
    }
}

/// Unit-height bump on `(2, 4)`, the fixed shape of the uniqueness
/// perturbation.
pub fn perturbation_bump(x: f64) -> f64 {
    let r2 = (x - 3.0) * (x - 3.0);
    if r2 < 1.0 {
        (1.0 + 1.0 / (r2 - 1.0)).exp()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessRecord {
    pub epsilon: f64,
    /// `‖p̃_ε - p_ε‖_∞`
    pub perturbation_sup: f64,
    /// Max over recorded times of `‖u_ε - ũ_ε‖_{L²}`.
    pub max_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub m: u32,
    pub records: Vec<UniquenessRecord>,
    /// Slope of `ln d` against `ln ε`; `None` if some deviation vanishes.
    pub fit: Option<LogLogFit>,
}

pub fn uniqueness_experiment(cfg: &ExperimentConfig) -> Result<UniquenessReport> {
    uniqueness_with_perturbation(cfg, perturbation_bump)
}

/// Compares `p_ε` with `p_ε + ε^m g`.
pub fn uniqueness_with_perturbation(
    cfg: &ExperimentConfig,
    g: impl Fn(f64) -> f64 + Sync,
) -> Result<UniquenessReport> {
    let kind = cfg.potential_or(PotentialKind::Delta);
    let epsilons = cfg.epsilons_or(&UNIQUENESS_EPSILONS);
    let t_end = cfg.t_end_or(DEFAULT_T_END);
    let grid = cfg.grid()?;
    let g = RealField::new(grid, grid.nodes().into_iter().map(&g).collect())?;
    let records = per_epsilon(cfg, &epsilons, |eps| {
        let p = potential(kind, eps, &grid)?;
        let amplitude = eps.powi(cfg.m as i32);
        let perturbed = p.perturbed(&g, amplitude)?;
        let u0 = initial_data(cfg, &grid, eps)?;
        let a = run(&u0, &p, &cfg.solver(t_end))?;
        let b = run(&u0, &perturbed, &cfg.solver(t_end))?;
        let max_deviation = a
            .states()
            .iter()
            .zip(b.states())
            .map(|(x, y)| x.sub(y).map(|d| l2_norm(&d)))
            .try_fold(0.0, |acc, d| d.map(|d| f64::max(acc, d)))?;
        let perturbation_sup = p
            .values()
            .iter()
            .zip(perturbed.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        Ok(UniquenessRecord {
            epsilon: eps,
            perturbation_sup,
            max_deviation,
        })
    })?;
    let fit = fschro_core::fit::fit_log_log(records.iter().map(|r| (r.epsilon, r.max_deviation))).ok();
    Ok(UniquenessReport { m: cfg.m, records, fit })
}

impl UniquenessReport {
    pub fn csv(&self) -> String {
        let rows: Vec<[f64; 3]> = self
            .records
            .iter()
            .map(|r| [r.epsilon, r.perturbation_sup, r.max_deviation])
            .collect();
        output::table("epsilon,perturbation_sup,max_deviation", rows.iter().map(|r| &r[..]))
    }

    pub fn summary(&self) -> String {
        let mut out = format!("m = {}\n", self.m);
        fit_lines(&mut out, "deviation_slope", self.fit.as_ref());
        out
    }
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    pub time: f64,
    /// `(ε, ‖u_ε(T) - u(T)‖_{L²})` in the order of the ε grid.
    pub errors: Vec<(f64, f64)>,
}

impl ConsistencyReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.errors.windows(2).all(|w| w[1].1 < w[0].1)
    }

    /// `e(smallest ε) / e(largest ε)`.
    pub fn reduction(&self) -> f64 {
        let first = self.errors.first().map_or(0.0, |e| e.1);
        let last = self.errors.last().map_or(0.0, |e| e.1);
        last / first
    }

    pub fn csv(&self) -> String {
        let rows: Vec<[f64; 2]> = self.errors.iter().map(|&(e, err)| [e, err]).collect();
        output::table("epsilon,error", rows.iter().map(|r| &r[..]))
    }

    pub fn summary(&self) -> String {
        format!(
            "time = {}\nstrictly_decreasing = {}\nreduction = {}\n",
            output::float(self.time),
            self.strictly_decreasing(),
            output::float(self.reduction())
        )
    }
}

/// Mollified regular potential against the exact one. Both are solved on
/// the refined discretization (4× the nodes, 1/8 the step).
pub fn consistency_experiment(cfg: &ExperimentConfig) -> Result<ConsistencyReport> {
    let kind = cfg.potential_or(PotentialKind::HarmonicShifted);
    if kind.is_singular() {
        return Err(LabError::config("consistency needs a bounded potential (zero, one or harmonic)"));
    }
    let epsilons = cfg.epsilons_or(&CONSISTENCY_EPSILONS);
    let time = cfg.t_end_or(CONSISTENCY_TIME);
    let grid = cfg.grid()?.refine(4)?;
    let mut solver = cfg.solver(time);
    solver.dt /= 8.0;
    solver.record_every = usize::MAX;
    solver.output_times.clear();

    let spec = PotentialSpec::standard(kind);
    let exact = regularize_potential(&spec, epsilon(1.0)?, &grid, &Mollifier::standard())?;
    let u0 = initial_datum(&grid)?;
    let reference = run(&u0, &exact, &solver)?;
    let errors = per_epsilon(cfg, &epsilons, |eps| {
        let p = mollify_potential(&spec, epsilon(eps)?, &grid, &Mollifier::standard())?;
        let traj = run(&initial_data(cfg, &grid, eps)?, &p, &solver)?;
        Ok((eps, l2_norm(&traj.final_state().sub(reference.final_state())?)))
    })?;
    Ok(ConsistencyReport { time, errors })
}

#[derive(Debug, Clone)]
pub struct EnergyScalingReport {
    pub potential: PotentialKind,
    /// `(ε, max_t E_ε(t))` in the order of the ε grid.
    pub maxima: Vec<(f64, f64)>,
}

impl EnergyScalingReport {
    /// Energy maximum at the smallest ε over the one at the largest ε.
    pub fn ratio(&self) -> f64 {
        let (smallest, largest) = extremes(&self.maxima);
        smallest / largest
    }

    /// Maxima nonincreasing in ε.
    pub fn monotone(&self) -> bool {
        let mut sorted = self.maxima.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        sorted.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    pub fn in_band(&self) -> bool {
        let r = self.ratio();
        r >= ENERGY_RATIO_BAND.0 && r <= ENERGY_RATIO_BAND.1
    }

    pub fn csv(&self) -> String {
        let rows: Vec<[f64; 2]> = self.maxima.iter().map(|&(e, m)| [e, m]).collect();
        output::table("epsilon,max_energy", rows.iter().map(|r| &r[..]))
    }

    pub fn summary(&self) -> String {
        format!(
            "potential = {}\nratio = {}\nmonotone = {}\nin_band = {}\n",
            potential_name(self.potential),
            output::float(self.ratio()),
            self.monotone(),
            self.in_band()
        )
    }
}

/// Max energy at the smallest and at the largest ε.
fn extremes(maxima: &[(f64, f64)]) -> (f64, f64) {
    let smallest = maxima.iter().min_by(|a, b| a.0.total_cmp(&b.0)).map_or(f64::NAN, |m| m.1);
    let largest = maxima.iter().max_by(|a, b| a.0.total_cmp(&b.0)).map_or(f64::NAN, |m| m.1);
    (smallest, largest)
}

pub fn delta_squared_energy_scaling(cfg: &ExperimentConfig) -> Result<EnergyScalingReport> {
    let kind = cfg.potential_or(PotentialKind::DeltaSquared);
    let epsilons = cfg.epsilons_or(&ENERGY_SCALING_EPSILONS);
    let t_end = cfg.t_end_or(DEFAULT_T_END);
    let maxima = per_epsilon(cfg, &epsilons, |eps| {
        let traj = simulate_one(cfg, kind, eps, t_end)?;
        Ok((eps, traj.energy().into_iter().fold(0.0, f64::max)))
    })?;
    Ok(EnergyScalingReport { potential: kind, maxima })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig5];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| LabError::config(format!("unknown figure `{name}`")))
    }
}

const FIG1_TIMES: [f64; 6] = [0.0, 0.0428, 0.1070, 0.1391, 0.2140, 0.2996];
const FIG3_EPSILONS: [f64; 4] = [0.035, 0.08, 0.3, 0.8];
const FIG4_EPSILONS: [f64; 3] = [0.05, 0.11, 0.49];
const FIG5_TIMES: [f64; 4] = [0.0, 0.0214, 0.0428, 0.0642];
const FIG5_EPSILONS: [f64; 4] = [0.05, 0.15, 0.25, 0.5];
const SNAPSHOT_EPSILON: f64 = 0.05;

/// One CSV per snapshot/trace, under `<out>/<figure>/`. Returns the paths
/// relative to `out`.
pub fn emit_figure_data(cfg: &ExperimentConfig, figure: Figure, out: &mut OutputDir) -> Result<Vec<std::path::PathBuf>> {
    let dir = figure.name();
    let t_end = cfg.t_end_or(DEFAULT_T_END);
    let mut files: Vec<(String, String)> = Vec::new();
    let snapshots = |traj: &Trajectory, times: &[f64], eps: f64, prefix: &str| -> Result<Vec<(String, String)>> {
        let horizon = traj.observables().last().map_or(0.0, |r| r.t);
        times
            .iter()
            .filter(|&&t| t <= horizon + 1e-9)
            .map(|&t| {
                let state = traj
                    .state_at(t)
                    .ok_or_else(|| LabError::config(format!("time {t} is not an output time")))?;
                Ok((format!("{prefix}{}", output::density_file_name(t, eps)), output::density_csv(state)))
            })
            .collect()
    };
    match figure {
        Figure::Fig1 => {
            let traj = simulate_one(cfg, PotentialKind::Delta, SNAPSHOT_EPSILON, t_end)?;
            files.extend(snapshots(&traj, &FIG1_TIMES, SNAPSHOT_EPSILON, "")?);
            files.push((output::energy_file_name(SNAPSHOT_EPSILON), output::energy_csv(traj.observables())));
        }
        Figure::Fig2 => {
            let kinds = [PotentialKind::Zero, PotentialKind::ConstantOne, PotentialKind::HarmonicShifted];
            let mut times = vec![0.0];
            times.extend(SolverConfig::FIGURE_TIMES);
            let trajectories = per_kind(cfg, &kinds, t_end)?;
            for (kind, traj) in kinds.iter().zip(&trajectories) {
                let prefix = format!("{}/", potential_name(*kind));
                files.extend(snapshots(traj, &times, 1.0, &prefix)?);
                files.push((format!("{prefix}energy.csv"), output::energy_csv(traj.observables())));
            }
        }
        Figure::Fig3 => {
            let time = 0.2140;
            let trajectories = per_epsilon(cfg, &FIG3_EPSILONS, |eps| {
                simulate_one(cfg, PotentialKind::Delta, eps, t_end.max(time))
            })?;
            for (eps, traj) in FIG3_EPSILONS.iter().zip(&trajectories) {
                files.extend(snapshots(traj, &[time], *eps, "")?);
            }
        }
        Figure::Fig4 => {
            let trajectories = per_epsilon(cfg, &FIG4_EPSILONS, |eps| {
                simulate_one(cfg, PotentialKind::Delta, eps, t_end)
            })?;
            for (eps, traj) in FIG4_EPSILONS.iter().zip(&trajectories) {
                files.push((output::energy_file_name(*eps), output::energy_csv(traj.observables())));
            }
        }
        Figure::Fig5 => {
            let trajectories = per_epsilon(cfg, &FIG5_EPSILONS, |eps| {
                simulate_one(cfg, PotentialKind::DeltaSquared, eps, t_end)
            })?;
            for (eps, traj) in FIG5_EPSILONS.iter().zip(&trajectories) {
                if *eps == SNAPSHOT_EPSILON {
                    files.extend(snapshots(traj, &FIG5_TIMES, *eps, "")?);
                }
                files.push((output::energy_file_name(*eps), output::energy_csv(traj.observables())));
            }
        }
    }
    files
        .into_iter()
        .map(|(name, contents)| {
            let relative = std::path::Path::new(dir).join(name);
            out.write(&relative, &contents)?;
            Ok(relative)
        })
        .collect()
}

fn per_kind(cfg: &ExperimentConfig, kinds: &[PotentialKind], t_end: f64) -> Result<Vec<Trajectory>> {
    pool(cfg)?.install(|| {
        kinds
            .par_iter()
            .map(|&kind| simulate_one(cfg, kind, 1.0, t_end))
            .collect()
    })
}
