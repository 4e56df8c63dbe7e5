//! Time integration of `i ∂t u + (-Δ)^s u + p_ε u = 0`.
//!
//! Two backends share one driver, [`simulate`]:
//!
//! * **Crank–Nicolson** (`s = 1`): with `H = -D² + p` (central second
//!   difference), one step solves
//!   `(i/dt + H/2) u¹ = (i/dt - H/2) u⁰`. The step operator is the Cayley
//!   transform of a Hermitian matrix and preserves the discrete L² norm.
//!   Periodic boundaries give a cyclic tridiagonal system; Dirichlet
//!   boundaries pin the node `x_min ≡ x_max` to zero.
//! * **Strang splitting** (any `s > 0`, periodic): half potential phase,
//!   exact free propagation, half potential phase.
//!
//! Steps are shortened where needed to land exactly on requested output
//! times and on `t_end`.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::grid::{ComplexField, Grid};
use crate::mollifier::RegularizedPotential;
use crate::observables::ObservableRecord;
use crate::operators::{FractionalOrder, FreeEvolution};
use crate::tridiag::{CyclicTridiagonal, TridiagonalLu};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    CrankNicolson,
    SpectralStrang,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    Dirichlet,
    Periodic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub backend: Backend,
    pub dt: f64,
    pub t_end: f64,
    pub order: FractionalOrder,
    /// Record every `record_every`-th step (output times and `t_end` are
    /// always recorded).
    pub record_every: usize,
    pub boundary: Boundary,
    /// Times hit exactly and recorded; entries outside `(0, t_end)` are
    /// ignored.
    pub output_times: Vec<f64>,
}

impl SolverConfig {
    /// Default time step.
    pub const DEFAULT_DT: f64 = 0.0107;

    /// Default snapshot times.
    pub const FIGURE_TIMES: [f64; 7] = [0.0214, 0.0428, 0.0642, 0.1070, 0.1391, 0.2140, 0.2996];

    /// `s = 1`, periodic, every step recorded, figure times as outputs.
    pub fn new(backend: Backend, dt: f64, t_end: f64) -> Self {
        Self {
            backend,
            dt,
            t_end,
            order: FractionalOrder::LAPLACIAN,
            record_every: 1,
            boundary: Boundary::Periodic,
            output_times: Self::FIGURE_TIMES.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config("dt must be positive"));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return Err(Error::Config("t_end must be at least dt"));
        }
        if self.record_every == 0 {
            return Err(Error::Config("record_every must be positive"));
        }
        match self.backend {
            Backend::CrankNicolson if !self.order.is_laplacian() => {
                Err(Error::Config("Crank-Nicolson needs s = 1"))
            }
            Backend::SpectralStrang if self.boundary != Boundary::Periodic => {
                Err(Error::Config("the spectral backend is periodic"))
            }
            _ => Ok(()),
        }
    }
}

/// Recorded states of one run with their observables.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<ComplexField>,
    observables: Vec<ObservableRecord>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.observables.iter().map(|r| r.t).collect()
    }

    pub fn states(&self) -> &[ComplexField] {
        &self.states
    }

    pub fn observables(&self) -> &[ObservableRecord] {
        &self.observables
    }

    pub fn mass(&self) -> Vec<f64> {
        self.observables.iter().map(|r| r.mass).collect()
    }

    pub fn energy(&self) -> Vec<f64> {
        self.observables.iter().map(|r| r.energy).collect()
    }

    pub fn final_state(&self) -> &ComplexField {
        self.states.last().expect("trajectory has the initial state")
    }

    /// The recorded state at time `t` (to within `1e-9`).
    pub fn state_at(&self, t: f64) -> Option<&ComplexField> {
        self.observables
            .iter()
            .position(|r| (r.t - t).abs() <= 1e-9)
            .map(|i| &self.states[i])
    }

    /// Iterates `(t, state, observables)`.
    pub fn iter(&self) -> impl Iterator<Item = (f64, &ComplexField, &ObservableRecord)> {
        self.observables.iter().zip(&self.states).map(|(r, s)| (r.t, s, r))
    }
}

/// `u0(x) = exp(1/((x-5)² - 1/4))` on `|x - 5| < 1/2`, zero elsewhere.
pub fn initial_datum(grid: &Grid) -> Result<ComplexField> {
    if grid.x_min() > 4.5 || grid.x_max() < 5.5 {
        return Err(Error::Support { lo: 4.5, hi: 5.5 });
    }
    Ok(ComplexField::from_fn(*grid, |x| {
        let r2 = (x - 5.0) * (x - 5.0);
        let v = if r2 < 0.25 { (1.0 / (r2 - 0.25)).exp() } else { 0.0 };
        Complex64::new(v, 0.0)
    }))
}

/// One Crank–Nicolson step of size `dt` (`s = 1`).
pub fn cn_step(
    u: &ComplexField,
    potential: &RegularizedPotential,
    dt: f64,
    boundary: Boundary,
) -> Result<ComplexField> {
    check_grid(u, potential)?;
    if !(dt > 0.0) {
        return Err(Error::Config("dt must be positive"));
    }
    let stepper = CrankNicolson::new(potential, dt, boundary)?;
    let mut values = u.values().to_vec();
    stepper.step(&mut values)?;
    ComplexField::new(*u.grid(), values)
}

/// One Strang-splitting step of size `dt` (periodic).
pub fn strang_step(
    u: &ComplexField,
    potential: &RegularizedPotential,
    dt: f64,
    order: FractionalOrder,
) -> Result<ComplexField> {
    check_grid(u, potential)?;
    let stepper = Strang::new(potential, dt, order);
    let mut values = u.values().to_vec();
    stepper.step(&mut values);
    ComplexField::new(*u.grid(), values)
}

/// Evolves `u0` from `t = 0` to `cfg.t_end`.
pub fn simulate(u0: &ComplexField, potential: &RegularizedPotential, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    check_grid(u0, potential)?;
    let grid = *u0.grid();

    let mut targets: Vec<f64> = cfg
        .output_times
        .iter()
        .copied()
        .filter(|&t| t > 0.0 && t < cfg.t_end)
        .collect();
    targets.sort_by(|a, b| a.partial_cmp(b).expect("output times are finite"));
    targets.dedup();
    targets.push(cfg.t_end);

    let regular = Stepper::new(cfg, potential, cfg.dt)?;
    let mut shortened: Option<(f64, Stepper)> = None;

    let mut u = u0.values().to_vec();
    if matches!(cfg.backend, Backend::CrankNicolson) && cfg.boundary == Boundary::Dirichlet {
        u[0] = Complex64::new(0.0, 0.0);
    }
    let mut states = alloc::vec![ComplexField::new(grid, u.clone())?];
    let mut observables = alloc::vec![ObservableRecord::measure(0.0, &states[0], potential, cfg.order)?];

    let mut t = 0.0;
    let mut step = 0usize;
    // Steps within this relative distance of dt count as full steps.
    let slack = 1e-9 * cfg.dt;
    for &target in &targets {
        while t < target {
            let remaining = target - t;
            let landing = remaining <= cfg.dt + slack;
            if landing && (remaining - cfg.dt).abs() > slack {
                let h = remaining;
                if shortened.as_ref().is_none_or(|(dt, _)| *dt != h) {
                    shortened = Some((h, Stepper::new(cfg, potential, h)?));
                }
                shortened.as_ref().expect("just built").1.step(&mut u)?;
            } else {
                regular.step(&mut u)?;
            }
            step += 1;
            t = if landing { target } else { t + cfg.dt };

            if let Some(max_abs) = non_finite(&u) {
                return Err(Error::NumericalAbort { step, max_abs });
            }
            if landing || step.is_multiple_of(cfg.record_every) {
                let state = ComplexField::from_raw(grid, u.clone());
                observables.push(ObservableRecord::measure(t, &state, potential, cfg.order)?);
                states.push(state);
            }
        }
    }
    Ok(Trajectory { states, observables })
}

fn check_grid(u: &ComplexField, potential: &RegularizedPotential) -> Result<()> {
    if u.grid() == potential.grid() {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// `Some(max |u_j|)` (NaN if any sample is NaN) when the state is not finite.
fn non_finite(u: &[Complex64]) -> Option<f64> {
    if u.iter().all(|v| v.is_finite()) {
        return None;
    }
    if u.iter().any(|v| v.is_nan()) {
        return Some(f64::NAN);
    }
    Some(u.iter().map(|v| v.norm()).fold(0.0, f64::max))
}

enum Stepper {
    CrankNicolson(CrankNicolson),
    Strang(Strang),
}

impl Stepper {
    fn new(cfg: &SolverConfig, potential: &RegularizedPotential, dt: f64) -> Result<Self> {
        Ok(match cfg.backend {
            Backend::CrankNicolson => Stepper::CrankNicolson(CrankNicolson::new(potential, dt, cfg.boundary)?),
            Backend::SpectralStrang => Stepper::Strang(Strang::new(potential, dt, cfg.order)),
        })
    }

    fn step(&self, u: &mut [Complex64]) -> Result<()> {
        match self {
            Stepper::CrankNicolson(cn) => cn.step(u),
            Stepper::Strang(strang) => {
                strang.step(u);
                Ok(())
            }
        }
    }
}

enum CnSystem {
    Periodic(CyclicTridiagonal),
    /// Unknowns are nodes `1..n`; node 0 stays zero.
    Dirichlet(TridiagonalLu),
}

struct CrankNicolson {
    /// Diagonal of `i/dt - H/2`.
    rhs_diag: Vec<Complex64>,
    /// Off-diagonal of `i/dt - H/2`, i.e. `+1/(2dx²)`.
    rhs_off: Complex64,
    system: CnSystem,
}

impl CrankNicolson {
    fn new(potential: &RegularizedPotential, dt: f64, boundary: Boundary) -> Result<Self> {
        let grid = potential.grid();
        let n = grid.len();
        let inv_dx2 = 1.0 / (grid.dx() * grid.dx());
        let shift = Complex64::new(0.0, 1.0 / dt);
        let h_diag: Vec<f64> = potential.values().iter().map(|p| 2.0 * inv_dx2 + p).collect();
        let h_off = -inv_dx2;

        let lhs_diag: Vec<Complex64> = h_diag.iter().map(|h| shift + 0.5 * h).collect();
        let lhs_off = Complex64::new(0.5 * h_off, 0.0);
        let rhs_diag = h_diag.iter().map(|h| shift - 0.5 * h).collect();
        let rhs_off = Complex64::new(-0.5 * h_off, 0.0);

        let system = match boundary {
            Boundary::Periodic => {
                let off = alloc::vec![lhs_off; n - 1];
                CnSystem::Periodic(CyclicTridiagonal::new(&off, &lhs_diag, &off, lhs_off, lhs_off)?)
            }
            Boundary::Dirichlet => {
                let off = alloc::vec![lhs_off; n - 2];
                CnSystem::Dirichlet(TridiagonalLu::new(&off, &lhs_diag[1..], &off)?)
            }
        };
        Ok(Self {
            rhs_diag,
            rhs_off,
            system,
        })
    }

    fn step(&self, u: &mut [Complex64]) -> Result<()> {
        let n = u.len();
        let mut rhs: Vec<Complex64> = (0..n)
            .map(|j| {
                let left = u[(j + n - 1) % n];
                let right = u[(j + 1) % n];
                self.rhs_diag[j] * u[j] + self.rhs_off * (left + right)
            })
            .collect();
        match &self.system {
            CnSystem::Periodic(system) => {
                system.solve_in_place(&mut rhs)?;
                u.copy_from_slice(&rhs);
            }
            CnSystem::Dirichlet(system) => {
                // u[0] = 0, so the wrap-around neighbours above vanish.
                system.solve_in_place(&mut rhs[1..])?;
                u[0] = Complex64::new(0.0, 0.0);
                u[1..].copy_from_slice(&rhs[1..]);
            }
        }
        Ok(())
    }
}

struct Strang {
    half_phase: Vec<Complex64>,
    free: FreeEvolution,
}

impl Strang {
    fn new(potential: &RegularizedPotential, dt: f64, order: FractionalOrder) -> Self {
        let half_phase = potential
            .values()
            .iter()
            .map(|p| Complex64::from_polar(1.0, 0.5 * p * dt))
            .collect();
        Self {
            half_phase,
            free: FreeEvolution::new(*potential.grid(), order, dt),
        }
    }

    fn step(&self, u: &mut [Complex64]) {
        for (v, phase) in u.iter_mut().zip(&self.half_phase) {
            *v *= phase;
        }
        self.free.apply(u);
        for (v, phase) in u.iter_mut().zip(&self.half_phase) {
            *v *= phase;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{l2_norm, RealField};
    use crate::mollifier::{regularize_potential, Epsilon, Mollifier, PotentialKind, PotentialSpec};
    use crate::operators::free_propagator;
    use core::f64::consts::PI;

    fn potential(kind: PotentialKind, eps: f64, grid: &Grid) -> RegularizedPotential {
        regularize_potential(
            &PotentialSpec::standard(kind),
            Epsilon::new(eps).unwrap(),
            grid,
            &Mollifier::standard(),
        )
        .unwrap()
    }

    fn default_grid() -> Grid {
        Grid::new(0.0, 10.0, 1024).unwrap()
    }

    #[test]
    fn initial_datum_values() {
        let g = Grid::new(0.0, 10.0, 1024).unwrap();
        let u0 = initial_datum(&g).unwrap();
        assert!((u0.values()[512].re - (-4f64).exp()).abs() < 1e-17);
        assert!((u0.values()[512].re - 0.0183156).abs() < 1e-7);
        // 4.5 and 5.5 are not nodes here; use a grid where they are.
        let g = Grid::new(0.0, 16.0, 64).unwrap();
        let u0 = initial_datum(&g).unwrap();
        assert_eq!(u0.values()[18].re, 0.0);
        assert_eq!(u0.values()[22].re, 0.0);
        assert!(u0.values().iter().all(|v| v.im == 0.0));
        assert!(matches!(
            initial_datum(&Grid::new(4.8, 6.0, 16).unwrap()),
            Err(Error::Support { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::new(Backend::CrankNicolson, 0.01, 0.1);
        assert!(cfg.validate().is_ok());
        cfg.order = FractionalOrder::new(0.5).unwrap();
        assert_eq!(cfg.validate(), Err(Error::Config("Crank-Nicolson needs s = 1")));
        let mut cfg = SolverConfig::new(Backend::SpectralStrang, 0.01, 0.1);
        cfg.boundary = Boundary::Dirichlet;
        assert!(cfg.validate().is_err());
        assert!(SolverConfig::new(Backend::SpectralStrang, 0.0, 0.1).validate().is_err());
        assert!(SolverConfig::new(Backend::SpectralStrang, 0.2, 0.1).validate().is_err());
    }

    #[test]
    fn cn_eigenmode_gets_cayley_factor() {
        let g = Grid::new(0.0, 10.0, 256).unwrap();
        let p = potential(PotentialKind::Zero, 1.0, &g);
        let dt = 0.0107;
        let k = 3.0;
        let u = ComplexField::from_fn(g, |x| Complex64::new((PI * k * x / g.length()).sin(), 0.0));
        let next = cn_step(&u, &p, dt, Boundary::Dirichlet).unwrap();
        let dx = g.dx();
        let lambda = 4.0 / (dx * dx) * (PI * k / (2.0 * g.len() as f64)).sin().powi(2);
        let factor = Complex64::new(1.0, 0.5 * lambda * dt) / Complex64::new(1.0, -0.5 * lambda * dt);
        assert!((factor.norm() - 1.0).abs() < 1e-14);
        for (a, b) in next.values().iter().zip(u.values()) {
            assert!((a - b * factor).norm() < 1e-12);
        }
    }

    #[test]
    fn cn_periodic_plane_wave() {
        let g = Grid::new(0.0, 10.0, 128).unwrap();
        let p = potential(PotentialKind::Zero, 1.0, &g);
        let dt = 0.05;
        let u = ComplexField::from_fn(g, |x| Complex64::from_polar(1.0, 2.0 * PI * 2.0 * x / g.length()));
        let next = cn_step(&u, &p, dt, Boundary::Periodic).unwrap();
        let dx = g.dx();
        let lambda = 4.0 / (dx * dx) * (PI * 2.0 / g.len() as f64).sin().powi(2);
        let factor = Complex64::new(1.0, 0.5 * lambda * dt) / Complex64::new(1.0, -0.5 * lambda * dt);
        for (a, b) in next.values().iter().zip(u.values()) {
            assert!((a - b * factor).norm() < 1e-12);
        }
    }

    #[test]
    fn cn_small_step_barely_moves() {
        let g = default_grid();
        let u0 = initial_datum(&g).unwrap();
        let p = potential(PotentialKind::Delta, 0.05, &g);
        let next = cn_step(&u0, &p, 1e-8, Boundary::Periodic).unwrap();
        let change = next
            .values()
            .iter()
            .zip(u0.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(change <= 1e-6);
    }

    #[test]
    fn cn_default_setup_conserves_mass() {
        let g = default_grid();
        let u0 = initial_datum(&g).unwrap();
        let p = potential(PotentialKind::Delta, 0.05, &g);
        let m0 = l2_norm(&u0);
        let mut u = u0.clone();
        for _ in 0..28 {
            u = cn_step(&u, &p, SolverConfig::DEFAULT_DT, Boundary::Periodic).unwrap();
        }
        assert!((l2_norm(&u) - m0).abs() < 1e-10 * m0);
    }

    #[test]
    fn strang_without_potential_is_free_propagation() {
        let g = default_grid();
        let u0 = initial_datum(&g).unwrap();
        let p = potential(PotentialKind::Zero, 1.0, &g);
        let order = FractionalOrder::new(0.75).unwrap();
        let a = strang_step(&u0, &p, 0.0107, order).unwrap();
        let b = free_propagator(&u0, 0.0107, order);
        assert!(l2_norm(&a.sub(&b).unwrap()) < 1e-12);
    }

    #[test]
    fn constant_potential_is_a_global_phase() {
        let g = default_grid();
        let u0 = initial_datum(&g).unwrap();
        let p = potential(PotentialKind::ConstantOne, 1.0, &g);
        let order = FractionalOrder::new(1.5).unwrap();
        let dt = 0.0107;
        let mut u = u0.clone();
        for _ in 0..5 {
            u = strang_step(&u, &p, dt, order).unwrap();
        }
        let expected = free_propagator(&u0, 5.0 * dt, order).scale(Complex64::from_polar(1.0, 5.0 * dt));
        assert!(l2_norm(&u.sub(&expected).unwrap()) < 1e-10);
    }

    #[test]
    fn simulate_lands_on_output_times() {
        let g = default_grid();
        let u0 = initial_datum(&g).unwrap();
        let p = potential(PotentialKind::Delta, 0.05, &g);
        let mut cfg = SolverConfig::new(Backend::CrankNicolson, SolverConfig::DEFAULT_DT, 0.2996);
        cfg.record_every = 1000;
        cfg.output_times = alloc::vec![0.0428, 0.1, 0.2140];
        let traj = simulate(&u0, &p, &cfg).unwrap();
        assert_eq!(traj.times(), alloc::vec![0.0, 0.0428, 0.1, 0.2140, 0.2996]);
        assert!(traj.state_at(0.1).is_some());
        assert_eq!(traj.states()[0], u0);
    }

    #[test]
    fn simulate_records_every_step_by_default() {
        let g = default_grid();
        let u0 = initial_datum(&g).unwrap();
        let p = potential(PotentialKind::Zero, 1.0, &g);
        let cfg = SolverConfig::new(Backend::SpectralStrang, SolverConfig::DEFAULT_DT, 0.2996);
        let traj = simulate(&u0, &p, &cfg).unwrap();
        assert_eq!(traj.len(), 29);
        let times = traj.times();
        assert!(times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn zero_datum_stays_zero() {
        let g = default_grid();
        let p = potential(PotentialKind::Delta, 0.05, &g);
        for backend in [Backend::CrankNicolson, Backend::SpectralStrang] {
            let cfg = SolverConfig::new(backend, 0.0107, 0.1);
            let traj = simulate(&ComplexField::zeros(g), &p, &cfg).unwrap();
            assert!(traj.states().iter().all(|s| s.values().iter().all(|v| v.norm() == 0.0)));
        }
    }

    #[test]
    fn overflow_aborts_with_step_index() {
        let g = Grid::new(0.0, 10.0, 64).unwrap();
        let u0 = ComplexField::from_fn(g, |_| Complex64::new(f64::MAX / 4.0, 0.0));
        let field = RealField::from_fn(g, |_| 0.0);
        let p = RegularizedPotential::from_field(
            PotentialSpec::standard(PotentialKind::Zero),
            Epsilon::new(1.0).unwrap(),
            field,
        )
        .unwrap();
        let cfg = SolverConfig::new(Backend::SpectralStrang, 0.01, 0.05);
        assert!(matches!(simulate(&u0, &p, &cfg), Err(Error::NumericalAbort { step: 1, .. })));
    }

    #[test]
    fn grids_must_match() {
        let p = potential(PotentialKind::Zero, 1.0, &Grid::new(0.0, 10.0, 64).unwrap());
        let u = ComplexField::zeros(Grid::new(0.0, 10.0, 128).unwrap());
        let cfg = SolverConfig::new(Backend::CrankNicolson, 0.01, 0.05);
        assert_eq!(simulate(&u, &p, &cfg), Err(Error::GridMismatch));
    }
}
