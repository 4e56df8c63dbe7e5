//! Position density, the energy functional
//! `E(t) = ‖(-Δ)^{s/2} u‖² + ‖p^{1/2} u‖²`, the composite norm
//! `‖u‖ = ‖u‖_{L²} + ‖(-Δ)^{s/2} u‖_{L²}`, and density diagnostics.

#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::grid::{hs_seminorm, l2_norm, ComplexField, RealField};
use crate::mollifier::RegularizedPotential;
use crate::operators::FractionalOrder;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    /// `‖(-Δ)^{s/2} u‖`
    pub hs_part: f64,
    /// `‖p^{1/2} u‖`
    pub potential_part: f64,
    /// `hs_part² + potential_part²`
    pub energy: f64,
}

/// Observables of one recorded state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRecord {
    pub t: f64,
    /// `ε` of the potential the state was evolved with.
    pub epsilon: f64,
    /// `‖u‖_{L²}`
    pub mass: f64,
    pub energy: f64,
    pub hs_part: f64,
    pub potential_part: f64,
}

impl ObservableRecord {
    pub fn measure(
        t: f64,
        u: &ComplexField,
        potential: &RegularizedPotential,
        order: FractionalOrder,
    ) -> Result<Self> {
        let parts = energy(u, potential, order)?;
        Ok(Self {
            t,
            epsilon: potential.epsilon().get(),
            mass: l2_norm(u),
            energy: parts.energy,
            hs_part: parts.hs_part,
            potential_part: parts.potential_part,
        })
    }
}

/// `|u_j|²`.
pub fn position_density(u: &ComplexField) -> RealField {
    let values = u.values().iter().map(|v| v.norm_sqr()).collect();
    RealField::new(*u.grid(), values).expect("density overflowed")
}

pub fn energy(u: &ComplexField, potential: &RegularizedPotential, order: FractionalOrder) -> Result<EnergyParts> {
    if u.grid() != potential.grid() {
        return Err(Error::GridMismatch);
    }
    let hs_part = hs_seminorm(u, order.get());
    let weighted: f64 = u
        .values()
        .iter()
        .zip(potential.values())
        .map(|(v, p)| p * v.norm_sqr())
        .sum();
    let potential_part = (weighted * u.grid().dx()).sqrt();
    Ok(EnergyParts {
        hs_part,
        potential_part,
        energy: hs_part * hs_part + potential_part * potential_part,
    })
}

pub fn composite_norm(u: &ComplexField, order: FractionalOrder) -> f64 {
    l2_norm(u) + hs_seminorm(u, order.get())
}

/// Rectangle-rule `∫_a^b |u|²` over the nodes with `a ≤ x_j < b`; additive
/// over adjacent windows.
pub fn window_mass(u: &ComplexField, a: f64, b: f64) -> f64 {
    let grid = u.grid();
    let sum: f64 = u
        .values()
        .iter()
        .enumerate()
        .filter(|(j, _)| {
            let x = grid.node(*j);
            x >= a && x < b
        })
        .map(|(_, v)| v.norm_sqr())
        .sum();
    sum * grid.dx()
}

/// Number of strict interior local maxima of `d` above `floor`.
pub fn count_local_maxima(d: &RealField, floor: f64) -> usize {
    d.values()
        .windows(3)
        .filter(|w| w[1] > w[0] && w[1] > w[2] && w[1] > floor)
        .count()
}

/// Floor used by the splitting detector: 1% of the largest density value.
pub fn splitting_floor(d: &RealField) -> f64 {
    0.01 * d.max().max(0.0)
}
