//! Spectral fractional Laplacian and the exact free propagator.
//!
//! Sign convention: the evolution is `i ∂t u = -[(-Δ)^s u + p u]`, so the
//! free part multiplies mode `k` by `exp(+i|ξ_k|^{2s} t)` and the potential
//! part multiplies sample `j` by `exp(+i p_j t)`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fft::Fft;
use crate::grid::{symbol, ComplexField, Grid};
use crate::mollifier::RegularizedPotential;
use crate::{Error, Result};

/// Order `s > 0` of `(-Δ)^s`; the Fourier symbol is `|ξ|^{2s}`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    /// `s = 1`, the ordinary `-∂²x`.
    pub const LAPLACIAN: FractionalOrder = FractionalOrder(1.0);

    pub fn new(s: f64) -> Result<Self> {
        if s > 0.0 && s.is_finite() {
            Ok(Self(s))
        } else {
            Err(Error::Order(s))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }

    pub fn is_laplacian(self) -> bool {
        self.0 == 1.0
    }
}

/// `(-Δ)^s f`: multiply each coefficient by `|ξ_k|^{2s}` and transform back.
pub fn fractional_laplacian(f: &ComplexField, order: FractionalOrder) -> ComplexField {
    let grid = *f.grid();
    let fft = Fft::new(grid.len());
    let mut values = f.values().to_vec();
    fft.forward(&mut values);
    for (v, w) in values.iter_mut().zip(symbol(&grid, 2.0 * order.0)) {
        *v *= w;
    }
    fft.inverse(&mut values);
    ComplexField::new(grid, values).expect("fractional Laplacian overflowed")
}

/// Exact solution operator of `i ∂t u + (-Δ)^s u = 0` over time `t`
/// (negative `t` runs backwards). Unitary.
pub fn free_propagator(f: &ComplexField, t: f64, order: FractionalOrder) -> ComplexField {
    let evolution = FreeEvolution::new(*f.grid(), order, t);
    let mut values = f.values().to_vec();
    evolution.apply(&mut values);
    ComplexField::from_raw(*f.grid(), values)
}

/// Pointwise factor `exp(i p(x) t)`. Unitary.
pub fn potential_phase(f: &ComplexField, potential: &RegularizedPotential, t: f64) -> Result<ComplexField> {
    if f.grid() != potential.grid() {
        return Err(Error::GridMismatch);
    }
    let values = f
        .values()
        .iter()
        .zip(potential.values())
        .map(|(u, p)| u * Complex64::from_polar(1.0, p * t))
        .collect();
    Ok(ComplexField::from_raw(*f.grid(), values))
}

/// Free propagation over a fixed time, with the transform plan and mode
/// phases precomputed for repeated application.
#[derive(Debug, Clone)]
pub(crate) struct FreeEvolution {
    fft: Fft,
    phases: Vec<Complex64>,
}

impl FreeEvolution {
    pub(crate) fn new(grid: Grid, order: FractionalOrder, t: f64) -> Self {
        let phases = symbol(&grid, 2.0 * order.0)
            .into_iter()
            .map(|w| Complex64::from_polar(1.0, w * t))
            .collect();
        Self {
            fft: Fft::new(grid.len()),
            phases,
        }
    }

    pub(crate) fn apply(&self, values: &mut [Complex64]) {
        debug_assert_eq!(values.len(), self.fft.len());
        self.fft.forward(values);
        for (v, phase) in values.iter_mut().zip(&self.phases) {
            *v *= phase;
        }
        self.fft.inverse(values);
    }
}
