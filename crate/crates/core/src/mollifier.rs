//! Friedrichs mollifier, regularization of the five model potentials, and
//! moderateness exponents.
//!
//! The mollifier is the standard bump `φ(x) = c·exp(1/(x² - 1))` on `|x| < 1`
//! with `c` fixed by `∫φ = 1`, and `φ_ε(x) = φ(x/ε)/ε`. Regularized
//! potentials are
//!
//! | kind              | `p_ε`                         |
//! |-------------------|-------------------------------|
//! | zero              | `0`                           |
//! | constant one      | `1`                           |
//! | harmonic          | `(x - 5)²`                    |
//! | delta             | `w·φ_ε(x - site)`             |
//! | delta squared     | `w·φ_ε(x - site)²`            |
//!
//! Regular potentials are sampled exactly; [`mollify_potential`] convolves
//! them with `φ_ε` when a genuinely mollified family is needed.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::fit::{fit_log_log, LogLogFit};
use crate::grid::{ComplexField, Grid, RealField};
use crate::quadrature::adaptive_simpson;
use crate::{Error, Result};

/// Regularization parameter `ε ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Epsilon(f64);

impl Epsilon {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value <= 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::Epsilon(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MollifierKind {
    StandardBump,
}

/// A normalized mollifier together with the integrals derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    kind: MollifierKind,
    normalization: f64,
    square_integral: f64,
}

fn unit_bump(x: f64) -> f64 {
    let r = x * x - 1.0;
    if r < 0.0 {
        (1.0 / r).exp()
    } else {
        0.0
    }
}

impl Mollifier {
    const QUADRATURE_TOL: f64 = 1e-13;

    /// The standard bump, with `c` and `∫φ²` computed by adaptive quadrature.
    pub fn standard() -> Self {
        let raw = adaptive_simpson(&unit_bump, -1.0, 1.0, Self::QUADRATURE_TOL);
        let normalization = 1.0 / raw;
        let square_integral = adaptive_simpson(
            &|x| {
                let v = normalization * unit_bump(x);
                v * v
            },
            -1.0,
            1.0,
            Self::QUADRATURE_TOL,
        );
        Self {
            kind: MollifierKind::StandardBump,
            normalization,
            square_integral,
        }
    }

    pub fn kind(&self) -> MollifierKind {
        self.kind
    }

    /// The constant `c` with `∫φ = 1`.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    /// `∫φ²`.
    pub fn square_integral(&self) -> f64 {
        self.square_integral
    }

    /// `φ(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            MollifierKind::StandardBump => self.normalization * unit_bump(x),
        }
    }

    /// `φ(0)`, the maximum of `φ`.
    pub fn peak(&self) -> f64 {
        self.eval(0.0)
    }

    /// `φ_ε(x) = φ(x/ε)/ε`.
    pub fn scaled(&self, x: f64, epsilon: Epsilon) -> f64 {
        self.eval(x / epsilon.0) / epsilon.0
    }

    /// `φ_ε(j·dx)` for `|j| ≤ ⌊ε/dx⌋`, rescaled to unit discrete mass
    /// `dx Σ w_j = 1`. Index `radius` is the center.
    fn discrete_kernel(&self, epsilon: Epsilon, grid: &Grid) -> Result<(usize, Vec<f64>)> {
        let radius = (epsilon.0 / grid.dx()).floor() as usize;
        if 2 * radius + 1 > grid.len() {
            return Err(Error::Support {
                lo: -epsilon.0,
                hi: epsilon.0,
            });
        }
        let mut weights: Vec<f64> = (0..=2 * radius)
            .map(|i| self.scaled((i as f64 - radius as f64) * grid.dx(), epsilon))
            .collect();
        let mass: f64 = weights.iter().sum::<f64>() * grid.dx();
        if !(mass > 0.0) {
            return Err(Error::Unresolved(epsilon.0));
        }
        weights.iter_mut().for_each(|w| *w /= mass);
        Ok((radius, weights))
    }
}

/// `φ(x)`.
pub fn friedrichs_mollifier(x: f64, mollifier: &Mollifier) -> f64 {
    mollifier.eval(x)
}

/// `φ_ε(x)`; fails for `ε ∉ (0, 1]`.
pub fn scaled_mollifier(x: f64, epsilon: f64, mollifier: &Mollifier) -> Result<f64> {
    Ok(mollifier.scaled(x, Epsilon::new(epsilon)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PotentialKind {
    Zero,
    ConstantOne,
    HarmonicShifted,
    Delta,
    DeltaSquared,
}

impl PotentialKind {
    pub const ALL: [PotentialKind; 5] = [
        PotentialKind::Zero,
        PotentialKind::ConstantOne,
        PotentialKind::HarmonicShifted,
        PotentialKind::Delta,
        PotentialKind::DeltaSquared,
    ];

    pub fn is_singular(self) -> bool {
        matches!(self, PotentialKind::Delta | PotentialKind::DeltaSquared)
    }
}

/// Symbolic potential: a kind plus its site (center) and weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    kind: PotentialKind,
    site: f64,
    weight: f64,
}

impl PotentialSpec {
    pub fn new(kind: PotentialKind, site: f64, weight: f64) -> Result<Self> {
        if !(site.is_finite() && weight.is_finite()) {
            return Err(Error::Config("potential site and weight must be finite"));
        }
        if kind.is_singular() && !(weight > 0.0) {
            return Err(Error::Config("singular potentials need a positive weight"));
        }
        if !kind.is_singular() && weight < 0.0 {
            return Err(Error::Config("potential weight must be nonnegative"));
        }
        Ok(Self { kind, site, weight })
    }

    /// The model potentials: `0`, `1`, `(x-5)²`, `δ(x-3)/30`, `δ²(x-3)/30`.
    pub fn standard(kind: PotentialKind) -> Self {
        let (site, weight) = match kind {
            PotentialKind::Zero => (0.0, 0.0),
            PotentialKind::ConstantOne => (0.0, 1.0),
            PotentialKind::HarmonicShifted => (5.0, 1.0),
            PotentialKind::Delta | PotentialKind::DeltaSquared => (3.0, 1.0 / 30.0),
        };
        Self { kind, site, weight }
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn site(&self) -> f64 {
        self.site
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Pointwise value of a regular potential; `None` for singular kinds.
    pub fn regular_value(&self, x: f64) -> Option<f64> {
        match self.kind {
            PotentialKind::Zero => Some(0.0),
            PotentialKind::ConstantOne => Some(self.weight),
            PotentialKind::HarmonicShifted => Some(self.weight * (x - self.site) * (x - self.site)),
            PotentialKind::Delta | PotentialKind::DeltaSquared => None,
        }
    }
}

/// A concrete nonnegative potential `p_ε` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedPotential {
    spec: PotentialSpec,
    epsilon: Epsilon,
    field: RealField,
}

impl RegularizedPotential {
    /// Wraps an arbitrary field; it must be nonnegative.
    pub fn from_field(spec: PotentialSpec, epsilon: Epsilon, field: RealField) -> Result<Self> {
        if let Some((index, &value)) = field.values().iter().enumerate().find(|(_, v)| **v < 0.0) {
            return Err(Error::NegativePotential { index, value });
        }
        Ok(Self {
            spec,
            epsilon,
            field,
        })
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn field(&self) -> &RealField {
        &self.field
    }

    pub fn grid(&self) -> &Grid {
        self.field.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.field.values()
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(self)
    }

    /// `p_ε + amplitude·g`, still required to be nonnegative.
    pub fn perturbed(&self, g: &RealField, amplitude: f64) -> Result<Self> {
        if g.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values()
            .iter()
            .zip(g.values())
            .map(|(p, g)| p + amplitude * g)
            .collect();
        Self::from_field(self.spec, self.epsilon, RealField::new(*self.grid(), values)?)
    }
}

/// `p_ε` on `grid`. Regular kinds are sampled exactly; singular kinds use the
/// sampled kernel `φ_ε(x - site)`, rescaled to unit discrete mass (and then
/// squared for `δ²`).
pub fn regularize_potential(
    spec: &PotentialSpec,
    epsilon: Epsilon,
    grid: &Grid,
    mollifier: &Mollifier,
) -> Result<RegularizedPotential> {
    let values = match spec.kind {
        PotentialKind::Zero | PotentialKind::ConstantOne | PotentialKind::HarmonicShifted => grid
            .nodes()
            .into_iter()
            .map(|x| spec.regular_value(x).unwrap_or(0.0))
            .collect(),
        PotentialKind::Delta | PotentialKind::DeltaSquared => {
            let (lo, hi) = (spec.site - epsilon.0, spec.site + epsilon.0);
            if !grid.contains_interval(lo, hi) {
                return Err(Error::Support { lo, hi });
            }
            let mut kernel: Vec<f64> = grid
                .nodes()
                .into_iter()
                .map(|x| mollifier.scaled(x - spec.site, epsilon))
                .collect();
            let mass = kernel.iter().sum::<f64>() * grid.dx();
            if !(mass > 0.0) {
                return Err(Error::Unresolved(epsilon.0));
            }
            let square = spec.kind == PotentialKind::DeltaSquared;
            for k in kernel.iter_mut() {
                let normalized = *k / mass;
                *k = if square {
                    spec.weight * normalized * normalized
                } else {
                    spec.weight * normalized
                };
            }
            kernel
        }
    };
    RegularizedPotential::from_field(*spec, epsilon, RealField::new(*grid, values)?)
}

/// Like [`regularize_potential`], but regular kinds are also mollified:
/// `p_ε = p ∗ φ_ε` by periodic discrete convolution with a unit-mass kernel.
pub fn mollify_potential(
    spec: &PotentialSpec,
    epsilon: Epsilon,
    grid: &Grid,
    mollifier: &Mollifier,
) -> Result<RegularizedPotential> {
    if spec.kind.is_singular() {
        return regularize_potential(spec, epsilon, grid, mollifier);
    }
    let exact = regularize_potential(spec, epsilon, grid, mollifier)?;
    let (radius, weights) = mollifier.discrete_kernel(epsilon, grid)?;
    let values = circular_convolution(exact.values(), radius, &weights, grid.dx());
    // Rounding can leave -0.0-sized negatives where p vanishes.
    let values = values.into_iter().map(|v| v.max(0.0)).collect();
    RegularizedPotential::from_field(*spec, epsilon, RealField::new(*grid, values)?)
}

/// `u_{0,ε} = u0 ∗ φ_ε` (periodic, unit-mass discrete kernel).
pub fn mollify_field(f: &ComplexField, epsilon: Epsilon, mollifier: &Mollifier) -> Result<ComplexField> {
    let grid = f.grid();
    let (radius, weights) = mollifier.discrete_kernel(epsilon, grid)?;
    let n = grid.len();
    let values = (0..n)
        .map(|i| {
            weights
                .iter()
                .enumerate()
                .map(|(k, w)| f.values()[(i + n + radius - k) % n] * *w)
                .sum::<Complex64>()
                * grid.dx()
        })
        .collect();
    ComplexField::new(*grid, values)
}

fn circular_convolution(f: &[f64], radius: usize, weights: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|i| {
            weights
                .iter()
                .enumerate()
                .map(|(k, w)| f[(i + n + radius - k) % n] * w)
                .sum::<f64>()
                * dx
        })
        .collect()
}

/// `‖p_ε‖_∞`.
pub fn sup_norm(potential: &RegularizedPotential) -> f64 {
    potential.field.values().iter().copied().fold(0.0, f64::max)
}

/// Empirical moderateness order: least-squares slope `N` of `ln‖g_ε‖`
/// against `ln(1/ε)`, i.e. `‖g_ε‖ ≈ C ε^{-N}`.
///
/// Needs at least three samples with distinct `ε` and positive norms. A
/// nonpositive norm fails the fit; such a net is negligible at machine scale
/// and callers report it as such.
pub fn moderateness_exponent(samples: &[(f64, f64)]) -> Result<LogLogFit> {
    if samples.iter().any(|&(eps, _)| !(eps > 0.0)) {
        return Err(Error::Fit("positive epsilons"));
    }
    fit_log_log(samples.iter().map(|&(eps, norm)| (1.0 / eps, norm)))
}
