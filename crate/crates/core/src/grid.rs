//! Uniform periodic 1D grid, sampled fields, discrete norms and the
//! unitary discrete Fourier transform.
//!
//! Nodes are `x_j = x_min + j·dx` for `j = 0..n`, with `dx = (x_max - x_min)/n`;
//! `x_max` is identified with `x_min`. Quadrature everywhere is the periodic
//! rectangle rule, which is spectrally accurate for smooth periodic data and
//! consistent with the transform normalization, so Plancherel holds exactly
//! in exact arithmetic.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent float methods shadow it when std is linked
use num_traits::Float;

use crate::fft::Fft;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n: usize,
    dx: f64,
}

impl Grid {
    /// `n` must be a power of two, at least 8.
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::Domain { x_min, x_max });
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::GridSize(n));
        }
        Ok(Self {
            x_min,
            x_max,
            n,
            dx: (x_max - x_min) / n as f64,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Period `x_max - x_min`.
    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn node(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.node(j)).collect()
    }

    /// Signed mode number of transform index `k`, in `(-n/2, n/2]`.
    pub fn mode(&self, k: usize) -> i64 {
        let n = self.n as i64;
        let k = k as i64;
        if k > n / 2 {
            k - n
        } else {
            k
        }
    }

    /// Wavenumber `ξ_k = 2π·mode(k)/L` of transform index `k`.
    pub fn wavenumber(&self, k: usize) -> f64 {
        2.0 * PI * self.mode(k) as f64 / self.length()
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.wavenumber(k)).collect()
    }

    /// Same domain with `factor` times as many nodes. Nodes of `self` are
    /// every `factor`-th node of the refined grid.
    pub fn refine(&self, factor: usize) -> Result<Self> {
        Self::new(self.x_min, self.x_max, self.n * factor)
    }

    /// Whether `[lo, hi]` lies strictly inside `(x_min, x_max)`.
    pub fn contains_interval(&self, lo: f64, hi: f64) -> bool {
        lo > self.x_min && hi < self.x_max
    }
}

/// Complex samples on a [`Grid`]; all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: alloc::vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    /// Samples `f` at every node. Panics if `f` returns a non-finite value.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.node(j))).collect();
        Self::new(grid, values).expect("sampled function is not finite")
    }

    /// Builds a field from values that the caller guarantees are finite and
    /// of the right length.
    pub(crate) fn from_raw(grid: Grid, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn l2_norm(&self) -> f64 {
        l2_norm(self)
    }

    /// `⟨f, g⟩ = dx Σ conj(f_j) g_j`.
    pub fn inner(&self, other: &ComplexField) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let s: Complex64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(s * self.grid.dx)
    }

    pub fn scale(&self, c: Complex64) -> ComplexField {
        let values = self.values.iter().map(|v| v * c).collect();
        ComplexField::new(self.grid, values).expect("scaled field overflowed")
    }

    pub fn sub(&self, other: &ComplexField) -> Result<ComplexField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        ComplexField::new(self.grid, values)
    }

    pub fn add(&self, other: &ComplexField) -> Result<ComplexField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        ComplexField::new(self.grid, values)
    }

    /// Every `factor`-th sample, on the grid with `n / factor` nodes.
    pub fn restrict(&self, factor: usize) -> Result<ComplexField> {
        if factor == 0 || !self.grid.n.is_multiple_of(factor) {
            return Err(Error::GridSize(self.grid.n));
        }
        let coarse = Grid::new(self.grid.x_min, self.grid.x_max, self.grid.n / factor)?;
        let values = self.values.iter().step_by(factor).copied().collect();
        Ok(ComplexField::from_raw(coarse, values))
    }
}

/// Real samples on a [`Grid`]; all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Self {
            grid,
            values: alloc::vec![0.0; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.len()).map(|j| f(grid.node(j))).collect();
        Self::new(grid, values).expect("sampled function is not finite")
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Rectangle-rule integral over one period.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `sqrt(dx Σ |f_j|²)`.
pub fn l2_norm(f: &ComplexField) -> f64 {
    (f.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * f.grid.dx).sqrt()
}

/// Unitary DFT of `f`. Index `k` carries wavenumber [`Grid::wavenumber`].
pub fn spectral_coefficients(f: &ComplexField) -> ComplexField {
    let mut values = f.values.clone();
    Fft::new(f.grid.n).forward(&mut values);
    ComplexField::from_raw(f.grid, values)
}

/// Inverse of [`spectral_coefficients`].
pub fn inverse_spectral(coefficients: &ComplexField) -> ComplexField {
    let mut values = coefficients.values.clone();
    Fft::new(coefficients.grid.n).inverse(&mut values);
    ComplexField::from_raw(coefficients.grid, values)
}

/// `|ξ_k|^power` for every transform index.
pub(crate) fn symbol(grid: &Grid, power: f64) -> Vec<f64> {
    (0..grid.n)
        .map(|k| {
            let xi = grid.wavenumber(k).abs();
            if xi == 0.0 {
                0.0
            } else {
                xi.powf(power)
            }
        })
        .collect()
}

/// `‖(-Δ)^{s/2} f‖`, the norm of `|ξ_k|^s f̂_k` in coefficient space.
pub fn hs_seminorm(f: &ComplexField, s: f64) -> f64 {
    assert!(s > 0.0, "seminorm order must be positive, got {s}");
    let coefficients = spectral_coefficients(f);
    let weights = symbol(&f.grid, 2.0 * s);
    let sum: f64 = coefficients
        .values
        .iter()
        .zip(&weights)
        .map(|(c, w)| w * c.norm_sqr())
        .sum();
    (sum * f.grid.dx).sqrt()
}
