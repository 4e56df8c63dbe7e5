//! Thomas elimination ("sweep method") for complex tridiagonal systems, and
//! its periodic (cyclic) extension.
//!
//! Band layout: for an `n × n` matrix `A`, `diag[i] = A[i][i]`,
//! `lower[i] = A[i+1][i]` and `upper[i] = A[i][i+1]`, so both off-diagonal
//! slices have length `n - 1`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Solves `A x = rhs` for tridiagonal `A`.
///
/// No pivoting is performed; the matrices this crate builds are strictly
/// diagonally dominant. A zero pivot is reported as an error.
pub fn solve_tridiagonal(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let factor = TridiagonalLu::new(lower, diag, upper)?;
    let mut x = rhs.to_vec();
    factor.solve_in_place(&mut x)?;
    Ok(x)
}

/// Forward-elimination coefficients of a tridiagonal matrix, reusable for
/// many right-hand sides.
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<Complex64>,
    /// `c'_i = upper_i / pivot_i`
    upper_scaled: Vec<Complex64>,
    inv_pivot: Vec<Complex64>,
}

impl TridiagonalLu {
    pub fn new(lower: &[Complex64], diag: &[Complex64], upper: &[Complex64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::LengthMismatch { expected: 1, found: 0 });
        }
        for band in [lower, upper] {
            if band.len() != n - 1 {
                return Err(Error::LengthMismatch {
                    expected: n - 1,
                    found: band.len(),
                });
            }
        }
        let mut upper_scaled = Vec::with_capacity(n.saturating_sub(1));
        let mut inv_pivot = Vec::with_capacity(n);
        let mut pivot = diag[0];
        for i in 0..n {
            if i > 0 {
                pivot = diag[i] - lower[i - 1] * upper_scaled[i - 1];
            }
            if pivot.norm_sqr() == 0.0 || !pivot.is_finite() {
                return Err(Error::ZeroPivot(i));
            }
            let inv = pivot.inv();
            inv_pivot.push(inv);
            if i + 1 < n {
                upper_scaled.push(upper[i] * inv);
            }
        }
        Ok(Self {
            lower: lower.to_vec(),
            upper_scaled,
            inv_pivot,
        })
    }

    pub fn len(&self) -> usize {
        self.inv_pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inv_pivot.is_empty()
    }

    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [Complex64]) -> Result<()> {
        let n = self.len();
        if rhs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i - 1] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.upper_scaled[i] * rhs[i + 1];
        }
        Ok(())
    }
}

/// Tridiagonal matrix plus the two corner entries `A[0][n-1] = top_right`
/// and `A[n-1][0] = bottom_left`, solved with one Thomas sweep and a
/// precomputed Sherman–Morrison correction.
#[derive(Debug, Clone)]
pub struct CyclicTridiagonal {
    inner: TridiagonalLu,
    correction: Vec<Complex64>,
    gamma: Complex64,
    top_right: Complex64,
    denominator: Complex64,
}

impl CyclicTridiagonal {
    pub fn new(
        lower: &[Complex64],
        diag: &[Complex64],
        upper: &[Complex64],
        top_right: Complex64,
        bottom_left: Complex64,
    ) -> Result<Self> {
        let n = diag.len();
        if n < 3 {
            return Err(Error::LengthMismatch { expected: 3, found: n });
        }
        // A = A' + v wᵀ with v = (γ, 0, …, 0, α), w = (1, 0, …, 0, β/γ).
        let gamma = -diag[0];
        let mut modified = diag.to_vec();
        modified[0] -= gamma;
        modified[n - 1] -= bottom_left * top_right / gamma;
        let inner = TridiagonalLu::new(lower, &modified, upper)?;
        let mut correction = alloc::vec![Complex64::new(0.0, 0.0); n];
        correction[0] = gamma;
        correction[n - 1] = bottom_left;
        inner.solve_in_place(&mut correction)?;
        let denominator = Complex64::new(1.0, 0.0) + correction[0] + top_right * correction[n - 1] / gamma;
        if denominator.norm_sqr() == 0.0 {
            return Err(Error::ZeroPivot(n - 1));
        }
        Ok(Self {
            inner,
            correction,
            gamma,
            top_right,
            denominator,
        })
    }

    pub fn len(&self) -> usize {
        self.inner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn solve_in_place(&self, rhs: &mut [Complex64]) -> Result<()> {
        self.inner.solve_in_place(rhs)?;
        let n = rhs.len();
        let factor = (rhs[0] + self.top_right * rhs[n - 1] / self.gamma) / self.denominator;
        for (x, z) in rhs.iter_mut().zip(&self.correction) {
            *x -= z * factor;
        }
        Ok(())
    }
}
