//! Reference implementations shared by the integration tests. Deliberately
//! naive: dense elimination, O(n²) DFT, fixed-order Gauss–Legendre.

#![allow(dead_code)]

use fschro_core::Complex64;
use std::f64::consts::PI;

/// Composite 5-point Gauss–Legendre rule on `[a, b]` with `panels` panels.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let r = (10.0f64 / 7.0).sqrt();
    let inner = (5.0 - 2.0 * r).sqrt() / 3.0;
    let outer = (5.0 + 2.0 * r).sqrt() / 3.0;
    let w_inner = (322.0 + 13.0 * 70f64.sqrt()) / 900.0;
    let w_outer = (322.0 - 13.0 * 70f64.sqrt()) / 900.0;
    let nodes = [(0.0, 128.0 / 225.0), (-inner, w_inner), (inner, w_inner), (-outer, w_outer), (outer, w_outer)];
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            nodes.iter().map(|(t, w)| w * f(mid + 0.5 * h * t)).sum::<f64>() * 0.5 * h
        })
        .sum()
}

/// Solves a dense complex system by Gaussian elimination with partial
/// pivoting.
#[allow(clippy::needless_range_loop)]
pub fn dense_solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= factor * v;
            }
            let v = b[col];
            b[row] -= factor * v;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * x[k];
        }
        x[row] = acc / a[row][row];
    }
    x
}

pub fn mat_vec(a: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(x).map(|(a, x)| a * x).sum()).collect()
}

/// Unitary DFT by direct summation, `sign` = -1 forward, +1 inverse.
pub fn naive_dft(x: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = x.len();
    let scale = 1.0 / (n as f64).sqrt();
    (0..n)
        .map(|k| {
            x.iter()
                .enumerate()
                .map(|(j, v)| v * Complex64::from_polar(1.0, sign * 2.0 * PI * ((j * k) % n) as f64 / n as f64))
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

/// Signed mode index in `(-n/2, n/2]`.
pub fn signed_mode(k: usize, n: usize) -> f64 {
    if k <= n / 2 {
        k as f64
    } else {
        k as f64 - n as f64
    }
}

pub fn bump(x: f64) -> f64 {
    let r2 = (x - 5.0) * (x - 5.0);
    if r2 < 0.25 {
        (1.0 / (r2 - 0.25)).exp()
    } else {
        0.0
    }
}

pub fn bump_derivative(x: f64) -> f64 {
    let r2 = (x - 5.0) * (x - 5.0);
    if r2 < 0.25 {
        bump(x) * (-2.0 * (x - 5.0) / ((r2 - 0.25) * (r2 - 0.25)))
    } else {
        0.0
    }
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
