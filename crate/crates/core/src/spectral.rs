//! Eigenstructure of the uniform transform.
//!
//! For a uniform division point xi the transform is (1-xi) I + xi S with S
//! the cyclic upshift, so its eigenvectors are the Fourier vectors and its
//! eigenvalues are
//!
//! ```text
//! lambda_j = 1 - xi + xi * omega_j,    omega_j = exp(2 pi i j / n),
//! ```
//!
//! all lying on the circle of radius xi centered at 1 - xi. The damping
//! factor rho is the magnitude ratio between the second and first
//! nontrivial eigenvalue classes; it controls how fast everything outside
//! the dominant harmonic pair dies off, and it is minimized at xi = 1/2.

use crate::error::{Error, Result};
use crate::polygon::{DivisionScheme, TransformMatrix};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One eigenpair of the uniform transform.
#[derive(Debug, Clone)]
pub struct EigenPair {
    /// Fourier index j in 0..n.
    pub index: usize,
    /// nth root of unity omega_j.
    pub omega: Complex64,
    /// Eigenvalue 1 - xi + xi * omega_j.
    pub lambda: Complex64,
    /// Unit eigenvector with entry m equal to omega_j^m / sqrt(n).
    pub vector: Vec<Complex64>,
}

/// Damping diagnostics for a uniform scheme.
#[derive(Debug, Clone)]
pub struct DampingReport {
    pub n: usize,
    pub xi: f64,
    /// |lambda| over the nontrivial spectrum, in descending magnitude
    /// order (the order produced by [`eigen_magnitude_order`]).
    pub magnitudes: Vec<f64>,
    /// Ratio of the second nontrivial magnitude class to the first,
    /// computed from the exact complex eigenvalues.
    pub rho: f64,
    /// Grid minimizer of rho over xi in (0, 1) (999-point scan).
    pub argmin_xi: f64,
}

/// omega_j with the angle reduced to (-pi, pi] so that conjugate partners
/// j and n-j come out bitwise conjugate; the real roots +1 and -1 are
/// exact.
fn unit_root(n: usize, j: usize) -> Complex64 {
    let j = j % n;
    if j == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 2 * j == n {
        return Complex64::new(-1.0, 0.0);
    }
    let signed = if 2 * j > n { j as i64 - n as i64 } else { j as i64 };
    Complex64::from_polar(1.0, 2.0 * PI * signed as f64 / n as f64)
}

/// omega_j = exp(2 pi i j / n) for j = 0..n.
pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    assert!(n >= 1);
    (0..n).map(|j| unit_root(n, j)).collect()
}

fn check_spectral_inputs(n: usize, xi: f64) -> Result<()> {
    if n < 3 {
        return Err(Error::TooFewVertices { got: n });
    }
    if !(xi.is_finite() && xi > 0.0 && xi < 1.0) {
        return Err(Error::DivisionPointOutOfRange { value: xi });
    }
    Ok(())
}

/// Eigenvalue for Fourier index j.
pub fn eigenvalue(n: usize, xi: f64, j: usize) -> Complex64 {
    Complex64::new(1.0 - xi, 0.0) + xi * unit_root(n, j)
}

/// |lambda_j|, computed so that conjugate partners j and n-j give the
/// bitwise-identical value (the magnitude depends only on min(j, n-j)).
pub fn eigen_magnitude(n: usize, xi: f64, j: usize) -> f64 {
    let j = j % n;
    let m = j.min(n - j);
    let s = (PI * m as f64 / n as f64).sin();
    (1.0 - 4.0 * xi * (1.0 - xi) * s * s).max(0.0).sqrt()
}

/// Full eigenpair (omega_j, lambda_j, v_j).
pub fn eigenpair(n: usize, xi: f64, j: usize) -> Result<EigenPair> {
    check_spectral_inputs(n, xi)?;
    if j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let scale = (1.0 / n as f64).sqrt();
    let vector = (0..n)
        .map(|m| scale * unit_root(n, j * m % n))
        .collect();
    Ok(EigenPair {
        index: j,
        omega: unit_root(n, j),
        lambda: eigenvalue(n, xi, j),
        vector,
    })
}

/// Permutation of the nontrivial indices 1..n sorting |lambda| in
/// descending order, conjugate pairs adjacent, ties broken by ascending j.
///
/// |lambda_j| is strictly decreasing in min(j, n-j) for xi in (0, 1), so
/// the sort key is exact integer data and needs no magnitude tolerance.
pub fn eigen_magnitude_order(n: usize, _xi: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by_key(|&j| (j.min(n - j), j));
    order
}

/// Damping factor rho = |lambda(4 pi / n)| / |lambda(2 pi / n)| from the
/// exact complex eigenvalues, with the 999-point argmin scan attached.
///
/// Needs n >= 5 so that a second nontrivial magnitude class exists.
pub fn damping_factor(n: usize, xi: f64) -> Result<DampingReport> {
    check_spectral_inputs(n, xi)?;
    if n < 5 {
        return Err(Error::TooFewVertices { got: n });
    }
    let order = eigen_magnitude_order(n, xi);
    let magnitudes: Vec<f64> = order.iter().map(|&j| eigen_magnitude(n, xi, j)).collect();
    let rho = eigenvalue(n, xi, 2).norm() / eigenvalue(n, xi, 1).norm();
    Ok(DampingReport {
        n,
        xi,
        magnitudes,
        rho,
        argmin_xi: damping_argmin_scan(n, 999),
    })
}

/// Corrected closed form for rho (simplification of the eigenvalue ratio):
///
/// ```text
/// rho^2 = (1 - 4 xi (1-xi) sin^2(2 pi / n)) / (1 - 4 xi (1-xi) sin^2(pi / n))
/// ```
pub fn rho_closed_form(n: usize, xi: f64) -> f64 {
    let s1 = (PI / n as f64).sin();
    let s2 = (2.0 * PI / n as f64).sin();
    let w = 4.0 * xi * (1.0 - xi);
    ((1.0 - w * s2 * s2) / (1.0 - w * s1 * s1)).sqrt()
}

/// The published simplified formula, evaluated literally:
///
/// ```text
/// rho^2 = (1/xi - 4 (1-xi) sin^2(2 pi / n)) / (1/xi - 4 (1-xi) sin^2(4 pi / n))
/// ```
///
/// It does not equal the eigenvalue ratio (its denominator angle is
/// inconsistent with the unsimplified ratio); it is kept for side-by-side
/// reporting only. [`rho_closed_form`] carries the corrected algebra.
pub fn rho_printed_form(n: usize, xi: f64) -> f64 {
    let s2 = (2.0 * PI / n as f64).sin();
    let s4 = (4.0 * PI / n as f64).sin();
    ((1.0 / xi - 4.0 * (1.0 - xi) * s2 * s2) / (1.0 / xi - 4.0 * (1.0 - xi) * s4 * s4)).sqrt()
}

/// Grid minimizer of rho over the uniform open grid
/// xi_i = i / (grid_points + 1), i = 1..=grid_points.
pub fn damping_argmin_scan(n: usize, grid_points: usize) -> f64 {
    assert!(grid_points >= 3);
    let denom = (grid_points + 1) as f64;
    let mut best_xi = f64::NAN;
    let mut best_rho = f64::INFINITY;
    for i in 1..=grid_points {
        let xi = i as f64 / denom;
        let rho = eigenvalue(n, xi, 2).norm() / eigenvalue(n, xi, 1).norm();
        if rho < best_rho {
            best_rho = rho;
            best_xi = xi;
        }
    }
    best_xi
}

/// Residual ||M v - lambda v||_2 against the materialized dense matrix.
pub fn eigen_residual(n: usize, xi: f64, pair: &EigenPair) -> Result<f64> {
    let t = TransformMatrix::new(n, DivisionScheme::uniform(xi)?)?;
    let m = t.to_dense();
    let mut sum = 0.0;
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            acc += m[(i, j)] * pair.vector[j];
        }
        sum += (acc - pair.lambda * pair.vector[i]).norm_sqr();
    }
    Ok(sum.sqrt())
}
