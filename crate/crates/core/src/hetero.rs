//! Per-segment division points: the limit of the heterogeneous iteration.
//!
//! With different division points per segment the transform stays
//! row-stochastic but its columns no longer sum to one, so the centroid
//! is not preserved. The unnormalized iteration still collapses to a
//! single point: the barycenter weighted by the left fixed probability
//! vector w (w^T M = w^T), which reduces to the ordinary centroid exactly
//! for uniform schemes.

use crate::error::{Error, Result};
use crate::polygon::{Polygon, TransformMatrix};
use nalgebra::{DMatrix, DVector};

/// Where the heterogeneous iteration is headed.
#[derive(Debug, Clone)]
pub struct LimitPrediction {
    /// Left fixed probability vector w of the transform.
    pub weights: Vec<f64>,
    /// (w . xs, w . ys); the guaranteed limit of every vertex.
    pub point: (f64, f64),
    /// Second-largest eigenvalue magnitude of the transform; governs the
    /// convergence rate toward the limit point.
    pub spectral_gap: f64,
}

/// The unique probability vector w with w^T M = w^T.
///
/// Existence and uniqueness follow from irreducibility of the cyclic
/// two-diagonal pattern with division points inside (0, 1). Solved
/// densely: (M^T - I) w = 0 with the last equation replaced by the
/// normalization sum(w) = 1.
pub fn left_fixed_vector(t: &TransformMatrix) -> Vec<f64> {
    let n = t.n();
    let mut a = t.to_dense().transpose() - DMatrix::<f64>::identity(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    rhs[n - 1] = 1.0;
    let w = a
        .lu()
        .solve(&rhs)
        .expect("cyclic stochastic transform has a unique stationary vector");
    // Pin the normalization exactly.
    let sum: f64 = w.iter().sum();
    w.iter().map(|x| x / sum).collect()
}

/// (w . xs, w . ys) for the polygon; the limit point of the unnormalized
/// iteration under this transform.
pub fn predict_limit_point(p: &Polygon, t: &TransformMatrix) -> Result<(f64, f64)> {
    if p.n() != t.n() {
        return Err(Error::SizeMismatch { expected: t.n(), got: p.n() });
    }
    let w = left_fixed_vector(t);
    Ok(weighted_point(&w, p))
}

fn weighted_point(w: &[f64], p: &Polygon) -> (f64, f64) {
    let x = w.iter().zip(p.xs()).map(|(wi, xi)| wi * xi).sum();
    let y = w.iter().zip(p.ys()).map(|(wi, yi)| wi * yi).sum();
    (x, y)
}

impl LimitPrediction {
    /// Weights, limit point, and numerically computed spectral gap.
    pub fn compute(p: &Polygon, t: &TransformMatrix) -> Result<Self> {
        if p.n() != t.n() {
            return Err(Error::SizeMismatch { expected: t.n(), got: p.n() });
        }
        let weights = left_fixed_vector(t);
        let point = weighted_point(&weights, p);
        let mut magnitudes: Vec<f64> = t
            .to_dense()
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .collect();
        magnitudes.sort_by(|a, b| b.partial_cmp(a).expect("finite magnitudes"));
        Ok(Self {
            weights,
            point,
            spectral_gap: magnitudes[1],
        })
    }
}

/// Least common multiple of component periods; the combined period of a
/// per-segment configuration when each segment is individually periodic.
pub fn hetero_period_lcm(periods: &[u64]) -> Result<u64> {
    assert!(!periods.is_empty() && periods.iter().all(|&p| p >= 1));
    periods.iter().try_fold(1u64, |acc, &p| {
        let g = gcd(acc, p);
        (acc / g).checked_mul(p).ok_or(Error::Overflow)
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
