//! First-harmonic basis, rotation number, and closed-form powers.
//!
//! The two-dimensional subspace spanned by the first-harmonic cosine and
//! sine vectors is invariant under the uniform transform M. On that
//! subspace M acts like multiplication by the complex scalar
//!
//! ```text
//! z = beta + i alpha,   alpha = (2 xi - 1) sin(pi / n),   beta = cos(pi / n),
//! ```
//!
//! combined with a basis shift of pi/n per step:
//!
//! ```text
//! M^k S_0 = |z|^k ( cos(k arg z) S_k + sin(k arg z) C_k )
//! M^k C_0 = |z|^k ( cos(k arg z) C_k - sin(k arg z) S_k )
//! ```
//!
//! where C_k, S_k are the basis vectors evaluated at angles shifted by
//! k pi / n. Everything downstream (decay rates, the limiting ellipse,
//! periodicity) reads off these formulas.

use crate::error::{Error, Result};
use crate::polygon::{norm2, DivisionScheme, IterationMode, IterationTrace, Polygon};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Orthonormal first-harmonic pair at a given angular offset.
///
/// Entry i of C is sqrt(2/n) cos((2 i + steps) pi / n + delta), and S is
/// the sine twin. The offset is stored split into an integer number of
/// pi/n steps plus a free real part, so that shifting by whole steps is a
/// bitwise-exact relabeling of entries.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    n: usize,
    delta: f64,
    steps: usize,
    c: Vec<f64>,
    s: Vec<f64>,
}

impl HarmonicBasis {
    /// Basis at real offset `shift` (zero accumulated steps).
    pub fn new(n: usize, shift: f64) -> Result<Self> {
        Self::with_offset(n, shift, 0)
    }

    /// Basis C_k, S_k at k accumulated pi/n steps.
    pub fn at_step(n: usize, k: usize) -> Result<Self> {
        Self::with_offset(n, 0.0, k)
    }

    /// General constructor: total offset is delta + steps * pi / n.
    pub fn with_offset(n: usize, delta: f64, steps: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices { got: n });
        }
        let unit = PI / n as f64;
        let scale = (2.0 / n as f64).sqrt();
        let mut c = Vec::with_capacity(n);
        let mut s = Vec::with_capacity(n);
        for i in 0..n {
            // Reduce the index modulo the 2n-step full turn so that whole
            // relabelings reproduce entries bitwise.
            let angle = ((2 * i + steps) % (2 * n)) as f64 * unit + delta;
            c.push(scale * angle.cos());
            s.push(scale * angle.sin());
        }
        Ok(Self { n, delta, steps, c, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }
}

/// The complex scalar governing the first-harmonic dynamics.
#[derive(Debug, Clone, Copy)]
pub struct RotationNumber {
    pub n: usize,
    pub xi: f64,
    /// (2 xi - 1) sin(pi / n).
    pub alpha: f64,
    /// cos(pi / n).
    pub beta: f64,
    /// beta + i alpha.
    pub z: Complex64,
    /// |z|; per-step shrink factor of the unnormalized harmonic pair.
    pub modulus: f64,
    /// arg z in (-pi, pi]; per-step phase advance.
    pub phase: f64,
}

/// Builds the rotation number for a uniform scheme.
pub fn rotation_number(n: usize, xi: f64) -> Result<RotationNumber> {
    if n < 3 {
        return Err(Error::TooFewVertices { got: n });
    }
    if !(xi.is_finite() && xi > 0.0 && xi < 1.0) {
        return Err(Error::DivisionPointOutOfRange { value: xi });
    }
    let alpha = (2.0 * xi - 1.0) * (PI / n as f64).sin();
    let beta = (PI / n as f64).cos();
    let z = Complex64::new(beta, alpha);
    Ok(RotationNumber {
        n,
        xi,
        alpha,
        beta,
        z,
        modulus: z.norm(),
        phase: alpha.atan2(beta),
    })
}

impl RotationNumber {
    /// |z|^k; the norm of M^k applied to any unit vector in the
    /// first-harmonic plane. Equals cos^k(pi/n) at xi = 1/2.
    pub fn norm_at(&self, k: usize) -> f64 {
        self.modulus.powi(k as i32)
    }
}

/// M^k S_0 via the closed form.
pub fn closed_power_s(rn: &RotationNumber, k: usize) -> Vec<f64> {
    let basis = HarmonicBasis::at_step(rn.n, k).expect("n validated at construction");
    if k == 0 {
        return basis.s;
    }
    let r = rn.norm_at(k);
    let (sin_k, cos_k) = (k as f64 * rn.phase).sin_cos();
    (0..rn.n)
        .map(|i| r * (cos_k * basis.s[i] + sin_k * basis.c[i]))
        .collect()
}

/// M^k C_0 via the closed form.
pub fn closed_power_c(rn: &RotationNumber, k: usize) -> Vec<f64> {
    let basis = HarmonicBasis::at_step(rn.n, k).expect("n validated at construction");
    if k == 0 {
        return basis.c;
    }
    let r = rn.norm_at(k);
    let (sin_k, cos_k) = (k as f64 * rn.phase).sin_cos();
    (0..rn.n)
        .map(|i| r * (cos_k * basis.c[i] - sin_k * basis.s[i]))
        .collect()
}

/// Projection of a vector onto the first-harmonic plane.
#[derive(Debug, Clone, Copy)]
pub struct D2Projection {
    /// Coefficient along C_0.
    pub zeta: f64,
    /// Coefficient along S_0.
    pub eta: f64,
    /// atan2(eta, zeta); absent when the in-plane part is numerically zero.
    pub theta: Option<f64>,
    /// Norm of the component outside the plane.
    pub residual: f64,
}

/// Inner-product projection onto span(C_0, S_0); the basis is orthonormal
/// so no least squares is involved.
pub fn project_d2(vec: &[f64]) -> Result<D2Projection> {
    let n = vec.len();
    let basis = HarmonicBasis::at_step(n, 0)?;
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let zeta = dot(vec, &basis.c);
    let eta = dot(vec, &basis.s);
    let rest: Vec<f64> = (0..n)
        .map(|i| vec[i] - zeta * basis.c[i] - eta * basis.s[i])
        .collect();
    let theta = if zeta * zeta + eta * eta < 1e-24 {
        None
    } else {
        Some(eta.atan2(zeta))
    };
    Ok(D2Projection { zeta, eta, theta, residual: norm2(&rest) })
}

/// Normalized in-plane vertex vectors at step k for a raw phase advance
/// per step. The pair is
///
/// ```text
/// u^(k) = cos(theta_u - k phase) C_k + sin(theta_u - k phase) S_k
/// ```
///
/// and likewise for v with theta_v. Exposed with a free `phase` so that
/// constructed rational phases can be analyzed alongside ones realized by
/// an actual division point.
pub fn vertex_vectors_with_phase(
    theta_u: f64,
    theta_v: f64,
    n: usize,
    phase: f64,
    k: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let basis = HarmonicBasis::at_step(n, k)?;
    let drift = k as f64 * phase;
    let (su, cu) = (theta_u - drift).sin_cos();
    let (sv, cv) = (theta_v - drift).sin_cos();
    let u = (0..n).map(|i| cu * basis.c[i] + su * basis.s[i]).collect();
    let v = (0..n).map(|i| cv * basis.c[i] + sv * basis.s[i]).collect();
    Ok((u, v))
}

/// Normalized vertex-vector prediction for a uniform scheme.
pub fn predict_vertex_vectors(
    theta_u: f64,
    theta_v: f64,
    rn: &RotationNumber,
    k: usize,
) -> (Vec<f64>, Vec<f64>) {
    vertex_vectors_with_phase(theta_u, theta_v, rn.n, rn.phase, k)
        .expect("n validated at construction")
}

/// Closed-form trace of the normalized limit dynamics, snapshots 0..=steps.
pub fn predicted_trace(
    theta_u: f64,
    theta_v: f64,
    rn: &RotationNumber,
    steps: usize,
) -> IterationTrace {
    let polygons = (0..=steps)
        .map(|k| {
            let (u, v) = predict_vertex_vectors(theta_u, theta_v, rn, k);
            Polygon::new(u, v).expect("predicted vectors are valid coordinates")
        })
        .collect();
    IterationTrace::from_snapshots(
        polygons,
        IterationMode::Normalized,
        DivisionScheme::Uniform(rn.xi),
    )
}

/// Out-of-plane residual of the normalized iterate, per step.
///
/// Returns residual(k) for k = 0..=steps, where residual is the larger of
/// the two coordinate-vector residuals reported by [`project_d2`]. The
/// ratio residual(k+1)/residual(k) approaches the damping factor once the
/// transient has died down.
pub fn d2_decay_rate(p: &Polygon, xi: f64, steps: usize) -> Result<Vec<f64>> {
    let scheme = DivisionScheme::uniform(xi)?;
    let trace = crate::polygon::iterate(p, &scheme, steps, IterationMode::Normalized)?;
    trace
        .polygons()
        .iter()
        .map(|snap| {
            let rx = project_d2(snap.xs())?.residual;
            let ry = project_d2(snap.ys())?.residual;
            Ok(rx.max(ry))
        })
        .collect()
}
