//! The limiting ellipse: coefficient matrix, exact 2x2 SVD, published
//! sigma formula for comparison, and an empirical conic fitter.
//!
//! The normalized vertex pair at step k traces the image of the unit
//! circle under a 2x2 matrix whose rows are (cos a, sin a) and
//! (cos b, sin b), with a and b the drifted phases of the two coordinate
//! vectors. Its SVD fixes the ellipse completely: the left rotation pins
//! the principal axis at +-45 degrees whenever the singular values are
//! distinct, and the singular values scale the semi-axes by sqrt(2/n).

use crate::error::{Error, Result};
use crate::harmonic::RotationNumber;
use nalgebra::{Matrix3, Vector3};

/// Row matrix of the two drifted-phase direction vectors.
#[derive(Debug, Clone, Copy)]
pub struct CoefficientMatrix {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl CoefficientMatrix {
    /// Rows (cos a, sin a) and (cos b, sin b).
    pub fn from_phases(a: f64, b: f64) -> Self {
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = b.sin_cos();
        Self { a11: ca, a12: sa, a21: cb, a22: sb }
    }

    /// Phases a = theta_u - k arg z and b = theta_v - k arg z.
    pub fn from_rotation(theta_u: f64, theta_v: f64, rn: &RotationNumber, k: usize) -> Self {
        let (a, b) = drifted_phases(theta_u, theta_v, rn.phase, k);
        Self::from_phases(a, b)
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    /// Exact decomposition with ellipse scaling sqrt(2/n) applied to the
    /// semi-axes.
    pub fn decompose(&self, n: usize) -> EllipseDecomposition {
        let mut dec = svd_2x2(&self.entries());
        let scale = (2.0 / n as f64).sqrt();
        dec.semi_axes = (scale * dec.sigma1, scale * dec.sigma2);
        dec
    }
}

/// The drifted phase pair (a, b) at step k.
pub fn drifted_phases(theta_u: f64, theta_v: f64, arg_z: f64, k: usize) -> (f64, f64) {
    let drift = k as f64 * arg_z;
    (theta_u - drift, theta_v - drift)
}

/// Rotation - diagonal - orthogonal factorization of a 2x2 matrix.
#[derive(Debug, Clone)]
pub struct EllipseDecomposition {
    /// Left factor; always a proper rotation (det = +1).
    pub u: [[f64; 2]; 2],
    pub sigma1: f64,
    pub sigma2: f64,
    /// Right factor; orthogonal, possibly a reflection.
    pub v: [[f64; 2]; 2],
    /// (scale * sigma1, scale * sigma2); scale is 1 for a bare SVD and
    /// sqrt(2/n) when produced through [`CoefficientMatrix::decompose`].
    pub semi_axes: (f64, f64),
}

impl EllipseDecomposition {
    /// Principal-axis angle: direction of U's first column, reduced to
    /// (-pi/2, pi/2]. Undefined (CircleDegenerate) when the singular
    /// values are closer than 1e-9.
    pub fn orientation(&self) -> Result<f64> {
        if self.sigma1 - self.sigma2 < 1e-9 {
            return Err(Error::CircleDegenerate);
        }
        Ok(principal_angle(self.u[1][0].atan2(self.u[0][0])))
    }

    /// U * diag(sigma) * V^T.
    pub fn reconstruct(&self) -> [[f64; 2]; 2] {
        let d = [self.sigma1, self.sigma2];
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..2).map(|k| self.u[i][k] * d[k] * self.v[j][k]).sum();
            }
        }
        out
    }
}

fn principal_angle(mut angle: f64) -> f64 {
    if angle > std::f64::consts::FRAC_PI_2 {
        angle -= std::f64::consts::PI;
    } else if angle <= -std::f64::consts::FRAC_PI_2 {
        angle += std::f64::consts::PI;
    }
    angle
}

/// Closed-form SVD of a 2x2 matrix: A = U diag(sigma1, sigma2) V^T with
/// sigma1 >= sigma2 >= 0 and det U = +1. Any reflection is folded into V.
///
/// Uses the rotation split
/// E = (a+d)/2, F = (a-d)/2, G = (c+b)/2, H = (c-b)/2, from which
/// sigma = hypot(E,H) +- hypot(F,G) and the two rotation angles are the
/// half-sum and half-difference of atan2(G,F) and atan2(H,E).
pub fn svd_2x2(m: &[[f64; 2]; 2]) -> EllipseDecomposition {
    let (a, b, c, d) = (m[0][0], m[0][1], m[1][0], m[1][1]);
    let e = (a + d) / 2.0;
    let f = (a - d) / 2.0;
    let g = (c + b) / 2.0;
    let h = (c - b) / 2.0;
    let q = e.hypot(h);
    let r = f.hypot(g);
    let sigma1 = q + r;
    let sigma2_signed = q - r;
    let a1 = g.atan2(f); // phi + theta
    let a2 = h.atan2(e); // phi - theta
    let phi = (a1 + a2) / 2.0;
    let theta = (a1 - a2) / 2.0;
    let (sp, cp) = phi.sin_cos();
    let (st, ct) = theta.sin_cos();
    let u = [[cp, -sp], [sp, cp]];
    let mut v = [[ct, -st], [st, ct]];
    let sigma2 = if sigma2_signed < 0.0 {
        v[0][1] = -v[0][1];
        v[1][1] = -v[1][1];
        -sigma2_signed
    } else {
        sigma2_signed
    };
    EllipseDecomposition {
        u,
        sigma1,
        sigma2,
        v,
        semi_axes: (sigma1, sigma2),
    }
}

/// The published closed form for the singular values, evaluated literally:
///
/// ```text
/// sqrt(2/n) * sqrt(1 +- sin(theta_u + theta_v - 2 k arg z))
/// ```
///
/// Kept verbatim for side-by-side reporting. It disagrees with the exact
/// SVD in general (see the identity test), so [`svd_2x2`] is the ground
/// truth for semi-axes.
pub fn published_sigma(theta_u: f64, theta_v: f64, k: usize, arg_z: f64, n: usize) -> (f64, f64) {
    let scale = (2.0 / n as f64).sqrt();
    let s = (theta_u + theta_v - 2.0 * k as f64 * arg_z).sin();
    (
        scale * (1.0 + s).max(0.0).sqrt(),
        scale * (1.0 - s).max(0.0).sqrt(),
    )
}

/// Geometric ellipse parameters recovered from scattered points.
#[derive(Debug, Clone, Copy)]
pub struct EllipseFit {
    pub center: (f64, f64),
    /// (major, minor).
    pub semi_axes: (f64, f64),
    /// Major-axis angle in (-pi/2, pi/2].
    pub angle: f64,
}

/// Direct least-squares conic fit constrained to ellipses
/// (Fitzgibbon/Halir-Flusser), followed by conversion to geometric form.
///
/// Needs at least 6 points, not all collinear, and data that actually
/// determines an ellipse; anything else is a [`Error::DegenerateFit`].
pub fn fit_ellipse(points: &[(f64, f64)]) -> Result<EllipseFit> {
    if points.len() < 6 {
        return Err(Error::DegenerateFit("fewer than 6 points"));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let spread = (points
        .iter()
        .map(|p| (p.0 - mx).powi(2) + (p.1 - my).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    if spread < 1e-300 {
        return Err(Error::DegenerateFit("coincident points"));
    }
    let scaled: Vec<(f64, f64)> = points
        .iter()
        .map(|p| ((p.0 - mx) / spread, (p.1 - my) / spread))
        .collect();

    // Scatter blocks of the quadratic and linear design columns.
    let mut s1 = Matrix3::zeros();
    let mut s2 = Matrix3::zeros();
    let mut s3 = Matrix3::zeros();
    for &(x, y) in &scaled {
        let d1 = Vector3::new(x * x, x * y, y * y);
        let d2 = Vector3::new(x, y, 1.0);
        s1 += d1 * d1.transpose();
        s2 += d1 * d2.transpose();
        s3 += d2 * d2.transpose();
    }
    let s3_inv = s3.try_inverse().ok_or(Error::DegenerateFit("collinear points"))?;
    let t = -s3_inv * s2.transpose();
    let m0 = s1 + s2 * t;
    // Apply the inverse ellipse-constraint matrix.
    let m = Matrix3::new(
        m0[(2, 0)] / 2.0, m0[(2, 1)] / 2.0, m0[(2, 2)] / 2.0,
        -m0[(1, 0)], -m0[(1, 1)], -m0[(1, 2)],
        m0[(0, 0)] / 2.0, m0[(0, 1)] / 2.0, m0[(0, 2)] / 2.0,
    );

    // The elliptic eigenvector is the one with 4 A C - B^2 > 0.
    let eigenvalues = m.complex_eigenvalues();
    let mat_scale = m.norm().max(1.0);
    let mut quad: Option<Vector3<f64>> = None;
    for lambda in eigenvalues.iter() {
        if lambda.im.abs() > 1e-9 * mat_scale {
            continue;
        }
        let shifted = m - Matrix3::identity() * lambda.re;
        if let Some(vec) = null_vector_3(&shifted) {
            if 4.0 * vec[0] * vec[2] - vec[1] * vec[1] > 0.0 {
                quad = Some(vec);
                break;
            }
        }
    }
    let quad = quad.ok_or(Error::DegenerateFit("no elliptic solution"))?;
    let linear = t * quad;
    let (ca, cb, cc) = (quad[0], quad[1], quad[2]);
    let (cd, ce, cf) = (linear[0], linear[1], linear[2]);

    // Geometric form in the scaled frame.
    let disc = cb * cb - 4.0 * ca * cc;
    if disc >= 0.0 {
        return Err(Error::DegenerateFit("conic is not an ellipse"));
    }
    let cx = (2.0 * cc * cd - cb * ce) / disc;
    let cy = (2.0 * ca * ce - cb * cd) / disc;
    let f0 = ca * cx * cx + cb * cx * cy + cc * cy * cy + cd * cx + ce * cy + cf;
    // Eigenvalues of the quadratic form [[A, B/2], [B/2, C]].
    let half_trace = (ca + cc) / 2.0;
    let det_root = ((ca - cc) / 2.0).hypot(cb / 2.0);
    let lam_small = half_trace - det_root * half_trace.signum();
    let lam_large = half_trace + det_root * half_trace.signum();
    let major_sq = -f0 / lam_small;
    let minor_sq = -f0 / lam_large;
    if !(major_sq > 0.0 && minor_sq > 0.0) {
        return Err(Error::DegenerateFit("conic is not an ellipse"));
    }
    // Major axis is the eigenvector of the smaller-magnitude eigenvalue.
    let angle = if cb.abs() < 1e-300 && (ca - cc).abs() < 1e-300 {
        0.0 // circle: direction arbitrary
    } else {
        let (vx, vy) = if (lam_small - ca).abs() > (lam_small - cc).abs() {
            (cb / 2.0, lam_small - ca)
        } else {
            (lam_small - cc, cb / 2.0)
        };
        principal_angle(vy.atan2(vx))
    };

    Ok(EllipseFit {
        center: (mx + spread * cx, my + spread * cy),
        semi_axes: (spread * major_sq.sqrt(), spread * minor_sq.sqrt()),
        angle,
    })
}

/// Null-space direction of a (near-)singular 3x3 matrix via the largest
/// cross product of row pairs.
fn null_vector_3(m: &Matrix3<f64>) -> Option<Vector3<f64>> {
    let r0 = Vector3::new(m[(0, 0)], m[(0, 1)], m[(0, 2)]);
    let r1 = Vector3::new(m[(1, 0)], m[(1, 1)], m[(1, 2)]);
    let r2 = Vector3::new(m[(2, 0)], m[(2, 1)], m[(2, 2)]);
    let candidates = [r0.cross(&r1), r0.cross(&r2), r1.cross(&r2)];
    let best = candidates
        .iter()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())?;
    if best.norm() < 1e-300 {
        return None;
    }
    Some(best / best.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonic::rotation_number;
    use crate::rng::Xoshiro256StarStar;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn frob_diff(a: &[[f64; 2]; 2], b: &[[f64; 2]; 2]) -> f64 {
        let mut sum = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                sum += (a[i][j] - b[i][j]).powi(2);
            }
        }
        sum.sqrt()
    }

    #[test]
    fn coefficient_matrix_special_cases() {
        // Quarter-phase offset at k = 0 is the identity.
        let rn = rotation_number(8, 0.3).unwrap();
        let m = CoefficientMatrix::from_rotation(0.0, FRAC_PI_2, &rn, 0);
        assert!(frob_diff(&m.entries(), &[[1.0, 0.0], [0.0, 1.0]]) < 1e-15);

        // Equal phases collapse to equal rows.
        let m = CoefficientMatrix::from_rotation(0.8, 0.8, &rn, 5);
        assert!((m.a11 - m.a21).abs() < 1e-15 && (m.a12 - m.a22).abs() < 1e-15);

        // At xi = 1/2 the drift vanishes: independent of k.
        let rn = rotation_number(8, 0.5).unwrap();
        let m0 = CoefficientMatrix::from_rotation(0.4, 1.3, &rn, 0);
        let m9 = CoefficientMatrix::from_rotation(0.4, 1.3, &rn, 9);
        assert!(frob_diff(&m0.entries(), &m9.entries()) < 1e-15);
    }

    #[test]
    fn svd_identity() {
        let dec = svd_2x2(&[[1.0, 0.0], [0.0, 1.0]]);
        assert!((dec.sigma1 - 1.0).abs() < 1e-15);
        assert!((dec.sigma2 - 1.0).abs() < 1e-15);
        assert!(frob_diff(&dec.reconstruct(), &[[1.0, 0.0], [0.0, 1.0]]) < 1e-14);
        // U and V agree up to a common rotation: U V^T = I here.
        let mut uvt = [[0.0; 2]; 2];
        for (i, row) in uvt.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..2).map(|k| dec.u[i][k] * dec.v[j][k]).sum();
            }
        }
        assert!(frob_diff(&uvt, &[[1.0, 0.0], [0.0, 1.0]]) < 1e-14);
    }

    #[test]
    fn svd_of_phase_rows() {
        // Oracle: eigenvalues of A A^T = [[1, c], [c, 1]] are 1 +- c.
        let m = CoefficientMatrix::from_phases(0.0, FRAC_PI_4);
        let dec = svd_2x2(&m.entries());
        let c = (0.0f64 - FRAC_PI_4).cos();
        assert!((dec.sigma1 - (1.0 + c).sqrt()).abs() < 1e-12);
        assert!((dec.sigma2 - (1.0 - c).sqrt()).abs() < 1e-12);
        assert!((dec.sigma1 - 1.3065629648763766).abs() < 1e-12);
        assert!((dec.sigma2 - 0.5411961001461971).abs() < 1e-12);

        // Quarter separation gives the circle case.
        let m = CoefficientMatrix::from_phases(0.3, 0.3 + FRAC_PI_2);
        let dec = svd_2x2(&m.entries());
        assert!((dec.sigma1 - 1.0).abs() < 1e-12);
        assert!((dec.sigma2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn svd_reconstructs_random_matrices() {
        let mut rng = Xoshiro256StarStar::from_seed(99);
        for _ in 0..2000 {
            let m = [
                [rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)],
                [rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)],
            ];
            let dec = svd_2x2(&m);
            assert!(dec.sigma1 >= dec.sigma2 && dec.sigma2 >= 0.0);
            assert!(frob_diff(&dec.reconstruct(), &m) < 1e-12);
            // Orthogonality of both factors.
            for f in [&dec.u, &dec.v] {
                let dot01 = f[0][0] * f[0][1] + f[1][0] * f[1][1];
                let n0 = f[0][0] * f[0][0] + f[1][0] * f[1][0];
                let n1 = f[0][1] * f[0][1] + f[1][1] * f[1][1];
                assert!(dot01.abs() < 1e-12 && (n0 - 1.0).abs() < 1e-12 && (n1 - 1.0).abs() < 1e-12);
            }
            // det U = +1.
            assert!((dec.u[0][0] * dec.u[1][1] - dec.u[0][1] * dec.u[1][0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_values_match_gram_eigenvalues() {
        // Quadratic-formula oracle on A^T A.
        let mut rng = Xoshiro256StarStar::from_seed(5);
        for _ in 0..500 {
            let m = [
                [rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)],
                [rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)],
            ];
            let g00 = m[0][0] * m[0][0] + m[1][0] * m[1][0];
            let g01 = m[0][0] * m[0][1] + m[1][0] * m[1][1];
            let g11 = m[0][1] * m[0][1] + m[1][1] * m[1][1];
            let mean = (g00 + g11) / 2.0;
            let root = ((g00 - g11) / 2.0).hypot(g01);
            let dec = svd_2x2(&m);
            assert!((dec.sigma1 - (mean + root).max(0.0).sqrt()).abs() < 1e-11);
            assert!((dec.sigma2 - (mean - root).max(0.0).sqrt()).abs() < 1e-11);
        }
    }

    #[test]
    fn coefficient_invariants_and_k_independence() {
        let rn = rotation_number(20, 0.25).unwrap();
        let mut rng = Xoshiro256StarStar::from_seed(31);
        for _ in 0..200 {
            let tu = rng.uniform(0.0, 2.0 * PI);
            let tv = rng.uniform(0.0, 2.0 * PI);
            let k = rng.below(100) as usize;
            let dec = CoefficientMatrix::from_rotation(tu, tv, &rn, k).decompose(20);
            let (s1, s2) = (dec.sigma1, dec.sigma2);
            assert!((s1 * s1 + s2 * s2 - 2.0).abs() < 1e-12);
            assert!((s1 * s2 - (tu - tv).sin().abs()).abs() < 1e-12);
            // Shape is k-invariant.
            let dec0 = CoefficientMatrix::from_rotation(tu, tv, &rn, 0).decompose(20);
            assert!((s1 - dec0.sigma1).abs() < 1e-12 && (s2 - dec0.sigma2).abs() < 1e-12);
        }
    }

    #[test]
    fn orientation_is_locked_to_quarter_pi() {
        let rn = rotation_number(20, 0.25).unwrap();
        let mut rng = Xoshiro256StarStar::from_seed(77);
        let mut checked = 0;
        while checked < 1000 {
            let tu = rng.uniform(0.0, 2.0 * PI);
            let tv = rng.uniform(0.0, 2.0 * PI);
            let k = rng.below(200) as usize;
            if (tu - tv).cos().abs() <= 1e-3 {
                continue;
            }
            let dec = CoefficientMatrix::from_rotation(tu, tv, &rn, k).decompose(20);
            let angle = dec.orientation().unwrap();
            assert!(
                (angle.abs() - FRAC_PI_4).abs() < 1e-9,
                "angle {} for tu={} tv={} k={}",
                angle,
                tu,
                tv,
                k
            );
            checked += 1;
        }
    }

    #[test]
    fn orientation_rejects_circles() {
        let m = CoefficientMatrix::from_phases(0.2, 0.2 + FRAC_PI_2);
        let dec = m.decompose(10);
        assert_eq!(dec.orientation(), Err(Error::CircleDegenerate));
    }

    #[test]
    fn published_sigma_disagrees_on_identity_case() {
        // Exact SVD of the identity rows gives equal singular values; the
        // published formula gives (sqrt 2, 0) at the same inputs.
        let n = 10;
        let scale = (2.0 / n as f64).sqrt();
        let (p1, p2) = published_sigma(0.0, FRAC_PI_2, 0, -0.07, n);
        assert!((p1 - 2f64.sqrt() * scale).abs() < 1e-12);
        assert!(p2.abs() < 1e-12);
        let dec = CoefficientMatrix::from_phases(0.0, FRAC_PI_2).decompose(n);
        assert!((dec.semi_axes.0 - scale).abs() < 1e-12);
        assert!((dec.semi_axes.1 - scale).abs() < 1e-12);
        assert!((p1 - dec.semi_axes.0).abs() > 0.1);
    }

    #[test]
    fn published_sigma_agrees_only_on_the_circle_slice() {
        // When theta_u + theta_v - 2 k arg z = 0 the printed values are
        // (1, 1) * sqrt(2/n); the exact SVD matches only if additionally
        // cos(theta_u - theta_v) = 0.
        let n = 12;
        let scale = (2.0 / n as f64).sqrt();
        let arg_z = -0.05;
        for &(tu, tv) in &[(0.4, -0.4), (FRAC_PI_4, -FRAC_PI_4), (1.0, -1.0)] {
            let (p1, p2) = published_sigma(tu, tv, 0, arg_z, n);
            assert!((p1 - scale).abs() < 1e-12 && (p2 - scale).abs() < 1e-12);
            let dec = CoefficientMatrix::from_phases(tu, tv).decompose(n);
            let gap = (dec.semi_axes.0 - p1).abs();
            if (tu - tv).cos().abs() < 1e-12 {
                assert!(gap < 1e-12);
            } else {
                assert!(gap > 1e-6);
            }
        }
    }

    fn ellipse_points(
        cx: f64,
        cy: f64,
        a: f64,
        b: f64,
        angle: f64,
        count: usize,
    ) -> Vec<(f64, f64)> {
        (0..count)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / count as f64;
                let (x, y) = (a * t.cos(), b * t.sin());
                (
                    cx + x * angle.cos() - y * angle.sin(),
                    cy + x * angle.sin() + y * angle.cos(),
                )
            })
            .collect()
    }

    #[test]
    fn fit_recovers_axis_aligned_ellipse() {
        let pts = ellipse_points(0.0, 0.0, 2.0, 1.0, 0.0, 20);
        let fit = fit_ellipse(&pts).unwrap();
        assert!(fit.center.0.abs() < 1e-9 && fit.center.1.abs() < 1e-9);
        assert!((fit.semi_axes.0 - 2.0).abs() < 1e-9);
        assert!((fit.semi_axes.1 - 1.0).abs() < 1e-9);
        assert!(fit.angle.abs() < 1e-9);
    }

    #[test]
    fn fit_is_rotation_covariant() {
        let pts = ellipse_points(0.5, -0.25, 2.0, 1.0, FRAC_PI_4, 24);
        let fit = fit_ellipse(&pts).unwrap();
        assert!((fit.center.0 - 0.5).abs() < 1e-9);
        assert!((fit.center.1 + 0.25).abs() < 1e-9);
        assert!((fit.angle - FRAC_PI_4).abs() < 1e-9);
    }

    #[test]
    fn fit_rejects_degenerate_data() {
        let line: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 2.0 * i as f64)).collect();
        assert!(matches!(fit_ellipse(&line), Err(Error::DegenerateFit(_))));
        let few = ellipse_points(0.0, 0.0, 1.0, 0.5, 0.0, 5);
        assert!(matches!(fit_ellipse(&few), Err(Error::DegenerateFit(_))));
    }
}
