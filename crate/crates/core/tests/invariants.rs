//! Property tests for the structural invariants of the transform and its
//! analysis.

use num_complex::Complex64;
use polygonflow_core::harmonic::HarmonicBasis;
use polygonflow_core::periodicity::{continued_fraction, convergents};
use polygonflow_core::polygon::{DivisionScheme, Polygon, TransformMatrix};
use polygonflow_core::spectral::{eigenvalue, roots_of_unity};
use polygonflow_core::{ellipse, hetero};
use proptest::prelude::*;

fn xi_strategy() -> impl Strategy<Value = f64> {
    // Stay clear of the open-interval boundary.
    0.001f64..0.999
}

fn polygon_strategy(max_n: usize) -> impl Strategy<Value = Polygon> {
    (3..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-100.0f64..100.0, n),
            prop::collection::vec(-100.0f64..100.0, n),
        )
            .prop_map(|(xs, ys)| Polygon::new(xs, ys).unwrap())
    })
}

#[test]
fn stencil_equals_dense_product_at_larger_sizes() {
    for &n in &[128usize, 256] {
        let p = Polygon::random(n, 1234, 5.0).unwrap();
        let t = TransformMatrix::new(n, DivisionScheme::uniform(0.37).unwrap()).unwrap();
        let dense = t.to_dense();
        let got = t.apply_vec(p.xs());
        for i in 0..n {
            let want: f64 = (0..n).map(|j| dense[(i, j)] * p.xs()[j]).sum();
            assert!((got[i] - want).abs() <= 1e-12);
        }
    }
}

proptest! {
    #[test]
    fn rows_always_sum_to_one(n in 3usize..40, xis in prop::collection::vec(0.001f64..0.999, 40)) {
        let scheme = DivisionScheme::per_segment(xis[..n].to_vec()).unwrap();
        let t = TransformMatrix::new(n, scheme).unwrap();
        let m = t.to_dense();
        for i in 0..n {
            let row: f64 = (0..n).map(|j| m[(i, j)]).sum();
            prop_assert!((row - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn column_sums_are_one_exactly_for_uniform(n in 3usize..30, xi in xi_strategy()) {
        // Uniform, or all per-segment values equal: either way the
        // columns are stochastic too.
        for scheme in [
            DivisionScheme::uniform(xi).unwrap(),
            DivisionScheme::per_segment(vec![xi; n]).unwrap(),
        ] {
            let t = TransformMatrix::new(n, scheme).unwrap();
            let m = t.to_dense();
            for j in 0..n {
                let col: f64 = (0..n).map(|i| m[(i, j)]).sum();
                prop_assert!((col - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn skewed_scheme_breaks_some_column_sum(n in 3usize..20, xi in 0.05f64..0.45) {
        // One segment gets a different division point.
        let mut xis = vec![xi; n];
        xis[0] = xi + 0.5;
        let t = TransformMatrix::new(n, DivisionScheme::per_segment(xis).unwrap()).unwrap();
        let m = t.to_dense();
        let worst = (0..n)
            .map(|j| ((0..n).map(|i| m[(i, j)]).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max);
        prop_assert!(worst > 1e-15);
    }

    #[test]
    fn centroid_preserved_by_uniform_apply(p in polygon_strategy(24), xi in xi_strategy()) {
        let t = TransformMatrix::new(p.n(), DivisionScheme::uniform(xi).unwrap()).unwrap();
        let q = t.apply(&p).unwrap();
        let (cx0, cy0) = p.centroid();
        let (cx1, cy1) = q.centroid();
        prop_assert!((cx0 - cx1).abs() <= 1e-13 && (cy0 - cy1).abs() <= 1e-13);
    }

    #[test]
    fn bounding_interval_nests(p in polygon_strategy(24), xi in xi_strategy()) {
        let t = TransformMatrix::new(p.n(), DivisionScheme::uniform(xi).unwrap()).unwrap();
        let q = t.apply(&p).unwrap();
        let ((ax0, ax1), (ay0, ay1)) = p.bounding_interval();
        let ((bx0, bx1), (by0, by1)) = q.bounding_interval();
        prop_assert!(bx0 >= ax0 && bx1 <= ax1 && by0 >= ay0 && by1 <= ay1);
    }

    #[test]
    fn stencil_equals_dense_product(p in polygon_strategy(64), xi in xi_strategy()) {
        let t = TransformMatrix::new(p.n(), DivisionScheme::uniform(xi).unwrap()).unwrap();
        let dense = t.to_dense();
        let got = t.apply_vec(p.xs());
        for i in 0..p.n() {
            let want: f64 = (0..p.n()).map(|j| dense[(i, j)] * p.xs()[j]).sum();
            prop_assert!((got[i] - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn roots_multiply_to_parity_sign(n in 1usize..48) {
        let prod = roots_of_unity(n)
            .into_iter()
            .fold(Complex64::new(1.0, 0.0), |acc, w| acc * w);
        let expect = if n % 2 == 0 { -1.0 } else { 1.0 };
        prop_assert!((prod - Complex64::new(expect, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn harmonic_basis_orthonormal_at_any_offset(n in 3usize..48, shift in -10.0f64..10.0) {
        let b = HarmonicBasis::new(n, shift).unwrap();
        let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        prop_assert!((dot(b.c(), b.c()) - 1.0).abs() <= 1e-12);
        prop_assert!((dot(b.s(), b.s()) - 1.0).abs() <= 1e-12);
        prop_assert!(dot(b.c(), b.s()).abs() <= 1e-12);
    }

    #[test]
    fn svd_reconstructs(a in -10.0f64..10.0, b in -10.0f64..10.0, c in -10.0f64..10.0, d in -10.0f64..10.0) {
        let m = [[a, b], [c, d]];
        let dec = ellipse::svd_2x2(&m);
        let r = dec.reconstruct();
        let mut err: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                err += (r[i][j] - m[i][j]).powi(2);
            }
        }
        prop_assert!(err.sqrt() <= 1e-12);
        prop_assert!(dec.sigma1 >= dec.sigma2 && dec.sigma2 >= 0.0);
    }

    #[test]
    fn convergents_obey_dirichlet(x in -50.0f64..50.0) {
        // Emitted approximations are always capped by a q_max at the scale
        // used here; past ~1e5 the f64 expansion itself is the limit.
        let terms = continued_fraction(x, 24);
        for (p, q) in convergents(&terms) {
            prop_assert!(q >= 1);
            if q > 100_000 {
                break;
            }
            let err = (x - p as f64 / q as f64).abs();
            prop_assert!(err < 1.0 / (q as f64 * q as f64), "x={} p={} q={} err={}", x, p, q, err);
        }
    }

    #[test]
    fn left_fixed_vector_matches_reciprocal_rule(n in 3usize..20, xis in prop::collection::vec(0.02f64..0.98, 20)) {
        let xis = xis[..n].to_vec();
        let t = TransformMatrix::new(n, DivisionScheme::per_segment(xis.clone()).unwrap()).unwrap();
        let w = hetero::left_fixed_vector(&t);
        let total: f64 = xis.iter().map(|x| 1.0 / x).sum();
        for (wi, xi) in w.iter().zip(&xis) {
            prop_assert!((wi - (1.0 / xi) / total).abs() <= 1e-11);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn eigenvalues_on_circle_and_conjugate_paired(n in 3usize..=64, xi in xi_strategy()) {
        let center = Complex64::new(1.0 - xi, 0.0);
        for j in 0..n {
            let lam = eigenvalue(n, xi, j);
            prop_assert!(((lam - center).norm() - xi).abs() <= 1e-12);
            let conj = eigenvalue(n, xi, (n - j) % n);
            prop_assert!((lam - conj.conj()).norm() <= 1e-15);
        }
    }
}
