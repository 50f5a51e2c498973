//! Polygon representation, the edge-division transform, and the iteration
//! engine.
//!
//! A polygon is a pair of coordinate vectors (xs, ys) of shared length
//! n >= 3. One iteration step replaces vertex i by the point dividing the
//! segment from vertex i to vertex i+1 (cyclically) at fraction xi_i:
//!
//! ```text
//! v_i' = (1 - xi_i) * v_i + xi_i * v_{i+1 mod n}
//! ```
//!
//! which is the row-stochastic two-diagonal cyclic matrix applied to each
//! coordinate vector. The matrix is kept compact (n plus the scheme) and
//! applied as an O(n) stencil; dense materialization exists for oracles
//! and for the heterogeneous left-eigenvector solve.

use crate::error::{Error, Result};
use crate::rng::Xoshiro256StarStar;
use nalgebra::DMatrix;

/// Centered coordinate vectors below this norm are treated as degenerate.
pub const DEGENERACY_EPS: f64 = 1e-14;

/// A closed polygon given by paired coordinate sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Polygon {
    /// Builds a polygon from coordinate vectors, validating length and
    /// finiteness. Vertex order is preserved.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch { xs: xs.len(), ys: ys.len() });
        }
        if xs.len() < 3 {
            return Err(Error::TooFewVertices { got: xs.len() });
        }
        for i in 0..xs.len() {
            if !xs[i].is_finite() || !ys[i].is_finite() {
                return Err(Error::NonFiniteCoordinate { index: i });
            }
        }
        Ok(Self { xs, ys })
    }

    /// n vertices with coordinates drawn independently and uniformly from
    /// [-half_width, half_width].
    ///
    /// The generator is the crate-pinned xoshiro256** seeded via splitmix64
    /// (see [`crate::rng`]); identical (n, seed, half_width) always yield
    /// identical polygons.
    pub fn random(n: usize, seed: u64, half_width: f64) -> Result<Self> {
        assert!(half_width > 0.0, "half_width must be positive");
        if n < 3 {
            return Err(Error::TooFewVertices { got: n });
        }
        let mut rng = Xoshiro256StarStar::from_seed(seed);
        let mut xs = Vec::with_capacity(n);
        let mut ys = Vec::with_capacity(n);
        for _ in 0..n {
            xs.push(rng.uniform(-half_width, half_width));
            ys.push(rng.uniform(-half_width, half_width));
        }
        Ok(Self { xs, ys })
    }

    pub fn n(&self) -> usize {
        self.xs.len()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// Arithmetic mean of the vertex coordinates.
    pub fn centroid(&self) -> (f64, f64) {
        let n = self.n() as f64;
        let cx = self.xs.iter().sum::<f64>() / n;
        let cy = self.ys.iter().sum::<f64>() / n;
        (cx, cy)
    }

    /// Componentwise bounding intervals ((min x, max x), (min y, max y)).
    pub fn bounding_interval(&self) -> ((f64, f64), (f64, f64)) {
        let fold = |v: &[f64]| {
            v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            })
        };
        (fold(&self.xs), fold(&self.ys))
    }

    /// Moves the centroid to the origin and scales each coordinate vector
    /// to unit 2-norm, independently.
    ///
    /// Fails with [`Error::DegeneratePolygon`] when a centered coordinate
    /// vector has norm below [`DEGENERACY_EPS`] (all vertices on one
    /// horizontal or vertical line).
    pub fn center_and_normalize(&self) -> Result<Self> {
        let (cx, cy) = self.centroid();
        let mut xs: Vec<f64> = self.xs.iter().map(|x| x - cx).collect();
        let mut ys: Vec<f64> = self.ys.iter().map(|y| y - cy).collect();
        let nx = norm2(&xs);
        let ny = norm2(&ys);
        if nx < DEGENERACY_EPS || ny < DEGENERACY_EPS {
            return Err(Error::DegeneratePolygon);
        }
        xs.iter_mut().for_each(|x| *x /= nx);
        ys.iter_mut().for_each(|y| *y /= ny);
        Ok(Self { xs, ys })
    }

    /// 2-norms of the centered coordinate vectors.
    pub fn centered_norms(&self) -> (f64, f64) {
        let (cx, cy) = self.centroid();
        let nx = self.xs.iter().map(|x| (x - cx) * (x - cx)).sum::<f64>().sqrt();
        let ny = self.ys.iter().map(|y| (y - cy) * (y - cy)).sum::<f64>().sqrt();
        (nx, ny)
    }
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Division points for the polygon's segments: one shared value, or one
/// value per segment. Every point must lie strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub enum DivisionScheme {
    Uniform(f64),
    PerSegment(Vec<f64>),
}

impl DivisionScheme {
    pub fn uniform(xi: f64) -> Result<Self> {
        check_xi(xi)?;
        Ok(Self::Uniform(xi))
    }

    pub fn per_segment(xis: Vec<f64>) -> Result<Self> {
        for &xi in &xis {
            check_xi(xi)?;
        }
        Ok(Self::PerSegment(xis))
    }

    /// Division point for segment i (vertex i -> vertex i+1).
    pub fn xi_at(&self, i: usize) -> f64 {
        match self {
            Self::Uniform(xi) => *xi,
            Self::PerSegment(xis) => xis[i],
        }
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self, Self::Uniform(_))
    }

    /// Range and (for per-segment schemes) length validation against an
    /// intended vertex count.
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            Self::Uniform(xi) => check_xi(*xi),
            Self::PerSegment(xis) => {
                if xis.len() != n {
                    return Err(Error::SchemeLengthMismatch { scheme: xis.len(), n });
                }
                xis.iter().try_for_each(|&xi| check_xi(xi))
            }
        }
    }
}

fn check_xi(xi: f64) -> Result<()> {
    // Boundary values are rejected: 0 and 1 degenerate to identity/shift.
    if xi.is_finite() && xi > 0.0 && xi < 1.0 {
        Ok(())
    } else {
        Err(Error::DivisionPointOutOfRange { value: xi })
    }
}

/// The n x n transform in compact form: row i holds (1 - xi_i) on the
/// diagonal and xi_i on the cyclic superdiagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix {
    n: usize,
    scheme: DivisionScheme,
}

impl TransformMatrix {
    pub fn new(n: usize, scheme: DivisionScheme) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooFewVertices { got: n });
        }
        scheme.validate(n)?;
        Ok(Self { n, scheme })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scheme(&self) -> &DivisionScheme {
        &self.scheme
    }

    /// One stencil application to a bare coordinate vector.
    pub fn apply_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.n);
        let n = self.n;
        (0..n)
            .map(|i| {
                let xi = self.scheme.xi_at(i);
                (1.0 - xi) * v[i] + xi * v[(i + 1) % n]
            })
            .collect()
    }

    /// One iteration step applied to both coordinate vectors.
    pub fn apply(&self, p: &Polygon) -> Result<Polygon> {
        if p.n() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, got: p.n() });
        }
        Ok(Polygon {
            xs: self.apply_vec(p.xs()),
            ys: self.apply_vec(p.ys()),
        })
    }

    /// Dense materialization; test oracles and the stationary-vector solve
    /// use this, iteration never does.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |i, j| {
            let xi = self.scheme.xi_at(i);
            if j == i {
                1.0 - xi
            } else if j == (i + 1) % n {
                xi
            } else {
                0.0
            }
        })
    }
}

/// Whether iteration renormalizes after every step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterationMode {
    /// Re-center and scale both coordinate vectors to unit norm after
    /// every application.
    Normalized,
    /// Apply the raw map; the polygon shrinks toward its limit point.
    Unnormalized,
}

/// The recorded snapshots of an iteration run.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    polygons: Vec<Polygon>,
    norms: Vec<(f64, f64)>,
    mode: IterationMode,
    scheme: DivisionScheme,
}

impl IterationTrace {
    /// Wraps externally produced snapshots (e.g. closed-form predictions)
    /// in a trace, computing the per-snapshot centered norms.
    pub fn from_snapshots(
        polygons: Vec<Polygon>,
        mode: IterationMode,
        scheme: DivisionScheme,
    ) -> Self {
        let norms = polygons.iter().map(|p| p.centered_norms()).collect();
        Self { polygons, norms, mode, scheme }
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn snapshot(&self, k: usize) -> &Polygon {
        &self.polygons[k]
    }

    pub fn len(&self) -> usize {
        self.polygons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polygons.is_empty()
    }

    /// (||xs - mean||, ||ys - mean||) per snapshot.
    pub fn norms(&self) -> &[(f64, f64)] {
        &self.norms
    }

    pub fn mode(&self) -> IterationMode {
        self.mode
    }

    pub fn scheme(&self) -> &DivisionScheme {
        &self.scheme
    }
}

/// Runs `steps` iterations and records every snapshot, index 0 being the
/// input (centered and normalized first when the mode asks for it).
pub fn iterate(
    p: &Polygon,
    scheme: &DivisionScheme,
    steps: usize,
    mode: IterationMode,
) -> Result<IterationTrace> {
    let transform = TransformMatrix::new(p.n(), scheme.clone())?;
    let mut current = match mode {
        IterationMode::Normalized => p.center_and_normalize()?,
        IterationMode::Unnormalized => p.clone(),
    };
    let mut polygons = Vec::with_capacity(steps + 1);
    polygons.push(current.clone());
    for _ in 0..steps {
        current = transform.apply(&current)?;
        if mode == IterationMode::Normalized {
            current = current.center_and_normalize()?;
        }
        polygons.push(current.clone());
    }
    Ok(IterationTrace::from_snapshots(polygons, mode, scheme.clone()))
}
