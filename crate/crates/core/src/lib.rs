//! Iterated edge-division averaging of polygons.
//!
//! Starting from any polygon, repeatedly replace each vertex by the point
//! dividing its outgoing edge at a fixed fraction. This crate implements
//! the resulting dynamics end to end:
//!
//! - [`polygon`]: the polygon type, the compact cyclic transform, and the
//!   iteration engine (normalized and unnormalized).
//! - [`spectral`]: closed-form eigenstructure of the uniform transform and
//!   the damping factor with its midpoint optimality.
//! - [`harmonic`]: the first-harmonic basis, the rotation number, exact
//!   powers of the transform, and convergence into the harmonic plane.
//! - [`ellipse`]: the limiting ellipse via an exact 2x2 SVD, the published
//!   semi-axis formula kept for comparison, and a conic fitter.
//! - [`periodicity`]: exact periods, continued-fraction near-periods, and
//!   empirical period detection on traces.
//! - [`hetero`]: per-segment division points and the weighted-barycenter
//!   limit.
//!
//! Everything is pure and deterministic; randomness comes only from the
//! seeded generator in [`rng`].

pub mod ellipse;
pub mod error;
pub mod harmonic;
pub mod hetero;
pub mod periodicity;
pub mod polygon;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use polygon::{iterate, DivisionScheme, IterationMode, IterationTrace, Polygon, TransformMatrix};
