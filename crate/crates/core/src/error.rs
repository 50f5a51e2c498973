//! Error type shared by all analysis modules.

/// Errors surfaced by polygon construction, transforms and analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Coordinate vectors have different lengths.
    LengthMismatch { xs: usize, ys: usize },
    /// A polygon needs at least three vertices.
    TooFewVertices { got: usize },
    /// A coordinate is NaN or infinite.
    NonFiniteCoordinate { index: usize },
    /// A centered coordinate vector has (near-)zero norm; the polygon
    /// collapses onto a horizontal or vertical line.
    DegeneratePolygon,
    /// Per-segment scheme length does not match the vertex count.
    SchemeLengthMismatch { scheme: usize, n: usize },
    /// A division point lies outside the open interval (0, 1).
    DivisionPointOutOfRange { value: f64 },
    /// Transform and polygon sizes disagree.
    SizeMismatch { expected: usize, got: usize },
    /// Eigenvalue index outside 0..n.
    IndexOutOfRange { index: usize, n: usize },
    /// Singular values too close to tell the principal axis apart.
    CircleDegenerate,
    /// Conic fit failed: too few points, collinear data, or not an ellipse.
    DegenerateFit(&'static str),
    /// Integer overflow in period arithmetic.
    Overflow,
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::LengthMismatch { xs, ys } => {
                write!(f, "coordinate length mismatch: {} xs vs {} ys", xs, ys)
            }
            Self::TooFewVertices { got } => {
                write!(f, "polygon needs at least 3 vertices, got {}", got)
            }
            Self::NonFiniteCoordinate { index } => {
                write!(f, "non-finite coordinate at vertex {}", index)
            }
            Self::DegeneratePolygon => {
                write!(f, "degenerate polygon: a centered coordinate vector has zero norm")
            }
            Self::SchemeLengthMismatch { scheme, n } => {
                write!(f, "scheme has {} division points but polygon has {} segments", scheme, n)
            }
            Self::DivisionPointOutOfRange { value } => {
                write!(f, "division point {} outside the open interval (0, 1)", value)
            }
            Self::SizeMismatch { expected, got } => {
                write!(f, "size mismatch: expected {}, got {}", expected, got)
            }
            Self::IndexOutOfRange { index, n } => {
                write!(f, "index {} out of range for n = {}", index, n)
            }
            Self::CircleDegenerate => {
                write!(f, "singular values coincide; orientation undefined")
            }
            Self::DegenerateFit(why) => write!(f, "degenerate ellipse fit: {}", why),
            Self::Overflow => write!(f, "integer overflow"),
        }
    }
}

impl std::error::Error for Error {}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
