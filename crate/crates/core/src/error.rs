use thiserror::Error;

/// Errors raised by the geometric and numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeisError {
    #[error("dilation factor must be positive, got {0}")]
    NonPositiveDilation(f64),

    #[error("coordinates must be finite")]
    NonFinite,

    #[error("lift start ({start_x}, {start_y}) does not project onto the curve start ({curve_x}, {curve_y})")]
    LiftStartMismatch {
        start_x: f64,
        start_y: f64,
        curve_x: f64,
        curve_y: f64,
    },

    #[error("curve is not closed: endpoint gap {gap:e}")]
    NotClosed { gap: f64 },

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("torus radii must satisfy R > r > 0, got R = {major}, r = {minor}")]
    InvalidTorusRadii { major: f64, minor: f64 },

    #[error("revolution angle must lie in (0, 2pi], got {0}")]
    InvalidRevolutionAngle(f64),

    #[error("characteristic point at (u, v) = ({u}, {v})")]
    CharacteristicPoint { u: f64, v: f64 },

    #[error("tangent plane is degenerate at (u, v) = ({u}, {v})")]
    DegenerateTangentPlane { u: f64, v: f64 },

    #[error("form of degree {degree} needs {degree} vectors, got {got}")]
    ArgumentCount { degree: usize, got: usize },

    #[error("expected a form of degree {expected}, got degree {got}")]
    DegreeMismatch { expected: usize, got: usize },

    #[error("integration domain is unbounded and the form has no compact support")]
    NonCompact,

    #[error("surface carries no boundary data")]
    MissingBoundary,

    #[error("period detection inconclusive: {0}")]
    Inconclusive(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, HeisError>;
