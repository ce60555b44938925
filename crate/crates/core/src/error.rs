//! Error type shared by every module of the crate.

use std::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when validating inputs or running a solver.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// Operands have incompatible shapes.
    DimensionMismatch { expected: String, found: String },
    /// A matrix contains NaN or infinite entries.
    NonFinite,
    /// Hermiticity check failed; carries `‖M − M*‖ / (1 + ‖M‖)`.
    NotHermitian { deviation: f64 },
    /// Idempotence check failed for a claimed orthogonal projection.
    NotAProjection { deviation: f64 },
    /// Unitarity check failed; carries `‖U*U − I‖`.
    NotUnitary { deviation: f64 },
    /// `‖VV*V − V‖` exceeded the validation tolerance.
    NotAPartialIsometry { residual: f64 },
    /// An eigenvalue landed in the forbidden mid-spectrum band during rank counting.
    AmbiguousRank { eigenvalue: f64 },
    /// A matrix could not be realized as a tangent vector at the given base point.
    NotATangent { residual: f64 },
    /// The operation requires `ω(V) 𝒱 α(V) = 0`.
    NotOrthogonalDirection { overlap: f64 },
    /// The operation requires the base point to be an orthogonal projection.
    BaseNotProjection { residual: f64 },
    /// A partition of the identity does not sum to the identity.
    PartitionNotIdentity { deviation: f64 },
    /// Requested parameter interval leaves the minimality horizon.
    HorizonExceeded { t: f64, horizon: f64 },
    /// No geodesic joins the two projections; carries the two certificate dimensions.
    NoGeodesic { dim_r0_n1: usize, dim_r1_n0: usize },
    /// The norm minimizer stopped without meeting its convergence rule.
    OptimizerStalled { best: f64, gap: f64 },
    /// A certified-minimal construction disagreed with the quotient norm.
    CertificationFailed { constructed: f64, quotient: f64 },
    /// An iterative kernel ran out of sweeps.
    NoConvergence { what: &'static str },
    /// A sampled curve violates a structural precondition.
    InvalidCurve { reason: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite => write!(f, "matrix contains non-finite entries"),
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (relative deviation {deviation:.3e})")
            }
            Error::NotAProjection { deviation } => {
                write!(f, "matrix is not an orthogonal projection (deviation {deviation:.3e})")
            }
            Error::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:.3e})")
            }
            Error::NotAPartialIsometry { residual } => {
                write!(f, "not a partial isometry: ||VV*V - V|| = {residual:.3e}")
            }
            Error::AmbiguousRank { eigenvalue } => {
                write!(f, "rank counting hit mid-spectrum eigenvalue {eigenvalue:.6}")
            }
            Error::NotATangent { residual } => {
                write!(f, "matrix is not tangent at the base point (residual {residual:.3e})")
            }
            Error::NotOrthogonalDirection { overlap } => {
                write!(f, "tangent is not an orthogonal direction: ||w V a|| = {overlap:.3e}")
            }
            Error::BaseNotProjection { residual } => {
                write!(f, "base point is not an orthogonal projection (residual {residual:.3e})")
            }
            Error::PartitionNotIdentity { deviation } => {
                write!(f, "projections do not sum to the identity (deviation {deviation:.3e})")
            }
            Error::HorizonExceeded { t, horizon } => {
                write!(f, "parameter {t} exceeds the minimality horizon {horizon}")
            }
            Error::NoGeodesic { dim_r0_n1, dim_r1_n0 } => write!(
                f,
                "no geodesic joins the projections: dim(R0 \u{2229} N1) = {dim_r0_n1}, \
                 dim(R1 \u{2229} N0) = {dim_r1_n0}"
            ),
            Error::OptimizerStalled { best, gap } => write!(
                f,
                "norm minimizer stalled: best value {best:.12e}, gap estimate {gap:.3e}"
            ),
            Error::CertificationFailed { constructed, quotient } => write!(
                f,
                "minimality certification failed: constructed {constructed:.12e} vs \
                 quotient norm {quotient:.12e}"
            ),
            Error::NoConvergence { what } => write!(f, "{what} did not converge"),
            Error::InvalidCurve { reason } => write!(f, "invalid curve: {reason}"),
        }
    }
}

impl std::error::Error for Error {}
