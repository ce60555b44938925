//! Numerical toolkit for the invariant Finsler geometry of partial isometries.
//!
//! A partial isometry `V` on a finite-dimensional complex Hilbert space satisfies
//! `V V* V = V`; the set of all of them carries the left action `(U, W) · V = U V W*`
//! of the product of two unitary groups. Each tangent vector at `V` has the form
//! `i X V − i V Y` for Hermitian `X`, `Y`, and the quotient Finsler norm is
//!
//! ```text
//! |𝒱|_V = inf { max(‖A‖, ‖B‖) : A* = A, B* = B, iAV − iVB = 𝒱 }.
//! ```
//!
//! Pairs attaining the infimum are *minimal liftings*; they generate curves
//! `δ(t) = e^{itA} V e^{−itB}` of minimal length up to the horizon `π/(2·max(‖A‖,‖B‖))`.
//!
//! The crate provides:
//! - [`matrix`]: dense complex matrices and validated Hermitian wrappers,
//! - [`eig`] / [`svd`]: self-contained Jacobi eigensolver and one-sided Jacobi SVD,
//! - [`linalg`]: spectral norm, unitary exponentials, pinching, block partitions,
//! - [`partial_isometry`]: validation, component invariants, the 2×2 self-adjoint model,
//! - [`tangent`]: tangent vectors, isotropy bases, quotient norms, Krein completion,
//!   codiagonal and diagonal minimal liftings,
//! - [`geodesics`]: geodesic curves, Finsler/ambient length functionals, competitor
//!   experiments,
//! - [`projections`]: the projection manifold, principal-angle geodesics, and the
//!   distance-decreasing range/support maps,
//! - [`minimize`]: the nonsmooth spectral-norm minimizer and its grid-search oracle,
//! - [`rng`]: the seeded counter-based generator used by every randomized harness,
//! - [`suite`]: the property suite aggregating all module invariants.

pub mod eig;
pub mod error;
pub mod geodesics;
pub mod linalg;
pub mod matrix;
pub mod minimize;
pub mod partial_isometry;
pub mod projections;
pub mod rng;
pub mod suite;
pub mod svd;
pub mod tangent;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use partial_isometry::{EpsilonModel, PartialIsometry};
pub use tangent::{IsotropyBasis, LiftingPair, TangentVector};

pub use num_complex::Complex64;

/// Tolerance ladder. All checks are relative to `1 + ‖M‖` of the matrix at hand;
/// the three orders of headroom between stages keep validation from tripping on
/// roundoff produced by the stage before it.
pub mod tol {
    /// Hermiticity deviation allowed when wrapping a matrix as Hermitian.
    pub const HERM_TOL: f64 = 1e-10;
    /// Reconstruction and unitarity tolerance for the eigensolver.
    pub const EIG_TOL: f64 = 1e-9;
    /// Structural validation tolerance (partial isometries, projections, tangency).
    pub const VALIDATION_TOL: f64 = 1e-8;
    /// Relative off-diagonal Frobenius mass at which the Jacobi sweep stops.
    pub const JACOBI_CONVERGENCE: f64 = 1e-13;
    /// Relative singular-value threshold for nullspace extraction.
    pub const NULLSPACE_REL_TOL: f64 = 1e-10;
}
