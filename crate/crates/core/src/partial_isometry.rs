//! Partial isometries `V V* V = V`, their Halmos-McLaughlin component
//! invariants, the two-sided unitary action, and the 2×2 self-adjoint model
//! `ε_V = [[0, V], [V*, 0]]` with its spectral projections.

use crate::eig::herm_eig;
use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::tol;

/// A validated partial isometry with cached initial/final projections and
/// component triple.
///
/// `alpha = V*V` projects onto the initial space, `omega = VV*` onto the final
/// space. The triple `(rank, null_dim, corank)` classifies the connected
/// component; two partial isometries lie in the same component exactly when
/// their triples agree, and the components are the orbits of the action
/// `(U, W) · V = U V W*`.
#[derive(Debug, Clone)]
pub struct PartialIsometry {
    v: ComplexMatrix,
    alpha: HermitianMatrix,
    omega: HermitianMatrix,
    rank: usize,
    null_dim: usize,
    corank: usize,
}

impl PartialIsometry {
    /// Validate `‖VV*V − V‖ ≤ validation_tol` and cache the invariants.
    ///
    /// Ranks are counted on the spectra of `alpha` and `omega` with threshold
    /// `1/2`; an eigenvalue inside `[0.1, 0.9]` is reported as
    /// [`Error::AmbiguousRank`] since a genuine partial isometry within
    /// tolerance cannot produce one.
    pub fn validate(v: ComplexMatrix) -> Result<Self> {
        v.require_square()?;
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        let vstar = v.conjugate_transpose();
        let alpha_raw = &vstar * &v;
        let omega_raw = &v * &vstar;
        let residual = spectral_norm(&(&(&omega_raw * &v) - &v));
        if residual > tol::VALIDATION_TOL {
            return Err(Error::NotAPartialIsometry { residual });
        }
        let alpha = HermitianMatrix::from_hermitian_part(&alpha_raw);
        let omega = HermitianMatrix::from_hermitian_part(&omega_raw);
        let rank = count_unit_eigenvalues(&alpha)?;
        let omega_rank = count_unit_eigenvalues(&omega)?;
        debug_assert_eq!(rank, omega_rank, "rank(V*V) and rank(VV*) must agree");
        let n = v.rows();
        Ok(Self { rank, null_dim: n - rank, corank: n - omega_rank, v, alpha, omega })
    }

    pub fn dim(&self) -> usize {
        self.v.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.v
    }

    /// Initial projection `V*V`.
    pub fn alpha(&self) -> &HermitianMatrix {
        &self.alpha
    }

    /// Final projection `VV*`.
    pub fn omega(&self) -> &HermitianMatrix {
        &self.omega
    }

    /// `(rank, dim N(V), dim R(V)^⊥)`.
    pub fn component_triple(&self) -> (usize, usize, usize) {
        (self.rank, self.null_dim, self.corank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Same connected component iff the triples agree.
    pub fn same_component(&self, other: &Self) -> Result<bool> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: format!("{0}x{0}", self.dim()),
                found: format!("{0}x{0}", other.dim()),
            });
        }
        Ok(self.component_triple() == other.component_triple())
    }

    /// `n(V) = r^⊥(V)`. On a finite-dimensional space this is automatic
    /// (rank-nullity makes both equal `n − rank`), so the method is constantly
    /// true here; it is kept because balancedness is the meaningful hypothesis
    /// in the operator setting.
    pub fn is_balanced(&self) -> bool {
        self.null_dim == self.corank
    }

    /// The action `(U, W) · V = U V W*`; both factors must be unitary.
    /// The component triple is preserved exactly.
    pub fn act(&self, u: &ComplexMatrix, w: &ComplexMatrix) -> Result<Self> {
        u.require_unitary()?;
        w.require_unitary()?;
        let moved = Self::validate(&(u * &self.v) * &w.conjugate_transpose())?;
        debug_assert_eq!(moved.component_triple(), self.component_triple());
        Ok(moved)
    }

    /// Is this partial isometry an orthogonal projection (`V = V* = V²`)?
    pub fn is_projection(&self) -> bool {
        let herm = self.v.hermitian_deviation();
        let idem = (&(&self.v * &self.v) - &self.v).max_abs();
        herm <= tol::HERM_TOL && idem <= tol::VALIDATION_TOL
    }

    /// Factor `V = U P0 W*` with `P0 = diag(I_r, 0)` in coordinates and `U`,
    /// `W` unitary (every square partial isometry is balanced, so this always
    /// succeeds).
    ///
    /// `W`'s first `r` columns are an eigenbasis of the initial space, `U`'s
    /// first `r` columns are their images under `V`, and the remaining columns
    /// come from the complementary eigenspaces; `U* V W = P0` then holds
    /// exactly by construction, which pins the phases.
    pub fn factor_through_projection(&self) -> ProjectionFactorization {
        let n = self.dim();
        let r = self.rank;
        let ea = herm_eig(&self.alpha).expect("alpha eigendecomposition");
        let eo = herm_eig(&self.omega).expect("omega eigendecomposition");
        // Ascending eigenvalues put the nullspace first; initial-space vectors
        // are the last r columns.
        let mut w = ComplexMatrix::zeros(n, n);
        for j in 0..r {
            for i in 0..n {
                w[(i, j)] = ea.eigenvectors[(i, n - r + j)];
            }
        }
        for j in r..n {
            for i in 0..n {
                w[(i, j)] = ea.eigenvectors[(i, j - r)];
            }
        }
        let mut u = ComplexMatrix::zeros(n, n);
        // First r columns: u_j = V w_j, orthonormal because V is isometric on
        // the initial space.
        for j in 0..r {
            for i in 0..n {
                let mut s = num_complex::Complex64::ZERO;
                for k in 0..n {
                    s += self.v[(i, k)] * w[(k, j)];
                }
                u[(i, j)] = s;
            }
        }
        // Remaining columns: eigenbasis of N(omega).
        for j in r..n {
            for i in 0..n {
                u[(i, j)] = eo.eigenvectors[(i, j - r)];
            }
        }
        let mut p0 = ComplexMatrix::zeros(n, n);
        for i in 0..r {
            p0[(i, i)] = num_complex::Complex64::ONE;
        }
        ProjectionFactorization { u, w, p0 }
    }
}

/// The unitaries and coordinate projection of `V = U P0 W*`.
#[derive(Debug, Clone)]
pub struct ProjectionFactorization {
    pub u: ComplexMatrix,
    pub w: ComplexMatrix,
    pub p0: ComplexMatrix,
}

/// Count eigenvalues above `1/2` of a matrix whose spectrum should be `{0, 1}`.
fn count_unit_eigenvalues(m: &HermitianMatrix) -> Result<usize> {
    let e = herm_eig(m)?;
    let mut count = 0;
    for &lam in &e.eigenvalues {
        if (0.1..=0.9).contains(&lam) {
            return Err(Error::AmbiguousRank { eigenvalue: lam });
        }
        if lam > 0.5 {
            count += 1;
        }
    }
    Ok(count)
}

/// The self-adjoint model `ε_V` of size `2n` with its spectral projections.
///
/// `ε³ = ε` makes the spectrum a subset of `{−1, 0, 1}`, and
/// `E₊ = (ε² + ε)/2`, `E₋ = (ε² − ε)/2`, `E₀ = 1 − ε²` are the mutually
/// orthogonal spectral projections resolving the identity.
#[derive(Debug, Clone)]
pub struct EpsilonModel {
    pub epsilon: HermitianMatrix,
    pub e_plus: HermitianMatrix,
    pub e_minus: HermitianMatrix,
    pub e_zero: HermitianMatrix,
}

impl EpsilonModel {
    /// Build `ε_V = [[0, V], [V*, 0]]` and its spectral projections from the
    /// quadratic formulas.
    pub fn embed(v: &PartialIsometry) -> Self {
        let n = v.dim();
        let zero = ComplexMatrix::zeros(n, n);
        let eps = ComplexMatrix::block_2x2(&zero, v.matrix(), &v.matrix().conjugate_transpose(), &zero);
        let eps2 = &eps * &eps;
        let id = ComplexMatrix::identity(2 * n);
        let e_plus = (&eps2 + &eps).scale_re(0.5);
        let e_minus = (&eps2 - &eps).scale_re(0.5);
        let e_zero = &id - &eps2;
        Self {
            epsilon: HermitianMatrix::from_hermitian_part(&eps),
            e_plus: HermitianMatrix::from_hermitian_part(&e_plus),
            e_minus: HermitianMatrix::from_hermitian_part(&e_minus),
            e_zero: HermitianMatrix::from_hermitian_part(&e_zero),
        }
    }

    pub fn dim(&self) -> usize {
        self.epsilon.dim()
    }

    /// `max ‖ε³ − ε‖, ‖E₊ + E₋ + E₀ − I‖, ‖E₊ − E₋ − ε‖` and all pairwise
    /// products; the structural self-check used by tests and the suite.
    pub fn structural_deviation(&self) -> f64 {
        let eps = self.epsilon.matrix();
        let cube = &(&(eps * eps) * eps) - eps;
        let id = ComplexMatrix::identity(self.dim());
        let sum = &(&(self.e_plus.matrix() + self.e_minus.matrix()) + self.e_zero.matrix()) - &id;
        let diff = &(self.e_plus.matrix() - self.e_minus.matrix()) - eps;
        let mut worst = cube.max_abs().max(sum.max_abs()).max(diff.max_abs());
        let projs = [&self.e_plus, &self.e_minus, &self.e_zero];
        for (i, a) in projs.iter().enumerate() {
            for (j, b) in projs.iter().enumerate() {
                if i != j {
                    worst = worst.max((a.matrix() * b.matrix()).max_abs());
                }
                if i == j {
                    worst = worst.max((&(a.matrix() * a.matrix()) - a.matrix()).max_abs());
                }
            }
        }
        worst
    }
}
