//! Spectral norm, unitary exponentials, the pinching map, and block partitions
//! relative to a projection.

use num_complex::Complex64;

use crate::eig::{herm_eig, herm_eig_unchecked, HermEig};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::tol;

/// Largest singular value, computed as the square root of the top eigenvalue
/// of `M* M`.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 || m.max_abs() == 0.0 {
        return 0.0;
    }
    let gram = &m.conjugate_transpose() * m;
    let e = herm_eig_unchecked(&gram).expect("Gram matrix eigendecomposition");
    e.eigenvalues.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// `e^{itA}` for Hermitian `A`; always unitary.
pub fn unitary_exp(a: &HermitianMatrix, t: f64) -> ComplexMatrix {
    let e = herm_eig(a).expect("Hermitian exponential eigendecomposition");
    e.apply_scalar(|lam| Complex64::from_polar(1.0, t * lam))
}

/// Derivative of `s ↦ exp(i · sign · (A + sE))` at `s = 0`, by the
/// Daleckii-Krein formula in the eigenbasis of `A`:
/// with `A = U Λ U*` and `S = U* E U`, the derivative is
/// `U [ S_jk · φ(λ_j, λ_k) ] U*`, `φ(a, b) = (e^{iσa} − e^{iσb})/(a − b)` and
/// `φ(a, a) = iσ e^{iσa}`.
pub fn exp_derivative(a: &HermitianMatrix, e_dir: &HermitianMatrix, sign: f64) -> ComplexMatrix {
    let n = a.dim();
    let eig = herm_eig(a).expect("exp derivative eigendecomposition");
    let u = &eig.eigenvectors;
    let s = &(&u.conjugate_transpose() * e_dir.matrix()) * u;
    let mut core = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            let (lj, lk) = (eig.eigenvalues[j], eig.eigenvalues[k]);
            let phi = if (lj - lk).abs() > 1e-9 * (1.0 + lj.abs() + lk.abs()) {
                (Complex64::from_polar(1.0, sign * lj) - Complex64::from_polar(1.0, sign * lk))
                    / Complex64::new(lj - lk, 0.0)
            } else {
                let mid = 0.5 * (lj + lk);
                Complex64::new(0.0, sign) * Complex64::from_polar(1.0, sign * mid)
            };
            core[(j, k)] = s[(j, k)] * phi;
        }
    }
    &(u * &core) * &u.conjugate_transpose()
}

/// Block-diagonal compression `Σ P_i M P_i` along a partition of the identity
/// into orthogonal projections. Positive, linear, and contractive.
pub fn pinch(m: &ComplexMatrix, partition: &[HermitianMatrix]) -> Result<ComplexMatrix> {
    m.require_square()?;
    let n = m.rows();
    let mut sum = ComplexMatrix::zeros(n, n);
    for p in partition {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", p.dim(), p.dim()),
            });
        }
        let idem = (&(p.matrix() * p.matrix()) - p.matrix()).max_abs();
        if idem > tol::VALIDATION_TOL {
            return Err(Error::NotAProjection { deviation: idem });
        }
        sum = &sum + p.matrix();
    }
    let dev = (&sum - &ComplexMatrix::identity(n)).max_abs();
    if dev > tol::VALIDATION_TOL {
        return Err(Error::PartitionNotIdentity { deviation: dev });
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for p in partition {
        out = &out + &(&(p.matrix() * m) * p.matrix());
    }
    Ok(out)
}

/// A matrix written as a 2×2 block operator in an orthonormal basis adapted to
/// `R(P) ⊕ N(P)`.
#[derive(Debug, Clone)]
pub struct BlockPartition {
    /// The projection the partition is relative to.
    pub projection: HermitianMatrix,
    /// Orthonormal basis of `R(P)`, as the columns of an `n x k` matrix.
    pub basis_range: ComplexMatrix,
    /// Orthonormal basis of `N(P)`, as the columns of an `n x (n-k)` matrix.
    pub basis_null: ComplexMatrix,
    pub m11: ComplexMatrix,
    pub m12: ComplexMatrix,
    pub m21: ComplexMatrix,
    pub m22: ComplexMatrix,
}

impl BlockPartition {
    /// Rank of the projection.
    pub fn range_dim(&self) -> usize {
        self.basis_range.cols()
    }

    /// The unitary `[Q_range | Q_null]` mapping adapted coordinates back to
    /// the original basis.
    pub fn adapted_basis(&self) -> ComplexMatrix {
        let n = self.basis_range.rows();
        let k = self.range_dim();
        ComplexMatrix::from_fn(n, n, |i, j| {
            if j < k {
                self.basis_range[(i, j)]
            } else {
                self.basis_null[(i, j - k)]
            }
        })
    }

    /// Reassemble the original matrix from its blocks.
    pub fn reassemble(&self) -> ComplexMatrix {
        let q = self.adapted_basis();
        let blocks = ComplexMatrix::block_2x2(&self.m11, &self.m12, &self.m21, &self.m22);
        &(&q * &blocks) * &q.conjugate_transpose()
    }

    /// Map a matrix given in adapted block coordinates back to the original
    /// basis.
    pub fn from_adapted(&self, blocks: &ComplexMatrix) -> ComplexMatrix {
        let q = self.adapted_basis();
        &(&q * blocks) * &q.conjugate_transpose()
    }

    /// Compress a matrix of the same ambient dimension into the adapted
    /// coordinates of this partition.
    pub fn to_adapted(&self, m: &ComplexMatrix) -> ComplexMatrix {
        let q = self.adapted_basis();
        &(&q.conjugate_transpose() * m) * &q
    }
}

/// Eigenbasis of an (idempotent Hermitian) projection: eigenvalues are rounded
/// to `{0, 1}`; a value within `1e-6` of `1/2` is an error, not a rounding
/// case, because a genuine projection cannot produce one.
fn projection_eigenbasis(p: &HermitianMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let idem = (&(p.matrix() * p.matrix()) - p.matrix()).max_abs();
    if idem > tol::VALIDATION_TOL {
        return Err(Error::NotAProjection { deviation: idem });
    }
    let e = herm_eig(p)?;
    let n = p.dim();
    let mut null_cols = Vec::new();
    let mut range_cols = Vec::new();
    for (k, &lam) in e.eigenvalues.iter().enumerate() {
        if (lam - 0.5).abs() < 1e-6 {
            return Err(Error::AmbiguousRank { eigenvalue: lam });
        }
        if lam > 0.5 {
            range_cols.push(k);
        } else {
            null_cols.push(k);
        }
    }
    let range = ComplexMatrix::from_fn(n, range_cols.len(), |i, j| e.eigenvectors[(i, range_cols[j])]);
    let null = ComplexMatrix::from_fn(n, null_cols.len(), |i, j| e.eigenvectors[(i, null_cols[j])]);
    Ok((range, null))
}

/// Split `m` into blocks relative to the projection `p`.
pub fn block_split(m: &ComplexMatrix, p: &HermitianMatrix) -> Result<BlockPartition> {
    m.require_square()?;
    if m.rows() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", p.dim()),
            found: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let (basis_range, basis_null) = projection_eigenbasis(p)?;
    let qr = &basis_range;
    let qn = &basis_null;
    let qr_t = qr.conjugate_transpose();
    let qn_t = qn.conjugate_transpose();
    Ok(BlockPartition {
        projection: p.clone(),
        m11: &(&qr_t * m) * qr,
        m12: &(&qr_t * m) * qn,
        m21: &(&qn_t * m) * qr,
        m22: &(&qn_t * m) * qn,
        basis_range: basis_range.clone(),
        basis_null: basis_null.clone(),
    })
}

/// Keep only the off-diagonal blocks relative to `p`:
/// `P M P^⊥ + P^⊥ M P`. By the two-block compression bound its norm never
/// exceeds `‖M‖`.
pub fn codiagonal_part(m: &ComplexMatrix, p: &HermitianMatrix) -> ComplexMatrix {
    let n = p.dim();
    let id = ComplexMatrix::identity(n);
    let pc = &id - p.matrix();
    &(&(p.matrix() * m) * &pc) + &(&(&pc * m) * p.matrix())
}

/// Diagonal-blocks part relative to `p`: `P M P + P^⊥ M P^⊥`.
pub fn diagonal_part(m: &ComplexMatrix, p: &HermitianMatrix) -> ComplexMatrix {
    let n = p.dim();
    let id = ComplexMatrix::identity(n);
    let pc = &id - p.matrix();
    &(&(p.matrix() * m) * p.matrix()) + &(&(&pc * m) * &pc)
}

/// Convenience: eigendecomposition of the Hermitian part of `m* m` is common
/// enough in callers that we expose the raw eig here.
pub fn eig_of(m: &HermitianMatrix) -> Result<HermEig> {
    herm_eig(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spectral_norm_examples() {
        assert_eq!(spectral_norm(&ComplexMatrix::zeros(3, 3)), 0.0);
        assert!((spectral_norm(&ComplexMatrix::real_diag(&[3.0, -5.0])) - 5.0).abs() < 1e-12);
        // Eigenvalues of M*M for M = [[1,2],[3,4]] from the quadratic formula:
        // λ = 15 ± sqrt(221), so ‖M‖ = sqrt(15 + sqrt(221)).
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let expected = (15.0 + 221.0_f64.sqrt()).sqrt();
        assert!((spectral_norm(&m) - expected).abs() < 1e-12);
        assert!((expected - 5.4650).abs() < 1e-4);
    }

    #[test]
    fn unitary_exp_examples() {
        let zero = HermitianMatrix::zeros(3);
        assert!((&unitary_exp(&zero, 1.7) - &ComplexMatrix::identity(3)).max_abs() < 1e-14);

        let a = HermitianMatrix::real_diag(&[std::f64::consts::PI, 0.0]);
        let e = unitary_exp(&a, 1.0);
        assert!((e[(0, 0)] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((e[(1, 1)] - c(1.0, 0.0)).norm() < 1e-12);

        // exp(i·(π/2)·pauli_x) = i·pauli_x by the cos/sin expansion.
        let x = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]))
            .unwrap();
        let e = unitary_exp(&x, std::f64::consts::FRAC_PI_2);
        let expected = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]);
        assert!((&e - &expected).max_abs() < 1e-12);
        assert!(e.unitary_deviation() < 1e-12);
    }

    #[test]
    fn exp_one_parameter_group() {
        let mut rng = SeededRng::new(5);
        let a = rng.hermitian(4, 1.0);
        let (t, s) = (0.7, -1.3);
        let lhs = &unitary_exp(&a, t) * &unitary_exp(&a, s);
        let rhs = unitary_exp(&a, t + s);
        assert!((&lhs - &rhs).max_abs() < 1e-9);
    }

    #[test]
    fn exp_derivative_matches_finite_differences() {
        let mut rng = SeededRng::new(6);
        for &sign in &[1.0, -1.0] {
            let a = rng.hermitian(4, 1.0);
            let e = rng.hermitian(4, 1.0);
            let d = exp_derivative(&a, &e, sign);
            let h = 1e-5;
            let ap = HermitianMatrix::from_hermitian_part(&(&(a.matrix() + &e.matrix().scale_re(h))).clone());
            let am = HermitianMatrix::from_hermitian_part(&(&(a.matrix() - &e.matrix().scale_re(h))).clone());
            let fd = (&unitary_exp(&ap, sign) - &unitary_exp(&am, sign)).scale_re(1.0 / (2.0 * h));
            assert!((&d - &fd).max_abs() < 1e-8, "sign {sign}");
        }
    }

    #[test]
    fn pinch_examples() {
        let part = vec![HermitianMatrix::real_diag(&[1.0, 0.0]), HermitianMatrix::real_diag(&[0.0, 1.0])];
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let pinched = pinch(&m, &part).unwrap();
        assert!((&pinched - &ComplexMatrix::real_diag(&[1.0, 4.0])).max_abs() < 1e-14);

        // Diagonal matrices are fixed points.
        let d = ComplexMatrix::real_diag(&[2.0, -7.0]);
        assert!((&pinch(&d, &part).unwrap() - &d).max_abs() < 1e-14);

        // Strict contraction on pauli_x.
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let px = pinch(&x, &part).unwrap();
        assert_eq!(px.max_abs(), 0.0);
        assert!((spectral_norm(&x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pinch_rejects_bad_partition() {
        let part = vec![HermitianMatrix::real_diag(&[1.0, 0.0])];
        let m = ComplexMatrix::identity(2);
        assert!(matches!(pinch(&m, &part), Err(Error::PartitionNotIdentity { .. })));
    }

    #[test]
    fn block_split_coordinate_projection() {
        let p = HermitianMatrix::real_diag(&[1.0, 0.0]);
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let bp = block_split(&m, &p).unwrap();
        assert_eq!(bp.range_dim(), 1);
        assert!((bp.m11[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!((bp.m12[(0, 0)].re - 2.0).abs() < 1e-12);
        assert!((bp.m21[(0, 0)].re - 3.0).abs() < 1e-12);
        assert!((bp.m22[(0, 0)].re - 4.0).abs() < 1e-12);
        assert!((&bp.reassemble() - &m).max_abs() < 1e-12);
    }

    #[test]
    fn block_split_identity_projection() {
        let p = HermitianMatrix::identity(3);
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0, 0.0], &[0.0, 1.0, 1.0], &[5.0, 0.0, 2.0]]);
        let bp = block_split(&m, &p).unwrap();
        assert_eq!(bp.range_dim(), 3);
        assert_eq!(bp.m22.rows(), 0);
        assert!((&bp.reassemble() - &m).max_abs() < 1e-12);
    }

    #[test]
    fn block_split_skew_projection() {
        // P = (1/2)[[1,1],[1,1]] commutes with the identity; blocks are 1, 1, 0, 0.
        let p = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]))
            .unwrap();
        let bp = block_split(&ComplexMatrix::identity(2), &p).unwrap();
        assert!((bp.m11[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!((bp.m22[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(bp.m12.max_abs() < 1e-12 && bp.m21.max_abs() < 1e-12);
    }

    #[test]
    fn block_split_rejects_non_projection() {
        let p = HermitianMatrix::real_diag(&[0.5, 0.5]);
        let m = ComplexMatrix::identity(2);
        assert!(block_split(&m, &p).is_err());
    }

    #[test]
    fn random_reassembly_and_offdiagonal_bound() {
        let mut rng = SeededRng::new(9);
        for _ in 0..50 {
            let n = 2 + rng.usize_below(4);
            let m = rng.ginibre(n, n);
            let r = rng.usize_below(n + 1);
            let p = rng.projection(n, r);
            let bp = block_split(&m, &p).unwrap();
            assert!((&bp.reassemble() - &m).max_abs() < 1e-10 * (1.0 + m.max_abs()));
            let off = codiagonal_part(&m, &p);
            assert!(spectral_norm(&off) <= spectral_norm(&m) + 1e-12);
        }
    }
}
