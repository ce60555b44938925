//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Each sweep visits every off-diagonal pair `(p, q)`. The entry `a_pq` is first
//! rotated onto the real axis with a diagonal phase, then annihilated with a real
//! Givens rotation; the sweep stops when the off-diagonal Frobenius mass drops
//! below [`tol::JACOBI_CONVERGENCE`] relative to `‖M‖_F`. Unconditionally stable
//! at desk scale, needs no balancing or shifts, and converges quadratically once
//! the matrix is near diagonal.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::tol;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `M = U diag(λ) U*` of a Hermitian matrix.
///
/// Eigenvalues come back ascending; `eigenvectors` holds the matching
/// orthonormal columns, each phase-normalized so that its first entry of
/// nonnegligible modulus is real and positive.
#[derive(Debug, Clone)]
pub struct HermEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermEig {
    /// Column `k` as an `n x 1` matrix.
    pub fn eigenvector(&self, k: usize) -> ComplexMatrix {
        let n = self.eigenvectors.rows();
        ComplexMatrix::from_fn(n, 1, |i, _| self.eigenvectors[(i, k)])
    }

    /// `U f(Λ) U*` for a scalar function applied to the spectrum.
    pub fn apply_scalar(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let n = self.eigenvectors.rows();
        let u = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == Complex64::ZERO {
                continue;
            }
            for i in 0..n {
                let uik = u[(i, k)] * fk;
                for j in 0..n {
                    out[(i, j)] += uik * u[(j, k)].conj();
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a validated Hermitian matrix.
pub fn herm_eig(m: &HermitianMatrix) -> Result<HermEig> {
    herm_eig_unchecked(m.matrix())
}

/// The Jacobi kernel. The caller guarantees the input is (numerically)
/// Hermitian; only the lower triangle's mirror is trusted after the
/// symmetrization performed here.
pub fn herm_eig_unchecked(m: &ComplexMatrix) -> Result<HermEig> {
    m.require_square()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.rows();
    if n == 0 {
        return Ok(HermEig { eigenvalues: vec![], eigenvectors: ComplexMatrix::zeros(0, 0) });
    }

    let mut a = m.hermitian_part();
    let mut u = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();
    let target = tol::JACOBI_CONVERGENCE * total;

    let mut converged = total == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let off = off_diagonal_mass(&a);
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut u, p, q);
            }
        }
    }
    if !converged && off_diagonal_mass(&a) > target {
        return Err(Error::NoConvergence { what: "Jacobi eigensolver" });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    canonicalize_phases(&mut eigenvectors);
    Ok(HermEig { eigenvalues, eigenvectors })
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilate `a[(p, q)]` with the unitary plane rotation `G = P · R`, where
/// `P = diag(e^{iφ}, 1)` strips the phase of `a_pq` and `R` is the classical
/// real Jacobi rotation. Updates `a ← G* a G` and accumulates `u ← u G`.
fn rotate(a: &mut ComplexMatrix, u: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    // Entries this deep below the scale of the pivot pair are already done.
    let scale = a[(p, p)].re.abs() + a[(q, q)].re.abs() + mag;
    if mag <= f64::EPSILON * scale || mag == 0.0 {
        return;
    }
    let phase = apq / mag; // e^{iφ}

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Column p of G is (c·e^{iφ}, -s)ᵀ; column q is (s·e^{iφ}, c)ᵀ (restricted
    // to rows p, q).
    let gp_p = phase * c;
    let gp_q = Complex64::new(-s, 0.0);
    let gq_p = phase * s;
    let gq_q = Complex64::new(c, 0.0);

    let n = a.rows();
    // a ← a G (columns p, q change)
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * gp_p + aiq * gp_q;
        a[(i, q)] = aip * gq_p + aiq * gq_q;
    }
    // a ← G* a (rows p, q change)
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = gp_p.conj() * apj + gp_q.conj() * aqj;
        a[(q, j)] = gq_p.conj() * apj + gq_q.conj() * aqj;
    }
    // Clean the annihilated pair and enforce real diagonal.
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let uip = u[(i, p)];
        let uiq = u[(i, q)];
        u[(i, p)] = uip * gp_p + uiq * gp_q;
        u[(i, q)] = uip * gq_p + uiq * gq_q;
    }
}

/// First entry of modulus above 1e-8 becomes real positive; keeps eigenbases
/// deterministic across runs and platforms.
fn canonicalize_phases(u: &mut ComplexMatrix) {
    let n = u.rows();
    for j in 0..u.cols() {
        let mut pivot = None;
        for i in 0..n {
            if u[(i, j)].norm() > 1e-8 {
                pivot = Some(u[(i, j)]);
                break;
            }
        }
        if let Some(z) = pivot {
            let phase = z / z.norm();
            let corr = phase.conj();
            for i in 0..n {
                u[(i, j)] = u[(i, j)] * corr;
            }
        }
    }
}
