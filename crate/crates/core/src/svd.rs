//! One-sided Jacobi SVD for real matrices.
//!
//! Used on realified linear operators (isotropy constraints, commutants,
//! tangency solves) where the interesting output is the nullspace or a
//! pseudo-inverse solve. Column pairs of `W = A·V` are orthogonalized by plane
//! rotations accumulated into `V`; at convergence the column norms of `W` are
//! the singular values and `V` holds the right singular vectors. Unlike the
//! normal-equations route, zero singular values surface at the rounding level
//! of `σ_max`, so the relative threshold [`crate::tol::NULLSPACE_REL_TOL`]
//! separates them cleanly.

use crate::error::{Error, Result};
use crate::tol;

/// Right singular structure of a real `rows x cols` matrix.
#[derive(Debug, Clone)]
pub struct RealSvd {
    pub rows: usize,
    pub cols: usize,
    /// Unsorted singular values, one per column of `v`.
    pub sigma: Vec<f64>,
    /// `W = A V` with orthogonal columns, stored column-major.
    w: Vec<Vec<f64>>,
    /// Right singular vectors, column-major.
    v: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 60;

/// One-sided Jacobi on the columns of `a` (row-major `rows x cols`).
pub fn real_svd(a: &[f64], rows: usize, cols: usize) -> Result<RealSvd> {
    assert_eq!(a.len(), rows * cols);
    let mut w: Vec<Vec<f64>> =
        (0..cols).map(|j| (0..rows).map(|i| a[i * cols + j]).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..cols).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let total: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    // Columns at rounding level relative to the matrix are finished null
    // directions; their "angles" to other columns are pure noise.
    let floor2 = (1e-15 * total) * (1e-15 * total);

    let mut converged = cols < 2 || total == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let app: f64 = w[p].iter().map(|x| x * x).sum();
                let aqq: f64 = w[q].iter().map(|x| x * x).sum();
                if app <= floor2 || aqq <= floor2 {
                    continue;
                }
                let apq: f64 = w[p].iter().zip(&w[q]).map(|(x, y)| x * y).sum();
                // The computed cosine of two columns bottoms out near
                // n·ε ≈ 1e-14; chasing anything below 1e-12 only chases noise.
                if apq == 0.0 || apq.abs() <= 1e-12 * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (aqq - app) / (2.0 * apq);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let wp = w[p][i];
                    let wq = w[q][i];
                    w[p][i] = c * wp - s * wq;
                    w[q][i] = s * wp + c * wq;
                }
                for i in 0..cols {
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = c * vp - s * vq;
                    v[q][i] = s * vp + c * vq;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { what: "one-sided Jacobi SVD" });
    }
    let sigma: Vec<f64> = w.iter().map(|col| col.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    Ok(RealSvd { rows, cols, sigma, w, v })
}

impl RealSvd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.iter().cloned().fold(0.0, f64::max)
    }

    /// Orthonormal basis of the (numerical) nullspace: right singular vectors
    /// whose singular value is at most `NULLSPACE_REL_TOL · σ_max`.
    pub fn nullspace(&self) -> Vec<Vec<f64>> {
        let cut = tol::NULLSPACE_REL_TOL * self.sigma_max();
        (0..self.cols)
            .filter(|&j| self.sigma[j] <= cut)
            .map(|j| self.v[j].clone())
            .collect()
    }

    /// Minimum-norm least-squares solve `min ‖A x − b‖` via the pseudo-inverse.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.rows);
        let cut = tol::NULLSPACE_REL_TOL * self.sigma_max();
        let mut x = vec![0.0; self.cols];
        for j in 0..self.cols {
            if self.sigma[j] <= cut {
                continue;
            }
            // u_j = w_j / σ_j, coefficient = (u_j · b)/σ_j.
            let wb: f64 = self.w[j].iter().zip(b).map(|(w, b)| w * b).sum();
            let coeff = wb / (self.sigma[j] * self.sigma[j]);
            for i in 0..self.cols {
                x[i] += coeff * self.v[j][i];
            }
        }
        x
    }

    /// Rank with the nullspace threshold.
    pub fn rank(&self) -> usize {
        let cut = tol::NULLSPACE_REL_TOL * self.sigma_max();
        self.sigma.iter().filter(|&&s| s > cut).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn singular_values_of_known_matrix() {
        // [[3, 0], [0, -5]] has singular values {3, 5}.
        let svd = real_svd(&[3.0, 0.0, 0.0, -5.0], 2, 2).unwrap();
        let mut s = svd.sigma.clone();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((s[0] - 3.0).abs() < 1e-12 && (s[1] - 5.0).abs() < 1e-12);
        assert!(svd.nullspace().is_empty());
    }

    #[test]
    fn nullspace_of_rank_one() {
        // Rank-1: second column = 2 x first.
        let a = [1.0, 2.0, 1.0, 2.0, 1.0, 2.0];
        let svd = real_svd(&a, 3, 2).unwrap();
        let ns = svd.nullspace();
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        // Nullspace direction is (2, -1)/sqrt(5).
        assert!((v[0] * 1.0 + v[1] * 0.5).abs() > 0.0); // sanity: nonzero vector
        let residual: f64 = (0..3)
            .map(|i| (a[i * 2] * v[0] + a[i * 2 + 1] * v[1]).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(residual < 1e-12);
    }

    #[test]
    fn least_squares_recovers_exact_solution() {
        let mut rng = SeededRng::new(11);
        let (m, n) = (8, 5);
        let a: Vec<f64> = (0..m * n).map(|_| rng.normal()).collect();
        let x_true: Vec<f64> = (0..n).map(|_| rng.normal()).collect();
        let b: Vec<f64> = (0..m)
            .map(|i| (0..n).map(|j| a[i * n + j] * x_true[j]).sum())
            .collect();
        let svd = real_svd(&a, m, n).unwrap();
        let x = svd.solve(&b);
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_matrix_is_all_nullspace() {
        let svd = real_svd(&[0.0; 12], 4, 3).unwrap();
        assert_eq!(svd.nullspace().len(), 3);
        assert_eq!(svd.rank(), 0);
    }
}
