//! Seeded, counter-based random generation for reproducible experiments.
//!
//! The generator is SplitMix64: the `k`-th output is `mix64(seed + (k+1)·γ)`
//! with `γ = 0x9E3779B97F4A7C15` and
//!
//! ```text
//! mix64(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
//!           z ^= z >> 27; z *= 0x94D049BB133111EB;
//!           z ^= z >> 31;
//! ```
//!
//! Being a pure function of `seed` and the call counter, identical seeds give
//! bit-identical streams on every platform, and harness trial `i` can fork an
//! independent stream from sub-seed `seed ^ i`.

use num_complex::Complex64;

use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::partial_isometry::PartialIsometry;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 stream addressed by `(seed, counter)`.
#[derive(Debug, Clone)]
pub struct SeededRng {
    state: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Stream for trial `i`, derived from sub-seed `seed ^ i`.
    pub fn fork(seed: u64, trial: u64) -> Self {
        Self::new(seed ^ trial)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `(0, 1]`; never returns 0 so it is safe under `ln`.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (self.uniform() - 0.5 / (1u64 << 53) as f64)
    }

    pub fn usize_below(&mut self, n: usize) -> usize {
        assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    /// Standard normal via Box-Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Standard complex normal (unit total variance).
    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal()).scale(std::f64::consts::FRAC_1_SQRT_2)
    }

    /// Ginibre matrix: i.i.d. standard complex normal entries.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = self.complex_normal();
            }
        }
        m
    }

    /// Random Hermitian `scale · (G + G*)/2`.
    pub fn hermitian(&mut self, n: usize, scale: f64) -> HermitianMatrix {
        HermitianMatrix::from_hermitian_part(&self.ginibre(n, n).scale_re(scale))
    }

    /// Haar unitary: QR of a Ginibre matrix with the R diagonal made positive.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix {
        let g = self.ginibre(n, n);
        let mut q = ComplexMatrix::zeros(n, n);
        // Modified Gram-Schmidt on columns.
        let mut cols: Vec<Vec<Complex64>> =
            (0..n).map(|j| (0..n).map(|i| g[(i, j)]).collect()).collect();
        for j in 0..n {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| q[(i, k)].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let qik = q[(i, k)];
                    cols[j][i] -= proj * qik;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            // A Ginibre column is almost surely independent of its predecessors;
            // re-randomize in the measure-zero degenerate case.
            if norm < 1e-12 {
                for v in cols[j].iter_mut() {
                    *v = self.complex_normal();
                }
                return self.unitary(n);
            }
            for i in 0..n {
                q[(i, j)] = cols[j][i] / norm;
            }
        }
        q
    }

    /// Random rank-`rank` orthogonal projection `U diag(1..1, 0..0) U*`.
    pub fn projection(&mut self, n: usize, rank: usize) -> HermitianMatrix {
        assert!(rank <= n);
        let u = self.unitary(n);
        let mut p = ComplexMatrix::zeros(n, n);
        for k in 0..rank {
            for i in 0..n {
                let uik = u[(i, k)];
                for j in 0..n {
                    p[(i, j)] += uik * u[(j, k)].conj();
                }
            }
        }
        HermitianMatrix::from_hermitian_part(&p)
    }

    /// Random partial isometry with component triple `(rank, n-rank, n-rank)`,
    /// built as `U P0 W*` from two Haar unitaries.
    pub fn partial_isometry(&mut self, n: usize, rank: usize) -> PartialIsometry {
        assert!(rank <= n);
        let u = self.unitary(n);
        let w = self.unitary(n);
        let mut v = ComplexMatrix::zeros(n, n);
        for k in 0..rank {
            for i in 0..n {
                let uik = u[(i, k)];
                for j in 0..n {
                    v[(i, j)] += uik * w[(j, k)].conj();
                }
            }
        }
        PartialIsometry::validate(v).expect("constructed partial isometry must validate")
    }
}
