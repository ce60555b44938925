//! Shared builders for the benchmark targets.

use parisom::matrix::HermitianMatrix;
use parisom::rng::SeededRng;
use parisom::tangent::TangentVector;

pub fn random_hermitian(seed: u64, n: usize) -> HermitianMatrix {
    SeededRng::new(seed).hermitian(n, 1.0)
}

pub fn random_tangent(seed: u64, n: usize, rank: usize) -> TangentVector {
    let mut rng = SeededRng::new(seed);
    let v = rng.partial_isometry(n, rank);
    let x = rng.hermitian(n, 1.0);
    let y = rng.hermitian(n, 1.0);
    TangentVector::from_pair(v, x, y).expect("bench tangent")
}
