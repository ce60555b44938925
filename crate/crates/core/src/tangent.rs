//! Tangent vectors `𝒱 = iXV − iVY`, the isotropy ambiguity space, the quotient
//! Finsler norm, and the lifting constructions: Krein completion of a
//! symmetric incomplete matrix, the comparison lifting at projections,
//! codiagonal minimal liftings for orthogonal directions, and diagonal minimal
//! liftings through the commutant of the 2×2 model.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{block_split, codiagonal_part, diagonal_part, spectral_norm};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::minimize::{
    grid_oracle, hermitian_norm_fast, minimize, Block, MinimizeOptions, OracleResult,
    SpectralMaxProblem,
};
use crate::partial_isometry::{EpsilonModel, PartialIsometry};
use crate::svd::real_svd;
use crate::tol;

/// A Hermitian pair `(A, B)` lifting a tangent vector; its norm is the
/// C*-norm `max(‖A‖, ‖B‖)` of the product algebra.
#[derive(Debug, Clone)]
pub struct LiftingPair {
    pub a: HermitianMatrix,
    pub b: HermitianMatrix,
}

impl LiftingPair {
    pub fn new(a: HermitianMatrix, b: HermitianMatrix) -> Self {
        Self { a, b }
    }

    pub fn zeros(n: usize) -> Self {
        Self { a: HermitianMatrix::zeros(n), b: HermitianMatrix::zeros(n) }
    }

    /// `max(‖A‖, ‖B‖)`.
    pub fn pair_norm(&self) -> f64 {
        hermitian_norm_fast(self.a.matrix()).max(hermitian_norm_fast(self.b.matrix()))
    }

    /// The tangent matrix `iAV − iVB` this pair induces at `v`.
    pub fn induced_tangent(&self, v: &PartialIsometry) -> ComplexMatrix {
        (&(&(self.a.matrix() * v.matrix()) - &(v.matrix() * self.b.matrix()))).times_i()
    }

    /// Push the pair along the action: `(A, B) ↦ (U A U*, W B W*)`, which
    /// carries liftings at `V` to liftings of `U 𝒱 W*` at `U V W*` and leaves
    /// the pair norm unchanged.
    pub fn transport(&self, u: &ComplexMatrix, w: &ComplexMatrix) -> Result<Self> {
        u.require_unitary()?;
        w.require_unitary()?;
        let a = &(u * self.a.matrix()) * &u.conjugate_transpose();
        let b = &(w * self.b.matrix()) * &w.conjugate_transpose();
        Ok(Self {
            a: HermitianMatrix::from_hermitian_part(&a),
            b: HermitianMatrix::from_hermitian_part(&b),
        })
    }
}

/// A tangent vector at a partial isometry, together with one Hermitian
/// witness pair realizing it.
#[derive(Debug, Clone)]
pub struct TangentVector {
    base: PartialIsometry,
    value: ComplexMatrix,
    witness: LiftingPair,
}

impl TangentVector {
    /// `𝒱 = iXV − iVY` for Hermitian `X`, `Y`.
    pub fn from_pair(base: PartialIsometry, x: HermitianMatrix, y: HermitianMatrix) -> Result<Self> {
        let n = base.dim();
        if x.dim() != n || y.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{} / {}x{}", x.dim(), x.dim(), y.dim(), y.dim()),
            });
        }
        let witness = LiftingPair::new(x, y);
        let value = witness.induced_tangent(&base);
        Ok(Self { base, value, witness })
    }

    /// Realize a raw matrix as a tangent vector by solving the lifting
    /// equation in the least-squares sense; fails with [`Error::NotATangent`]
    /// when the residual exceeds `residual_tol`.
    pub fn lift(base: PartialIsometry, value: ComplexMatrix, residual_tol: f64) -> Result<Self> {
        let n = base.dim();
        if value.rows() != n || value.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n}x{n}"),
                found: format!("{}x{}", value.rows(), value.cols()),
            });
        }
        let map = isotropy_constraint_matrix(&base);
        let svd = real_svd(&map, 2 * n * n, 2 * n * n)?;
        // iXV − iVY = 𝒱  ⇔  XV − VY = −i𝒱.
        let target = realify_matrix(&value.scale(-Complex64::I));
        let sol = svd.solve(&target);
        let (x, y) = params_to_pair(&sol, n);
        let witness = LiftingPair::new(x, y);
        let induced = witness.induced_tangent(&base);
        let residual = (&induced - &value).frobenius_norm();
        if residual > residual_tol {
            return Err(Error::NotATangent { residual });
        }
        Ok(Self { base, value, witness })
    }

    pub fn base(&self) -> &PartialIsometry {
        &self.base
    }

    pub fn value(&self) -> &ComplexMatrix {
        &self.value
    }

    pub fn witness(&self) -> &LiftingPair {
        &self.witness
    }

    /// Ambient operator norm `‖𝒱‖`.
    pub fn ambient_norm(&self) -> f64 {
        spectral_norm(&self.value)
    }

    /// Transport along the action: the tangent `U 𝒱 W*` at `U V W*`,
    /// witnessed by the transported pair.
    pub fn transport(&self, u: &ComplexMatrix, w: &ComplexMatrix) -> Result<Self> {
        let base = self.base.act(u, w)?;
        let witness = self.witness.transport(u, w)?;
        let value = &(u * &self.value) * &w.conjugate_transpose();
        debug_assert!(
            (&witness.induced_tangent(&base) - &value).max_abs() < 1e-8 * (1.0 + value.max_abs())
        );
        Ok(Self { base, value, witness })
    }

    /// `ω(V) 𝒱 α(V) = 0`: the direction moves the initial space orthogonally
    /// to the final space.
    pub fn is_orthogonal_direction(&self) -> bool {
        self.orthogonality_overlap() <= tol::VALIDATION_TOL
    }

    /// `‖ω(V) 𝒱 α(V)‖`.
    pub fn orthogonality_overlap(&self) -> f64 {
        let w = self.base.omega().matrix();
        let a = self.base.alpha().matrix();
        spectral_norm(&(&(w * &self.value) * a))
    }
}

/// Real-linear basis of the isotropy space
/// `{(X, Y) : X* = X, Y* = Y, XV = VY}`, orthonormal in the joint Frobenius
/// inner product.
#[derive(Debug, Clone)]
pub struct IsotropyBasis {
    dim_ambient: usize,
    pairs: Vec<(HermitianMatrix, HermitianMatrix)>,
}

impl IsotropyBasis {
    pub fn pairs(&self) -> &[(HermitianMatrix, HermitianMatrix)] {
        &self.pairs
    }

    /// Real dimension of the isotropy space.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }
}

/// Nullspace of `(X, Y) ↦ XV − VY` over Hermitian pairs, by realifying the
/// constraint and thresholding singular values at
/// [`tol::NULLSPACE_REL_TOL`]` · σ_max`.
pub fn isotropy_basis(v: &PartialIsometry) -> Result<IsotropyBasis> {
    let n = v.dim();
    let map = isotropy_constraint_matrix(v);
    let svd = real_svd(&map, 2 * n * n, 2 * n * n)?;
    let pairs = svd
        .nullspace()
        .into_iter()
        .map(|z| {
            let (x, y) = params_to_pair(&z, n);
            (x, y)
        })
        .collect();
    Ok(IsotropyBasis { dim_ambient: n, pairs })
}

/// Value, attaining pair, and stall estimate of the quotient Finsler norm.
#[derive(Debug, Clone)]
pub struct QuotientNorm {
    pub value: f64,
    pub minimizer: LiftingPair,
    pub gap: f64,
}

/// The quotient Finsler norm
/// `|𝒱|_V = inf { max(‖X + ΣcᵢXᵢ‖, ‖Y + ΣcᵢYᵢ‖) }` over the isotropy basis,
/// with the default optimizer profile.
pub fn quotient_norm(tv: &TangentVector) -> Result<QuotientNorm> {
    quotient_norm_with(tv, &MinimizeOptions::default())
}

/// Quotient norm with explicit optimizer options.
pub fn quotient_norm_with(tv: &TangentVector, options: &MinimizeOptions) -> Result<QuotientNorm> {
    let iso = isotropy_basis(tv.base())?;
    let problem = pair_problem(tv.witness(), &iso);
    let res = minimize(&problem, options)?;
    let minimizer = pair_from_coeffs(tv.witness(), &iso, &res.coeffs);
    let witness_norm = tv.witness().pair_norm();
    let value = res.value.min(witness_norm.max(0.0));
    debug_assert!(value <= witness_norm + 1e-9 * (1.0 + witness_norm));
    Ok(QuotientNorm { value, minimizer, gap: res.gap })
}

/// Brute-force reference value of the quotient norm (dense grid plus
/// coordinate descent); only feasible for small bases where the isotropy
/// dimension is at most 6.
pub fn quotient_norm_oracle(tv: &TangentVector, seed: u64) -> Result<OracleResult> {
    let iso = isotropy_basis(tv.base())?;
    let problem = pair_problem(tv.witness(), &iso);
    grid_oracle(&problem, seed)
}

fn pair_problem(witness: &LiftingPair, iso: &IsotropyBasis) -> SpectralMaxProblem {
    let block_a = Block {
        base: witness.a.matrix().clone(),
        dirs: iso.pairs().iter().map(|(x, _)| x.matrix().clone()).collect(),
    };
    let block_b = Block {
        base: witness.b.matrix().clone(),
        dirs: iso.pairs().iter().map(|(_, y)| y.matrix().clone()).collect(),
    };
    SpectralMaxProblem::new(vec![block_a, block_b])
}

fn pair_from_coeffs(witness: &LiftingPair, iso: &IsotropyBasis, c: &[f64]) -> LiftingPair {
    let mut a = witness.a.matrix().clone();
    let mut b = witness.b.matrix().clone();
    for (ci, (x, y)) in c.iter().zip(iso.pairs()) {
        if *ci != 0.0 {
            a = &a + &x.matrix().scale_re(*ci);
            b = &b + &y.matrix().scale_re(*ci);
        }
    }
    LiftingPair::new(
        HermitianMatrix::from_hermitian_part(&a),
        HermitianMatrix::from_hermitian_part(&b),
    )
}

/// Hermitian completion of `[[A11, A12], [A12*, *]]` whose norm equals the
/// norm `μ` of the known row `[A11 A12]`.
///
/// Uses the central completion `A22 = −L* A11 L` with
/// `L = (μ²I − A11²)^{−1/2} A12` through the pseudo-inverse square root;
/// eigenvalues of `μ²I − A11²` below `1e-10·μ²` are excluded. The assembled
/// norm is re-verified, inflating `μ` in three steps when boundary rank
/// deficiency makes the exact value unattainable.
///
/// Returns `(A22, μ)`.
pub fn krein_complete(a11: &HermitianMatrix, a12: &ComplexMatrix) -> Result<(HermitianMatrix, f64)> {
    let k = a11.dim();
    if a12.rows() != k {
        return Err(Error::DimensionMismatch {
            expected: format!("{k} rows"),
            found: format!("{} rows", a12.rows()),
        });
    }
    let m = a12.cols();
    let row = ComplexMatrix::from_fn(k, k + m, |i, j| {
        if j < k {
            a11.matrix()[(i, j)]
        } else {
            a12[(i, j - k)]
        }
    });
    let mu = spectral_norm(&row);
    if mu <= 1e-300 {
        return Ok((HermitianMatrix::zeros(m), 0.0));
    }
    for inflation in [0.0, 1e-12, 1e-10, 1e-8] {
        let mu_used = mu * (1.0 + inflation);
        let a22 = central_completion(a11, a12, mu_used);
        let assembled = ComplexMatrix::block_2x2(
            a11.matrix(),
            a12,
            &a12.conjugate_transpose(),
            a22.matrix(),
        );
        let norm = spectral_norm(&assembled);
        if (norm - mu).abs() <= 1e-8 * mu.max(1e-12) {
            return Ok((a22, mu));
        }
    }
    Err(Error::NoConvergence { what: "Krein completion norm check" })
}

fn central_completion(a11: &HermitianMatrix, a12: &ComplexMatrix, mu: f64) -> HermitianMatrix {
    let e = crate::eig::herm_eig(a11).expect("Krein completion eigendecomposition");
    // (μ²I − A11²)^{−1/2} via the spectral calculus with pseudo-inversion.
    let cut = 1e-10 * mu * mu;
    let inv_sqrt = e.apply_scalar(|lam| {
        let d = mu * mu - lam * lam;
        if d <= cut {
            Complex64::ZERO
        } else {
            Complex64::new(1.0 / d.sqrt(), 0.0)
        }
    });
    let l = &inv_sqrt * a12;
    let a22 = -&(&(&l.conjugate_transpose() * a11.matrix()) * &l);
    HermitianMatrix::from_hermitian_part(&a22)
}

/// The lifting `(A₀, B₀)` of the comparison construction at a projection base:
/// `B₀` is the codiagonal part of the witness `Y`, and `A₀` is the Krein
/// completion of `[[X11 − Y11, X12], [X12*, *]]` in the base-adapted basis. It
/// satisfies `max(‖A₀‖, ‖B₀‖) ≤ ‖𝒱‖`.
pub fn comparison_lifting(tv: &TangentVector) -> Result<LiftingPair> {
    let base = tv.base();
    if !base.is_projection() {
        let residual = (&(base.matrix() * base.matrix()) - base.matrix()).max_abs()
            + base.matrix().hermitian_deviation();
        return Err(Error::BaseNotProjection { residual });
    }
    let p0 = base.alpha();
    let x_blocks = block_split(tv.witness().a.matrix(), p0)?;
    let y_blocks = block_split(tv.witness().b.matrix(), p0)?;
    let k = x_blocks.range_dim();
    let n = base.dim();

    let top = &x_blocks.m11 - &y_blocks.m11;
    let (a22, _mu) = krein_complete(&HermitianMatrix::from_hermitian_part(&top), &x_blocks.m12)?;
    let a0_adapted = ComplexMatrix::block_2x2(
        &top,
        &x_blocks.m12,
        &x_blocks.m12.conjugate_transpose(),
        a22.matrix(),
    );
    let b0_adapted = ComplexMatrix::block_2x2(
        &ComplexMatrix::zeros(k, k),
        &y_blocks.m12,
        &y_blocks.m12.conjugate_transpose(),
        &ComplexMatrix::zeros(n - k, n - k),
    );
    let a0 = HermitianMatrix::from_hermitian_part(&x_blocks.from_adapted(&a0_adapted));
    let b0 = HermitianMatrix::from_hermitian_part(&y_blocks.from_adapted(&b0_adapted));
    let pair = LiftingPair::new(a0, b0);
    debug_assert!(
        (&pair.induced_tangent(base) - tv.value()).max_abs() < 1e-8 * (1.0 + tv.value().max_abs())
    );
    Ok(pair)
}

/// Certified minimal lifting for an orthogonal direction: transport the base
/// to a coordinate projection, keep only the codiagonal blocks of the witness,
/// transport back. The pair norm equals both `‖𝒱‖` and the quotient norm; the
/// construction re-verifies this and fails with
/// [`Error::CertificationFailed`] if the optimizer disagrees beyond 1e-7.
pub fn codiagonal_minimal_lifting(tv: &TangentVector) -> Result<LiftingPair> {
    let overlap = tv.orthogonality_overlap();
    if overlap > tol::VALIDATION_TOL {
        return Err(Error::NotOrthogonalDirection { overlap });
    }
    let f = tv.base().factor_through_projection();
    let u_inv = f.u.conjugate_transpose();
    let w_inv = f.w.conjugate_transpose();
    let at_p0 = tv.transport(&u_inv, &w_inv)?;

    let p0 = at_p0.base().alpha();
    let a0 = HermitianMatrix::from_hermitian_part(&codiagonal_part(at_p0.witness().a.matrix(), p0));
    let b0 = HermitianMatrix::from_hermitian_part(&codiagonal_part(at_p0.witness().b.matrix(), p0));
    let pair = LiftingPair::new(a0, b0).transport(&f.u, &f.w)?;

    let constructed = pair.pair_norm();
    let ambient = tv.ambient_norm();
    let quotient = quotient_norm_with(tv, &MinimizeOptions::lean())?;
    if (constructed - ambient).abs() > 1e-7 * (1.0 + ambient)
        || (constructed - quotient.value).abs() > 1e-7 * (1.0 + ambient)
    {
        return Err(Error::CertificationFailed { constructed, quotient: quotient.value });
    }
    debug_assert!(
        (&pair.induced_tangent(tv.base()) - tv.value()).max_abs()
            < 1e-7 * (1.0 + tv.value().max_abs())
    );
    Ok(pair)
}

/// A diagonal minimal lifting in the 2×2 model: the block-diagonal Hermitian
/// `𝐀₀ = diag(A₀, B₀)` obtained by minimizing `‖𝐀 + 𝐗‖` over the commutant of
/// `ε_V` and pinching the minimizer to its diagonal blocks.
#[derive(Debug, Clone)]
pub struct DiagonalLifting {
    /// The `2n × 2n` block-diagonal minimal lifting.
    pub bold: HermitianMatrix,
    /// Its diagonal blocks read back as a lifting pair of `𝒱`.
    pub pair: LiftingPair,
    /// Value of the commutant minimization before pinching.
    pub commutant_value: f64,
}

/// Compute a diagonal minimal lifting of `𝒱` via the commutant route. The
/// resulting pair lifts `𝒱` and its norm reproduces the quotient norm (the
/// pinching can only shrink the commutant minimum, and the diagonal blocks of
/// a commutant element form an isotropy pair).
pub fn diagonal_minimal_lifting(tv: &TangentVector) -> Result<DiagonalLifting> {
    diagonal_minimal_lifting_with(tv, &MinimizeOptions::default())
}

pub fn diagonal_minimal_lifting_with(
    tv: &TangentVector,
    options: &MinimizeOptions,
) -> Result<DiagonalLifting> {
    let n = tv.base().dim();
    let model = EpsilonModel::embed(tv.base());
    let zero = ComplexMatrix::zeros(n, n);
    let bold_a = ComplexMatrix::block_2x2(tv.witness().a.matrix(), &zero, &zero, tv.witness().b.matrix());

    let commutant = commutant_basis(&model)?;
    let problem = SpectralMaxProblem::new(vec![Block {
        base: bold_a.clone(),
        dirs: commutant.iter().map(|z| z.matrix().clone()).collect(),
    }]);
    let res = minimize(&problem, options)?;

    let mut optimal = bold_a;
    for (ci, z) in res.coeffs.iter().zip(&commutant) {
        if *ci != 0.0 {
            optimal = &optimal + &z.matrix().scale_re(*ci);
        }
    }
    let upper = HermitianMatrix::from_hermitian_part(&ComplexMatrix::block_2x2(
        &ComplexMatrix::identity(n),
        &zero,
        &zero,
        &zero,
    ));
    let pinched = diagonal_part(&optimal, &upper);
    let bold = HermitianMatrix::from_hermitian_part(&pinched);
    let a0 = HermitianMatrix::from_hermitian_part(&pinched.block(0, n, 0, n));
    let b0 = HermitianMatrix::from_hermitian_part(&pinched.block(n, 2 * n, n, 2 * n));
    let pair = LiftingPair::new(a0, b0);

    let residual = spectral_norm(&(&pair.induced_tangent(tv.base()) - tv.value()));
    if residual > 1e-6 * (1.0 + tv.ambient_norm()) {
        return Err(Error::NotATangent { residual });
    }
    Ok(DiagonalLifting { bold, pair, commutant_value: res.value })
}

/// Orthonormal real basis of the Hermitian part of the commutant `{ε_V}'`.
fn commutant_basis(model: &EpsilonModel) -> Result<Vec<HermitianMatrix>> {
    let nn = model.dim();
    let eps = model.epsilon.matrix();
    let n_params = nn * nn;
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n_params);
    for p in 0..n_params {
        let mut params = vec![0.0; n_params];
        params[p] = 1.0;
        let z = params_to_herm(&params, nn);
        let comm = &(&z * eps) - &(eps * &z);
        cols.push(realify_matrix(&comm));
    }
    let rows = 2 * nn * nn;
    let mut flat = vec![0.0; rows * n_params];
    for (j, col) in cols.iter().enumerate() {
        for (i, &x) in col.iter().enumerate() {
            flat[i * n_params + j] = x;
        }
    }
    let svd = real_svd(&flat, rows, n_params)?;
    Ok(svd.nullspace().into_iter().map(|z| params_to_herm_wrapped(&z, nn)).collect())
}

/// A frozen regression instance where the quotient norm is strictly below the
/// ambient norm: at `V = diag(1, 0)` with witness `X = [[1,1],[1,0]]`,
/// `Y = [[0,−1],[−1,0]]`, balancing `|1+z|` against `|z|` over the isotropy
/// gives quotient norm `√5/2` while `‖𝒱‖` is the golden ratio `(1+√5)/2`.
pub fn strict_gap_instance() -> TangentVector {
    let v = PartialIsometry::validate(ComplexMatrix::real_diag(&[1.0, 0.0]))
        .expect("coordinate projection");
    let x = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 0.0]]))
        .expect("Hermitian witness");
    let y = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[-1.0, 0.0]]))
        .expect("Hermitian witness");
    TangentVector::from_pair(v, x, y).expect("fixture tangent")
}

/// Expected quotient norm of [`strict_gap_instance`].
pub const STRICT_GAP_QUOTIENT: f64 = 1.118033988749895; // sqrt(5)/2
/// Expected ambient norm of [`strict_gap_instance`].
pub const STRICT_GAP_AMBIENT: f64 = 1.618033988749895; // (1+sqrt(5))/2

// ---------------------------------------------------------------------------
// Realification helpers. A Hermitian n×n matrix carries n² real parameters:
// the diagonal, then (√2·Re, √2·Im) of each strict upper entry in row-major
// order. The √2 makes the parameter 2-norm equal the Frobenius norm, so
// orthonormal parameter vectors give Frobenius-orthonormal matrices.
// ---------------------------------------------------------------------------

pub(crate) fn params_to_herm(params: &[f64], n: usize) -> ComplexMatrix {
    debug_assert_eq!(params.len(), n * n);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(params[i], 0.0);
    }
    let mut t = n;
    for i in 0..n {
        for j in (i + 1)..n {
            let re = params[t] * inv_sqrt2;
            let im = params[t + 1] * inv_sqrt2;
            m[(i, j)] = Complex64::new(re, im);
            m[(j, i)] = Complex64::new(re, -im);
            t += 2;
        }
    }
    m
}

fn params_to_herm_wrapped(params: &[f64], n: usize) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_part(&params_to_herm(params, n))
}

#[cfg(test)]
pub(crate) fn herm_to_params(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut params = vec![0.0; n * n];
    for i in 0..n {
        params[i] = m[(i, i)].re;
    }
    let mut t = n;
    for i in 0..n {
        for j in (i + 1)..n {
            params[t] = m[(i, j)].re * sqrt2;
            params[t + 1] = m[(i, j)].im * sqrt2;
            t += 2;
        }
    }
    params
}

/// Realify a complex matrix as `[Re entries; Im entries]`, row-major.
pub(crate) fn realify_matrix(m: &ComplexMatrix) -> Vec<f64> {
    let (r, c) = (m.rows(), m.cols());
    let mut out = Vec::with_capacity(2 * r * c);
    for i in 0..r {
        for j in 0..c {
            out.push(m[(i, j)].re);
        }
    }
    for i in 0..r {
        for j in 0..c {
            out.push(m[(i, j)].im);
        }
    }
    out
}

fn params_to_pair(params: &[f64], n: usize) -> (HermitianMatrix, HermitianMatrix) {
    let x = params_to_herm_wrapped(&params[..n * n], n);
    let y = params_to_herm_wrapped(&params[n * n..], n);
    (x, y)
}

/// Row-major matrix of the realified map `(X, Y) ↦ XV − VY` acting on the
/// 2n² Hermitian-pair parameters.
fn isotropy_constraint_matrix(v: &PartialIsometry) -> Vec<f64> {
    let n = v.dim();
    let n_params = 2 * n * n;
    let rows = 2 * n * n;
    let mut flat = vec![0.0; rows * n_params];
    for p in 0..n_params {
        let mut params = vec![0.0; n_params];
        params[p] = 1.0;
        let (x, y) = params_to_pair(&params, n);
        let image = &(x.matrix() * v.matrix()) - &(v.matrix() * y.matrix());
        for (i, val) in realify_matrix(&image).into_iter().enumerate() {
            flat[i * n_params + p] = val;
        }
    }
    flat
}
