//! The manifold of orthogonal projections: geodesic existence between two
//! projections, the principal-angle construction of minimal geodesics, and the
//! distance-decreasing pushforwards of the initial/final projection maps.

use num_complex::Complex64;

use crate::eig::herm_eig;
use crate::error::{Error, Result};
use crate::geodesics::{length_finsler, LengthOptions, SampledCurve};
use crate::linalg::{spectral_norm, unitary_exp};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::partial_isometry::PartialIsometry;
use crate::tangent::TangentVector;
use crate::tol;

/// A validated orthogonal projection with its range dimension.
#[derive(Debug, Clone)]
pub struct Projection {
    p: HermitianMatrix,
    rank: usize,
}

impl Projection {
    pub fn validate(m: ComplexMatrix) -> Result<Self> {
        let p = HermitianMatrix::new(m)?;
        let idem = (&(p.matrix() * p.matrix()) - p.matrix()).max_abs();
        if idem > tol::VALIDATION_TOL {
            return Err(Error::NotAProjection { deviation: idem });
        }
        let e = herm_eig(&p)?;
        let mut rank = 0;
        for &lam in &e.eigenvalues {
            if (lam - 0.5).abs() < 1e-6 {
                return Err(Error::AmbiguousRank { eigenvalue: lam });
            }
            if lam > 0.5 {
                rank += 1;
            }
        }
        Ok(Self { p, rank })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.p.matrix()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.p
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Orthonormal basis of the range (`n x rank` columns).
    pub fn range_basis(&self) -> ComplexMatrix {
        let e = herm_eig(&self.p).expect("projection eigendecomposition");
        let n = self.dim();
        ComplexMatrix::from_fn(n, self.rank, |i, j| e.eigenvectors[(i, n - self.rank + j)])
    }

    /// Orthonormal basis of the nullspace (`n x (n - rank)` columns).
    pub fn null_basis(&self) -> ComplexMatrix {
        let e = herm_eig(&self.p).expect("projection eigendecomposition");
        let n = self.dim();
        ComplexMatrix::from_fn(n, n - self.rank, |i, j| e.eigenvectors[(i, j)])
    }
}

/// The two certificate dimensions of the geodesic-existence condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExistenceCertificate {
    /// `dim(R(P0) ∩ N(P1))`.
    pub dim_r0_n1: usize,
    /// `dim(R(P1) ∩ N(P0))`.
    pub dim_r1_n0: usize,
}

impl ExistenceCertificate {
    pub fn exists(&self) -> bool {
        self.dim_r0_n1 == self.dim_r1_n0
    }
}

/// A geodesic joining two projections exists iff
/// `dim(R(P0) ∩ N(P1)) = dim(R(P1) ∩ N(P0))`. The dimensions are counted as
/// eigenvalues of `P0 (I − P1) P0` (resp. with roles swapped) above
/// `1 − 1e-8`: a unit vector fixed by `P0` and killed by `P1` is exactly a
/// unit eigenvector at eigenvalue 1.
pub fn geodesic_exists(p0: &Projection, p1: &Projection) -> Result<ExistenceCertificate> {
    if p0.dim() != p1.dim() {
        return Err(Error::DimensionMismatch {
            expected: format!("{0}x{0}", p0.dim()),
            found: format!("{0}x{0}", p1.dim()),
        });
    }
    Ok(ExistenceCertificate {
        dim_r0_n1: intersection_dim(p0, p1)?,
        dim_r1_n0: intersection_dim(p1, p0)?,
    })
}

fn intersection_dim(a: &Projection, b: &Projection) -> Result<usize> {
    let n = a.dim();
    let complement = &ComplexMatrix::identity(n) - b.matrix();
    let compressed = &(a.matrix() * &complement) * a.matrix();
    let e = herm_eig(&HermitianMatrix::from_hermitian_part(&compressed))?;
    Ok(e.eigenvalues.iter().filter(|&&lam| lam >= 1.0 - 1e-8).count())
}

/// A minimal geodesic `t ↦ e^{itZ} P0 e^{−itZ}` of the projection manifold,
/// with `Z` Hermitian and codiagonal with respect to `P0` and `‖Z‖ ≤ π/2`.
/// The curve reaches `P1` at `t = 1`; its arc length per unit parameter is
/// `‖Z‖`.
#[derive(Debug, Clone)]
pub struct ProjectionGeodesic {
    p0: Projection,
    z: HermitianMatrix,
    /// Principal angles in `(0, π/2]`, descending.
    angles: Vec<f64>,
}

impl ProjectionGeodesic {
    pub fn start(&self) -> &Projection {
        &self.p0
    }

    pub fn generator(&self) -> &HermitianMatrix {
        &self.z
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// `‖Z‖`: the largest principal angle.
    pub fn generator_norm(&self) -> f64 {
        self.angles.first().copied().unwrap_or(0.0)
    }

    pub fn point(&self, t: f64) -> ComplexMatrix {
        let u = unitary_exp(&self.z, t);
        &(&u * self.p0.matrix()) * &u.conjugate_transpose()
    }

    /// Exact velocity `i [Z, δ(t)]`.
    pub fn velocity(&self, t: f64) -> ComplexMatrix {
        let p = self.point(t);
        (&(self.z.matrix() * &p) - &(&p * self.z.matrix())).times_i()
    }

    /// Sample as a curve of partial isometries with exact velocities.
    pub fn sample(&self, t0: f64, t1: f64, nodes: usize) -> Result<SampledCurve> {
        let raw: Result<Vec<_>> = (0..nodes)
            .map(|k| {
                let t = t0 + (t1 - t0) * k as f64 / (nodes - 1) as f64;
                PartialIsometry::validate(self.point(t))
            })
            .collect();
        let times: Vec<f64> =
            (0..nodes).map(|k| t0 + (t1 - t0) * k as f64 / (nodes - 1) as f64).collect();
        SampledCurve::from_exact_parts(
            times,
            raw?,
            (0..nodes)
                .map(|k| self.velocity(t0 + (t1 - t0) * k as f64 / (nodes - 1) as f64))
                .collect(),
        )
    }
}

/// Construct the minimal geodesic joining `p0` to `p1` from the principal
/// angles between their ranges. Fails with [`Error::NoGeodesic`] (carrying the
/// certificate dimensions) when the existence condition is violated.
pub fn minimal_projection_geodesic(p0: &Projection, p1: &Projection) -> Result<ProjectionGeodesic> {
    let cert = geodesic_exists(p0, p1)?;
    if !cert.exists() {
        return Err(Error::NoGeodesic { dim_r0_n1: cert.dim_r0_n1, dim_r1_n0: cert.dim_r1_n0 });
    }
    let n = p0.dim();
    let r = p0.rank();
    debug_assert_eq!(r, p1.rank(), "equal certificate dimensions force equal ranks here");
    if r == 0 || r == n {
        // Both projections are 0 or both are the identity.
        let z = HermitianMatrix::zeros(n);
        return Ok(ProjectionGeodesic { p0: p0.clone(), z, angles: vec![] });
    }

    let q0 = p0.range_basis();
    let q1 = p1.range_basis();
    let m = &q0.conjugate_transpose() * &q1; // r x r, singular values cos θ
    let mm = &m * &m.conjugate_transpose();
    let left = herm_eig(&HermitianMatrix::from_hermitian_part(&mm))?;

    // Below this the plane counts as a right angle outright: the squared-
    // matrix eigensolve cannot distinguish a true zero from rounding there,
    // and treating σ ≤ 1e-7 as zero costs at most 1e-7 in the endpoint.
    let sigma_zero_tol = 1e-7;
    let mut z = ComplexMatrix::zeros(n, n);
    let mut angles: Vec<f64> = Vec::new();
    let mut zero_left: Vec<ComplexMatrix> = Vec::new();

    for k in (0..r).rev() {
        let a = left.eigenvector(k);
        // The right principal vector comes from M* a directly: its norm is a
        // more accurate σ than the eigenvalue square root, and normalizing by
        // it keeps the direction clean for small angles.
        let b_raw = &m.conjugate_transpose() * &a;
        let sigma = b_raw.frobenius_norm().min(1.0);
        if sigma <= sigma_zero_tol {
            zero_left.push(a);
            continue;
        }
        let theta = sigma.clamp(-1.0, 1.0).acos();
        if theta <= 1e-12 {
            continue; // aligned plane, no rotation needed
        }
        let b = b_raw.scale_re(1.0 / b_raw.frobenius_norm());
        let u = &q0 * &a;
        let v = &q1 * &b;
        let w = (&v - &u.scale_re(sigma)).scale_re(1.0 / theta.sin());
        accumulate_rotation_plane(&mut z, &u, &w, theta);
        angles.push(theta);
    }

    if !zero_left.is_empty() {
        // Right-angle planes: pair the leftover range directions of P0 with an
        // orthonormal basis of the corresponding directions in R(P1). Any
        // orthonormal pairing is valid; the generator is not unique.
        let mtm = &m.conjugate_transpose() * &m;
        let right = herm_eig(&HermitianMatrix::from_hermitian_part(&mtm))?;
        let mut zero_right: Vec<ComplexMatrix> = Vec::new();
        for k in 0..r {
            let b = right.eigenvector(k);
            if (&m * &b).frobenius_norm() <= sigma_zero_tol {
                zero_right.push(b);
            }
        }
        if zero_left.len() != zero_right.len() {
            return Err(Error::NoConvergence { what: "principal-angle zero-space pairing" });
        }
        let theta = std::f64::consts::FRAC_PI_2;
        for (a, b) in zero_left.iter().zip(&zero_right) {
            let u = &q0 * a;
            let w = &q1 * b;
            accumulate_rotation_plane(&mut z, &u, &w, theta);
            angles.push(theta);
        }
    }

    angles.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let z = HermitianMatrix::from_hermitian_part(&z);
    let geo = ProjectionGeodesic { p0: p0.clone(), z, angles };

    let endpoint_residual = spectral_norm(&(&geo.point(1.0) - p1.matrix()));
    if endpoint_residual > 1e-7 {
        return Err(Error::NoConvergence { what: "projection geodesic endpoint" });
    }
    Ok(geo)
}

/// Add `θ · i (u w* − w u*)` to `z`: the generator of the rotation by `θ` in
/// the oriented plane spanned by the orthonormal pair `(u, w)`.
fn accumulate_rotation_plane(z: &mut ComplexMatrix, u: &ComplexMatrix, w: &ComplexMatrix, theta: f64) {
    let n = z.rows();
    for i in 0..n {
        for j in 0..n {
            let uw = u[(i, 0)] * w[(j, 0)].conj();
            let wu = w[(i, 0)] * u[(j, 0)].conj();
            z[(i, j)] += Complex64::new(0.0, theta) * (uw - wu);
        }
    }
}

/// Pushforward of a tangent vector under the initial-projection map:
/// `𝒱* V + V* 𝒱`, which for a witness `(X, Y)` equals `i [Y, α(V)]`. Both
/// routes are evaluated and must agree to 1e-8, otherwise the witness is
/// invalid and an error is raised.
pub fn pushforward_alpha(tv: &TangentVector) -> Result<ComplexMatrix> {
    let v = tv.base().matrix();
    let vstar = v.conjugate_transpose();
    let direct = &(&tv.value().conjugate_transpose() * v) + &(&vstar * tv.value());
    let alpha = tv.base().alpha().matrix();
    let y = tv.witness().b.matrix();
    let commutator = (&(&(y * alpha) - &(alpha * y))).times_i();
    check_pushforward(direct, commutator, tv)
}

/// Pushforward under the final-projection map: `𝒱 V* + V 𝒱* = i [X, ω(V)]`.
pub fn pushforward_omega(tv: &TangentVector) -> Result<ComplexMatrix> {
    let v = tv.base().matrix();
    let vstar = v.conjugate_transpose();
    let direct = &(tv.value() * &vstar) + &(v * &tv.value().conjugate_transpose());
    let omega = tv.base().omega().matrix();
    let x = tv.witness().a.matrix();
    let commutator = (&(&(x * omega) - &(omega * x))).times_i();
    check_pushforward(direct, commutator, tv)
}

fn check_pushforward(
    direct: ComplexMatrix,
    commutator: ComplexMatrix,
    tv: &TangentVector,
) -> Result<ComplexMatrix> {
    let scale = 1.0 + tv.value().max_abs() + tv.witness().pair_norm();
    let deviation = (&direct - &commutator).max_abs();
    if deviation > 1e-8 * scale {
        return Err(Error::NotATangent { residual: deviation });
    }
    Ok(direct)
}

/// Report of the distance-decreasing experiment for one curve.
#[derive(Debug, Clone)]
pub struct ContractionReport {
    /// Finsler length of the curve in the partial-isometry space.
    pub finsler_length: f64,
    /// Ambient-norm length of the initial-projection image curve.
    pub alpha_image_length: f64,
    /// Ambient-norm length of the final-projection image curve.
    pub omega_image_length: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Measure the image curves `α ∘ γ` and `ω ∘ γ` in the projection manifold
/// (whose Finsler norm is the ambient norm) against the Finsler length of `γ`
/// itself. Both image lengths must not exceed it beyond the tolerance.
pub fn contraction_experiment(
    curve: &SampledCurve,
    tolerance: f64,
    options: &LengthOptions,
) -> Result<ContractionReport> {
    let finsler_length = length_finsler(curve, options)?.value;
    let n = curve.len();
    let h = curve.times()[1] - curve.times()[0];
    let mut alpha_speeds = Vec::with_capacity(n);
    let mut omega_speeds = Vec::with_capacity(n);
    for k in 0..n {
        let pt = &curve.points()[k];
        let vel = &curve.velocities()[k];
        let scale = 1e-4 * (1.0 + vel.frobenius_norm());
        let tv = TangentVector::lift(pt.clone(), vel.clone(), scale)?;
        alpha_speeds.push(spectral_norm(&pushforward_alpha(&tv)?));
        omega_speeds.push(spectral_norm(&pushforward_omega(&tv)?));
    }
    let alpha_image_length = simpson_values(&alpha_speeds, h);
    let omega_image_length = simpson_values(&omega_speeds, h);
    let pass = alpha_image_length <= finsler_length + tolerance
        && omega_image_length <= finsler_length + tolerance;
    Ok(ContractionReport { finsler_length, alpha_image_length, omega_image_length, tolerance, pass })
}

fn simpson_values(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    debug_assert!(n % 2 == 1 && n >= 3);
    let mut acc = values[0] + values[n - 1];
    for (k, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::{
        length_ambient, random_gauge_curve, CompetitorOptions, GeodesicCurve,
    };
    use crate::rng::SeededRng;
    use crate::tangent::LiftingPair;

    fn proj(entries: &[f64]) -> Projection {
        Projection::validate(ComplexMatrix::real_diag(entries)).unwrap()
    }

    #[test]
    fn existence_trivial_cases() {
        let p = proj(&[1.0, 0.0]);
        let cert = geodesic_exists(&p, &p).unwrap();
        assert!(cert.exists());
        assert_eq!((cert.dim_r0_n1, cert.dim_r1_n0), (0, 0));

        let q = proj(&[0.0, 1.0]);
        let cert = geodesic_exists(&p, &q).unwrap();
        assert!(cert.exists());
        assert_eq!((cert.dim_r0_n1, cert.dim_r1_n0), (1, 1));
    }

    #[test]
    fn existence_rank_mismatch() {
        // R(P0) ∩ N(P1) = span(e2) but R(P1) ∩ N(P0) = 0.
        let p0 = proj(&[1.0, 1.0, 0.0]);
        let p1 = proj(&[1.0, 0.0, 0.0]);
        let cert = geodesic_exists(&p0, &p1).unwrap();
        assert_eq!((cert.dim_r0_n1, cert.dim_r1_n0), (1, 0));
        assert!(!cert.exists());
        assert!(matches!(
            minimal_projection_geodesic(&p0, &p1),
            Err(Error::NoGeodesic { dim_r0_n1: 1, dim_r1_n0: 0 })
        ));
    }

    #[test]
    fn geodesic_to_self_is_constant() {
        let p = proj(&[1.0, 0.0, 1.0]);
        let geo = minimal_projection_geodesic(&p, &p).unwrap();
        assert!(geo.generator_norm() < 1e-12);
        assert!((&geo.point(1.0) - p.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn rotated_projection_angle() {
        // P1 = R_θ P0 R_θ* for a plane rotation by θ = π/6: one principal
        // angle π/6, so ‖Z‖ = π/6 and the endpoint matches.
        let theta = std::f64::consts::PI / 6.0;
        let (c, s) = (theta.cos(), theta.sin());
        let p0 = proj(&[1.0, 0.0]);
        let p1 = Projection::validate(ComplexMatrix::from_real_rows(&[
            &[c * c, c * s],
            &[c * s, s * s],
        ]))
        .unwrap();
        let geo = minimal_projection_geodesic(&p0, &p1).unwrap();
        assert!((geo.generator_norm() - theta).abs() < 1e-9);
        assert!(spectral_norm(&(&geo.point(1.0) - p1.matrix())) < 1e-9);
    }

    #[test]
    fn coordinate_swap_is_maximal_angle() {
        let p0 = proj(&[1.0, 0.0]);
        let p1 = proj(&[0.0, 1.0]);
        let geo = minimal_projection_geodesic(&p0, &p1).unwrap();
        assert!((geo.generator_norm() - std::f64::consts::FRAC_PI_2).abs() < 1e-9);
        assert!(spectral_norm(&(&geo.point(1.0) - p1.matrix())) < 1e-7);
    }

    #[test]
    fn generator_is_codiagonal_and_bounded() {
        let mut rng = SeededRng::new(51);
        for _ in 0..30 {
            let n = 2 + rng.usize_below(4);
            let r = 1 + rng.usize_below(n - 1);
            let p0 = Projection::validate(rng.projection(n, r).into_matrix()).unwrap();
            let p1 = Projection::validate(rng.projection(n, r).into_matrix()).unwrap();
            let geo = minimal_projection_geodesic(&p0, &p1).unwrap();
            assert!(geo.generator_norm() <= std::f64::consts::FRAC_PI_2 + 1e-9);
            let z = geo.generator().matrix();
            let diag =
                &(&(p0.matrix() * z) * p0.matrix())
                    + &(&(&(&ComplexMatrix::identity(n) - p0.matrix()) * z)
                        * &(&ComplexMatrix::identity(n) - p0.matrix()));
            assert!(diag.max_abs() < 1e-9, "generator not codiagonal");
            assert!(spectral_norm(&(&geo.point(1.0) - p1.matrix())) < 1e-7);
            // Every point along the way is a projection.
            for &t in &[0.25, 0.5, 0.75] {
                let pt = geo.point(t);
                assert!((&(&pt * &pt) - &pt).max_abs() < 1e-9);
                assert!(pt.hermitian_deviation() < 1e-10);
            }
        }
    }

    #[test]
    fn pushforward_examples() {
        // V = diag(1,0), Y = pauli_x, X = 0: pushforward is i[Y, P0] with
        // norm 1, from the 2×2 commutator.
        let v = PartialIsometry::validate(ComplexMatrix::real_diag(&[1.0, 0.0])).unwrap();
        let y = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]))
            .unwrap();
        let tv = TangentVector::from_pair(v.clone(), HermitianMatrix::zeros(2), y).unwrap();
        let push = pushforward_alpha(&tv).unwrap();
        let expected = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ]);
        assert!((&push - &expected).max_abs() < 1e-12);
        assert!((spectral_norm(&push) - 1.0).abs() < 1e-12);

        // Diagonal Y commutes with α(V): pushforward vanishes.
        let yd = HermitianMatrix::real_diag(&[0.3, -0.7]);
        let tv = TangentVector::from_pair(v.clone(), HermitianMatrix::zeros(2), yd).unwrap();
        assert!(pushforward_alpha(&tv).unwrap().max_abs() < 1e-12);

        // Zero tangent.
        let tv = TangentVector::from_pair(v, HermitianMatrix::zeros(2), HermitianMatrix::zeros(2))
            .unwrap();
        assert!(pushforward_alpha(&tv).unwrap().max_abs() < 1e-14);
        assert!(pushforward_omega(&tv).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn pushforward_contraction_random() {
        let mut rng = SeededRng::new(52);
        for _ in 0..20 {
            let n = 2 + rng.usize_below(3);
            let r = 1 + rng.usize_below(n);
            let v = rng.partial_isometry(n, r);
            let tv = TangentVector::from_pair(v, rng.hermitian(n, 1.0), rng.hermitian(n, 1.0))
                .unwrap();
            let q = crate::tangent::quotient_norm_with(
                &tv,
                &crate::minimize::MinimizeOptions::lean(),
            )
            .unwrap();
            let pa = spectral_norm(&pushforward_alpha(&tv).unwrap());
            let po = spectral_norm(&pushforward_omega(&tv).unwrap());
            assert!(pa <= q.value + 1e-7, "alpha pushforward {pa} vs quotient {}", q.value);
            assert!(po <= q.value + 1e-7, "omega pushforward {po} vs quotient {}", q.value);
        }
    }

    #[test]
    fn contraction_experiment_on_gauge_curves() {
        let mut rng = SeededRng::new(53);
        for _ in 0..5 {
            let n = 3;
            let r = 1 + rng.usize_below(2);
            let v = rng.partial_isometry(n, r);
            let pair = LiftingPair::new(rng.hermitian(n, 0.6), rng.hermitian(n, 0.6));
            let geo = GeodesicCurve::new(v, pair);
            let opts = CompetitorOptions { nodes: 17, ..Default::default() };
            let gauge = random_gauge_curve(&mut rng, geo, 0.0, 0.8, &opts);
            let sample = gauge.sample(0.0, 0.8, 17).unwrap();
            let report =
                contraction_experiment(&sample, 1e-4, &LengthOptions::default()).unwrap();
            assert!(
                report.pass,
                "alpha {} omega {} vs finsler {}",
                report.alpha_image_length, report.omega_image_length, report.finsler_length
            );
        }
    }

    #[test]
    fn alpha_image_of_codiagonal_geodesic() {
        // For δ(t) = e^{itA₀} V e^{−itB₀}, δ*δ = e^{itB₀} α(V) e^{−itB₀}.
        let mut rng = SeededRng::new(54);
        let v = rng.partial_isometry(3, 2);
        let f = v.factor_through_projection();
        let p0 = PartialIsometry::validate(f.p0.clone()).unwrap();
        let x = rng.hermitian(3, 0.9);
        let xc = HermitianMatrix::from_hermitian_part(&crate::linalg::codiagonal_part(
            x.matrix(),
            p0.alpha(),
        ));
        let tv0 = TangentVector::from_pair(p0, xc, HermitianMatrix::zeros(3)).unwrap();
        let tv = tv0.transport(&f.u, &f.w).unwrap();
        let pair = crate::tangent::codiagonal_minimal_lifting(&tv).unwrap();
        let geo = GeodesicCurve::new(tv.base().clone(), pair.clone());
        for &t in &[0.2, 0.5, 0.9] {
            let d = geo.point(t);
            let alpha_img = &d.conjugate_transpose() * &d;
            let conj = unitary_exp(&pair.b, t);
            let expected =
                &(&conj * tv.base().alpha().matrix()) * &conj.conjugate_transpose();
            assert!((&alpha_img - &expected).max_abs() < 1e-9);
        }
    }

    #[test]
    fn projection_geodesic_lengths_agree() {
        // Read in the partial-isometry space, a projection geodesic has
        // ℓ = ℓ∞ = ‖Z‖ per unit parameter.
        let mut rng = SeededRng::new(55);
        let p0 = Projection::validate(rng.projection(3, 1).into_matrix()).unwrap();
        let p1 = Projection::validate(rng.projection(3, 1).into_matrix()).unwrap();
        let geo = minimal_projection_geodesic(&p0, &p1).unwrap();
        let sample = geo.sample(0.0, 1.0, 17).unwrap();
        let lf = length_finsler(&sample, &LengthOptions::default()).unwrap().value;
        let la = length_ambient(&sample).unwrap().value;
        assert!((lf - geo.generator_norm()).abs() < 1e-4);
        assert!((la - geo.generator_norm()).abs() < 1e-6);
    }

    #[test]
    fn tangents_to_projection_curves_are_codiagonal() {
        let mut rng = SeededRng::new(56);
        let p0 = Projection::validate(rng.projection(4, 2).into_matrix()).unwrap();
        let p1 = Projection::validate(rng.projection(4, 2).into_matrix()).unwrap();
        let geo = minimal_projection_geodesic(&p0, &p1).unwrap();
        for &t in &[0.0, 0.3, 0.7] {
            let p = geo.point(t);
            let vel = geo.velocity(t);
            let id = ComplexMatrix::identity(4);
            let pc = &id - &p;
            let d1 = &(&p * &vel) * &p;
            let d2 = &(&pc * &vel) * &pc;
            assert!(d1.max_abs() < 1e-9 && d2.max_abs() < 1e-9);
        }
    }
}
