//! Geodesic curves `δ(t) = e^{itA} V e^{−itB}`, gauge-perturbed competitor
//! curves, sampled curves with exact or finite-difference velocities, and the
//! Finsler / ambient length functionals with Simpson quadrature.

use crate::error::{Error, Result};
use crate::linalg::{exp_derivative, spectral_norm, unitary_exp};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::minimize::MinimizeOptions;
use crate::partial_isometry::PartialIsometry;
use crate::rng::SeededRng;
use crate::tangent::{quotient_norm_with, LiftingPair, TangentVector};
use crate::tol;

/// A one-parameter curve `δ(t) = e^{itA} V e^{−itB}` with its minimality
/// horizon `π / (2 max(‖A‖, ‖B‖))` (infinite for the constant curve).
///
/// Every value of the curve is a partial isometry in the component of `V`,
/// with `δ(0) = V` and `δ̇(0) = iAV − iVB`.
#[derive(Debug, Clone)]
pub struct GeodesicCurve {
    base: PartialIsometry,
    pair: LiftingPair,
    horizon: f64,
}

impl GeodesicCurve {
    pub fn new(base: PartialIsometry, pair: LiftingPair) -> Self {
        let speed = pair.pair_norm();
        let horizon = if speed == 0.0 { f64::INFINITY } else { std::f64::consts::FRAC_PI_2 / speed };
        Self { base, pair, horizon }
    }

    pub fn base(&self) -> &PartialIsometry {
        &self.base
    }

    pub fn pair(&self) -> &LiftingPair {
        &self.pair
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn point(&self, t: f64) -> ComplexMatrix {
        let left = unitary_exp(&self.pair.a, t);
        let right = unitary_exp(&self.pair.b, -t);
        &(&left * self.base.matrix()) * &right
    }

    /// Exact velocity `e^{itA} (iAV − iVB) e^{−itB}`.
    pub fn velocity(&self, t: f64) -> ComplexMatrix {
        let left = unitary_exp(&self.pair.a, t);
        let right = unitary_exp(&self.pair.b, -t);
        let v0 = self.pair.induced_tangent(&self.base);
        &(&left * &v0) * &right
    }

    /// Uniformly sampled restriction with exact velocities.
    pub fn sample(&self, t0: f64, t1: f64, nodes: usize) -> Result<SampledCurve> {
        sample_analytic(nodes, t0, t1, |t| (self.point(t), self.velocity(t)))
    }
}

/// Hermitian-valued trigonometric polynomial vanishing at both interval ends:
/// `F(t) = Σ_k C_k sin(kπ (t − t0)/(t1 − t0))`.
#[derive(Debug, Clone)]
pub struct VanishingTrigPoly {
    coeffs: Vec<HermitianMatrix>,
    t0: f64,
    t1: f64,
}

impl VanishingTrigPoly {
    pub fn new(coeffs: Vec<HermitianMatrix>, t0: f64, t1: f64) -> Self {
        assert!(t1 > t0, "degenerate parameter interval");
        Self { coeffs, t0, t1 }
    }

    pub fn value(&self, t: f64) -> HermitianMatrix {
        let period = self.t1 - self.t0;
        let n = self.coeffs.first().map_or(0, |c| c.dim());
        let mut acc = ComplexMatrix::zeros(n, n);
        for (k, c) in self.coeffs.iter().enumerate() {
            let phase = (k + 1) as f64 * std::f64::consts::PI * (t - self.t0) / period;
            acc = &acc + &c.matrix().scale_re(phase.sin());
        }
        HermitianMatrix::from_hermitian_part(&acc)
    }

    pub fn derivative(&self, t: f64) -> HermitianMatrix {
        let period = self.t1 - self.t0;
        let n = self.coeffs.first().map_or(0, |c| c.dim());
        let mut acc = ComplexMatrix::zeros(n, n);
        for (k, c) in self.coeffs.iter().enumerate() {
            let omega = (k + 1) as f64 * std::f64::consts::PI / period;
            let phase = omega * (t - self.t0);
            acc = &acc + &c.matrix().scale_re(omega * phase.cos());
        }
        HermitianMatrix::from_hermitian_part(&acc)
    }
}

/// A gauge perturbation `γ(t) = e^{iF(t)} δ(t) e^{−iG(t)}` of a geodesic.
/// Since `F`, `G` vanish at the interval ends, `γ` shares the endpoints of
/// `δ` and stays inside the space of partial isometries (it is a two-sided
/// unitary move at every `t`).
#[derive(Debug, Clone)]
pub struct GaugeCurve {
    geodesic: GeodesicCurve,
    f: VanishingTrigPoly,
    g: VanishingTrigPoly,
}

impl GaugeCurve {
    pub fn new(geodesic: GeodesicCurve, f: VanishingTrigPoly, g: VanishingTrigPoly) -> Self {
        Self { geodesic, f, g }
    }

    pub fn point(&self, t: f64) -> ComplexMatrix {
        let lf = unitary_exp(&self.f.value(t), 1.0);
        let rg = unitary_exp(&self.g.value(t), -1.0);
        &(&lf * &self.geodesic.point(t)) * &rg
    }

    /// Exact velocity by the product rule; the exponential factors are
    /// differentiated with the Daleckii-Krein formula.
    pub fn velocity(&self, t: f64) -> ComplexMatrix {
        let ft = self.f.value(t);
        let gt = self.g.value(t);
        let lf = unitary_exp(&ft, 1.0);
        let rg = unitary_exp(&gt, -1.0);
        let dlf = exp_derivative(&ft, &self.f.derivative(t), 1.0);
        let drg = exp_derivative(&gt, &self.g.derivative(t), -1.0);
        let delta = self.geodesic.point(t);
        let ddelta = self.geodesic.velocity(t);
        let term1 = &(&dlf * &delta) * &rg;
        let term2 = &(&lf * &ddelta) * &rg;
        let term3 = &(&lf * &delta) * &drg;
        &(&term1 + &term2) + &term3
    }

    pub fn sample(&self, t0: f64, t1: f64, nodes: usize) -> Result<SampledCurve> {
        sample_analytic(nodes, t0, t1, |t| (self.point(t), self.velocity(t)))
    }
}

/// How the velocities of a sampled curve were produced; finite differences
/// carry O(h⁴) noise and get a looser tangency tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocitySource {
    Exact,
    FiniteDifference,
}

/// A curve known through uniformly spaced samples: validated partial-isometry
/// points, velocities, and increasing times. Consecutive points must stay at
/// operator distance below 1 so the curve cannot hop between components.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    times: Vec<f64>,
    points: Vec<PartialIsometry>,
    velocities: Vec<ComplexMatrix>,
    source: VelocitySource,
}

impl SampledCurve {
    /// Build from raw point matrices on a uniform grid; velocities come from
    /// 4th-order centered finite differences (one-sided at the ends), which
    /// needs at least 5 nodes.
    pub fn from_points(times: Vec<f64>, raw_points: Vec<ComplexMatrix>) -> Result<Self> {
        if times.len() != raw_points.len() {
            return Err(Error::InvalidCurve {
                reason: format!("{} times for {} points", times.len(), raw_points.len()),
            });
        }
        if times.len() < 5 {
            return Err(Error::InvalidCurve {
                reason: "finite differences need at least 5 nodes".into(),
            });
        }
        check_uniform_grid(&times)?;
        let points = raw_points
            .into_iter()
            .map(PartialIsometry::validate)
            .collect::<Result<Vec<_>>>()?;
        check_component_continuity(&points)?;
        let h = times[1] - times[0];
        let n = points.len();
        let velocities = (0..n).map(|k| finite_difference(&points, k, h)).collect();
        Ok(Self { times, points, velocities, source: VelocitySource::FiniteDifference })
    }

    /// Assemble from validated points and exact velocities on a uniform grid.
    pub fn from_exact_parts(
        times: Vec<f64>,
        points: Vec<PartialIsometry>,
        velocities: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        if times.len() != points.len() || times.len() != velocities.len() || times.len() < 3 {
            return Err(Error::InvalidCurve { reason: "inconsistent sample arrays".into() });
        }
        check_uniform_grid(&times)?;
        check_component_continuity(&points)?;
        Ok(Self { times, points, velocities, source: VelocitySource::Exact })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[PartialIsometry] {
        &self.points
    }

    pub fn velocities(&self) -> &[ComplexMatrix] {
        &self.velocities
    }

    pub fn source(&self) -> VelocitySource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Tangency residual tolerance for the lifting solve at each node.
    fn residual_tolerance(&self, velocity_scale: f64) -> f64 {
        match self.source {
            VelocitySource::Exact => tol::VALIDATION_TOL * (1.0 + velocity_scale),
            VelocitySource::FiniteDifference => 1e-4 * (1.0 + velocity_scale),
        }
    }
}

fn sample_analytic(
    nodes: usize,
    t0: f64,
    t1: f64,
    eval: impl Fn(f64) -> (ComplexMatrix, ComplexMatrix),
) -> Result<SampledCurve> {
    if nodes < 3 || nodes % 2 == 0 {
        return Err(Error::InvalidCurve {
            reason: format!("Simpson sampling needs an odd node count >= 3, got {nodes}"),
        });
    }
    if !(t1 > t0) {
        return Err(Error::InvalidCurve { reason: format!("bad interval [{t0}, {t1}]") });
    }
    let h = (t1 - t0) / (nodes - 1) as f64;
    let mut times = Vec::with_capacity(nodes);
    let mut points = Vec::with_capacity(nodes);
    let mut velocities = Vec::with_capacity(nodes);
    for k in 0..nodes {
        let t = t0 + k as f64 * h;
        let (p, v) = eval(t);
        times.push(t);
        points.push(PartialIsometry::validate(p)?);
        velocities.push(v);
    }
    check_component_continuity(&points)?;
    Ok(SampledCurve { times, points, velocities, source: VelocitySource::Exact })
}

fn check_uniform_grid(times: &[f64]) -> Result<()> {
    let h = times[1] - times[0];
    if !(h > 0.0) {
        return Err(Error::InvalidCurve { reason: "times not increasing".into() });
    }
    for w in times.windows(2) {
        let step = w[1] - w[0];
        if (step - h).abs() > 1e-9 * h.abs() {
            return Err(Error::InvalidCurve { reason: "non-uniform time grid".into() });
        }
    }
    Ok(())
}

fn check_component_continuity(points: &[PartialIsometry]) -> Result<()> {
    for w in points.windows(2) {
        let dist = spectral_norm(&(w[1].matrix() - w[0].matrix()));
        if dist >= 1.0 {
            return Err(Error::InvalidCurve {
                reason: format!("consecutive samples at operator distance {dist:.3} >= 1"),
            });
        }
    }
    Ok(())
}

/// 4th-order finite differences on a uniform grid; centered in the interior,
/// one-sided at the two nodes on each end.
fn finite_difference(points: &[PartialIsometry], k: usize, h: f64) -> ComplexMatrix {
    let n = points.len();
    let m = |i: usize| points[i].matrix();
    let combo = |terms: &[(f64, usize)]| {
        let mut acc = ComplexMatrix::zeros(m(0).rows(), m(0).cols());
        for &(w, i) in terms {
            acc = &acc + &m(i).scale_re(w);
        }
        acc.scale_re(1.0 / (12.0 * h))
    };
    if k >= 2 && k + 2 < n {
        combo(&[(1.0, k - 2), (-8.0, k - 1), (8.0, k + 1), (-1.0, k + 2)])
    } else if k == 0 {
        combo(&[(-25.0, 0), (48.0, 1), (-36.0, 2), (16.0, 3), (-3.0, 4)])
    } else if k == 1 {
        combo(&[(-3.0, 0), (-10.0, 1), (18.0, 2), (-6.0, 3), (1.0, 4)])
    } else if k == n - 2 {
        combo(&[(3.0, n - 1), (10.0, n - 2), (-18.0, n - 3), (6.0, n - 4), (-1.0, n - 5)])
    } else {
        combo(&[(25.0, n - 1), (-48.0, n - 2), (36.0, n - 3), (-16.0, n - 4), (3.0, n - 5)])
    }
}

/// Quadrature options for the length functionals.
#[derive(Debug, Clone)]
pub struct LengthOptions {
    /// Optimizer profile for the per-node quotient norms.
    pub norm_options: MinimizeOptions,
}

impl Default for LengthOptions {
    fn default() -> Self {
        Self { norm_options: MinimizeOptions::lean() }
    }
}

/// A length value together with a Richardson error estimate (available when
/// the grid admits the half-resolution Simpson rule).
#[derive(Debug, Clone, Copy)]
pub struct LengthEstimate {
    pub value: f64,
    pub error_estimate: Option<f64>,
}

/// Finsler length: composite Simpson quadrature of `t ↦ |δ̇(t)|_{δ(t)}`.
///
/// Every node velocity is realized as a tangent vector by the lifting solve
/// (erroring when the residual exceeds the source-dependent tolerance) and
/// measured with the quotient norm.
pub fn length_finsler(curve: &SampledCurve, options: &LengthOptions) -> Result<LengthEstimate> {
    integrate_speed(curve, |pt, vel, scale| {
        let tv = TangentVector::lift(pt.clone(), vel.clone(), curve.residual_tolerance(scale))?;
        Ok(quotient_norm_with(&tv, &options.norm_options)?.value)
    })
}

/// Ambient-norm length: Simpson quadrature of `t ↦ ‖δ̇(t)‖`.
pub fn length_ambient(curve: &SampledCurve) -> Result<LengthEstimate> {
    integrate_speed(curve, |_, vel, _| Ok(spectral_norm(vel)))
}

fn integrate_speed(
    curve: &SampledCurve,
    speed: impl Fn(&PartialIsometry, &ComplexMatrix, f64) -> Result<f64>,
) -> Result<LengthEstimate> {
    let n = curve.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidCurve {
            reason: format!("Simpson quadrature needs an odd node count >= 3, got {n}"),
        });
    }
    let h = curve.times[1] - curve.times[0];
    let mut values = Vec::with_capacity(n);
    for k in 0..n {
        let scale = curve.velocities[k].frobenius_norm();
        values.push(speed(&curve.points[k], &curve.velocities[k], scale)?);
    }
    let value = simpson(&values, h);
    // Half-resolution Simpson on every other node for a Richardson estimate.
    let error_estimate = if (n - 1) % 4 == 0 {
        let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
        let coarse_value = simpson(&coarse, 2.0 * h);
        Some((value - coarse_value).abs() / 15.0)
    } else {
        None
    };
    Ok(LengthEstimate { value, error_estimate })
}

fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    debug_assert!(n % 2 == 1 && n >= 3);
    let mut acc = values[0] + values[n - 1];
    for (k, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

/// Outcome of the gauge-competitor minimality experiment.
#[derive(Debug, Clone)]
pub struct CompetitorReport {
    pub geodesic_length: f64,
    /// Finsler lengths of the competitors, in trial order.
    pub competitor_lengths: Vec<f64>,
    pub pass: bool,
    pub tolerance: f64,
}

impl CompetitorReport {
    pub fn min_competitor(&self) -> Option<f64> {
        self.competitor_lengths.iter().copied().min_by(|a, b| a.partial_cmp(b).unwrap())
    }

    pub fn median_competitor(&self) -> Option<f64> {
        if self.competitor_lengths.is_empty() {
            return None;
        }
        let mut sorted = self.competitor_lengths.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Some(sorted[sorted.len() / 2])
    }
}

/// Experiment parameters: node count for the quadratures, number of gauge
/// harmonics, and perturbation amplitude.
#[derive(Debug, Clone)]
pub struct CompetitorOptions {
    pub nodes: usize,
    pub harmonics: usize,
    pub amplitude: f64,
    pub tolerance: f64,
    /// Reject intervals leaving the minimality horizon (the default); callers
    /// exploring past it opt out explicitly.
    pub enforce_horizon: bool,
    pub length: LengthOptions,
}

impl Default for CompetitorOptions {
    fn default() -> Self {
        Self {
            nodes: 65,
            harmonics: 3,
            amplitude: 0.5,
            tolerance: 1e-4,
            enforce_horizon: true,
            length: LengthOptions::default(),
        }
    }
}

/// Compare the geodesic's Finsler length on `[t0, t1]` against gauge
/// competitors with the same endpoints. Passes when the geodesic is at most
/// every competitor length plus the tolerance; vacuously passes with zero
/// trials. The interval must sit inside the minimality horizon.
pub fn competitor_experiment(
    geodesic: &GeodesicCurve,
    t0: f64,
    t1: f64,
    trials: usize,
    seed: u64,
    options: &CompetitorOptions,
) -> Result<CompetitorReport> {
    let horizon = geodesic.horizon();
    if options.enforce_horizon && (t0.abs() > horizon || t1.abs() > horizon) {
        let t = if t0.abs() > horizon { t0 } else { t1 };
        return Err(Error::HorizonExceeded { t, horizon });
    }
    let base_sample = geodesic.sample(t0, t1, options.nodes)?;
    let geodesic_length = length_finsler(&base_sample, &options.length)?.value;

    let mut competitor_lengths = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = SeededRng::fork(seed, trial as u64);
        let gauge = random_gauge_curve(&mut rng, geodesic.clone(), t0, t1, options);
        let sample = gauge.sample(t0, t1, options.nodes)?;
        competitor_lengths.push(length_finsler(&sample, &options.length)?.value);
    }
    let pass = competitor_lengths.iter().all(|&len| geodesic_length <= len + options.tolerance);
    Ok(CompetitorReport { geodesic_length, competitor_lengths, pass, tolerance: options.tolerance })
}

/// Random gauge perturbation of a geodesic: trigonometric coefficient
/// matrices drawn Hermitian-Gaussian and rescaled so each side's total
/// operator norm stays at or below the amplitude.
pub fn random_gauge_curve(
    rng: &mut SeededRng,
    geodesic: GeodesicCurve,
    t0: f64,
    t1: f64,
    options: &CompetitorOptions,
) -> GaugeCurve {
    let n = geodesic.base().dim();
    let draw = |rng: &mut SeededRng| {
        let mut coeffs = Vec::with_capacity(options.harmonics);
        for _ in 0..options.harmonics {
            let raw = rng.hermitian(n, 1.0);
            let norm = spectral_norm(raw.matrix());
            let target = options.amplitude * rng.uniform() / options.harmonics as f64;
            let scaled = if norm > 0.0 {
                raw.matrix().scale_re(target / norm)
            } else {
                raw.matrix().clone()
            };
            coeffs.push(HermitianMatrix::from_hermitian_part(&scaled));
        }
        VanishingTrigPoly::new(coeffs, t0, t1)
    };
    let f = draw(rng);
    let g = draw(rng);
    GaugeCurve::new(geodesic, f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::codiagonal_part;
    use crate::tangent::codiagonal_minimal_lifting;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn coordinate_projection() -> PartialIsometry {
        PartialIsometry::validate(ComplexMatrix::real_diag(&[1.0, 0.0])).unwrap()
    }

    fn pauli_x_pair() -> LiftingPair {
        let a = HermitianMatrix::new(ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]))
            .unwrap();
        LiftingPair::new(a, HermitianMatrix::zeros(2))
    }

    #[test]
    fn constant_curve() {
        let geo = GeodesicCurve::new(coordinate_projection(), LiftingPair::zeros(2));
        assert!(geo.horizon().is_infinite());
        let s = geo.sample(0.0, 1.0, 9).unwrap();
        let len = length_finsler(&s, &LengthOptions::default()).unwrap();
        assert!(len.value < 1e-12);
        assert!(length_ambient(&s).unwrap().value < 1e-12);
    }

    #[test]
    fn pauli_rotation_endpoint() {
        // At t = π/2 the Pauli-X rotation carries diag(1,0) to [[0,0],[i,0]],
        // from the hand-computed exponential.
        let geo = GeodesicCurve::new(coordinate_projection(), pauli_x_pair());
        assert!((geo.horizon() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let p = geo.point(std::f64::consts::FRAC_PI_2);
        let expected = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]);
        assert!((&p - &expected).max_abs() < 1e-12);
        assert!(PartialIsometry::validate(p).is_ok());
    }

    #[test]
    fn unit_speed_length() {
        // Codiagonal unit pair: constant unit speed, length 1 on [0, 1].
        let geo = GeodesicCurve::new(coordinate_projection(), pauli_x_pair());
        let s = geo.sample(0.0, 1.0, 33).unwrap();
        let len = length_finsler(&s, &LengthOptions::default()).unwrap();
        assert!((len.value - 1.0).abs() < 1e-4, "finsler {}", len.value);
        let amb = length_ambient(&s).unwrap();
        assert!((amb.value - 1.0).abs() < 1e-6, "ambient {}", amb.value);
    }

    #[test]
    fn reparametrization_invariance() {
        // Same path traversed as t ↦ t² on [0,1]; arc length is unchanged.
        let geo = GeodesicCurve::new(coordinate_projection(), pauli_x_pair());
        let s = sample_analytic(65, 0.0, 1.0, |t| {
            let tau = t * t;
            (geo.point(tau), geo.velocity(tau).scale_re(2.0 * t))
        })
        .unwrap();
        let len = length_finsler(&s, &LengthOptions::default()).unwrap();
        assert!((len.value - 1.0).abs() < 2e-3, "reparametrized {}", len.value);
    }

    #[test]
    fn finite_difference_matches_exact() {
        let mut rng = SeededRng::new(41);
        let v = rng.partial_isometry(3, 2);
        let pair = LiftingPair::new(rng.hermitian(3, 0.8), rng.hermitian(3, 0.8));
        let geo = GeodesicCurve::new(v, pair);
        let exact = geo.sample(0.0, 1.0, 65).unwrap();
        let raw: Vec<ComplexMatrix> = exact.times().iter().map(|&t| geo.point(t)).collect();
        let fd = SampledCurve::from_points(exact.times().to_vec(), raw).unwrap();
        for (ve, vf) in exact.velocities().iter().zip(fd.velocities()) {
            assert!((ve - vf).max_abs() < 1e-6);
        }
        let le = length_ambient(&exact).unwrap().value;
        let lf = length_ambient(&fd).unwrap().value;
        assert!((le - lf).abs() < 1e-6);
    }

    #[test]
    fn geodesic_stays_partial_isometry() {
        let mut rng = SeededRng::new(42);
        let v = rng.partial_isometry(3, 1);
        let pair = LiftingPair::new(rng.hermitian(3, 1.0), rng.hermitian(3, 1.0));
        let geo = GeodesicCurve::new(v.clone(), pair);
        for k in 0..100 {
            let t = -1.0 + 2.0 * k as f64 / 99.0;
            let p = geo.point(t);
            let vstar = p.conjugate_transpose();
            let residual = spectral_norm(&(&(&(&p * &vstar) * &p) - &p));
            assert!(residual <= 1e-8);
            assert_eq!(
                PartialIsometry::validate(p).unwrap().component_triple(),
                v.component_triple()
            );
        }
    }

    #[test]
    fn gauge_curve_endpoints_and_velocity() {
        let mut rng = SeededRng::new(43);
        let v = rng.partial_isometry(2, 1);
        let pair = LiftingPair::new(rng.hermitian(2, 0.7), rng.hermitian(2, 0.7));
        let geo = GeodesicCurve::new(v, pair);
        let opts = CompetitorOptions::default();
        let gauge = random_gauge_curve(&mut rng, geo.clone(), 0.0, 1.0, &opts);
        assert!((&gauge.point(0.0) - &geo.point(0.0)).max_abs() < 1e-12);
        assert!((&gauge.point(1.0) - &geo.point(1.0)).max_abs() < 1e-10);
        // Velocity against central differences.
        let h = 1e-6;
        let fd = (&gauge.point(0.4 + h) - &gauge.point(0.4 - h)).scale_re(0.5 / h);
        assert!((&gauge.velocity(0.4) - &fd).max_abs() < 1e-7);
    }

    #[test]
    fn zero_amplitude_competitor_equals_geodesic() {
        let geo = GeodesicCurve::new(coordinate_projection(), pauli_x_pair());
        let opts = CompetitorOptions { amplitude: 0.0, nodes: 17, ..Default::default() };
        let report = competitor_experiment(&geo, 0.0, 1.0, 3, 5, &opts).unwrap();
        for len in &report.competitor_lengths {
            assert!((len - report.geodesic_length).abs() < 1e-9);
        }
        assert!(report.pass);
    }

    #[test]
    fn empty_experiment_passes_vacuously() {
        let geo = GeodesicCurve::new(coordinate_projection(), pauli_x_pair());
        let report =
            competitor_experiment(&geo, 0.0, 1.0, 0, 1, &CompetitorOptions::default()).unwrap();
        assert!(report.pass);
        assert!(report.min_competitor().is_none());
    }

    #[test]
    fn horizon_enforced() {
        let geo = GeodesicCurve::new(coordinate_projection(), pauli_x_pair());
        let err = competitor_experiment(&geo, 0.0, 2.0, 1, 1, &CompetitorOptions::default());
        assert!(matches!(err, Err(Error::HorizonExceeded { .. })));
    }

    #[test]
    fn geodesic_beats_competitors() {
        // Orthogonal unit direction at diag(1,0) on [0, π/4].
        let geo = GeodesicCurve::new(coordinate_projection(), pauli_x_pair());
        let opts = CompetitorOptions { nodes: 33, ..Default::default() };
        let report =
            competitor_experiment(&geo, 0.0, std::f64::consts::FRAC_PI_4, 10, 7, &opts).unwrap();
        assert!(
            report.pass,
            "geodesic {} vs min {:?}",
            report.geodesic_length,
            report.min_competitor()
        );
    }

    #[test]
    fn constant_speed_of_minimal_geodesics() {
        let mut rng = SeededRng::new(44);
        let v = rng.partial_isometry(3, 2);
        let f = v.factor_through_projection();
        let p0 = PartialIsometry::validate(f.p0.clone()).unwrap();
        let x = rng.hermitian(3, 1.0);
        let xc = HermitianMatrix::from_hermitian_part(&codiagonal_part(x.matrix(), p0.alpha()));
        let tv0 = TangentVector::from_pair(p0, xc, HermitianMatrix::zeros(3)).unwrap();
        let tv = tv0.transport(&f.u, &f.w).unwrap();
        let pair = codiagonal_minimal_lifting(&tv).unwrap();
        let geo = GeodesicCurve::new(tv.base().clone(), pair);
        let t1 = 0.8 * geo.horizon();
        let sample = geo.sample(0.0, t1, 9).unwrap();
        let expected = tv.ambient_norm();
        for (pt, vel) in sample.points().iter().zip(sample.velocities()) {
            let tvk = TangentVector::lift(pt.clone(), vel.clone(), 1e-7).unwrap();
            let q = quotient_norm_with(&tvk, &MinimizeOptions::lean()).unwrap();
            assert!((q.value - expected).abs() < 1e-5, "speed {} vs {}", q.value, expected);
        }
    }

    #[test]
    fn finsler_below_ambient() {
        let mut rng = SeededRng::new(45);
        let v = rng.partial_isometry(3, 2);
        let pair = LiftingPair::new(rng.hermitian(3, 0.6), rng.hermitian(3, 0.6));
        let geo = GeodesicCurve::new(v, pair);
        let opts = CompetitorOptions { nodes: 17, ..Default::default() };
        let gauge = random_gauge_curve(&mut rng, geo, 0.0, 0.9, &opts);
        let s = gauge.sample(0.0, 0.9, 17).unwrap();
        let lf = length_finsler(&s, &LengthOptions::default()).unwrap().value;
        let la = length_ambient(&s).unwrap().value;
        assert!(lf <= la + 1e-6, "finsler {lf} ambient {la}");
    }
}
