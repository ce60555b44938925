//! The property suite: every module invariant as a seeded, countable check
//! returning pass/fail with the worst observed margin. The command-line
//! `suite` subcommand runs scaled-down defaults; the acceptance tests run the
//! full counts.
//!
//! Margin convention: for an inequality `A ≤ B + tol` the margin is `B − A`,
//! so a check passes while `worst_margin ≥ −tol`. Trial `i` of a check draws
//! from the forked stream `salted_seed ^ i`, and trials run in index order,
//! so reports are bit-reproducible for a fixed seed.

use crate::error::Result;
use crate::geodesics::{
    competitor_experiment, random_gauge_curve, CompetitorOptions, GeodesicCurve, LengthOptions,
};
use crate::linalg::{codiagonal_part, pinch, spectral_norm};
use crate::matrix::{ComplexMatrix, HermitianMatrix};
use crate::minimize::MinimizeOptions;
use crate::partial_isometry::{EpsilonModel, PartialIsometry};
use crate::projections::{
    contraction_experiment, geodesic_exists, minimal_projection_geodesic, pushforward_alpha,
    pushforward_omega, Projection,
};
use crate::rng::SeededRng;
use crate::svd::real_svd;
use crate::tangent::{
    codiagonal_minimal_lifting, diagonal_minimal_lifting_with, krein_complete, quotient_norm,
    quotient_norm_oracle, quotient_norm_with, strict_gap_instance, LiftingPair, TangentVector,
    STRICT_GAP_QUOTIENT,
};

/// Outcome of one property check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub samples: usize,
    /// Worst margin observed (see module docs); `0.0` for discrete checks.
    pub worst_margin: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn from_margin(name: &'static str, samples: usize, worst: f64, tol: f64, detail: String) -> Self {
        Self { name, pass: worst >= -tol, samples, worst_margin: worst, tolerance: tol, detail }
    }
}

/// Aggregated suite outcome.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Scaling knobs for [`run_suite`].
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 7, dims: vec![2, 3, 4], samples: 50 }
    }
}

/// Run every check with counts scaled from `config.samples`.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let s = config.samples;
    let seed = config.seed;
    let dims = &config.dims;
    // Zero samples means a vacuous run everywhere.
    let scaled = |div: usize| if s == 0 { 0 } else { (s / div).max(1) };
    let checks = vec![
        check_norm_equivalence(seed, dims, s)?,
        check_oracle_equivalence(seed, scaled(5))?,
        check_krein_completion(seed, 2 * s)?,
        check_orthogonal_equality(seed, dims, s)?,
        check_geodesic_minimality(seed, dims, scaled(10).min(5), 10, 17)?,
        check_contraction_lengths(seed, dims, scaled(2), 17)?,
        check_pushforward_contraction(seed, dims, s)?,
        check_projection_geodesics(seed, dims, s)?,
        check_projection_minimality(seed, dims, scaled(10).min(3), 10, 17)?,
        check_pinching_contraction(seed, dims, 2 * s)?,
        check_offdiagonal_compression(seed, dims, 2 * s)?,
        check_strict_gap(seed, s > 0)?,
        check_epsilon_structure(seed, dims, s)?,
        check_geodesic_preservation(seed, dims, scaled(10), 100)?,
        check_action_invariance(seed, dims, s)?,
        check_quotient_invariance(seed, dims, scaled(5))?,
    ];
    Ok(SuiteReport { checks })
}

fn salted(seed: u64, salt: u64, trial: usize) -> SeededRng {
    SeededRng::fork(seed.wrapping_add(salt.wrapping_mul(0xA076_1D64_78BD_642F)), trial as u64)
}

fn pick_dim(rng: &mut SeededRng, dims: &[usize]) -> usize {
    dims[rng.usize_below(dims.len())]
}

fn random_tangent(rng: &mut SeededRng, n: usize, rank: usize) -> TangentVector {
    let v = rng.partial_isometry(n, rank);
    let x = rng.hermitian(n, 1.0);
    let y = rng.hermitian(n, 1.0);
    TangentVector::from_pair(v, x, y).expect("random tangent")
}

/// Orthogonal tangent at a random balanced base: codiagonal witness at the
/// coordinate projection, transported along a random factorization.
fn random_orthogonal_tangent(rng: &mut SeededRng, n: usize, rank: usize) -> TangentVector {
    let v = rng.partial_isometry(n, rank);
    let f = v.factor_through_projection();
    let p0 = PartialIsometry::validate(f.p0.clone()).expect("coordinate projection");
    let x = rng.hermitian(n, 1.0);
    let y = rng.hermitian(n, 1.0);
    let xc = HermitianMatrix::from_hermitian_part(&codiagonal_part(x.matrix(), p0.alpha()));
    let yc = HermitianMatrix::from_hermitian_part(&codiagonal_part(y.matrix(), p0.alpha()));
    let tv0 = TangentVector::from_pair(p0, xc, yc).expect("codiagonal tangent");
    tv0.transport(&f.u, &f.w).expect("transported tangent")
}

/// Norm equivalence `|𝒱|_V ≤ ‖𝒱‖ ≤ 2 |𝒱|_V` on random tangents.
pub fn check_norm_equivalence(seed: u64, dims: &[usize], samples: usize) -> Result<CheckResult> {
    let tol = 1e-7;
    let mut worst = f64::INFINITY;
    let mut detail = String::from("vacuous");
    for trial in 0..samples {
        let mut rng = salted(seed, 1, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = 1 + rng.usize_below(n);
        let tv = random_tangent(&mut rng, n, rank);
        let q = quotient_norm(&tv)?;
        let ambient = tv.ambient_norm();
        let upper = ambient - q.value; // quotient ≤ ambient
        let doubling = 2.0 * q.value - ambient; // ambient ≤ 2·quotient
        let margin = upper.min(doubling);
        if margin < worst {
            worst = margin;
            detail = format!(
                "worst at trial {trial} (n={n}): quotient {:.9}, ambient {:.9}",
                q.value, ambient
            );
        }
    }
    Ok(CheckResult::from_margin("norm-equivalence", samples, worst, tol, detail))
}

/// Agreement of the quotient-norm minimizer with the dense-grid oracle at
/// n = 2.
pub fn check_oracle_equivalence(seed: u64, samples: usize) -> Result<CheckResult> {
    let tol = 1e-4;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 2, trial);
        let rank = 1 + rng.usize_below(2);
        let tv = random_tangent(&mut rng, 2, rank);
        let q = quotient_norm(&tv)?;
        let oracle = quotient_norm_oracle(&tv, seed ^ ((trial as u64) << 8))?;
        let margin = -(q.value - oracle.value).abs();
        if margin < worst {
            worst = margin;
            detail = format!(
                "worst at trial {trial}: minimizer {:.9} vs oracle {:.9}",
                q.value, oracle.value
            );
        }
    }
    Ok(CheckResult::from_margin("oracle-equivalence", samples, worst, tol, detail))
}

/// Krein completion: assembled norm equals the row norm (relative tolerance)
/// and the row/column norms agree.
pub fn check_krein_completion(seed: u64, samples: usize) -> Result<CheckResult> {
    let tol = 1e-8;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 3, trial);
        let k = 1 + rng.usize_below(4);
        let m = 1 + rng.usize_below(4);
        let a11 = rng.hermitian(k, 1.0);
        let a12 = rng.ginibre(k, m);
        let (a22, mu) = krein_complete(&a11, &a12)?;
        let assembled =
            ComplexMatrix::block_2x2(a11.matrix(), &a12, &a12.conjugate_transpose(), a22.matrix());
        let norm = spectral_norm(&assembled);
        let rel = (norm - mu).abs() / mu.max(1e-12);
        // Self-adjointness: row and column norms must agree (tolerance 1e-10,
        // scaled onto the shared 1e-8 margin axis).
        let col = ComplexMatrix::from_fn(k + m, k, |i, j| assembled[(i, j)]);
        let row = ComplexMatrix::from_fn(k, k + m, |i, j| assembled[(i, j)]);
        let row_col = (spectral_norm(&col) - spectral_norm(&row)).abs();
        let margin = (-rel).min(1e-8 - row_col * 1e2);
        if margin < worst {
            worst = margin;
            detail = format!("worst at trial {trial} (k={k}, m={m}): |norm-mu|/mu = {rel:.3e}");
        }
    }
    Ok(CheckResult::from_margin("krein-completion", samples, worst, tol, detail))
}

/// Orthogonal directions: quotient norm equals the ambient norm and the
/// codiagonal minimal lifting matches both.
pub fn check_orthogonal_equality(seed: u64, dims: &[usize], samples: usize) -> Result<CheckResult> {
    let tol = 1e-7;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 4, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = 1 + rng.usize_below(n - 1);
        // Even trials exercise literal projections, odd trials balanced bases.
        let tv = if trial % 2 == 0 {
            let p = PartialIsometry::validate(rng.projection(n, rank).into_matrix())
                .expect("projection base");
            let x = rng.hermitian(n, 1.0);
            let y = rng.hermitian(n, 1.0);
            let xc = HermitianMatrix::from_hermitian_part(&codiagonal_part(x.matrix(), p.alpha()));
            let yc = HermitianMatrix::from_hermitian_part(&codiagonal_part(y.matrix(), p.alpha()));
            TangentVector::from_pair(p, xc, yc).expect("orthogonal tangent")
        } else {
            random_orthogonal_tangent(&mut rng, n, rank)
        };
        let ambient = tv.ambient_norm();
        let q = quotient_norm(&tv)?;
        let pair = codiagonal_minimal_lifting(&tv)?;
        let margin = [
            -(q.value - ambient).abs(),
            -(pair.pair_norm() - ambient).abs(),
            -(pair.pair_norm() - q.value).abs(),
        ]
        .into_iter()
        .fold(f64::INFINITY, f64::min);
        if margin < worst {
            worst = margin;
            detail = format!(
                "worst at trial {trial} (n={n}): quotient {:.10}, ambient {:.10}, pair {:.10}",
                q.value,
                ambient,
                pair.pair_norm()
            );
        }
    }
    Ok(CheckResult::from_margin("orthogonal-direction-equality", samples, worst, tol, detail))
}

/// Geodesics from minimal liftings beat gauge competitors inside the horizon.
pub fn check_geodesic_minimality(
    seed: u64,
    dims: &[usize],
    instances: usize,
    competitors: usize,
    nodes: usize,
) -> Result<CheckResult> {
    let tol = 1e-4;
    let mut worst = f64::INFINITY;
    let mut detail = String::from("vacuous");
    for trial in 0..instances {
        let mut rng = salted(seed, 5, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = 1 + rng.usize_below(n - 1);
        // Two thirds codiagonal pairs for orthogonal directions, one third
        // diagonal minimal liftings of general directions.
        let (base, pair) = if trial % 3 < 2 {
            let tv = random_orthogonal_tangent(&mut rng, n, rank);
            let pair = codiagonal_minimal_lifting(&tv)?;
            (tv.base().clone(), pair)
        } else {
            let tv = random_tangent(&mut rng, n, rank);
            let d = diagonal_minimal_lifting_with(&tv, &MinimizeOptions::lean())?;
            (tv.base().clone(), d.pair)
        };
        if pair.pair_norm() < 1e-9 {
            continue;
        }
        let geo = GeodesicCurve::new(base, pair);
        let h = geo.horizon();
        let t0 = -0.4 * h * rng.uniform();
        let t1 = 0.4 * h * (0.5 + 0.5 * rng.uniform());
        let opts = CompetitorOptions { nodes, ..Default::default() };
        let report = competitor_experiment(&geo, t0, t1, competitors, seed ^ (trial as u64), &opts)?;
        let margin =
            report.min_competitor().map_or(f64::INFINITY, |m| m - report.geodesic_length);
        if margin < worst {
            worst = margin;
            detail = format!(
                "worst at instance {trial} (n={n}): geodesic {:.8}, best competitor {:.8}",
                report.geodesic_length,
                report.min_competitor().unwrap_or(f64::NAN)
            );
        }
    }
    Ok(CheckResult::from_margin("geodesic-minimality", instances, worst, tol, detail))
}

/// Distance-decreasing maps: image-curve lengths never exceed the Finsler
/// length of the curve upstairs.
pub fn check_contraction_lengths(
    seed: u64,
    dims: &[usize],
    curves: usize,
    nodes: usize,
) -> Result<CheckResult> {
    let tol = 1e-4;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..curves {
        let mut rng = salted(seed, 6, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = 1 + rng.usize_below(n);
        let v = rng.partial_isometry(n, rank);
        let pair = LiftingPair::new(rng.hermitian(n, 0.7), rng.hermitian(n, 0.7));
        let geo = GeodesicCurve::new(v, pair);
        let span = 0.9_f64.min(0.8 * geo.horizon());
        let opts = CompetitorOptions { nodes, ..Default::default() };
        let gauge = random_gauge_curve(&mut rng, geo, 0.0, span, &opts);
        let sample = gauge.sample(0.0, span, nodes)?;
        let report = contraction_experiment(&sample, tol, &LengthOptions::default())?;
        let margin = (report.finsler_length - report.alpha_image_length)
            .min(report.finsler_length - report.omega_image_length);
        if margin < worst {
            worst = margin;
            detail = format!(
                "worst at curve {trial} (n={n}): finsler {:.8}, alpha {:.8}, omega {:.8}",
                report.finsler_length, report.alpha_image_length, report.omega_image_length
            );
        }
    }
    Ok(CheckResult::from_margin("contraction-lengths", curves, worst, tol, detail))
}

/// Pointwise contraction of the pushforwards against the quotient norm.
pub fn check_pushforward_contraction(
    seed: u64,
    dims: &[usize],
    samples: usize,
) -> Result<CheckResult> {
    let tol = 1e-7;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 7, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = 1 + rng.usize_below(n);
        let tv = random_tangent(&mut rng, n, rank);
        let q = quotient_norm(&tv)?;
        let pa = spectral_norm(&pushforward_alpha(&tv)?);
        let po = spectral_norm(&pushforward_omega(&tv)?);
        let margin = (q.value - pa).min(q.value - po);
        if margin < worst {
            worst = margin;
            detail = format!(
                "worst at trial {trial} (n={n}): quotient {:.9}, alpha {:.9}, omega {:.9}",
                q.value, pa, po
            );
        }
    }
    Ok(CheckResult::from_margin("pushforward-contraction", samples, worst, tol, detail))
}

/// Existence condition against a stacked-basis rank oracle (plus exact index
/// predictions on shared-eigenbasis pairs), with endpoint residual and
/// generator bound for every constructed geodesic.
pub fn check_projection_geodesics(seed: u64, dims: &[usize], samples: usize) -> Result<CheckResult> {
    let endpoint_tol = 1e-7;
    let mut worst = f64::INFINITY;
    let mut agreements = 0usize;
    let mut constructed = 0usize;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 8, trial);
        let n = pick_dim(&mut rng, dims);
        // Half the trials share an eigenbasis so the intersection dimensions
        // are nonzero and exactly predictable by index arithmetic.
        let (p0, p1, predicted) = if trial % 2 == 0 {
            let r0 = rng.usize_below(n + 1);
            let r1 = rng.usize_below(n + 1);
            let q = rng.unitary(n);
            let head = projection_from_columns(&q, 0, r0);
            let tail = projection_from_columns(&q, n - r1, n);
            // R(P0) = span(q_0..q_{r0}), N(P1) = span(q_0..q_{n-r1}) and so on.
            let d01 = r0.min(n - r1);
            let d10 = n - (n - r1).max(r0);
            (Projection::validate(head)?, Projection::validate(tail)?, Some((d01, d10)))
        } else {
            let r0 = rng.usize_below(n + 1);
            let r1 = rng.usize_below(n + 1);
            let p0 = Projection::validate(rng.projection(n, r0).into_matrix())?;
            let p1 = Projection::validate(rng.projection(n, r1).into_matrix())?;
            (p0, p1, None)
        };
        let cert = geodesic_exists(&p0, &p1)?;
        let oracle = (
            subspace_intersection_oracle(&p0.range_basis(), &p1.null_basis()),
            subspace_intersection_oracle(&p1.range_basis(), &p0.null_basis()),
        );
        let mut mismatch = (cert.dim_r0_n1, cert.dim_r1_n0) != oracle;
        if let Some(pred) = predicted {
            mismatch |= (cert.dim_r0_n1, cert.dim_r1_n0) != pred;
        }
        if mismatch {
            return Ok(CheckResult::from_margin(
                "projection-geodesics",
                samples,
                -1.0,
                0.0,
                format!(
                    "certificate ({}, {}) disagrees with oracle ({}, {}) at trial {trial}",
                    cert.dim_r0_n1, cert.dim_r1_n0, oracle.0, oracle.1
                ),
            ));
        }
        agreements += 1;
        if cert.exists() {
            let geo = minimal_projection_geodesic(&p0, &p1)?;
            constructed += 1;
            let endpoint = spectral_norm(&(&geo.point(1.0) - p1.matrix()));
            let margin = (endpoint_tol - endpoint)
                .min(std::f64::consts::FRAC_PI_2 + 1e-9 - geo.generator_norm());
            if margin < worst {
                worst = margin;
                detail = format!(
                    "worst at trial {trial} (n={n}): endpoint residual {endpoint:.3e}, |Z| = {:.6}",
                    geo.generator_norm()
                );
            }
        }
    }
    detail = if detail.is_empty() {
        format!("{agreements} certificates agreed; {constructed} geodesics constructed")
    } else {
        format!("{detail}; {agreements} agreed, {constructed} constructed")
    };
    Ok(CheckResult::from_margin("projection-geodesics", samples, worst, 0.0, detail))
}

/// Projection geodesics, read in the bigger space, stay shorter than gauge
/// competitors joining the same endpoints.
pub fn check_projection_minimality(
    seed: u64,
    dims: &[usize],
    instances: usize,
    competitors: usize,
    nodes: usize,
) -> Result<CheckResult> {
    let tol = 1e-4;
    let mut worst = f64::INFINITY;
    let mut detail = String::from("vacuous");
    let mut ran = 0usize;
    for trial in 0..instances {
        let mut rng = salted(seed, 9, trial);
        let n = pick_dim(&mut rng, dims);
        let r = 1 + rng.usize_below(n - 1);
        let p0 = Projection::validate(rng.projection(n, r).into_matrix())?;
        let p1 = Projection::validate(rng.projection(n, r).into_matrix())?;
        let geo = minimal_projection_geodesic(&p0, &p1)?;
        if geo.generator_norm() < 1e-6 {
            continue;
        }
        // The same path as a curve of partial isometries has the generator
        // pair (Z, Z).
        let base = PartialIsometry::validate(p0.matrix().clone())?;
        let moving =
            GeodesicCurve::new(base, LiftingPair::new(geo.generator().clone(), geo.generator().clone()));
        let opts = CompetitorOptions { nodes, ..Default::default() };
        let report =
            competitor_experiment(&moving, 0.0, 1.0, competitors, seed ^ ((trial as u64) << 4), &opts)?;
        ran += 1;
        let beat = report.min_competitor().map_or(f64::INFINITY, |m| m - report.geodesic_length);
        // The Finsler length along the path agrees with |Z| per unit time.
        let agree = 1e-4 - (report.geodesic_length - geo.generator_norm()).abs();
        let margin = beat.min(agree);
        if margin < worst {
            worst = margin;
            detail = format!(
                "worst at instance {trial} (n={n}): path length {:.8}, |Z| {:.8}, best competitor {:?}",
                report.geodesic_length,
                geo.generator_norm(),
                report.min_competitor()
            );
        }
    }
    Ok(CheckResult::from_margin("projection-geodesic-minimality", ran, worst, tol, detail))
}

/// The pinching map never increases the operator norm.
pub fn check_pinching_contraction(seed: u64, dims: &[usize], samples: usize) -> Result<CheckResult> {
    let tol = 1e-12;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 10, trial);
        let n = pick_dim(&mut rng, dims);
        let m = rng.ginibre(n, n);
        let partition = random_partition(&mut rng, n);
        let pinched = pinch(&m, &partition)?;
        let margin = spectral_norm(&m) - spectral_norm(&pinched);
        if margin < worst {
            worst = margin;
            detail = format!("worst at trial {trial} (n={n}, {} parts)", partition.len());
        }
    }
    Ok(CheckResult::from_margin("pinching-contraction", samples, worst, tol, detail))
}

/// Keeping only the off-diagonal blocks never increases the operator norm.
pub fn check_offdiagonal_compression(
    seed: u64,
    dims: &[usize],
    samples: usize,
) -> Result<CheckResult> {
    let tol = 1e-12;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 11, trial);
        let n = pick_dim(&mut rng, dims);
        let a = rng.ginibre(n, n);
        let rank = rng.usize_below(n + 1);
        let p = rng.projection(n, rank);
        let off = codiagonal_part(&a, &p);
        let margin = spectral_norm(&a) - spectral_norm(&off);
        if margin < worst {
            worst = margin;
            detail = format!("worst at trial {trial} (n={n}, rank {rank})");
        }
    }
    Ok(CheckResult::from_margin("offdiagonal-compression", samples, worst, tol, detail))
}

/// The frozen strict-gap instance: quotient norm strictly below the ambient
/// norm, confirmed by the grid oracle and the frozen closed-form value.
pub fn check_strict_gap(seed: u64, run: bool) -> Result<CheckResult> {
    if !run {
        return Ok(CheckResult::from_margin(
            "strict-gap-regression",
            0,
            f64::INFINITY,
            0.0,
            "vacuous".into(),
        ));
    }
    let tv = strict_gap_instance();
    let ambient = tv.ambient_norm();
    let q = quotient_norm(&tv)?;
    let oracle = quotient_norm_oracle(&tv, seed)?;
    let gap_margin = (ambient - 1e-3) - q.value;
    let oracle_margin = (ambient - 1e-3) - oracle.value;
    let agreement = 1e-4 - (q.value - oracle.value).abs();
    let frozen = 1e-6 - (q.value - STRICT_GAP_QUOTIENT).abs();
    let worst = gap_margin.min(oracle_margin).min(agreement).min(frozen);
    Ok(CheckResult::from_margin(
        "strict-gap-regression",
        1,
        worst,
        0.0,
        format!("quotient {:.10}, oracle {:.10}, ambient {:.10}", q.value, oracle.value, ambient),
    ))
}

/// Structure of the 2×2 model: `ε³ = ε`, the spectral projections resolve the
/// identity, and the embedding is equivariant under the action.
pub fn check_epsilon_structure(seed: u64, dims: &[usize], samples: usize) -> Result<CheckResult> {
    let tol = 1e-9;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 12, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = rng.usize_below(n + 1);
        let v = rng.partial_isometry(n, rank);
        let model = EpsilonModel::embed(&v);
        let mut deviation = model.structural_deviation();
        let u = rng.unitary(n);
        let w = rng.unitary(n);
        let moved = v.act(&u, &w)?;
        let zero = ComplexMatrix::zeros(n, n);
        let big = ComplexMatrix::block_2x2(&u, &zero, &zero, &w);
        let conj = &(&big * model.epsilon.matrix()) * &big.conjugate_transpose();
        deviation =
            deviation.max((&conj - EpsilonModel::embed(&moved).epsilon.matrix()).max_abs());
        let margin = -deviation;
        if margin < worst {
            worst = margin;
            detail = format!("worst structural deviation {deviation:.3e} at trial {trial} (n={n})");
        }
    }
    Ok(CheckResult::from_margin("epsilon-model-structure", samples, worst, tol, detail))
}

/// Geodesics remain partial isometries of the same component along a dense
/// parameter grid.
pub fn check_geodesic_preservation(
    seed: u64,
    dims: &[usize],
    instances: usize,
    grid: usize,
) -> Result<CheckResult> {
    let tol = 1e-8;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..instances {
        let mut rng = salted(seed, 13, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = rng.usize_below(n + 1);
        let v = rng.partial_isometry(n, rank);
        let pair = LiftingPair::new(rng.hermitian(n, 1.0), rng.hermitian(n, 1.0));
        let geo = GeodesicCurve::new(v.clone(), pair);
        for k in 0..grid {
            let t = -1.0 + 2.0 * k as f64 / (grid - 1) as f64;
            let p = geo.point(t);
            let residual = spectral_norm(&(&(&(&p * &p.conjugate_transpose()) * &p) - &p));
            let margin = -residual;
            if margin < worst {
                worst = margin;
                detail = format!("worst residual {residual:.3e} at instance {trial}, t = {t:.3}");
            }
        }
    }
    Ok(CheckResult::from_margin("geodesic-isometry-preservation", instances, worst, tol, detail))
}

/// The action preserves component triples exactly.
pub fn check_action_invariance(seed: u64, dims: &[usize], samples: usize) -> Result<CheckResult> {
    for trial in 0..samples {
        let mut rng = salted(seed, 14, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = rng.usize_below(n + 1);
        let v = rng.partial_isometry(n, rank);
        let u = rng.unitary(n);
        let w = rng.unitary(n);
        let moved = v.act(&u, &w)?;
        if moved.component_triple() != v.component_triple() || !v.same_component(&moved)? {
            return Ok(CheckResult::from_margin(
                "action-component-invariance",
                samples,
                -1.0,
                0.0,
                format!("component triple changed at trial {trial}"),
            ));
        }
    }
    Ok(CheckResult::from_margin(
        "action-component-invariance",
        samples,
        0.0,
        0.0,
        "all component triples preserved".into(),
    ))
}

/// Invariance of the quotient norm under the two-sided action.
pub fn check_quotient_invariance(seed: u64, dims: &[usize], samples: usize) -> Result<CheckResult> {
    let tol = 1e-6;
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for trial in 0..samples {
        let mut rng = salted(seed, 15, trial);
        let n = pick_dim(&mut rng, dims);
        let rank = 1 + rng.usize_below(n);
        let tv = random_tangent(&mut rng, n, rank);
        let u = rng.unitary(n);
        let w = rng.unitary(n);
        let moved = tv.transport(&u, &w)?;
        let q0 = quotient_norm_with(&tv, &MinimizeOptions::lean())?;
        let q1 = quotient_norm_with(&moved, &MinimizeOptions::lean())?;
        let margin = -(q0.value - q1.value).abs();
        if margin < worst {
            worst = margin;
            detail = format!(
                "worst at trial {trial} (n={n}): {:.10} vs {:.10} after the action",
                q0.value, q1.value
            );
        }
    }
    Ok(CheckResult::from_margin("quotient-norm-invariance", samples, worst, tol, detail))
}

/// Random partition of the identity: a Haar-conjugated coordinate-block split
/// into one to three parts.
fn random_partition(rng: &mut SeededRng, n: usize) -> Vec<HermitianMatrix> {
    let parts = 1 + rng.usize_below(3.min(n));
    let mut cuts = vec![0usize, n];
    while cuts.len() < parts + 1 {
        let c = 1 + rng.usize_below(n - 1);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let q = rng.unitary(n);
    cuts.windows(2)
        .map(|w| HermitianMatrix::from_hermitian_part(&projection_from_columns(&q, w[0], w[1])))
        .collect()
}

/// Projection onto the span of columns `[from, to)` of a unitary.
fn projection_from_columns(q: &ComplexMatrix, from: usize, to: usize) -> ComplexMatrix {
    let n = q.rows();
    let mut p = ComplexMatrix::zeros(n, n);
    for k in from..to {
        for i in 0..n {
            let qik = q[(i, k)];
            for j in 0..n {
                p[(i, j)] += qik * q[(j, k)].conj();
            }
        }
    }
    p
}

/// Independent subspace-intersection dimension:
/// `dim(A ∩ B) = dim A + dim B − rank[basis_A | basis_B]`, with the rank of
/// the realified stacked basis computed by the one-sided Jacobi SVD.
fn subspace_intersection_oracle(basis_a: &ComplexMatrix, basis_b: &ComplexMatrix) -> usize {
    let n = basis_a.rows();
    let ka = basis_a.cols();
    let kb = basis_b.cols();
    if ka == 0 || kb == 0 {
        return 0;
    }
    // Realify as [Re -Im; Im Re]; the real rank is twice the complex rank.
    let cols = ka + kb;
    let mut flat = vec![0.0; (2 * n) * (2 * cols)];
    for j in 0..cols {
        for i in 0..n {
            let z = if j < ka { basis_a[(i, j)] } else { basis_b[(i, j - ka)] };
            flat[i * 2 * cols + j] = z.re;
            flat[i * 2 * cols + j + cols] = -z.im;
            flat[(i + n) * 2 * cols + j] = z.im;
            flat[(i + n) * 2 * cols + j + cols] = z.re;
        }
    }
    let svd = real_svd(&flat, 2 * n, 2 * cols).expect("stacked-basis SVD");
    let rank2 = svd.rank();
    debug_assert_eq!(rank2 % 2, 0, "realified rank must be even");
    ka + kb - rank2 / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled_down_suite_passes() {
        let config = SuiteConfig { seed: 11, dims: vec![2, 3], samples: 6 };
        let report = run_suite(&config).unwrap();
        for check in &report.checks {
            assert!(
                check.pass,
                "{} failed: margin {:.3e}, {}",
                check.name, check.worst_margin, check.detail
            );
        }
    }

    #[test]
    fn suite_is_deterministic() {
        let config = SuiteConfig { seed: 3, dims: vec![2], samples: 3 };
        let a = run_suite(&config).unwrap();
        let b = run_suite(&config).unwrap();
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.worst_margin.to_bits(), y.worst_margin.to_bits());
            assert_eq!(x.detail, y.detail);
        }
    }

    #[test]
    fn intersection_oracle_on_shared_basis() {
        let mut rng = SeededRng::new(9);
        let n = 4;
        let q = rng.unitary(n);
        // A = span(q0, q1), B = span(q1, q2, q3): intersection = span(q1).
        let a = ComplexMatrix::from_fn(n, 2, |i, j| q[(i, j)]);
        let b = ComplexMatrix::from_fn(n, 3, |i, j| q[(i, j + 1)]);
        assert_eq!(subspace_intersection_oracle(&a, &b), 1);
    }

    #[test]
    fn zero_samples_vacuous_pass() {
        let r = check_norm_equivalence(1, &[2], 0).unwrap();
        assert!(r.pass);
        assert!(r.worst_margin.is_infinite());
    }
}
