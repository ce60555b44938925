//! Command-line driver: validation, quotient norms, geodesic experiments,
//! projection geodesics, and the property suite, all seeded and reproducible.
//!
//! Exit codes: 0 success, 2 validation failure, 3 optimizer non-convergence,
//! 4 parse error.

mod docfmt;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use parisom::geodesics::{
    competitor_experiment, length_ambient, length_finsler, CompetitorOptions, GeodesicCurve,
    LengthOptions,
};
use parisom::linalg::spectral_norm;
use parisom::matrix::HermitianMatrix;
use parisom::minimize::MinimizeOptions;
use parisom::partial_isometry::{EpsilonModel, PartialIsometry};
use parisom::projections::{geodesic_exists, minimal_projection_geodesic, Projection};
use parisom::suite::{run_suite, SuiteConfig};
use parisom::tangent::{quotient_norm_oracle, quotient_norm_with, LiftingPair, TangentVector};
use parisom::Error as CoreError;

use report::RunReport;

#[derive(Parser)]
#[command(name = "parisom", version, about = "Finsler geometry of partial isometries")]
struct Cli {
    /// Emit the report as machine-readable JSON.
    #[arg(long = "json", alias = "json-style", global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a partial isometry: component triple, balancedness, residual.
    Validate {
        /// Matrix document for V.
        file: PathBuf,
    },
    /// Quotient Finsler norm of the tangent vector iXV − iVY at V.
    Norm {
        /// Matrix document for V.
        file_v: PathBuf,
        /// Matrix document for the Hermitian witness X.
        file_x: PathBuf,
        /// Matrix document for the Hermitian witness Y.
        file_y: PathBuf,
        /// Seed for optimizer restarts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random restarts for the norm minimizer.
        #[arg(long)]
        restarts: Option<usize>,
        /// Also run the dense-grid reference search (small dimensions only).
        #[arg(long)]
        grid_oracle: bool,
    },
    /// Geodesic through V with generator pair (A, B): lengths and competitors.
    Geodesic {
        file_v: PathBuf,
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        t0: f64,
        #[arg(long, default_value_t = 1.0)]
        t1: f64,
        /// Simpson nodes for the length quadratures (odd).
        #[arg(long, default_value_t = 65)]
        nodes: usize,
        /// Number of gauge competitors.
        #[arg(long, default_value_t = 0)]
        competitors: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Allow parameter intervals beyond the minimality horizon.
        #[arg(long)]
        force: bool,
    },
    /// Existence and construction of the geodesic joining two projections.
    Projection {
        file_p0: PathBuf,
        file_p1: PathBuf,
        /// Write the constructed generator Z as a matrix document.
        #[arg(long)]
        emit_generator: Option<PathBuf>,
    },
    /// Run the property suite and print one line per check.
    Suite {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Ambient dimensions, as a range "2..4" or a list "2,3,4" (inclusive).
        #[arg(long, default_value = "2..4")]
        dims: String,
        /// Base sample count per check.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
}

/// Errors mapped onto the documented exit codes.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: String) -> Self {
        Self { code, message }
    }

    pub fn parse(message: String) -> Self {
        Self::new(4, message)
    }

    pub fn validation(message: String) -> Self {
        Self::new(2, message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::OptimizerStalled { .. }
            | CoreError::NoConvergence { .. }
            | CoreError::CertificationFailed { .. } => 3,
            _ => 2,
        };
        CliError::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::env::args().collect();
    match run(cli, echo.join(" ")) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli, echo: String) -> Result<(), CliError> {
    match cli.command {
        Command::Validate { file } => cmd_validate(&file, echo, cli.json),
        Command::Norm { file_v, file_x, file_y, seed, restarts, grid_oracle } => {
            cmd_norm(&file_v, &file_x, &file_y, seed, restarts, grid_oracle, echo, cli.json)
        }
        Command::Geodesic { file_v, file_a, file_b, t0, t1, nodes, competitors, seed, force } => {
            cmd_geodesic(&file_v, &file_a, &file_b, t0, t1, nodes, competitors, seed, force, echo, cli.json)
        }
        Command::Projection { file_p0, file_p1, emit_generator } => {
            cmd_projection(&file_p0, &file_p1, emit_generator.as_deref(), echo, cli.json)
        }
        Command::Suite { seed, dims, samples } => cmd_suite(seed, &dims, samples, echo, cli.json),
    }
}

fn load_hermitian(path: &std::path::Path, what: &str) -> Result<HermitianMatrix, CliError> {
    let m = docfmt::read_matrix(path)?;
    HermitianMatrix::new(m)
        .map_err(|e| CliError::validation(format!("{what} is not Hermitian: {e}")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_validate(file: &std::path::Path, echo: String, json: bool) -> Result<(), CliError> {
    let mut report = RunReport::new(echo, None);
    report.input("v", file)?;
    let m = docfmt::read_matrix(file)?;
    let vstar = m.conjugate_transpose();
    let residual = spectral_norm(&(&(&(&m * &vstar) * &m) - &m));
    report.field("residual", residual);
    match PartialIsometry::validate(m) {
        Ok(v) => {
            let (r, n_dim, r_perp) = v.component_triple();
            report.field("dimension", v.dim() as u64);
            report.field("rank", r as u64);
            report.field("null_dim", n_dim as u64);
            report.field("corank", r_perp as u64);
            report.field("balanced", v.is_balanced());
            report.field("is_projection", v.is_projection());
            let model = EpsilonModel::embed(&v);
            report.field("epsilon_structural_deviation", model.structural_deviation());
            report.field("verdict", "PASS");
            print!("{}", report.render(json));
            Ok(())
        }
        Err(e) => {
            report.field("verdict", "FAIL");
            report.field("error", e.to_string());
            print!("{}", report.render(json));
            Err(e.into())
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_norm(
    file_v: &std::path::Path,
    file_x: &std::path::Path,
    file_y: &std::path::Path,
    seed: u64,
    restarts: Option<usize>,
    grid_oracle: bool,
    echo: String,
    json: bool,
) -> Result<(), CliError> {
    let mut report = RunReport::new(echo, Some(seed));
    report.input("v", file_v)?;
    report.input("x", file_x)?;
    report.input("y", file_y)?;
    let v = PartialIsometry::validate(docfmt::read_matrix(file_v)?)?;
    let x = load_hermitian(file_x, "X")?;
    let y = load_hermitian(file_y, "Y")?;
    let tv = TangentVector::from_pair(v, x, y)?;

    let mut options = MinimizeOptions { seed, ..Default::default() };
    if let Some(r) = restarts {
        options.restarts = r;
    }
    let q = quotient_norm_with(&tv, &options)?;
    let ambient = tv.ambient_norm();
    let ratio = if q.value <= 1e-14 { 1.0 } else { ambient / q.value };
    report.field("quotient_norm", q.value);
    report.field("minimizer_pair_norm", q.minimizer.pair_norm());
    report.field("ambient_norm", ambient);
    report.field("ratio_ambient_over_quotient", ratio);
    report.field("optimizer_gap", q.gap);
    report.field("orthogonal_direction", tv.is_orthogonal_direction());
    if grid_oracle {
        let oracle = quotient_norm_oracle(&tv, seed)?;
        report.field("grid_oracle_value", oracle.value);
        report.field("grid_oracle_deviation", (oracle.value - q.value).abs());
    }
    print!("{}", report.render(json));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_geodesic(
    file_v: &std::path::Path,
    file_a: &std::path::Path,
    file_b: &std::path::Path,
    t0: f64,
    t1: f64,
    nodes: usize,
    competitors: usize,
    seed: u64,
    force: bool,
    echo: String,
    json: bool,
) -> Result<(), CliError> {
    let mut report = RunReport::new(echo, Some(seed));
    report.input("v", file_v)?;
    report.input("a", file_a)?;
    report.input("b", file_b)?;
    let v = PartialIsometry::validate(docfmt::read_matrix(file_v)?)?;
    let a = load_hermitian(file_a, "A")?;
    let b = load_hermitian(file_b, "B")?;
    let geo = GeodesicCurve::new(v, LiftingPair::new(a, b));
    report.field("horizon", geo.horizon());

    if !force && (t0.abs() > geo.horizon() || t1.abs() > geo.horizon()) {
        let t = if t0.abs() > geo.horizon() { t0 } else { t1 };
        report.field("verdict", "FAIL");
        report.field("error", format!("interval endpoint {t} beyond horizon {}", geo.horizon()));
        print!("{}", report.render(json));
        return Err(CoreError::HorizonExceeded { t, horizon: geo.horizon() }.into());
    }

    let sample = geo.sample(t0, t1, nodes)?;
    let finsler = length_finsler(&sample, &LengthOptions::default())?;
    let ambient = length_ambient(&sample)?;
    report.field("length_finsler", finsler.value);
    if let Some(err) = finsler.error_estimate {
        report.field("length_finsler_error_estimate", err);
    }
    report.field("length_ambient", ambient.value);
    if let Some(err) = ambient.error_estimate {
        report.field("length_ambient_error_estimate", err);
    }

    let mut verdict = "PASS";
    if competitors > 0 {
        let options =
            CompetitorOptions { nodes, enforce_horizon: !force, ..Default::default() };
        let experiment = competitor_experiment(&geo, t0, t1, competitors, seed, &options)?;
        report.field("competitors", competitors as u64);
        report.field("competitor_min", experiment.min_competitor().unwrap_or(f64::NAN));
        report.field("competitor_median", experiment.median_competitor().unwrap_or(f64::NAN));
        if !experiment.pass {
            verdict = "FAIL";
        }
    }
    report.field("verdict", verdict);
    print!("{}", report.render(json));
    if verdict == "FAIL" {
        return Err(CliError::validation("a competitor beat the geodesic".into()));
    }
    Ok(())
}

fn cmd_projection(
    file_p0: &std::path::Path,
    file_p1: &std::path::Path,
    emit_generator: Option<&std::path::Path>,
    echo: String,
    json: bool,
) -> Result<(), CliError> {
    let mut report = RunReport::new(echo, None);
    report.input("p0", file_p0)?;
    report.input("p1", file_p1)?;
    let p0 = Projection::validate(docfmt::read_matrix(file_p0)?)?;
    let p1 = Projection::validate(docfmt::read_matrix(file_p1)?)?;
    let cert = geodesic_exists(&p0, &p1)?;
    report.field("dim_r0_n1", cert.dim_r0_n1 as u64);
    report.field("dim_r1_n0", cert.dim_r1_n0 as u64);
    report.field("exists", cert.exists());
    if !cert.exists() {
        report.field("verdict", "NO-GEODESIC");
        print!("{}", report.render(json));
        return Err(CoreError::NoGeodesic {
            dim_r0_n1: cert.dim_r0_n1,
            dim_r1_n0: cert.dim_r1_n0,
        }
        .into());
    }
    let geo = minimal_projection_geodesic(&p0, &p1)?;
    let endpoint = spectral_norm(&(&geo.point(1.0) - p1.matrix()));
    report.field("generator_norm", geo.generator_norm());
    report.field(
        "principal_angles",
        serde_json::Value::Array(geo.angles().iter().map(|&a| json!(a)).collect()),
    );
    report.field("endpoint_residual", endpoint);
    if let Some(path) = emit_generator {
        std::fs::write(path, docfmt::write_matrix(geo.generator().matrix()))
            .map_err(|e| CliError::parse(format!("cannot write {}: {e}", path.display())))?;
        report.field("generator_written", path.display().to_string());
    }
    report.field("verdict", if endpoint <= 1e-7 { "PASS" } else { "FAIL" });
    print!("{}", report.render(json));
    if endpoint > 1e-7 {
        return Err(CliError::validation(format!("endpoint residual {endpoint:.3e}")));
    }
    Ok(())
}

fn cmd_suite(seed: u64, dims: &str, samples: usize, echo: String, json: bool) -> Result<(), CliError> {
    let dims = parse_dims(dims)?;
    let config = SuiteConfig { seed, dims: dims.clone(), samples };
    let suite = run_suite(&config)?;
    let mut report = RunReport::new(echo, Some(seed));
    report.field("dims", serde_json::Value::Array(dims.iter().map(|&d| json!(d)).collect()));
    report.field("samples", samples as u64);
    for check in &suite.checks {
        let value = json!({
            "pass": check.pass,
            "samples": check.samples,
            "worst_margin": check.worst_margin,
            "tolerance": check.tolerance,
            "detail": check.detail,
        });
        if json {
            report.field(check.name, value);
        } else {
            report.field(
                check.name,
                format!(
                    "{} [{} samples, worst margin {:+.3e}, tolerance {:.0e}] {}",
                    if check.pass { "PASS" } else { "FAIL" },
                    check.samples,
                    check.worst_margin,
                    check.tolerance,
                    check.detail
                ),
            );
        }
    }
    let all = suite.all_pass();
    report.field("verdict", if all { "PASS" } else { "FAIL" });
    print!("{}", report.render(json));
    if !all {
        return Err(CliError::validation("property suite failed".into()));
    }
    Ok(())
}

/// Dimension specs: "2..5" (inclusive) or "2,3,4" or a single "3".
fn parse_dims(text: &str) -> Result<Vec<usize>, CliError> {
    let bad = |t: &str| CliError::parse(format!("cannot parse dimension list '{t}'"));
    let parse_one = |t: &str| t.trim().parse::<usize>().map_err(|_| bad(text));
    let dims: Vec<usize> = if let Some((lo, hi)) = text.split_once("..") {
        let lo = parse_one(lo)?;
        let hi = parse_one(hi)?;
        if lo > hi {
            return Err(bad(text));
        }
        (lo..=hi).collect()
    } else if text.contains(',') {
        text.split(',').map(parse_one).collect::<Result<_, _>>()?
    } else {
        vec![parse_one(text)?]
    };
    if dims.is_empty() || dims.iter().any(|&d| d < 2 || d > 16) {
        return Err(bad(text));
    }
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_parsing() {
        assert_eq!(parse_dims("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_dims("2,3,5").unwrap(), vec![2, 3, 5]);
        assert_eq!(parse_dims("3").unwrap(), vec![3]);
        assert!(parse_dims("x").is_err());
        assert!(parse_dims("5..2").is_err());
        assert!(parse_dims("0..1").is_err());
    }

}
