use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use wvbound::continuous::{
    discord_p_given_x, gaussian_mus, modulus_condition_residual, phase_condition_residual,
    schrodinger_check_continuous_with, GaussianFamilyParams, GridSpec, CONVERGENCE_TOL, DEFAULT_HALF_WIDTH,
    DEFAULT_POINTS, ZERO_SET_TOL,
};
use wvbound::harness::{check_instance, Tolerances, Violations};
use wvbound::models::{sweep_spin1, sweep_spin32, Spin1Row, Spin32Row};
use wvbound::sampling::{random_instance, DegeneracyMode};

use crate::error::{CliError, CliResult};
use crate::output::{csv_string, write_json};
use crate::problem::{ProblemSpec, ToleranceOverrides};

#[derive(Debug, Parser)]
#[command(name = "wvbound", version, about = "Weak-value operators and variance uncertainty bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every bound for the problem in a JSON file.
    Report(ReportArgs),
    /// Spin-1 extra term over the N = 1 octant sphere (CSV).
    SweepSpin1(SweepSpin1Args),
    /// Spin-3/2 bound contributions as functions of t (CSV).
    SweepSpin32(SweepSpin32Args),
    /// Check the invariant chain on seeded random instances.
    RandomVerify(RandomVerifyArgs),
    /// Gaussian minimum-uncertainty state on a grid (JSON).
    Gaussian(GaussianArgs),
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Problem file (JSON).
    pub problem: PathBuf,
    /// Populations at or below this are treated as zero.
    #[arg(long)]
    pub tol_zero: Option<f64>,
    /// Relative gap below which eigenvalues are merged.
    #[arg(long)]
    pub tol_degeneracy: Option<f64>,
    /// Relative Hermiticity tolerance for A and B.
    #[arg(long)]
    pub tol_hermitian: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepSpin1Args {
    /// Grid points per angle.
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(2..))]
    pub res: u64,
    /// Relative phase arg(x) - arg(y) in radians.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepSpin32Args {
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub tmin: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub tmax: f64,
    /// Number of t values, end points included.
    #[arg(long, default_value_t = 601, value_parser = clap::value_parser!(u64).range(2..))]
    pub steps: u64,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RandomVerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Dimensions, e.g. `3,4,5,6` or `3..6`.
    #[arg(long, default_value = "3..6")]
    pub dims: String,
    /// Instances per dimension and mode.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
    /// Comma-separated subset of none, degenerate_B, orthogonal_psi.
    #[arg(long, default_value = "none,degenerate_B,orthogonal_psi")]
    pub modes: String,
    /// Where the first failing instance is written as a problem file.
    #[arg(long, default_value = "wvbound-reproducer.json")]
    pub reproducer: PathBuf,
}

#[derive(Debug, Args)]
pub struct GaussianArgs {
    /// Phase curvature λ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda: f64,
    /// Modulus width μ (> 0).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean_x: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean_p: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hbar: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub n_points: usize,
    /// Defaults to <x> - 8 sqrt(ħ/2μ).
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    /// Defaults to <x> + 8 sqrt(ħ/2μ).
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    /// Zero-set threshold for the discord integral, relative to max |psi|.
    #[arg(long, default_value_t = ZERO_SET_TOL)]
    pub tol_zero: f64,
    /// Allowed relative change of var_x var_p against the half-resolution grid.
    #[arg(long, default_value_t = CONVERGENCE_TOL)]
    pub tol_convergence: f64,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Report(args) => cmd_report(&args, out),
        Command::SweepSpin1(args) => cmd_sweep_spin1(&args, out),
        Command::SweepSpin32(args) => cmd_sweep_spin32(&args, out),
        Command::RandomVerify(args) => cmd_random_verify(&args, out),
        Command::Gaussian(args) => cmd_gaussian(&args, out),
    }
}

pub fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> CliResult<()> {
    let spec = ProblemSpec::load(&args.problem)?;
    let overrides = ToleranceOverrides {
        zero: args.tol_zero,
        degeneracy: args.tol_degeneracy,
        hermitian: args.tol_hermitian,
    };
    let problem = spec.validate(&overrides)?;
    let report = problem.pair.report(&problem.psi)?;
    write_json(out, &report)
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn cmd_sweep_spin1(args: &SweepSpin1Args, out: &mut dyn Write) -> CliResult<()> {
    if !args.theta.is_finite() {
        return Err(CliError::Usage("--theta must be finite".to_string()));
    }
    let rows = sweep_spin1(args.res as usize, args.theta)?;
    let text = csv_string(&Spin1Row::HEADER, rows.iter().map(Spin1Row::to_array));
    emit(&text, args.out.as_deref(), out)
}

pub fn cmd_sweep_spin32(args: &SweepSpin32Args, out: &mut dyn Write) -> CliResult<()> {
    if !(args.tmin.is_finite() && args.tmax.is_finite()) {
        return Err(CliError::Usage("--tmin and --tmax must be finite".to_string()));
    }
    let rows = sweep_spin32(args.tmin, args.tmax, args.steps as usize)?;
    let text = csv_string(&Spin32Row::HEADER, rows.iter().map(Spin32Row::to_array));
    emit(&text, args.out.as_deref(), out)
}

/// Parses `3,4,5`, `3..6` (inclusive) or a mix such as `2,4..6`.
pub fn parse_dims(text: &str) -> CliResult<Vec<usize>> {
    let bad = |part: &str| CliError::Usage(format!("invalid dimension list entry '{part}'"));
    let mut dims = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| bad(part))?;
            let hi: usize = hi.trim().trim_start_matches('=').parse().map_err(|_| bad(part))?;
            if lo > hi {
                return Err(bad(part));
            }
            dims.extend(lo..=hi);
        } else {
            dims.push(part.parse().map_err(|_| bad(part))?);
        }
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(CliError::Usage("--dims must list positive dimensions".to_string()));
    }
    Ok(dims)
}

pub fn parse_modes(text: &str) -> CliResult<Vec<DegeneracyMode>> {
    let modes = text
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<DegeneracyMode>().map_err(|e| CliError::Usage(e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    if modes.is_empty() {
        return Err(CliError::Usage("--modes must name at least one mode".to_string()));
    }
    Ok(modes)
}

#[derive(Debug, Serialize)]
pub struct FailureInfo {
    pub seed: u64,
    pub dim: usize,
    pub mode: DegeneracyMode,
    pub index: u64,
    pub failed_checks: Vec<String>,
    pub reproducer: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub samples: u64,
    pub modes: Vec<DegeneracyMode>,
    pub instances: u64,
    pub passed: u64,
    pub failed: u64,
    pub max_violation: Violations,
    pub tolerances: Tolerances,
    pub first_failure: Option<FailureInfo>,
}

/// Runs the harness over `dims × modes × samples` instances in a fixed order.
pub fn random_verify(seed: u64, dims: &[usize], modes: &[DegeneracyMode], samples: u64, reproducer: &Path) -> CliResult<VerifySummary> {
    let tolerances = Tolerances::default();
    let mut summary = VerifySummary {
        seed,
        dims: dims.to_vec(),
        samples,
        modes: modes.to_vec(),
        instances: 0,
        passed: 0,
        failed: 0,
        max_violation: Violations::default(),
        tolerances,
        first_failure: None,
    };
    for &dim in dims {
        for &mode in modes {
            for index in 0..samples {
                let inst = random_instance(seed, dim, mode, index)?;
                summary.instances += 1;
                let failed_checks: Vec<String> = match check_instance(&inst.a, &inst.b, &inst.psi) {
                    Ok(v) => {
                        summary.max_violation.merge(&v);
                        v.failures(&tolerances).into_iter().map(String::from).collect()
                    }
                    Err(e) => vec![format!("evaluation_error: {e}")],
                };
                if failed_checks.is_empty() {
                    summary.passed += 1;
                    continue;
                }
                summary.failed += 1;
                if summary.first_failure.is_none() {
                    let dump = ProblemSpec::from_instance(&inst.a, &inst.b, &inst.psi).to_json();
                    std::fs::write(reproducer, dump).map_err(|e| CliError::io(reproducer, e))?;
                    summary.first_failure = Some(FailureInfo {
                        seed,
                        dim,
                        mode,
                        index,
                        failed_checks,
                        reproducer: reproducer.to_path_buf(),
                    });
                }
            }
        }
    }
    Ok(summary)
}

pub fn cmd_random_verify(args: &RandomVerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let dims = parse_dims(&args.dims)?;
    let modes = parse_modes(&args.modes)?;
    let summary = random_verify(args.seed, &dims, &modes, args.samples, &args.reproducer)?;
    write_json(out, &summary)?;
    match &summary.first_failure {
        None => Ok(()),
        Some(f) => Err(CliError::Violation(format!(
            "{} of {} instances violated an invariant; first: seed {} dim {} mode {} index {} ({}), reproducer written to {}",
            summary.failed,
            summary.instances,
            f.seed,
            f.dim,
            f.mode,
            f.index,
            f.failed_checks.join(", "),
            f.reproducer.display()
        ))),
    }
}

#[derive(Debug, Serialize)]
pub struct GaussianReport {
    pub lambda: f64,
    pub mu: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub hbar: f64,
    pub grid: GridSpec,
    pub dx: f64,
    pub phase_residual: f64,
    pub modulus_residual: f64,
    pub measured_mean_x: f64,
    pub measured_mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub covariance: f64,
    pub commutator_term: f64,
    pub covariance_term: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub relative_gap: f64,
    pub discord_p_given_x: f64,
    pub extra_e_px: f64,
    pub grid_relative_change: f64,
}

pub fn gaussian_report(args: &GaussianArgs) -> CliResult<GaussianReport> {
    let params = GaussianFamilyParams {
        lambda: args.lambda,
        mu: args.mu,
        mean_x: args.mean_x,
        mean_p: args.mean_p,
    };
    params.validate().map_err(|e| CliError::validation("mu", e.to_string()))?;
    if !(args.hbar.is_finite() && args.hbar > 0.0) {
        return Err(CliError::validation("hbar", format!("must be positive, got {}", args.hbar)));
    }
    let half = DEFAULT_HALF_WIDTH * params.sigma(args.hbar);
    let grid = GridSpec::new(
        args.x_min.unwrap_or(args.mean_x - half),
        args.x_max.unwrap_or(args.mean_x + half),
        args.n_points,
    )
    .map_err(|e| CliError::validation("grid", e.to_string()))?;
    let psi = gaussian_mus(params, grid, args.hbar).map_err(|e| match e {
        wvbound::Error::GridTooNarrow {
            required_min,
            required_max,
            ..
        } => CliError::validation(
            "grid",
            format!("{e}; try --x-min {required_min} --x-max {required_max}"),
        ),
        other => CliError::Numerical(other),
    })?;
    let check = schrodinger_check_continuous_with(&psi, args.tol_convergence)?;
    let discord = discord_p_given_x(&psi, args.tol_zero);
    let m = check.moments;
    Ok(GaussianReport {
        lambda: args.lambda,
        mu: args.mu,
        mean_x: args.mean_x,
        mean_p: args.mean_p,
        hbar: args.hbar,
        grid,
        dx: grid.dx(),
        phase_residual: phase_condition_residual(&psi, args.lambda, args.mean_x, args.mean_p),
        modulus_residual: modulus_condition_residual(&psi, args.mu, args.mean_x),
        measured_mean_x: m.mean_x,
        measured_mean_p: m.mean_p,
        var_x: m.var_x,
        var_p: m.var_p,
        covariance: m.covariance,
        commutator_term: check.commutator_term,
        covariance_term: check.covariance_term,
        lhs: check.lhs,
        rhs: check.rhs,
        gap: check.gap,
        relative_gap: check.gap / check.lhs,
        discord_p_given_x: discord,
        extra_e_px: discord * m.var_x,
        grid_relative_change: check.relative_change,
    })
}

pub fn cmd_gaussian(args: &GaussianArgs, out: &mut dyn Write) -> CliResult<()> {
    write_json(out, &gaussian_report(args)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_lists() {
        assert_eq!(parse_dims("3,4").unwrap(), vec![3, 4]);
        assert_eq!(parse_dims("3..6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_dims("2, 4..=5").unwrap(), vec![2, 4, 5]);
        assert!(parse_dims("").is_err());
        assert!(parse_dims("0").is_err());
        assert!(parse_dims("5..3").is_err());
        assert!(parse_dims("x").is_err());
    }

    #[test]
    fn modes_lists() {
        assert_eq!(parse_modes("none").unwrap(), vec![DegeneracyMode::None]);
        assert_eq!(parse_modes("degenerate_B,orthogonal_psi").unwrap().len(), 2);
        assert!(parse_modes("nope").is_err());
    }

    #[test]
    fn verify_small_batch() {
        let dir = std::env::temp_dir().join("wvbound-unit-reproducer.json");
        let s = random_verify(42, &[2, 3], &DegeneracyMode::ALL, 5, &dir).unwrap();
        assert_eq!(s.instances, 30);
        assert_eq!(s.failed, 0);
        assert!(s.first_failure.is_none());
    }

    fn gaussian_args() -> GaussianArgs {
        GaussianArgs {
            lambda: 0.0,
            mu: 1.0,
            mean_x: 0.0,
            mean_p: 0.0,
            hbar: 1.0,
            n_points: DEFAULT_POINTS,
            x_min: None,
            x_max: None,
            tol_zero: ZERO_SET_TOL,
            tol_convergence: CONVERGENCE_TOL,
        }
    }

    #[test]
    fn gaussian_defaults_and_errors() {
        let r = gaussian_report(&gaussian_args()).unwrap();
        assert!(r.relative_gap.abs() < 1e-3);
        assert!(r.discord_p_given_x < 1e-8);
        let r = gaussian_report(&GaussianArgs {
            lambda: 2.0,
            ..gaussian_args()
        })
        .unwrap();
        assert!((r.covariance_term - 1.0).abs() < 1e-3);
        assert!(matches!(
            gaussian_report(&GaussianArgs { mu: 0.0, ..gaussian_args() }),
            Err(CliError::Validation { .. })
        ));
        match gaussian_report(&GaussianArgs {
            x_min: Some(-1.0),
            ..gaussian_args()
        }) {
            Err(CliError::Validation { message, .. }) => assert!(message.contains("--x-min")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
