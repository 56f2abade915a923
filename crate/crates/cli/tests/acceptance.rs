//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p wvbound-cli --test acceptance`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use wvbound::bounds::ObservablePair;
use wvbound::continuous::{
    discord_p_given_x, gaussian_mus, log_modulus_gradient, modulus_condition_residual, phase_condition_residual,
    phase_gradient, schrodinger_check_continuous, GaussianFamilyParams, GridSpec, GridWaveFunction, ZERO_SET_TOL,
};
use wvbound::linalg::{vdot, PureState};
use wvbound::models::{
    spin1_closed_forms, spin1_grid, spin1_numeric_terms, spin1_observables, sweep_spin1, sweep_spin32,
};
use wvbound::sampling::{instance_rng, random_hermitian, random_state, two_eigenvalue_b, DegeneracyMode};
use wvbound::C64;
use wvbound_cli::commands::random_verify;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn spin1_fidelity_and_balance() -> (Outcome, Outcome) {
    let start = Instant::now();
    let (a, b) = spin1_observables();
    let pair = ObservablePair::new(a, b).expect("spin-1 pair");
    let (mut fidelity, mut balance, mut points) = (0.0f64, 0.0f64, 0usize);
    for k in 0..8 {
        for p in spin1_grid(200, k as f64 * FRAC_PI_4).expect("grid") {
            let psi = PureState::new(vec![p.x, p.y, p.z]).expect("state");
            let (numeric, report) = spin1_numeric_terms(&pair, &psi).expect("pipeline");
            let closed = spin1_closed_forms(p);
            fidelity = fidelity.max(closed.max_abs_diff(&numeric));
            let closed_balance = closed.comm_term + closed.cov_term + closed.extra_e_ab() - closed.var_a * closed.var_b;
            let numeric_balance = report.commutator_term + report.covariance_term + report.extra_e_ab - report.lhs;
            balance = balance.max(closed_balance.abs()).max(numeric_balance.abs());
            points += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        outcome(
            fidelity < 1e-9 && secs < 30.0,
            format!("{points} points, max |closed - numeric| = {fidelity:.3e} (tol 1e-9), {secs:.2} s (limit 30 s)"),
        ),
        outcome(
            balance < 1e-9,
            format!("max |comm + cov + E_AB - var_A var_B| = {balance:.3e} (tol 1e-9)"),
        ),
    )
}

fn spin1_landmark() -> Outcome {
    let rows = sweep_spin1(200, 0.0).expect("sweep");
    let best = rows
        .iter()
        .max_by(|x, y| x.e_ab_numeric.total_cmp(&y.e_ab_numeric))
        .expect("non-empty sweep");
    let target_z = 1.0 / 3f64.sqrt();
    let min_xy = best.abs_x.min(best.abs_y);
    let pass = (best.e_ab_numeric - 8.0 / 27.0).abs() <= 1e-3 && (best.abs_z - target_z).abs() <= 0.01 && min_xy < 0.01;
    outcome(
        pass,
        format!(
            "max E_AB = {:.6} (8/27 = {:.6} ± 1e-3) at |z| = {:.5} (1/√3 ± 0.01), min(|x|,|y|) = {:.2e} (< 0.01)",
            best.e_ab_numeric,
            8.0 / 27.0,
            best.abs_z,
            min_xy
        ),
    )
}

fn spin32_sweep() -> Outcome {
    let rows = sweep_spin32(-3.0, 3.0, 601).expect("sweep");
    let (mut slack, mut ba) = (f64::INFINITY, 0.0f64);
    for r in &rows {
        for (lo, hi) in [
            (r.schrodinger_rhs, r.plus_e_tilde),
            (r.plus_e_tilde, r.plus_e_ab),
            (r.plus_e_ab, r.lhs),
        ] {
            slack = slack.min(hi - lo);
        }
        ba = ba.max((r.lhs - r.plus_e_ba).abs());
    }
    let at_one = rows.iter().find(|r| r.t == 1.0).expect("t = 1 lies on the grid");
    let gap = at_one.lhs - at_one.schrodinger_rhs;
    outcome(
        rows.len() == 601 && slack >= -1e-9 && ba < 1e-9 && gap > 1e-3,
        format!(
            "{} rows, min ordering slack = {slack:.3e} (≥ -1e-9), max |lhs - (+E_BA)| = {ba:.3e} (< 1e-9), Schrödinger gap at t=1 = {gap:.6} (> 1e-3)",
            rows.len()
        ),
    )
}

fn property_a(dir: &Path) -> Outcome {
    let s = random_verify(42, &[2], &DegeneracyMode::ALL, 10_000, &dir.join("a.json")).expect("harness");
    let worst = s.max_violation.property_a;
    outcome(
        worst < 1e-10 && s.failed == 0,
        format!("{} dim-2 instances, max extra_E_AB = {worst:.3e} (< 1e-10), {} harness failures", s.instances, s.failed),
    )
}

fn general_harness(dir: &Path) -> Outcome {
    let start = Instant::now();
    let s = random_verify(42, &[3, 4, 5, 6], &DegeneracyMode::ALL, 10_000, &dir.join("general.json")).expect("harness");
    let secs = start.elapsed().as_secs_f64();
    let worst: Vec<String> = s
        .max_violation
        .entries()
        .iter()
        .map(|(name, v)| format!("{name} {v:.1e}"))
        .collect();
    let failure = s
        .first_failure
        .as_ref()
        .map(|f| format!("; first failure dim {} {} #{}: {:?}", f.dim, f.mode, f.index, f.failed_checks))
        .unwrap_or_default();
    outcome(
        s.failed == 0 && secs < 120.0,
        format!(
            "{}/{} passed in {secs:.1} s (limit 120 s); max violations: {}{failure}",
            s.passed,
            s.instances,
            worst.join(", ")
        ),
    )
}

fn two_eigenvalue_equality() -> Outcome {
    let (mut residual, mut kappa_fit, mut reconstruction, mut count) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    let mut missing = 0usize;
    for index in 0..1000u64 {
        let dim = 3 + (index % 4) as usize;
        let mut rng = instance_rng(7, dim, DegeneracyMode::None, index);
        let a = random_hermitian(&mut rng, dim);
        let b = two_eigenvalue_b(&mut rng, dim).expect("two-eigenvalue B");
        let psi = random_state(&mut rng, dim);
        let pair = ObservablePair::new(a.clone(), b.clone()).expect("pair");
        let d = pair.diagnose(&psi).expect("diagnosis");
        residual = residual.max(d.residual_cov).max(d.residual_kr);
        let Some(kappa) = d.proportionality_constant else {
            missing += 1;
            continue;
        };
        kappa_fit = kappa_fit.max((kappa - C64::new(d.lambda, d.mu)).norm());

        // (A_w(B) - <A>) psi = κ (B - <B>) psi
        let amps = psi.amplitudes();
        let mean_a = vdot(amps, &a.apply(amps)).re;
        let b_psi = b.apply(amps);
        let mean_b = vdot(amps, &b_psi).re;
        let wv = pair.weak_values(&psi).expect("weak values");
        let err = wv
            .operator()
            .apply(amps)
            .iter()
            .zip(&b_psi)
            .zip(amps)
            .map(|((w, bp), p)| (w - p * mean_a - kappa * (bp - p * mean_b)).norm_sqr())
            .sum::<f64>()
            .sqrt();
        reconstruction = reconstruction.max(err);
        count += 1;
    }
    outcome(
        residual < 1e-9 && kappa_fit < 1e-9 && reconstruction < 1e-9 && missing == 0,
        format!(
            "{count} instances (dims 3-6), max equality residual = {residual:.3e}, max |κ - (λ+iμ)| = {kappa_fit:.3e}, max reconstruction error = {reconstruction:.3e} (all < 1e-9), {missing} without κ"
        ),
    )
}

fn max_gradient_error(psi: &GridWaveFunction, grad: &[Option<f64>], exact: impl Fn(f64) -> f64) -> f64 {
    grad.iter()
        .enumerate()
        .filter_map(|(k, g)| g.map(|g| (g - exact(psi.x(k))).abs()))
        .fold(0.0, f64::max)
}

fn continuous_case() -> Outcome {
    let hbar = 1.0;
    let (mut residual, mut rel_gap, mut discord, mut worst_factor) = (0.0f64, 0.0f64, 0.0f64, f64::INFINITY);
    for lambda in [-2.0, 0.0, 1.0, 2.0] {
        for mu in [0.5, 1.0, 4.0] {
            let params = GaussianFamilyParams {
                lambda,
                mu,
                mean_x: 0.0,
                mean_p: 0.0,
            };
            let grid = params.default_grid(hbar).expect("grid");
            let psi = gaussian_mus(params, grid, hbar).expect("state");
            residual = residual
                .max(phase_condition_residual(&psi, lambda, 0.0, 0.0))
                .max(modulus_condition_residual(&psi, mu, 0.0));
            let check = schrodinger_check_continuous(&psi).expect("converged");
            let coarse_err = (check.gap / check.lhs).abs();
            rel_gap = rel_gap.max(coarse_err);
            discord = discord.max(discord_p_given_x(&psi, ZERO_SET_TOL));

            let fine_grid = GridSpec::new(grid.x_min, grid.x_max, 2 * grid.n_points - 1).expect("grid");
            let fine = schrodinger_check_continuous(&gaussian_mus(params, fine_grid, hbar).expect("state")).expect("converged");
            worst_factor = worst_factor.min(coarse_err / (fine.gap / fine.lhs).abs());
        }
    }

    // the log-ψ differences are exact on the Gaussian family, so their order is
    // measured on a cubic phase and a quartic log-modulus
    let probe = |n: usize| {
        let grid = GridSpec::new(-6.0, 6.0, n).expect("grid");
        GridWaveFunction::from_fn(grid, hbar, |x| C64::from_polar((-x * x / 2.0 - x.powi(4) / 40.0).exp(), x.powi(3) / 6.0))
            .expect("probe")
    };
    let (coarse, fine) = (probe(513), probe(1025));
    let phase_factor = max_gradient_error(&coarse, &phase_gradient(&coarse), |x| x * x / 2.0)
        / max_gradient_error(&fine, &phase_gradient(&fine), |x| x * x / 2.0);
    let modulus = |x: f64| -x - x.powi(3) / 10.0;
    let modulus_factor = max_gradient_error(&coarse, &log_modulus_gradient(&coarse), modulus)
        / max_gradient_error(&fine, &log_modulus_gradient(&fine), modulus);
    let factor = worst_factor.min(phase_factor).min(modulus_factor);

    outcome(
        residual < 1e-4 && rel_gap < 1e-3 && discord < 1e-8 && factor >= 2.0,
        format!(
            "12 states, max residual = {residual:.3e} (< 1e-4), max |gap|/lhs = {rel_gap:.3e} (< 1e-3), max discord = {discord:.3e} (< 1e-8), grid-halving factors: gap {worst_factor:.2}, phase {phase_factor:.2}, modulus {modulus_factor:.2} (≥ 2)"
        ),
    )
}

fn determinism(dir: &Path) -> Outcome {
    let problem = dir.join("problem.json");
    let (z, o) = (r#"{"re": 0, "im": 0}"#, r#"{"re": 1, "im": 0}"#);
    let (m, p) = (r#"{"re": 0, "im": -1}"#, r#"{"re": 0, "im": 1}"#);
    let text = format!(
        r#"{{"A": [[{z}, {o}, {z}], [{o}, {z}, {z}], [{z}, {z}, {o}]], "B": [[{z}, {m}, {z}], [{p}, {z}, {z}], [{z}, {z}, {o}]], "psi": [{o}, {z}, {o}]}}"#
    );
    std::fs::write(&problem, text).expect("write problem");
    let problem = problem.to_str().expect("utf-8 path").to_string();
    let reproducer = dir.join("repro.json").to_str().expect("utf-8 path").to_string();
    let spin1_csv = dir.join("spin1.csv").to_str().expect("utf-8 path").to_string();
    let spin32_csv = dir.join("spin32.csv").to_str().expect("utf-8 path").to_string();
    let theta = (PI / 3.0).to_string();
    let commands: Vec<(Vec<&str>, Option<&str>)> = vec![
        (vec!["report", &problem], None),
        (vec!["sweep-spin1", "--res", "200", "--theta", &theta, "--out", &spin1_csv], Some(&spin1_csv)),
        (vec!["sweep-spin1", "--res", "50"], None),
        (vec!["sweep-spin32", "--out", &spin32_csv], Some(&spin32_csv)),
        (vec!["sweep-spin32", "--tmin", "-1", "--tmax", "2", "--steps", "31"], None),
        (vec!["random-verify", "--seed", "11", "--dims", "2..6", "--samples", "200", "--reproducer", &reproducer], None),
        (vec!["gaussian"], None),
        (vec!["gaussian", "--lambda", "1", "--mu", "4", "--mean-x", "0.5", "--mean-p", "-1"], None),
    ];
    let mut mismatched = Vec::new();
    for (args, file) in &commands {
        let run = || {
            let out = Command::new(env!("CARGO_BIN_EXE_wvbound")).args(args).output().expect("binary runs");
            let written = file.map(|f| std::fs::read(f).expect("output file"));
            (out.status.code(), out.stdout, written)
        };
        let (first, second) = (run(), run());
        if first != second || first.0 != Some(0) {
            mismatched.push(args[0].to_string());
        }
    }
    outcome(
        mismatched.is_empty(),
        format!("{} commands run twice, byte-identical and exit 0: mismatches {mismatched:?}", commands.len()),
    )
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let (fidelity, balance) = spin1_fidelity_and_balance();
    let results = [
        ("spin-1 closed-form fidelity", fidelity),
        ("spin-1 balance", balance),
        ("spin-1 maximum of E(A,B)", spin1_landmark()),
        ("spin-3/2 sweep orderings", spin32_sweep()),
        ("property (a) in dimension 2", property_a(dir.path())),
        ("general random harness", general_harness(dir.path())),
        ("two-eigenvalue equality", two_eigenvalue_equality()),
        ("continuous Gaussian family", continuous_case()),
        ("determinism", determinism(dir.path())),
    ];
    let mut failures = 0;
    for (name, o) in &results {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failures += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", results.len() - failures, results.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
