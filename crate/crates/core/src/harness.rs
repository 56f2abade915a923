//! Per-instance invariant checks. Each check yields a non-negative violation
//! magnitude; an instance passes when every magnitude is within its tolerance.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::bounds::{ObservablePair, ReportOptions, UncertaintyReport};
use crate::error::Result;
use crate::linalg::{expectation, hs_inner, op_norm_sq, ComplexMatrix, PureState};
use crate::weakvalue::{im_part, projection_identity_residual, re_part};

/// Fill used to probe invariance against the default zero fill.
pub const PROBE_FILL: C64 = C64::new(5.0, -3.0);

/// Named violation magnitudes, ordered as reported.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Violations {
    /// Largest negative slack along lhs ≥ rhs+E_max ≥ rhs+E_AB ≥ rhs+Ẽ ≥ rhs ≥ KR.
    pub inequality_chain: f64,
    /// `|var_A - discord - ||A_w(B) - <A>||^2|`
    pub pythagorean: f64,
    /// Largest spread between the three discord routes, both directions.
    pub discord_routes: f64,
    /// Largest change of any report field or of `A_w(B) psi` under a non-zero fill.
    pub fill_invariance: f64,
    /// Negative slack of `|(A,B)|^2 ≤ ||A||^2 ||B||^2` and the two decomposed inequalities.
    pub cauchy_schwarz: f64,
    /// `|(A,B) - conj((B,A))|`
    pub conjugate_symmetry: f64,
    /// `|(lhs - rhs - E_AB) - CS slacks|`
    pub exactness: f64,
    /// `|‖A_w - <A>‖^2 - ‖Re A_w - <A>‖^2 - ‖Im A_w‖^2|`
    pub variance_decomposition: f64,
    /// `|(A, f(B)) - (A_w(B), f(B))|`
    pub projection_identity: f64,
    /// `E(A,B)` on two-dimensional instances, zero otherwise.
    pub property_a: f64,
    /// Equality residuals over `max(1, |λ + iμ|)` together with `|gap_tight_AB|`
    /// when `B` has two distinct eigenvalues, zero otherwise. The residuals are
    /// in units of the fitted constant, which grows without bound as the two
    /// eigenvalues approach each other.
    pub property_b: f64,
}

/// Pass thresholds for each entry of [`Violations`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub inequality_chain: f64,
    pub pythagorean: f64,
    pub discord_routes: f64,
    pub fill_invariance: f64,
    pub cauchy_schwarz: f64,
    pub conjugate_symmetry: f64,
    pub exactness: f64,
    pub variance_decomposition: f64,
    pub projection_identity: f64,
    pub property_a: f64,
    pub property_b: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            inequality_chain: 1e-9,
            pythagorean: 1e-9,
            discord_routes: 1e-9,
            fill_invariance: 1e-10,
            cauchy_schwarz: 1e-10,
            conjugate_symmetry: 0.0,
            exactness: 1e-8,
            variance_decomposition: 1e-9,
            projection_identity: 1e-10,
            property_a: 1e-10,
            property_b: 1e-9,
        }
    }
}

impl Violations {
    pub fn entries(&self) -> [(&'static str, f64); 11] {
        [
            ("inequality_chain", self.inequality_chain),
            ("pythagorean", self.pythagorean),
            ("discord_routes", self.discord_routes),
            ("fill_invariance", self.fill_invariance),
            ("cauchy_schwarz", self.cauchy_schwarz),
            ("conjugate_symmetry", self.conjugate_symmetry),
            ("exactness", self.exactness),
            ("variance_decomposition", self.variance_decomposition),
            ("projection_identity", self.projection_identity),
            ("property_a", self.property_a),
            ("property_b", self.property_b),
        ]
    }

    /// Element-wise maximum.
    pub fn merge(&mut self, other: &Violations) {
        macro_rules! max_fields {
            ($($f:ident),*) => { $( self.$f = self.$f.max(other.$f); )* };
        }
        max_fields!(
            inequality_chain,
            pythagorean,
            discord_routes,
            fill_invariance,
            cauchy_schwarz,
            conjugate_symmetry,
            exactness,
            variance_decomposition,
            projection_identity,
            property_a,
            property_b
        );
    }

    /// Names of the checks exceeding `tol`.
    pub fn failures(&self, tol: &Tolerances) -> Vec<&'static str> {
        let limits = [
            tol.inequality_chain,
            tol.pythagorean,
            tol.discord_routes,
            tol.fill_invariance,
            tol.cauchy_schwarz,
            tol.conjugate_symmetry,
            tol.exactness,
            tol.variance_decomposition,
            tol.projection_identity,
            tol.property_a,
            tol.property_b,
        ];
        self.entries()
            .iter()
            .zip(limits)
            .filter(|((_, v), limit)| !(*v <= *limit))
            .map(|((name, _), _)| *name)
            .collect()
    }
}

fn report_fields(r: &UncertaintyReport) -> [f64; 19] {
    [
        r.var_a,
        r.var_b,
        r.commutator_term,
        r.covariance_term,
        r.schrodinger_rhs,
        r.extra_e_ab,
        r.extra_e_ba,
        r.extra_e_max,
        r.extra_e_tilde,
        r.lhs,
        r.gap_schrodinger,
        r.gap_tight_ab,
        r.gap_tight_max,
        r.equality_residual_cov,
        r.equality_residual_kr,
        r.lambda_fit,
        r.mu_fit,
        r.discord_ab,
        r.discord_ba,
    ]
}

/// Largest absolute difference between the numeric fields of two reports.
pub fn report_distance(x: &UncertaintyReport, y: &UncertaintyReport) -> f64 {
    report_fields(x)
        .iter()
        .zip(report_fields(y))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn negative_part(slack: f64) -> f64 {
    (-slack).max(0.0)
}

/// Runs every check on `(A, B, psi)`.
pub fn check_instance(a: &ComplexMatrix, b: &ComplexMatrix, psi: &PureState) -> Result<Violations> {
    let pair = ObservablePair::new(a.clone(), b.clone())?;
    let r = pair.report(psi)?;
    let rhs = r.schrodinger_rhs;

    let inequality_chain = [
        r.lhs - (rhs + r.extra_e_max),
        r.extra_e_max - r.extra_e_ab,
        r.extra_e_ab - r.extra_e_tilde,
        r.extra_e_tilde,
        rhs - r.commutator_term,
    ]
    .into_iter()
    .map(negative_part)
    .fold(0.0, f64::max);

    let wvd = pair.weak_values(psi)?;
    let mean_a = expectation(a, psi)?.re;
    let centered = wvd.shifted_operator(mean_a);
    let centered_norm = op_norm_sq(&centered, psi)?;
    let pythagorean = (r.var_a - (r.discord_ab + centered_norm)).abs();

    let op = wvd.operator();
    let re_norm = op_norm_sq(&re_part(op).shifted(C64::new(-mean_a, 0.0)), psi)?;
    let im_norm = op_norm_sq(&im_part(op), psi)?;
    let variance_decomposition = (centered_norm - re_norm - im_norm).abs();

    let discord_routes = pair.discord(psi)?.spread().max(pair.swapped().discord(psi)?.spread());

    let probe = ObservablePair::with_options(
        a.clone(),
        b.clone(),
        ReportOptions {
            fill: Some(vec![PROBE_FILL; pair.spectral_b().len()]),
            ..ReportOptions::default()
        },
    )?;
    let probed = probe.report(psi)?;
    let action = op.apply(psi.amplitudes());
    let probe_action = probe.weak_values(psi)?.operator().apply(psi.amplitudes());
    let action_shift = action
        .iter()
        .zip(&probe_action)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    let fill_invariance = report_distance(&r, &probed).max(action_shift);

    let ab = hs_inner(a, b, psi)?;
    let ba = hs_inner(b, a, psi)?;
    let conjugate_symmetry = (ab - ba.conj()).norm();
    let d = pair.decomposed(psi)?;
    let norms = op_norm_sq(a, psi)? * op_norm_sq(b, psi)?;
    let cauchy_schwarz = [
        (norms - ab.norm_sqr()) / norms.max(1.0),
        d.lhs_cov - d.rhs_cov,
        d.lhs_kr - d.rhs_kr,
    ]
    .into_iter()
    .map(negative_part)
    .fold(0.0, f64::max);

    let exactness = (r.gap_tight_ab - d.squared_slack()).abs();

    let spec = pair.spectral_b();
    let f_values: Vec<C64> = spec
        .eigenvalues()
        .iter()
        .map(|&v| C64::new(v * v - 0.5 * v + 1.0, 0.0))
        .collect();
    let projection_identity = projection_identity_residual(a, spec, psi, &f_values)?;

    let property_a = if a.dim() <= 2 { r.extra_e_ab } else { 0.0 };
    let property_b = if spec.len() == 2 {
        let scale = r.lambda_fit.hypot(r.mu_fit).max(1.0);
        (r.equality_residual_cov.max(r.equality_residual_kr) / scale).max(r.gap_tight_ab.abs())
    } else {
        0.0
    };

    Ok(Violations {
        inequality_chain,
        pythagorean,
        discord_routes,
        fill_invariance,
        cauchy_schwarz,
        conjugate_symmetry,
        exactness,
        variance_decomposition,
        projection_identity,
        property_a,
        property_b,
    })
}
