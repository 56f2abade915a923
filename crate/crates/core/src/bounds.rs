//! Variance products and their lower bounds: Kennard-Robertson, Schrödinger,
//! the covariance/commutator split through `Re A_w(B)` and `Im A_w(B)`, and
//! the discord-supplemented bounds `E(A,B)`, `E(B,A)`, `E_max` and `Ẽ`.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    expectation, op_norm_sq, spectral_decomposition, vdot, vnorm_sqr, ComplexMatrix, PureState, SpectralDecomposition,
    DEGENERACY_REL_TOL, HERMITIAN_TOL,
};
use crate::weakvalue::{discord_from, im_part, re_part, weak_value_function, DiscordBreakdown, WeakValueData, ZERO_TOL};

/// Equality residuals at or below `RESIDUAL_TOL * max(1, lhs)` count as zero.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Gaps at or below `GAP_TOL * max(1, lhs)` count as attained bounds.
pub const GAP_TOL: f64 = 1e-9;
/// `||ΔB psi||` below this makes the instance trivial (psi is a B eigenstate).
pub const TRIVIAL_DELTA_B: f64 = 1e-12;

/// Numerical knobs shared by every report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportOptions {
    pub zero_tol: f64,
    pub degeneracy_rel_tol: f64,
    pub hermitian_tol: f64,
    /// Values `c_i` for unpopulated eigenspaces of `B`, one per distinct eigenvalue.
    pub fill: Option<Vec<C64>>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            zero_tol: ZERO_TOL,
            degeneracy_rel_tol: DEGENERACY_REL_TOL,
            hermitian_tol: HERMITIAN_TOL,
            fill: None,
        }
    }
}

/// Every bound and extra term for one `(A, B, psi)` instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncertaintyReport {
    #[serde(rename = "var_A")]
    pub var_a: f64,
    #[serde(rename = "var_B")]
    pub var_b: f64,
    /// `|<[A,B]>/2|^2`
    pub commutator_term: f64,
    /// `|<{A,B}>/2 - <A><B>|^2`
    pub covariance_term: f64,
    pub schrodinger_rhs: f64,
    #[serde(rename = "extra_E_AB")]
    pub extra_e_ab: f64,
    #[serde(rename = "extra_E_BA")]
    pub extra_e_ba: f64,
    #[serde(rename = "extra_E_max")]
    pub extra_e_max: f64,
    #[serde(rename = "extra_E_tilde")]
    pub extra_e_tilde: f64,
    pub lhs: f64,
    pub gap_schrodinger: f64,
    #[serde(rename = "gap_tight_AB")]
    pub gap_tight_ab: f64,
    pub gap_tight_max: f64,
    pub equality_residual_cov: f64,
    pub equality_residual_kr: f64,
    pub lambda_fit: f64,
    pub mu_fit: f64,
    #[serde(rename = "discord_AB")]
    pub discord_ab: f64,
    #[serde(rename = "discord_BA")]
    pub discord_ba: f64,
    /// `psi` is an eigenstate of `B`, so every bound reads `0 = 0`.
    pub trivial: bool,
    pub conditioning_warnings: Vec<String>,
}

impl UncertaintyReport {
    /// `schrodinger_rhs + E(A,B)`.
    pub fn tight_rhs(&self) -> f64 {
        self.schrodinger_rhs + self.extra_e_ab
    }

    pub fn tight_ab_attained(&self) -> bool {
        self.gap_tight_ab.abs() <= GAP_TOL * self.lhs.max(1.0)
    }
}

/// The two Cauchy-Schwarz inequalities whose squares add up to Schrödinger's.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecomposedBounds {
    /// `||Re A_w(B) - <A>|| ||ΔB||`
    pub lhs_cov: f64,
    /// `|<{A,B}>/2 - <A><B>|`
    pub rhs_cov: f64,
    /// `||Im A_w(B)|| ||ΔB||`
    pub lhs_kr: f64,
    /// `|<[A,B]>/2|`
    pub rhs_kr: f64,
}

impl DecomposedBounds {
    /// `(lhs_cov^2 - rhs_cov^2) + (lhs_kr^2 - rhs_kr^2)`.
    pub fn squared_slack(&self) -> f64 {
        (self.lhs_cov * self.lhs_cov - self.rhs_cov * self.rhs_cov) + (self.lhs_kr * self.lhs_kr - self.rhs_kr * self.rhs_kr)
    }
}

/// Fitted equality conditions `(Re A_w(B) - <A>) psi = λ ΔB psi` and
/// `Im A_w(B) psi = μ ΔB psi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityDiagnosis {
    pub residual_cov: f64,
    pub residual_kr: f64,
    /// Residual of `ΔA psi = (λ + iμ) ΔB psi`.
    pub residual_schrodinger: f64,
    pub lambda: f64,
    pub mu: f64,
    pub schrodinger_equality: bool,
    pub tight_equality: bool,
    /// `(A_w(b_1) - A_w(b_2)) / (b_1 - b_2)` when `B` has exactly two
    /// distinct, populated eigenvalues.
    pub proportionality_constant: Option<C64>,
    pub trivial: bool,
}

/// `||X - <X>||^2` for Hermitian `X`.
pub fn variance(x: &ComplexMatrix, psi: &PureState) -> Result<f64> {
    let mean = expectation(x, psi)?.re;
    op_norm_sq(&x.shifted(C64::new(-mean, 0.0)), psi)
}

/// A validated pair of observables with both spectral decompositions cached,
/// so many states can be evaluated against the same `(A, B)`.
#[derive(Debug, Clone)]
pub struct ObservablePair {
    a: ComplexMatrix,
    b: ComplexMatrix,
    spectral_a: SpectralDecomposition,
    spectral_b: SpectralDecomposition,
    options: ReportOptions,
}

struct Evaluation<'p> {
    mean_a: f64,
    mean_b: f64,
    var_a: f64,
    var_b: f64,
    a_psi: Vec<C64>,
    delta_b_psi: Vec<C64>,
    ab: C64,
    wv_ab: WeakValueData<'p>,
}

impl ObservablePair {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix) -> Result<Self> {
        Self::with_options(a, b, ReportOptions::default())
    }

    pub fn with_options(a: ComplexMatrix, b: ComplexMatrix, options: ReportOptions) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: b.dim(),
            });
        }
        a.check_hermitian(options.hermitian_tol)?;
        b.check_hermitian(options.hermitian_tol)?;
        // inputs accepted within tolerance are replaced by their Hermitian parts
        let (a, b) = (crate::weakvalue::re_part(&a), crate::weakvalue::re_part(&b));
        let spectral_a = spectral_decomposition(&a, options.degeneracy_rel_tol)?;
        let spectral_b = spectral_decomposition(&b, options.degeneracy_rel_tol)?;
        if let Some(fill) = &options.fill {
            if fill.len() != spectral_b.len() {
                return Err(Error::FillLengthMismatch {
                    expected: spectral_b.len(),
                    found: fill.len(),
                });
            }
        }
        Ok(Self {
            a,
            b,
            spectral_a,
            spectral_b,
            options,
        })
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn spectral_a(&self) -> &SpectralDecomposition {
        &self.spectral_a
    }

    pub fn spectral_b(&self) -> &SpectralDecomposition {
        &self.spectral_b
    }

    pub fn options(&self) -> &ReportOptions {
        &self.options
    }

    /// The pair with the roles of `A` and `B` exchanged (fill is dropped).
    pub fn swapped(&self) -> ObservablePair {
        ObservablePair {
            a: self.b.clone(),
            b: self.a.clone(),
            spectral_a: self.spectral_b.clone(),
            spectral_b: self.spectral_a.clone(),
            options: ReportOptions {
                fill: None,
                ..self.options.clone()
            },
        }
    }

    /// Weak values of `A` relative to `B` with the configured fill.
    pub fn weak_values<'p>(&'p self, psi: &PureState) -> Result<WeakValueData<'p>> {
        weak_value_function(&self.a, &self.spectral_b, psi, self.options.fill.as_deref(), self.options.zero_tol)
    }

    /// `||A - A_w(B)||^2` by all three routes.
    pub fn discord(&self, psi: &PureState) -> Result<DiscordBreakdown> {
        discord_from(&self.a, &self.weak_values(psi)?, psi)
    }

    fn evaluate<'p>(&'p self, psi: &PureState) -> Result<Evaluation<'p>> {
        if psi.dim() != self.a.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.a.dim(),
                found: psi.dim(),
            });
        }
        let amps = psi.amplitudes();
        let a_psi = self.a.apply(amps);
        let b_psi = self.b.apply(amps);
        let mean_a = vdot(amps, &a_psi).re;
        let mean_b = vdot(amps, &b_psi).re;
        let delta_a_psi: Vec<C64> = a_psi.iter().zip(amps).map(|(x, p)| x - p * mean_a).collect();
        let delta_b_psi: Vec<C64> = b_psi.iter().zip(amps).map(|(x, p)| x - p * mean_b).collect();
        Ok(Evaluation {
            mean_a,
            mean_b,
            var_a: vnorm_sqr(&delta_a_psi),
            var_b: vnorm_sqr(&delta_b_psi),
            // <AB> = <A psi, B psi> for Hermitian A
            ab: vdot(&a_psi, &b_psi),
            a_psi,
            delta_b_psi,
            wv_ab: self.weak_values(psi)?,
        })
    }

    pub fn report(&self, psi: &PureState) -> Result<UncertaintyReport> {
        let ev = self.evaluate(psi)?;
        // <[A,B]>/2 = i Im<AB>, <{A,B}>/2 = Re<AB> since <BA> = conj(<AB>)
        let half_comm = C64::new(0.0, ev.ab.im);
        let half_anti = ev.ab.re;
        let commutator_term = half_comm.norm_sqr();
        let cov = half_anti - ev.mean_a * ev.mean_b;
        let covariance_term = cov * cov;
        let schrodinger_rhs = commutator_term + covariance_term;

        let d_ab = discord_from(&self.a, &ev.wv_ab, psi)?.value();
        let wv_ba = weak_value_function(&self.b, &self.spectral_a, psi, None, self.options.zero_tol)?;
        let d_ba = discord_from(&self.b, &wv_ba, psi)?.value();

        let extra_e_ab = d_ab * ev.var_b;
        let extra_e_ba = d_ba * ev.var_a;
        let extra_e_max = extra_e_ab.max(extra_e_ba);
        let extra_e_tilde = d_ab * d_ba;
        let lhs = ev.var_a * ev.var_b;

        let diag = self.diagnose_with(&ev, psi);
        let mut conditioning_warnings: Vec<String> = ev
            .wv_ab
            .warnings()
            .iter()
            .map(|w| format!("A_w(B): {w}"))
            .chain(wv_ba.warnings().iter().map(|w| format!("B_w(A): {w}")))
            .collect();
        if diag.trivial {
            conditioning_warnings.push("trivial instance: psi is an eigenstate of B, ||ΔB|| = 0".to_string());
        }

        Ok(UncertaintyReport {
            var_a: ev.var_a,
            var_b: ev.var_b,
            commutator_term,
            covariance_term,
            schrodinger_rhs,
            extra_e_ab,
            extra_e_ba,
            extra_e_max,
            extra_e_tilde,
            lhs,
            gap_schrodinger: lhs - schrodinger_rhs,
            gap_tight_ab: lhs - (schrodinger_rhs + extra_e_ab),
            gap_tight_max: lhs - (schrodinger_rhs + extra_e_max),
            equality_residual_cov: diag.residual_cov,
            equality_residual_kr: diag.residual_kr,
            lambda_fit: diag.lambda,
            mu_fit: diag.mu,
            discord_ab: d_ab,
            discord_ba: d_ba,
            trivial: diag.trivial,
            conditioning_warnings,
        })
    }

    pub fn decomposed(&self, psi: &PureState) -> Result<DecomposedBounds> {
        let ev = self.evaluate(psi)?;
        let re_centered = re_part(ev.wv_ab.operator()).shifted(C64::new(-ev.mean_a, 0.0));
        let im = im_part(ev.wv_ab.operator());
        let norm_b = ev.var_b.sqrt();
        Ok(DecomposedBounds {
            lhs_cov: op_norm_sq(&re_centered, psi)?.sqrt() * norm_b,
            rhs_cov: (ev.ab.re - ev.mean_a * ev.mean_b).abs(),
            lhs_kr: op_norm_sq(&im, psi)?.sqrt() * norm_b,
            rhs_kr: ev.ab.im.abs(),
        })
    }

    pub fn diagnose(&self, psi: &PureState) -> Result<EqualityDiagnosis> {
        let ev = self.evaluate(psi)?;
        Ok(self.diagnose_with(&ev, psi))
    }

    fn diagnose_with(&self, ev: &Evaluation<'_>, psi: &PureState) -> EqualityDiagnosis {
        let amps = psi.amplitudes();
        let op = ev.wv_ab.operator();
        let re_psi: Vec<C64> = re_part(op)
            .apply(amps)
            .iter()
            .zip(amps)
            .map(|(x, p)| x - p * ev.mean_a)
            .collect();
        let im_psi = im_part(op).apply(amps);
        let delta_a_psi: Vec<C64> = ev.a_psi.iter().zip(amps).map(|(x, p)| x - p * ev.mean_a).collect();

        let u = &ev.delta_b_psi;
        let u_norm_sq = vnorm_sqr(u);
        let trivial = u_norm_sq.sqrt() < TRIVIAL_DELTA_B;
        let (lambda, mu, residual_cov, residual_kr, residual_schrodinger) = if trivial {
            (0.0, 0.0, vnorm_sqr(&re_psi).sqrt(), vnorm_sqr(&im_psi).sqrt(), vnorm_sqr(&delta_a_psi).sqrt())
        } else {
            let lambda = vdot(u, &re_psi).re / u_norm_sq;
            let mu = vdot(u, &im_psi).re / u_norm_sq;
            let u_norm = u_norm_sq.sqrt();
            let resid = |v: &[C64], k: C64| -> f64 {
                v.iter()
                    .zip(u)
                    .map(|(x, y)| (x - k * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
                    / u_norm
            };
            (
                lambda,
                mu,
                resid(&re_psi, C64::new(lambda, 0.0)),
                resid(&im_psi, C64::new(mu, 0.0)),
                resid(&delta_a_psi, C64::new(lambda, mu)),
            )
        };

        let tol = RESIDUAL_TOL * (ev.var_a * ev.var_b).max(1.0);
        let tight_equality = trivial || (residual_cov <= tol && residual_kr <= tol);
        let schrodinger_equality = trivial || (tight_equality && residual_schrodinger <= tol);

        let spec = &self.spectral_b;
        let proportionality_constant = if spec.len() == 2 && ev.wv_ab.fill_mask().iter().all(|m| !m) {
            let v = ev.wv_ab.values();
            let b = spec.eigenvalues();
            Some((v[0] - v[1]) / (b[0] - b[1]))
        } else {
            None
        };

        EqualityDiagnosis {
            residual_cov,
            residual_kr,
            residual_schrodinger,
            lambda,
            mu,
            schrodinger_equality,
            tight_equality,
            proportionality_constant,
            trivial,
        }
    }
}

/// Full report for a single instance; validates Hermiticity and dimensions.
pub fn schrodinger_report(a: &ComplexMatrix, b: &ComplexMatrix, psi: &PureState) -> Result<UncertaintyReport> {
    ObservablePair::new(a.clone(), b.clone())?.report(psi)
}

pub fn decomposed_bounds(a: &ComplexMatrix, b: &ComplexMatrix, psi: &PureState) -> Result<DecomposedBounds> {
    ObservablePair::new(a.clone(), b.clone())?.decomposed(psi)
}

pub fn diagnose_equality(a: &ComplexMatrix, b: &ComplexMatrix, psi: &PureState) -> Result<EqualityDiagnosis> {
    ObservablePair::new(a.clone(), b.clone())?.diagnose(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn spin1() -> (ComplexMatrix, ComplexMatrix) {
        let one = ComplexMatrix::identity(1);
        (
            ComplexMatrix::block_diag(&pauli::sigma1(), &one),
            ComplexMatrix::block_diag(&pauli::sigma2(), &one),
        )
    }

    fn spin32(t: f64) -> (ComplexMatrix, ComplexMatrix, PureState) {
        (
            ComplexMatrix::block_diag(&pauli::sigma1(), &ComplexMatrix::diag(&[1.0, -1.0])),
            ComplexMatrix::block_diag(&pauli::sigma2(), &ComplexMatrix::diag(&[1.0, 0.0])),
            PureState::from_real(&[1.0, 0.0, 1.0, t]).unwrap(),
        )
    }

    fn generic_state(dim: usize) -> PureState {
        PureState::new((0..dim).map(|k| c(0.3 + 0.17 * k as f64, (-0.4 + 0.29 * k as f64).sin())).collect()).unwrap()
    }

    #[test]
    fn variance_examples() {
        let (a, b) = spin1();
        let e3 = PureState::from_real(&[0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(variance(&a, &e3).unwrap(), 0.0, epsilon = 1e-15);
        let psi = PureState::from_real(&[1.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(variance(&a, &psi).unwrap(), 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(variance(&b, &psi).unwrap(), 0.75, epsilon = 1e-14);
    }

    #[test]
    fn self_pair_saturates_everything() {
        let (a, _) = spin1();
        let psi = generic_state(3);
        let r = schrodinger_report(&a, &a, &psi).unwrap();
        assert_abs_diff_eq!(r.commutator_term, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.covariance_term, r.var_a * r.var_a, epsilon = 1e-14);
        assert_abs_diff_eq!(r.lhs, r.var_a * r.var_a, epsilon = 1e-15);
        for g in [r.gap_schrodinger, r.gap_tight_ab, r.gap_tight_max] {
            assert_abs_diff_eq!(g, 0.0, epsilon = 1e-14);
        }
        for e in [r.extra_e_ab, r.extra_e_ba, r.extra_e_max, r.extra_e_tilde] {
            assert_abs_diff_eq!(e, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn spin1_report_at_101() {
        let (a, b) = spin1();
        let psi = PureState::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let r = schrodinger_report(&a, &b, &psi).unwrap();
        assert_abs_diff_eq!(r.covariance_term, 1.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.commutator_term, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(r.extra_e_ab, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(r.lhs, 9.0 / 16.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.gap_tight_ab, 0.0, epsilon = 1e-14);
        assert!(r.tight_ab_attained());
        assert!(r.gap_schrodinger > 0.2);
    }

    #[test]
    fn two_dimensional_pairs_have_no_extra_term() {
        let a = ComplexMatrix::from_rows(vec![vec![c(0.3, 0.0), c(1.0, -0.7)], vec![c(1.0, 0.7), c(-1.2, 0.0)]]).unwrap();
        let b = ComplexMatrix::from_rows(vec![vec![c(2.0, 0.0), c(0.1, 0.4)], vec![c(0.1, -0.4), c(0.5, 0.0)]]).unwrap();
        let pair = ObservablePair::new(a, b).unwrap();
        let r = pair.report(&generic_state(2)).unwrap();
        assert!(r.extra_e_ab < 1e-10);
        // eigenstate of B: masked branch, but ||ΔB|| = 0
        let eig = crate::linalg::eig_hermitian(pair.b()).unwrap();
        let psi = PureState::new(eig.vectors.column(0)).unwrap();
        let r = pair.report(&psi).unwrap();
        assert!(r.extra_e_ab < 1e-10);
        assert!(r.trivial);
    }

    #[test]
    fn commuting_pair_has_no_kr_part() {
        let b = ComplexMatrix::diag(&[-1.0, 0.5, 2.0, 3.0]);
        let a = ComplexMatrix::diag(&[4.0, -2.0, 0.0, 1.0]);
        let d = decomposed_bounds(&a, &b, &generic_state(4)).unwrap();
        assert_abs_diff_eq!(d.lhs_kr, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d.rhs_kr, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn self_pair_decomposition() {
        let (a, _) = spin1();
        let psi = generic_state(3);
        let d = decomposed_bounds(&a, &a, &psi).unwrap();
        let var = variance(&a, &psi).unwrap();
        assert_abs_diff_eq!(d.lhs_cov, var, epsilon = 1e-13);
        assert_abs_diff_eq!(d.rhs_cov, var, epsilon = 1e-13);
        let diag = diagnose_equality(&a, &a, &psi).unwrap();
        assert_abs_diff_eq!(diag.lambda, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(diag.mu, 0.0, epsilon = 1e-12);
        assert!(diag.residual_cov < 1e-12 && diag.residual_kr < 1e-12);
        assert!(diag.schrodinger_equality && diag.tight_equality);
    }

    #[test]
    fn decomposed_squares_rebuild_the_bounds() {
        let a = ComplexMatrix::from_fn(4, |i, j| {
            if i == j {
                c(i as f64 - 1.0, 0.0)
            } else if i < j {
                c(0.3 * (i + j) as f64, 0.2 * j as f64)
            } else {
                c(0.3 * (i + j) as f64, -0.2 * i as f64)
            }
        });
        let b = ComplexMatrix::from_fn(4, |i, j| if i == j { c(0.0, 0.0) } else if i < j { c(0.0, 1.0) } else { c(0.0, -1.0) });
        let psi = generic_state(4);
        let pair = ObservablePair::new(a, b).unwrap();
        let d = pair.decomposed(&psi).unwrap();
        let r = pair.report(&psi).unwrap();
        assert!(d.lhs_cov >= d.rhs_cov - 1e-10);
        assert!(d.lhs_kr >= d.rhs_kr - 1e-10);
        assert_abs_diff_eq!(d.rhs_cov * d.rhs_cov + d.rhs_kr * d.rhs_kr, r.schrodinger_rhs, epsilon = 1e-12);
        assert_abs_diff_eq!(
            d.lhs_cov * d.lhs_cov + d.lhs_kr * d.lhs_kr + r.extra_e_ab,
            r.lhs,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(r.gap_tight_ab, d.squared_slack(), epsilon = 1e-12);
    }

    #[test]
    fn two_eigenvalue_b_always_saturates() {
        let (a, b) = spin1();
        let pair = ObservablePair::new(a, b).unwrap();
        for k in 0..20 {
            let t = k as f64 * 0.37;
            let psi = PureState::new(vec![c(t.cos(), 0.3), c(-0.2, t.sin()), c(0.5 + 0.1 * t, -0.4)]).unwrap();
            let diag = pair.diagnose(&psi).unwrap();
            assert!(diag.residual_cov < 1e-9 && diag.residual_kr < 1e-9, "{diag:?}");
            let kappa = diag.proportionality_constant.unwrap();
            assert_abs_diff_eq!(kappa.re, diag.lambda, epsilon = 1e-10);
            assert_abs_diff_eq!(kappa.im, diag.mu, epsilon = 1e-10);
        }
    }

    #[test]
    fn spin32_equality_only_with_roles_swapped() {
        let (a, b, psi) = spin32(1.0);
        let diag = diagnose_equality(&a, &b, &psi).unwrap();
        assert!(!diag.schrodinger_equality);
        assert!(!diag.tight_equality);
        let swapped = diagnose_equality(&b, &a, &psi).unwrap();
        assert!(swapped.tight_equality);
        assert!(!swapped.schrodinger_equality);

        let r = schrodinger_report(&a, &b, &psi).unwrap();
        assert!(r.gap_tight_ab > 1e-6);
        assert!(r.gap_schrodinger > 1e-3);
        assert!(r.gap_tight_max.abs() < 1e-9);
        assert_eq!(r.extra_e_max, r.extra_e_ba);
    }

    #[test]
    fn validation_errors() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(matches!(schrodinger_report(&a, &b, &generic_state(2)), Err(Error::DimensionMismatch { .. })));
        let skew = ComplexMatrix::from_rows(vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(-1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!(matches!(schrodinger_report(&a, &skew, &generic_state(2)), Err(Error::NonHermitianInput { .. })));
        assert!(matches!(
            ObservablePair::new(a.clone(), a.clone()).unwrap().report(&generic_state(3)),
            Err(Error::DimensionMismatch { .. })
        ));
        let opts = ReportOptions {
            fill: Some(vec![c(1.0, 0.0); 3]),
            ..ReportOptions::default()
        };
        assert!(matches!(
            ObservablePair::with_options(a.clone(), ComplexMatrix::diag(&[0.0, 1.0]), opts),
            Err(Error::FillLengthMismatch { expected: 2, found: 3 })
        ));
    }
}
