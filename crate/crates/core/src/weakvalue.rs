//! Weak-value function `A_w(b_i)` and weak-value operator `A_w(B)` for
//! arbitrary (possibly degenerate) `B`, including eigenspaces the state does
//! not populate, plus the discord `||A - A_w(B)||^2`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{clamp_norm, hs_inner, op_norm_sq, vdot, vnorm_sqr, ComplexMatrix, PureState, SpectralDecomposition};

/// `<Pi_i>` at or below this is treated as exactly zero.
pub const ZERO_TOL: f64 = 1e-12;
/// `<Pi_i>` between `ZERO_TOL` and this value yields a conditioning warning.
pub const ILL_CONDITIONED_BELOW: f64 = 1e-8;
/// Slack for clamping rounding noise out of the discord routes.
pub const DISCORD_CLAMP: f64 = 1e-12;

/// Weak values of `A` for every distinct eigenvalue of `B`, and the
/// assembled operator `sum_i A_w(b_i) Pi_i`.
#[derive(Debug, Clone)]
pub struct WeakValueData<'a> {
    values: Vec<C64>,
    fill_mask: Vec<bool>,
    projector_expectations: Vec<f64>,
    operator: ComplexMatrix,
    spectral: &'a SpectralDecomposition,
    warnings: Vec<String>,
}

impl<'a> WeakValueData<'a> {
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `true` where `<Pi_i> = 0` and the value is the supplied fill.
    pub fn fill_mask(&self) -> &[bool] {
        &self.fill_mask
    }

    /// `<Pi_i>` for every distinct eigenvalue.
    pub fn projector_expectations(&self) -> &[f64] {
        &self.projector_expectations
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.operator
    }

    pub fn spectral(&self) -> &'a SpectralDecomposition {
        self.spectral
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `A_w(B) - shift` with the shift understood as `shift * sum_i Pi_i`.
    pub fn shifted_operator(&self, shift: f64) -> ComplexMatrix {
        let values: Vec<C64> = self.values.iter().map(|v| v - shift).collect();
        self.spectral.function(&values)
    }
}

/// Evaluates `A_w(b_i) = <Pi_i A> / <Pi_i>`, or `fill[i]` when `<Pi_i> <= zero_tol`.
///
/// `fill` defaults to all zeros.
pub fn weak_value_function<'a>(
    a: &ComplexMatrix,
    spectral: &'a SpectralDecomposition,
    psi: &PureState,
    fill: Option<&[C64]>,
    zero_tol: f64,
) -> Result<WeakValueData<'a>> {
    let dim = spectral.dim();
    for found in [a.dim(), psi.dim()] {
        if found != dim {
            return Err(Error::DimensionMismatch { expected: dim, found });
        }
    }
    if let Some(fill) = fill {
        if fill.len() != spectral.len() {
            return Err(Error::FillLengthMismatch {
                expected: spectral.len(),
                found: fill.len(),
            });
        }
    }

    let a_psi = a.apply(psi.amplitudes());
    let mut values = Vec::with_capacity(spectral.len());
    let mut fill_mask = Vec::with_capacity(spectral.len());
    let mut projector_expectations = Vec::with_capacity(spectral.len());
    let mut warnings = Vec::new();
    for (i, proj) in spectral.projectors().iter().enumerate() {
        let pi_psi = proj.apply(psi.amplitudes());
        let p = vnorm_sqr(&pi_psi);
        projector_expectations.push(p);
        if p <= zero_tol {
            values.push(fill.map_or(C64::new(0.0, 0.0), |f| f[i]));
            fill_mask.push(true);
        } else {
            if p < ILL_CONDITIONED_BELOW {
                warnings.push(format!(
                    "<Pi_{i}> = {p:.3e} for b = {:.6e}: weak value is ill-conditioned",
                    spectral.eigenvalues()[i]
                ));
            }
            // <psi| Pi_i A |psi> = <Pi_i psi, A psi> since Pi_i is Hermitian
            values.push(vdot(&pi_psi, &a_psi) / p);
            fill_mask.push(false);
        }
    }
    let operator = spectral.function(&values);
    Ok(WeakValueData {
        values,
        fill_mask,
        projector_expectations,
        operator,
        spectral,
        warnings,
    })
}

/// `A_w(B) = sum_i A_w(b_i) Pi_i`.
pub fn weak_value_operator(wvd: &WeakValueData<'_>) -> ComplexMatrix {
    wvd.spectral.function(&wvd.values)
}

/// `(X + X^dagger) / 2`.
pub fn re_part(x: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(x.dim(), |i, j| 0.5 * (x[(i, j)] + x[(j, i)].conj()))
}

/// `(X - X^dagger) / 2i`.
pub fn im_part(x: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(x.dim(), |i, j| (x[(i, j)] - x[(j, i)].conj()) * C64::new(0.0, -0.5))
}

/// `||A - A_w(B)||^2` computed by three independent routes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordBreakdown {
    /// `||A - A_w(B)||^2` from the assembled operator.
    pub direct: f64,
    /// `||A||^2 - ||A_w(B)||^2`.
    pub by_subtraction: f64,
    /// Sum over unpopulated eigenspaces plus degenerate populated ones.
    pub by_sum_formula: f64,
    /// `sum_{<Pi_i>=0} <A Pi_i A>`.
    pub zero_expectation_contribution: f64,
    /// `sum_{degenerate i, <Pi_i> != 0} <A Pi_i^perp A>`.
    pub degenerate_contribution: f64,
}

impl DiscordBreakdown {
    pub fn value(&self) -> f64 {
        self.direct
    }

    /// Largest pairwise disagreement between the three routes.
    pub fn spread(&self) -> f64 {
        let r = [self.direct, self.by_subtraction, self.by_sum_formula];
        let max = r.iter().copied().fold(f64::MIN, f64::max);
        let min = r.iter().copied().fold(f64::MAX, f64::min);
        max - min
    }
}

fn clamp_discord(v: f64) -> f64 {
    if v < 0.0 && v >= -DISCORD_CLAMP {
        0.0
    } else {
        v
    }
}

/// Discord of `A` relative to `B` with the default zero tolerance and zero fill.
pub fn discord_norm_sq(a: &ComplexMatrix, spectral: &SpectralDecomposition, psi: &PureState) -> Result<DiscordBreakdown> {
    let wvd = weak_value_function(a, spectral, psi, None, ZERO_TOL)?;
    discord_from(a, &wvd, psi)
}

/// Discord for already evaluated weak values.
pub fn discord_from(a: &ComplexMatrix, wvd: &WeakValueData<'_>, psi: &PureState) -> Result<DiscordBreakdown> {
    let residual = a - wvd.operator();
    let direct = op_norm_sq(&residual, psi)?;
    let by_subtraction = op_norm_sq(a, psi)? - op_norm_sq(wvd.operator(), psi)?;

    let a_psi = a.apply(psi.amplitudes());
    let mut zero_part = 0.0;
    let mut degenerate_part = 0.0;
    let spectral = wvd.spectral();
    for (i, proj) in spectral.projectors().iter().enumerate() {
        let pi_a_psi = proj.apply(&a_psi);
        if wvd.fill_mask()[i] {
            // <A Pi_i A> = ||Pi_i A psi||^2
            zero_part += vnorm_sqr(&pi_a_psi);
        } else if spectral.multiplicities()[i] > 1 {
            // <A Pi_i^perp A> with Pi_i^perp = Pi_i - |Pi_i psi><Pi_i psi| / <Pi_i>
            let pi_psi = proj.apply(psi.amplitudes());
            let overlap = vdot(&pi_psi, &a_psi);
            degenerate_part += vnorm_sqr(&pi_a_psi) - overlap.norm_sqr() / wvd.projector_expectations()[i];
        }
    }
    let zero_part = clamp_discord(zero_part);
    let degenerate_part = clamp_discord(degenerate_part);
    Ok(DiscordBreakdown {
        direct: clamp_discord(clamp_norm(direct)),
        by_subtraction: clamp_discord(by_subtraction),
        by_sum_formula: clamp_discord(zero_part + degenerate_part),
        zero_expectation_contribution: zero_part,
        degenerate_contribution: degenerate_part,
    })
}

/// `|(A, f(B)) - (A_w(B), f(B))|` for `f(B) = sum_i f_values[i] Pi_i`.
pub fn projection_identity_residual(
    a: &ComplexMatrix,
    spectral: &SpectralDecomposition,
    psi: &PureState,
    f_values: &[C64],
) -> Result<f64> {
    if f_values.len() != spectral.len() {
        return Err(Error::FillLengthMismatch {
            expected: spectral.len(),
            found: f_values.len(),
        });
    }
    let wvd = weak_value_function(a, spectral, psi, None, ZERO_TOL)?;
    let f = spectral.function(f_values);
    Ok((hs_inner(a, &f, psi)? - hs_inner(wvd.operator(), &f, psi)?).norm())
}
