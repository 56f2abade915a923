//! Position-momentum uncertainty on a uniform grid: the quadratic-phase
//! Gaussian family, the phase/modulus equality conditions, the discord of
//! `p` relative to `x`, and the Schrödinger check by quadrature.
//!
//! Derivatives are centred finite differences with zero (Dirichlet) ghost
//! points outside the grid; integrals use the trapezoid rule.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Grid points with `|psi|` below this fraction of `max |psi|` are skipped by
/// the condition residuals.
pub const AMPLITUDE_FLOOR: f64 = 1e-8;
/// Default zero-set threshold for [`discord_p_given_x`], relative to `max |psi|`.
pub const ZERO_SET_TOL: f64 = 1e-10;
/// Default bound on the relative change of `var_x var_p` between the grid and
/// its every-other-point subgrid.
pub const CONVERGENCE_TOL: f64 = 1e-3;
pub const MIN_POINTS: usize = 16;
pub const DEFAULT_POINTS: usize = 2048;
/// Half-width of the default grid in units of the Gaussian width `σ`.
pub const DEFAULT_HALF_WIDTH: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < MIN_POINTS {
            return Err(Error::InvalidParameter(format!("n_points must be at least {MIN_POINTS}, got {n_points}")));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidParameter(format!("grid bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]")));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx()
    }
}

/// A wave function sampled on a uniform grid, normalized by the trapezoid rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWaveFunction {
    grid: GridSpec,
    values: Vec<C64>,
    hbar: f64,
}

impl GridWaveFunction {
    pub fn new(grid: GridSpec, values: Vec<C64>, hbar: f64) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::DimensionMismatch {
                expected: grid.n_points,
                found: values.len(),
            });
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        if let Some(k) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        let norm_sq = trapezoid(grid.dx(), values.iter().map(|v| v.norm_sqr()));
        if !(norm_sq > 0.0) {
            return Err(Error::ZeroState);
        }
        let scale = norm_sq.sqrt().recip();
        let values = values.into_iter().map(|v| v * scale).collect();
        Ok(Self { grid, values, hbar })
    }

    pub fn from_fn(grid: GridSpec, hbar: f64, f: impl Fn(f64) -> C64) -> Result<Self> {
        let values = (0..grid.n_points).map(|k| f(grid.x(k))).collect();
        Self::new(grid, values, hbar)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn x_min(&self) -> f64 {
        self.grid.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.grid.x_max
    }

    pub fn n_points(&self) -> usize {
        self.grid.n_points
    }

    pub fn dx(&self) -> f64 {
        self.grid.dx()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn x(&self, k: usize) -> f64 {
        self.grid.x(k)
    }

    pub fn norm_sq(&self) -> f64 {
        trapezoid(self.dx(), self.values.iter().map(|v| v.norm_sqr()))
    }

    fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Every other grid point (the last point is dropped when it does not fit),
    /// renormalized; `None` when fewer than [`MIN_POINTS`] would remain.
    pub fn subsampled(&self) -> Option<GridWaveFunction> {
        let n = (self.n_points() + 1) / 2;
        if n < MIN_POINTS {
            return None;
        }
        let grid = GridSpec {
            x_min: self.grid.x_min,
            x_max: self.grid.x(2 * (n - 1)),
            n_points: n,
        };
        let values = self.values.iter().step_by(2).take(n).copied().collect();
        GridWaveFunction::new(grid, values, self.hbar).ok()
    }

    fn at(&self, k: isize) -> C64 {
        if k < 0 || k as usize >= self.values.len() {
            C64::new(0.0, 0.0)
        } else {
            self.values[k as usize]
        }
    }

    /// `psi'` by centred differences.
    pub fn derivative(&self) -> Vec<C64> {
        let h2 = 2.0 * self.dx();
        (0..self.n_points() as isize)
            .map(|k| (self.at(k + 1) - self.at(k - 1)) / h2)
            .collect()
    }
}

fn trapezoid(dx: f64, f: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = f.len();
    f.enumerate()
        .map(|(k, v)| if k == 0 || k + 1 == n { 0.5 * v } else { v })
        .sum::<f64>()
        * dx
}

/// Parameters of `C exp[i(λ(x-<x>)^2/2ħ + <p>x/ħ)] exp[-μ(x-<x>)^2/2ħ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianFamilyParams {
    pub lambda: f64,
    pub mu: f64,
    pub mean_x: f64,
    pub mean_p: f64,
}

impl GaussianFamilyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {}", self.mu)));
        }
        if !(self.lambda.is_finite() && self.mean_x.is_finite() && self.mean_p.is_finite()) {
            return Err(Error::InvalidParameter("lambda, mean_x and mean_p must be finite".to_string()));
        }
        Ok(())
    }

    /// `sqrt(ħ/2μ)`, the position spread of the state.
    pub fn sigma(&self, hbar: f64) -> f64 {
        (hbar / (2.0 * self.mu)).sqrt()
    }

    /// `<x> ± 8σ` with [`DEFAULT_POINTS`] points.
    pub fn default_grid(&self, hbar: f64) -> Result<GridSpec> {
        self.validate()?;
        let half = DEFAULT_HALF_WIDTH * self.sigma(hbar);
        GridSpec::new(self.mean_x - half, self.mean_x + half, DEFAULT_POINTS)
    }

    pub fn analytic_moments(&self, hbar: f64) -> GridMoments {
        let var_x = hbar / (2.0 * self.mu);
        GridMoments {
            mean_x: self.mean_x,
            mean_p: self.mean_p,
            var_x,
            var_p: (self.lambda * self.lambda + self.mu * self.mu) * var_x,
            covariance: self.lambda * var_x,
        }
    }
}

pub fn gaussian_mus(params: GaussianFamilyParams, grid: GridSpec, hbar: f64) -> Result<GridWaveFunction> {
    params.validate()?;
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    let half = DEFAULT_HALF_WIDTH * params.sigma(hbar);
    let (required_min, required_max) = (params.mean_x - half, params.mean_x + half);
    let slack = 1e-12 * half.max(params.mean_x.abs());
    if grid.x_min > required_min + slack || grid.x_max < required_max - slack {
        return Err(Error::GridTooNarrow {
            x_min: grid.x_min,
            x_max: grid.x_max,
            required_min,
            required_max,
        });
    }
    let GaussianFamilyParams {
        lambda,
        mu,
        mean_x,
        mean_p,
    } = params;
    GridWaveFunction::from_fn(grid, hbar, |x| {
        let d = x - mean_x;
        let phase = (lambda * d * d / 2.0 + mean_p * x) / hbar;
        C64::from_polar((-mu * d * d / (2.0 * hbar)).exp(), phase)
    })
}

/// Centred differences of `log psi`, split into the phase slope
/// `arg(psi_{k+1} conj(psi_{k-1})) / 2h` and the log-modulus slope
/// `ln(|psi_{k+1}|/|psi_{k-1}|) / 2h`, i.e. `Im(psi'/psi)` and `Re(psi'/psi)`.
/// Both are exact for quadratic exponents. `None` at the end points and where
/// any of the three stencil amplitudes is below [`AMPLITUDE_FLOOR`].
fn log_slopes(psi: &GridWaveFunction) -> Vec<Option<(f64, f64)>> {
    let v = psi.values();
    let floor = AMPLITUDE_FLOOR * psi.max_abs();
    let h2 = 2.0 * psi.dx();
    (0..v.len())
        .map(|k| {
            if k == 0 || k + 1 == v.len() {
                return None;
            }
            let (l, c, r) = (v[k - 1], v[k], v[k + 1]);
            if l.norm() <= floor || c.norm() <= floor || r.norm() <= floor {
                return None;
            }
            Some(((r * l.conj()).arg() / h2, (r.norm() / l.norm()).ln() / h2))
        })
        .collect()
}

/// `Im(psi'/psi)` on admissible points.
pub fn phase_gradient(psi: &GridWaveFunction) -> Vec<Option<f64>> {
    log_slopes(psi).into_iter().map(|s| s.map(|(p, _)| p)).collect()
}

/// `Re(psi'/psi)` on admissible points.
pub fn log_modulus_gradient(psi: &GridWaveFunction) -> Vec<Option<f64>> {
    log_slopes(psi).into_iter().map(|s| s.map(|(_, m)| m)).collect()
}

fn max_residual(psi: &GridWaveFunction, slopes: Vec<Option<f64>>, target: impl Fn(f64) -> f64) -> f64 {
    slopes
        .into_iter()
        .enumerate()
        .filter_map(|(k, s)| s.map(|s| (s - target(psi.x(k))).abs()))
        .fold(0.0, f64::max)
}

/// `max |Im(psi'/psi) - (λ(x - <x>) + <p>)/ħ|` over admissible points.
pub fn phase_condition_residual(psi: &GridWaveFunction, lambda: f64, mean_x: f64, mean_p: f64) -> f64 {
    let hbar = psi.hbar();
    max_residual(psi, phase_gradient(psi), |x| (lambda * (x - mean_x) + mean_p) / hbar)
}

/// `max |Re(psi'/psi) + μ(x - <x>)/ħ|` over admissible points.
pub fn modulus_condition_residual(psi: &GridWaveFunction, mu: f64, mean_x: f64) -> f64 {
    let hbar = psi.hbar();
    max_residual(psi, log_modulus_gradient(psi), |x| -mu * (x - mean_x) / hbar)
}

/// `ħ^2 ∫_{psi = 0} |psi'|^2 dx`, the squared distance between `p` and its
/// weak-value operator relative to `x`.
///
/// The zero set is the union of grid cells whose two end points both satisfy
/// `|psi| < zero_tol * max |psi|`; an isolated node has no extent and adds
/// nothing.
pub fn discord_p_given_x(psi: &GridWaveFunction, zero_tol: f64) -> f64 {
    let floor = zero_tol * psi.max_abs();
    let d = psi.derivative();
    let v = psi.values();
    let sum: f64 = (0..v.len() - 1)
        .filter(|&k| v[k].norm() < floor && v[k + 1].norm() < floor)
        .map(|k| 0.5 * (d[k].norm_sqr() + d[k + 1].norm_sqr()))
        .fold(0.0, |acc, v| acc + v);
    psi.hbar() * psi.hbar() * sum * psi.dx()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// `<{x,p}>/2 - <x><p>`
    pub covariance: f64,
}

/// Position and momentum moments: `p psi = -iħ psi'` by centred differences,
/// `p^2 psi = -ħ^2 psi''` by the three-point second difference.
pub fn moments(psi: &GridWaveFunction) -> GridMoments {
    let v = psi.values();
    let (h, hbar) = (psi.dx(), psi.hbar());
    let n = v.len();
    let xs: Vec<f64> = (0..n).map(|k| psi.x(k)).collect();
    let p_psi: Vec<C64> = psi.derivative().into_iter().map(|d| d * C64::new(0.0, -hbar)).collect();
    let p2_psi: Vec<C64> = (0..n as isize)
        .map(|k| (psi.at(k + 1) - psi.at(k) * 2.0 + psi.at(k - 1)) * (-hbar * hbar / (h * h)))
        .collect();

    let integrate = |f: &dyn Fn(usize) -> f64| trapezoid(h, (0..n).map(f));
    let mean_x = integrate(&|k| v[k].norm_sqr() * xs[k]);
    let x2 = integrate(&|k| v[k].norm_sqr() * xs[k] * xs[k]);
    let mean_p = integrate(&|k| (v[k].conj() * p_psi[k]).re);
    let p2 = integrate(&|k| (v[k].conj() * p2_psi[k]).re);
    // <{x,p}>/2 = Re <x p>
    let xp = integrate(&|k| (v[k].conj() * p_psi[k]).re * xs[k]);

    GridMoments {
        mean_x,
        mean_p,
        var_x: (x2 - mean_x * mean_x).max(0.0),
        var_p: (p2 - mean_p * mean_p).max(0.0),
        covariance: xp - mean_x * mean_p,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuousCheck {
    /// `var_x var_p`
    pub lhs: f64,
    /// `(ħ/2)^2 + covariance^2`
    pub rhs: f64,
    pub gap: f64,
    pub commutator_term: f64,
    pub covariance_term: f64,
    pub moments: GridMoments,
    /// `|lhs - lhs_subgrid| / lhs`
    pub relative_change: f64,
}

/// Schrödinger inequality for `(p, x)` with the default convergence tolerance.
pub fn schrodinger_check_continuous(psi: &GridWaveFunction) -> Result<ContinuousCheck> {
    schrodinger_check_continuous_with(psi, CONVERGENCE_TOL)
}

/// As [`schrodinger_check_continuous`]; fails with `NotConverged` when the
/// variance product on the every-other-point subgrid differs by more than
/// `tolerance` (relative).
pub fn schrodinger_check_continuous_with(psi: &GridWaveFunction, tolerance: f64) -> Result<ContinuousCheck> {
    let m = moments(psi);
    let lhs = m.var_x * m.var_p;
    let coarse = psi.subsampled().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "need at least {} points to check grid convergence",
            2 * MIN_POINTS - 1
        ))
    })?;
    let mc = moments(&coarse);
    let relative_change = ((mc.var_x * mc.var_p - lhs) / lhs).abs();
    if !(relative_change <= tolerance) {
        return Err(Error::NotConverged {
            relative_change,
            tolerance,
        });
    }
    let commutator_term = (psi.hbar() / 2.0).powi(2);
    let covariance_term = m.covariance * m.covariance;
    let rhs = commutator_term + covariance_term;
    Ok(ContinuousCheck {
        lhs,
        rhs,
        gap: lhs - rhs,
        commutator_term,
        covariance_term,
        moments: m,
        relative_change,
    })
}
