//! The spin-1 and spin-3/2 examples: exact instances, closed-form
//! expressions for the spin-1 bound terms, and the parameter sweeps.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::bounds::{ObservablePair, UncertaintyReport};
use crate::error::{Error, Result};
use crate::linalg::{op_norm_sq, pauli, ComplexMatrix, PureState};
use crate::weakvalue::ZERO_TOL;

/// Unnormalized spin-1 amplitudes `(x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spin1Params {
    pub x: C64,
    pub y: C64,
    pub z: C64,
}

impl Spin1Params {
    pub fn new(x: C64, y: C64, z: C64) -> Self {
        Self { x, y, z }
    }

    pub fn real(x: f64, y: f64, z: f64) -> Self {
        Self::new(C64::new(x, 0.0), C64::new(y, 0.0), C64::new(z, 0.0))
    }

    /// `|x|^2 + |y|^2 + |z|^2`
    pub fn n(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr() + self.z.norm_sqr()
    }

    /// `arg(x) - arg(y)`
    pub fn theta(&self) -> f64 {
        self.x.arg() - self.y.arg()
    }

    /// `2|x||y| cos θ`
    pub fn c(&self) -> f64 {
        2.0 * (self.x * self.y.conj()).re
    }

    /// `2|x||y| sin θ`
    pub fn s(&self) -> f64 {
        2.0 * (self.x * self.y.conj()).im
    }
}

/// `t` of the spin-3/2 state `(1, 0, 1, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spin32Params {
    pub t: f64,
}

impl Spin32Params {
    pub fn n_prime(&self) -> f64 {
        2.0 + self.t * self.t
    }
}

/// `A = σ1 ⊕ 1`, `B = σ2 ⊕ 1`.
pub fn spin1_observables() -> (ComplexMatrix, ComplexMatrix) {
    let one = ComplexMatrix::identity(1);
    (
        ComplexMatrix::block_diag(&pauli::sigma1(), &one),
        ComplexMatrix::block_diag(&pauli::sigma2(), &one),
    )
}

pub fn spin1_instance(p: Spin1Params) -> Result<(ComplexMatrix, ComplexMatrix, PureState)> {
    if !(p.n() > 0.0) {
        return Err(Error::ZeroState);
    }
    let (a, b) = spin1_observables();
    Ok((a, b, PureState::new(vec![p.x, p.y, p.z])?))
}

/// `A = σ1 ⊕ diag(1, -1)`, `B = σ2 ⊕ diag(1, 0)`.
pub fn spin32_observables() -> (ComplexMatrix, ComplexMatrix) {
    (
        ComplexMatrix::block_diag(&pauli::sigma1(), &ComplexMatrix::diag(&[1.0, -1.0])),
        ComplexMatrix::block_diag(&pauli::sigma2(), &ComplexMatrix::diag(&[1.0, 0.0])),
    )
}

pub fn spin32_instance(p: Spin32Params) -> Result<(ComplexMatrix, ComplexMatrix, PureState)> {
    if !p.t.is_finite() {
        return Err(Error::InvalidParameter(format!("t must be finite, got {}", p.t)));
    }
    let (a, b) = spin32_observables();
    Ok((a, b, PureState::from_real(&[1.0, 0.0, 1.0, p.t])?))
}

/// The spin-1 bound terms, either from the closed forms or from the generic
/// pipeline, in a shape that can be compared field by field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spin1Terms {
    pub var_a: f64,
    pub var_b: f64,
    pub cov_term: f64,
    pub comm_term: f64,
    pub wvop_norm_sq: f64,
    pub discord: f64,
}

impl Spin1Terms {
    pub fn to_array(&self) -> [f64; 6] {
        [self.var_a, self.var_b, self.cov_term, self.comm_term, self.wvop_norm_sq, self.discord]
    }

    pub fn max_abs_diff(&self, other: &Spin1Terms) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn extra_e_ab(&self) -> f64 {
        self.discord * self.var_b
    }
}

/// Populations `(<Π_1>, <Π_2>)` of the `B` eigenspaces for `b = -1, +1`.
fn spin1_populations(p: &Spin1Params) -> (f64, f64) {
    let n = p.n();
    let z2 = p.z.norm_sqr();
    let s = p.s();
    ((n - z2 + s) / (2.0 * n), (n + z2 - s) / (2.0 * n))
}

/// Closed forms for the variances, covariance and commutator terms, the
/// weak-value operator norm and the discord.
///
/// When an eigenspace of `B` is unpopulated (`<Π_i>` at or below the
/// weak-value zero tolerance) the generic formula has a `0/0`; the surviving
/// single-projector term is used instead, matching the masked numeric branch.
pub fn spin1_closed_forms(p: Spin1Params) -> Spin1Terms {
    let n = p.n();
    let n2 = n * n;
    let (ax2, ay2, z2) = (p.x.norm_sqr(), p.y.norm_sqr(), p.z.norm_sqr());
    let (c, s) = (p.c(), p.s());

    let var_a = (n2 - (z2 + c).powi(2)) / n2;
    let var_b = (n2 - (z2 - s).powi(2)) / n2;
    let cov_term = ((z2 * n - (z2 + c) * (z2 - s)) / n2).powi(2);
    let comm_term = ((ax2 - ay2) / n).powi(2);

    let (pop1, pop2) = spin1_populations(&p);
    let (wvop_norm_sq, discord) = if pop2 <= ZERO_TOL {
        let w = C64::new(c, ax2 - ay2).norm_sqr() / (2.0 * n * (n - z2 + s));
        (w, 1.0 - w)
    } else if pop1 <= ZERO_TOL {
        let w = C64::new(c + 2.0 * z2, -(ax2 - ay2)).norm_sqr() / (2.0 * n * (n + z2 - s));
        (w, 1.0 - w)
    } else {
        (
            (n * (n - z2 - s) + 2.0 * z2 * (z2 + c)) / (n * (n + z2 - s)),
            (2.0 * z2 / n) * (n - z2 - c) / (n + z2 - s),
        )
    };

    Spin1Terms {
        var_a,
        var_b,
        cov_term,
        comm_term,
        wvop_norm_sq,
        discord,
    }
}

/// Both algebraic routes to the spin-1 extra term `E(A,B)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spin1Extra {
    /// discord × `var_B`, the defining product.
    pub product_route: f64,
    /// `(2|z|^2/N^3)(N - |z|^2 - c)(N - |z|^2 + s)`
    pub display_form: f64,
}

impl Spin1Extra {
    pub fn discrepancy(&self) -> f64 {
        (self.product_route - self.display_form).abs()
    }
}

pub fn spin1_extra_closed_form(p: Spin1Params) -> Spin1Extra {
    let n = p.n();
    let z2 = p.z.norm_sqr();
    Spin1Extra {
        product_route: spin1_closed_forms(p).extra_e_ab(),
        display_form: 2.0 * z2 / n.powi(3) * (n - z2 - p.c()) * (n - z2 + p.s()),
    }
}

/// `1 - [(|z|^2+c)^2 + (|z|^2-s)^2]/N^2 + (|z|^2+c)^2 (|z|^2-s)^2/N^4`, the
/// closed-form sum of the three lower-bound terms.
pub fn spin1_balance(p: Spin1Params) -> f64 {
    let n2 = p.n().powi(2);
    let u = (p.z.norm_sqr() + p.c()).powi(2);
    let v = (p.z.norm_sqr() - p.s()).powi(2);
    1.0 - (u + v) / n2 + u * v / (n2 * n2)
}

/// The same six terms computed by the generic pipeline.
pub fn spin1_numeric_terms(pair: &ObservablePair, psi: &PureState) -> Result<(Spin1Terms, UncertaintyReport)> {
    let report = pair.report(psi)?;
    let wvop_norm_sq = op_norm_sq(pair.weak_values(psi)?.operator(), psi)?;
    Ok((
        Spin1Terms {
            var_a: report.var_a,
            var_b: report.var_b,
            cov_term: report.covariance_term,
            comm_term: report.commutator_term,
            wvop_norm_sq,
            discord: report.discord_ab,
        },
        report,
    ))
}

/// Points of the `N = 1` octant sphere: `|z| = cos α`, `|x| = sin α cos φ`,
/// `|y| = sin α sin φ`, with `α, φ` uniform on `[0, π/2]`, `x = |x| e^{iθ}`.
/// Ordered with `α` outermost.
pub fn spin1_grid(res: usize, theta: f64) -> Result<Vec<Spin1Params>> {
    if res < 2 {
        return Err(Error::InvalidParameter(format!("resolution must be at least 2, got {res}")));
    }
    let step = FRAC_PI_2 / (res - 1) as f64;
    let phase = C64::from_polar(1.0, theta);
    let mut out = Vec::with_capacity(res * res);
    for i in 0..res {
        let (sa, ca) = (i as f64 * step).sin_cos();
        for j in 0..res {
            let (sp, cp) = (j as f64 * step).sin_cos();
            out.push(Spin1Params::new(phase * (sa * cp), C64::new(sa * sp, 0.0), C64::new(ca, 0.0)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spin1Row {
    pub abs_x: f64,
    pub abs_y: f64,
    pub abs_z: f64,
    pub e_ab_closed: f64,
    pub e_ab_numeric: f64,
    pub lhs: f64,
    pub schrodinger_rhs: f64,
    pub tight_rhs: f64,
}

impl Spin1Row {
    pub const HEADER: [&'static str; 8] = [
        "abs_x",
        "abs_y",
        "abs_z",
        "e_ab_closed",
        "e_ab_numeric",
        "lhs",
        "schrodinger_rhs",
        "tight_rhs",
    ];

    pub fn to_array(&self) -> [f64; 8] {
        [
            self.abs_x,
            self.abs_y,
            self.abs_z,
            self.e_ab_closed,
            self.e_ab_numeric,
            self.lhs,
            self.schrodinger_rhs,
            self.tight_rhs,
        ]
    }
}

/// One row per grid point of [`spin1_grid`], in grid order.
pub fn sweep_spin1(res: usize, theta: f64) -> Result<Vec<Spin1Row>> {
    let (a, b) = spin1_observables();
    let pair = ObservablePair::new(a, b)?;
    spin1_grid(res, theta)?
        .into_iter()
        .map(|p| {
            let psi = PureState::new(vec![p.x, p.y, p.z])?;
            let r = pair.report(&psi)?;
            Ok(Spin1Row {
                abs_x: p.x.norm(),
                abs_y: p.y.norm(),
                abs_z: p.z.norm(),
                e_ab_closed: spin1_extra_closed_form(p).product_route,
                e_ab_numeric: r.extra_e_ab,
                lhs: r.lhs,
                schrodinger_rhs: r.schrodinger_rhs,
                tight_rhs: r.tight_rhs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spin32Row {
    pub t: f64,
    pub lhs: f64,
    pub schrodinger_rhs: f64,
    pub plus_e_tilde: f64,
    pub plus_e_ab: f64,
    pub plus_e_ba: f64,
    pub plus_e_max: f64,
}

impl Spin32Row {
    pub const HEADER: [&'static str; 7] = [
        "t",
        "lhs",
        "schrodinger_rhs",
        "plus_e_tilde",
        "plus_e_ab",
        "plus_e_ba",
        "plus_e_max",
    ];

    pub fn to_array(&self) -> [f64; 7] {
        [
            self.t,
            self.lhs,
            self.schrodinger_rhs,
            self.plus_e_tilde,
            self.plus_e_ab,
            self.plus_e_ba,
            self.plus_e_max,
        ]
    }
}

/// `steps` evenly spaced values of `t` from `t_min` to `t_max` inclusive.
pub fn sweep_spin32(t_min: f64, t_max: f64, steps: usize) -> Result<Vec<Spin32Row>> {
    if steps < 2 {
        return Err(Error::InvalidParameter(format!("steps must be at least 2, got {steps}")));
    }
    if !(t_min.is_finite() && t_max.is_finite()) {
        return Err(Error::InvalidParameter("t range must be finite".to_string()));
    }
    let (a, b) = spin32_observables();
    let pair = ObservablePair::new(a, b)?;
    (0..steps)
        .map(|k| {
            let t = t_min + (t_max - t_min) * k as f64 / (steps - 1) as f64;
            let (_, _, psi) = spin32_instance(Spin32Params { t })?;
            let r = pair.report(&psi)?;
            let rhs = r.schrodinger_rhs;
            Ok(Spin32Row {
                t,
                lhs: r.lhs,
                schrodinger_rhs: rhs,
                plus_e_tilde: rhs + r.extra_e_tilde,
                plus_e_ab: rhs + r.extra_e_ab,
                plus_e_ba: rhs + r.extra_e_ba,
                plus_e_max: rhs + r.extra_e_max,
            })
        })
        .collect()
}
