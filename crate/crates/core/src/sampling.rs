//! Seeded random instances: Hermitian matrices with standard-normal entries,
//! random states, observables with engineered spectra and states with
//! unpopulated eigenspaces.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, spectral_decomposition, ComplexMatrix, PureState, DEGENERACY_REL_TOL};

/// How the `B` observable and the state of a random instance are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DegeneracyMode {
    #[serde(rename = "none")]
    None,
    /// `B` has a repeated eigenvalue.
    #[serde(rename = "degenerate_B")]
    DegenerateB,
    /// `psi` has no weight in one eigenspace of `B`.
    #[serde(rename = "orthogonal_psi")]
    OrthogonalPsi,
}

impl DegeneracyMode {
    pub const ALL: [DegeneracyMode; 3] = [DegeneracyMode::None, DegeneracyMode::DegenerateB, DegeneracyMode::OrthogonalPsi];

    pub fn name(&self) -> &'static str {
        match self {
            DegeneracyMode::None => "none",
            DegeneracyMode::DegenerateB => "degenerate_B",
            DegeneracyMode::OrthogonalPsi => "orthogonal_psi",
        }
    }

    fn tag(&self) -> u64 {
        match self {
            DegeneracyMode::None => 0,
            DegeneracyMode::DegenerateB => 1,
            DegeneracyMode::OrthogonalPsi => 2,
        }
    }
}

impl fmt::Display for DegeneracyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DegeneracyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DegeneracyMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown degeneracy mode '{s}' (expected none, degenerate_B or orthogonal_psi)")))
    }
}

/// Independent stream for instance `index` of a `(dim, mode)` batch, so any
/// single instance can be regenerated from `(seed, dim, mode, index)`.
pub fn instance_rng(seed: u64, dim: usize, mode: DegeneracyMode, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 40) | (mode.tag() << 32) | (index & 0xffff_ffff));
    rng
}

fn normal_c64(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `(M + M†)/2` with independent standard-normal real and imaginary parts.
pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(dim, |_, _| normal_c64(rng));
    (&m + &m.adjoint()).scale(C64::new(0.5, 0.0))
}

/// Normalized complex vector with standard-normal components.
pub fn random_state(rng: &mut impl Rng, dim: usize) -> PureState {
    loop {
        if let Ok(psi) = PureState::new((0..dim).map(|_| normal_c64(rng)).collect()) {
            return psi;
        }
    }
}

/// Eigenvector matrix of a random Hermitian matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> Result<ComplexMatrix> {
    Ok(eig_hermitian(&random_hermitian(rng, dim))?.vectors)
}

/// `U diag(values) U†` for a random unitary `U`.
pub fn conjugated_diagonal(rng: &mut impl Rng, values: &[f64]) -> Result<ComplexMatrix> {
    let u = random_unitary(rng, values.len())?;
    let m = &(&u * &ComplexMatrix::diag(values)) * &u.adjoint();
    // restore exact Hermiticity lost to rounding
    Ok((&m + &m.adjoint()).scale(C64::new(0.5, 0.0)))
}

/// Observable with at least one eigenvalue of multiplicity `>= 2` (requires
/// `dim >= 2`); the multiplicity is drawn from `2..=dim-1` when `dim >= 3`.
pub fn degenerate_b(rng: &mut impl Rng, dim: usize) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::InvalidParameter("a degenerate observable needs dim >= 2".to_string()));
    }
    let repeat = if dim >= 3 { rng.random_range(2..dim) } else { 2 };
    let shared: f64 = rng.sample(StandardNormal);
    let values: Vec<f64> = (0..dim)
        .map(|k| if k < repeat { shared } else { rng.sample(StandardNormal) })
        .collect();
    conjugated_diagonal(rng, &values)
}

/// Observable with exactly two distinct eigenvalues, split `k : dim-k` with
/// `k` drawn uniformly from `1..dim`.
pub fn two_eigenvalue_b(rng: &mut impl Rng, dim: usize) -> Result<ComplexMatrix> {
    if dim < 2 {
        return Err(Error::InvalidParameter("two distinct eigenvalues need dim >= 2".to_string()));
    }
    let k = rng.random_range(1..dim);
    let b1: f64 = rng.sample(StandardNormal);
    let b2 = b1 + 0.5 + rng.random::<f64>() * 2.0;
    let values: Vec<f64> = (0..dim).map(|i| if i < k { b1 } else { b2 }).collect();
    conjugated_diagonal(rng, &values)
}

/// `psi` with the component in one randomly chosen eigenspace of `b` removed.
/// Returns the index of that eigenspace within the spectral decomposition.
pub fn orthogonal_psi(rng: &mut impl Rng, b: &ComplexMatrix, psi: &PureState) -> Result<(PureState, usize)> {
    let spec = spectral_decomposition(b, DEGENERACY_REL_TOL)?;
    if spec.len() < 2 {
        return Err(Error::InvalidParameter(
            "removing an eigenspace needs at least two distinct eigenvalues".to_string(),
        ));
    }
    let mut order: Vec<usize> = (0..spec.len()).collect();
    order.shuffle(rng);
    for j in order {
        let removed = spec.projectors()[j].apply(psi.amplitudes());
        let rest: Vec<C64> = psi.amplitudes().iter().zip(&removed).map(|(p, r)| p - r).collect();
        // psi may lie (almost) entirely inside the chosen eigenspace
        if rest.iter().map(|a| a.norm_sqr()).sum::<f64>() > 1e-8 {
            return Ok((PureState::new(rest)?, j));
        }
    }
    Err(Error::ZeroState)
}

#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub psi: PureState,
    pub dim: usize,
    pub mode: DegeneracyMode,
    pub index: u64,
}

/// Instance `index` of the `(seed, dim, mode)` batch.
///
/// `OrthogonalPsi` alternates between a generic and (for `dim >= 3`) a
/// degenerate `B` on even and odd indices.
pub fn random_instance(seed: u64, dim: usize, mode: DegeneracyMode, index: u64) -> Result<RandomInstance> {
    if dim == 0 {
        return Err(Error::Empty);
    }
    let mut rng = instance_rng(seed, dim, mode, index);
    let a = random_hermitian(&mut rng, dim);
    let (b, psi) = match mode {
        DegeneracyMode::None => (random_hermitian(&mut rng, dim), random_state(&mut rng, dim)),
        DegeneracyMode::DegenerateB => (degenerate_b(&mut rng, dim)?, random_state(&mut rng, dim)),
        DegeneracyMode::OrthogonalPsi => {
            let b = if index % 2 == 1 && dim >= 3 {
                degenerate_b(&mut rng, dim)?
            } else {
                random_hermitian(&mut rng, dim)
            };
            let psi = random_state(&mut rng, dim);
            if dim < 2 {
                (b, psi)
            } else {
                let (psi, _) = orthogonal_psi(&mut rng, &b, &psi)?;
                (b, psi)
            }
        }
    };
    Ok(RandomInstance {
        a,
        b,
        psi,
        dim,
        mode,
        index,
    })
}
