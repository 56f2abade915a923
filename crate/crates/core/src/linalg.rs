//! Dense complex matrices, pure states, the complex Jacobi eigensolver and
//! the state-dependent operator inner product `(X, Y) = <psi| X^dagger Y |psi>`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance of the Hermiticity check on solver and report inputs.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Default relative gap below which neighbouring eigenvalues are merged.
pub const DEGENERACY_REL_TOL: f64 = 1e-9;
/// Cap on full cyclic Jacobi sweeps.
pub const MAX_JACOBI_SWEEPS: usize = 100;
/// Negative rounding of squared norms down to this value is clamped to zero.
pub const NORM_CLAMP: f64 = 1e-14;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from rows, validating shape and finiteness.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Empty);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    row: i,
                    len: row.len(),
                });
            }
            for (j, z) in row.into_iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                data.push(z);
            }
        }
        Ok(Self { dim, data })
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// Block-diagonal matrix `diag(upper, lower)`.
    pub fn block_diag(upper: &ComplexMatrix, lower: &ComplexMatrix) -> Self {
        let n = upper.dim;
        let mut m = Self::zeros(n + lower.dim);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = upper[(i, j)];
            }
        }
        for i in 0..lower.dim {
            for j in 0..lower.dim {
                m[(n + i, n + j)] = lower[(i, j)];
            }
        }
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of unequal lengths");
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.dim).map(<[C64]>::to_vec).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] += shift;
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise distance to another matrix of the same size.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |H_ij - conj(H_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermitian_deviation() <= rel_tol * self.max_abs().max(1.0)
    }

    /// Fails with `NonHermitianInput` unless the matrix is Hermitian within
    /// `rel_tol * max(1, max|H_ij|)`.
    pub fn check_hermitian(&self, rel_tol: f64) -> Result<()> {
        let deviation = self.hermitian_deviation();
        let tolerance = rel_tol * self.max_abs().max(1.0);
        if deviation > tolerance {
            return Err(Error::NonHermitianInput {
                deviation,
                tolerance,
            });
        }
        Ok(())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch in apply");
        self.data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn checked_same_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

// Operator impls panic on mismatched dimensions; the free functions below
// return `DimensionMismatch` instead.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in add");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sub");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in mul");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Normalized pure state vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Normalizes `amplitudes` to unit Euclidean norm.
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(i) = amplitudes
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.dim(),
            });
        }
        Ok(())
    }
}

/// `sum_k conj(u_k) v_k`.
pub fn vdot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `sum_k |u_k|^2`.
pub fn vnorm_sqr(u: &[C64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

/// Eigenvalues (ascending) and orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[(i, j)].norm_sqr();
        }
    }
    (2.0 * s).sqrt()
}

/// Cyclic complex Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation first removes the phase of the pivot `H_pq` with a diagonal
/// unitary and then applies the real symmetric Jacobi rotation, so the pivot
/// is annihilated exactly and the diagonal stays real.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigen> {
    h.check_hermitian(HERMITIAN_TOL)?;
    let n = h.dim();
    let mut a = ComplexMatrix::from_fn(n, |i, j| 0.5 * (h[(i, j)] + h[(j, i)].conj()));
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n == 1 || scale == 0.0;
    let mut sweep = 0;
    while !converged {
        if sweep == MAX_JACOBI_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps: MAX_JACOBI_SWEEPS,
            });
        }
        sweep += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let babs = b.norm();
                if babs == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Pivot negligible against both diagonal entries.
                if sweep > 4 && app + 100.0 * babs == app && aqq + 100.0 * babs == aqq {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * babs);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let t = 1.0 / (theta.abs() + (theta * theta + 1.0).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let phase = b / babs;
                let ph_conj = phase.conj();

                // A <- A U with U = diag(1, e^{-i phi}) [[c, s], [-s, c]].
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * ph_conj * s;
                    a[(k, q)] = akp * s + akq * ph_conj * c;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * ph_conj * s;
                    v[(k, q)] = vkp * s + vkq * ph_conj * c;
                }
                // A <- U^dagger A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c - aqk * phase * s;
                    a[(q, k)] = apk * s + aqk * phase * c;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(app - t * babs, 0.0);
                a[(q, q)] = C64::new(aqq + t * babs, 0.0);
            }
        }
        let off = off_diagonal_norm(&a);
        converged = off == 0.0 || off <= 1e-18 * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |row, col| v[(row, order[col])]);
    Ok(HermitianEigen { values, vectors })
}

/// Distinct eigenvalues `b_i` of a Hermitian observable with their orthogonal
/// eigenspace projectors `Pi_i`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
    multiplicities: Vec<usize>,
}

impl SpectralDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// `f(B) = sum_i f(b_i) Pi_i` from one complex value per distinct eigenvalue.
    pub fn function(&self, values: &[C64]) -> ComplexMatrix {
        assert_eq!(values.len(), self.len(), "one value per eigenvalue");
        let mut out = ComplexMatrix::zeros(self.dim());
        for (f, p) in values.iter().zip(&self.projectors) {
            if *f == ZERO {
                continue;
            }
            for (o, x) in out.data.iter_mut().zip(&p.data) {
                *o += f * x;
            }
        }
        out
    }

    /// `f(B)` for a real function of the eigenvalue.
    pub fn real_function(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let values: Vec<C64> = self
            .eigenvalues
            .iter()
            .map(|&b| C64::new(f(b), 0.0))
            .collect();
        self.function(&values)
    }

    /// `sum_i b_i Pi_i`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.real_function(|b| b)
    }
}

/// Groups an ascending spectrum into distinct eigenvalues.
///
/// Neighbours whose gap is at most `rel_tol * max(1, max|lambda|)` are chained
/// into one cluster; the cluster mean becomes the distinct eigenvalue and the
/// rank-one projectors of its eigenvectors are summed.
pub fn group_spectrum(
    eigenvalues: &[f64],
    eigenvectors: &ComplexMatrix,
    rel_tol: f64,
) -> SpectralDecomposition {
    assert_eq!(eigenvalues.len(), eigenvectors.dim());
    let radius = eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let gap_tol = rel_tol * radius.max(1.0);

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, &lam) in eigenvalues.iter().enumerate() {
        match clusters.last_mut() {
            Some(last) if lam - eigenvalues[*last.last().unwrap()] <= gap_tol => last.push(k),
            _ => clusters.push(vec![k]),
        }
    }

    let n = eigenvectors.dim();
    let mut out = SpectralDecomposition {
        eigenvalues: Vec::with_capacity(clusters.len()),
        projectors: Vec::with_capacity(clusters.len()),
        multiplicities: Vec::with_capacity(clusters.len()),
    };
    for cluster in clusters {
        let mean = cluster.iter().map(|&k| eigenvalues[k]).sum::<f64>() / cluster.len() as f64;
        let mut proj = ComplexMatrix::zeros(n);
        for &k in &cluster {
            let v = eigenvectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    proj[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        out.eigenvalues.push(mean);
        out.projectors.push(proj);
        out.multiplicities.push(cluster.len());
    }
    out
}

/// Eigendecomposition followed by spectral grouping.
pub fn spectral_decomposition(h: &ComplexMatrix, rel_tol: f64) -> Result<SpectralDecomposition> {
    let eig = eig_hermitian(h)?;
    Ok(group_spectrum(&eig.values, &eig.vectors, rel_tol))
}

/// `(X, Y) = <psi| X^dagger Y |psi>`, evaluated as `<X psi, Y psi>`.
///
/// Swapping the arguments conjugates the result bit-for-bit.
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix, psi: &PureState) -> Result<C64> {
    x.checked_same_dim(y)?;
    psi.check_dim(x.dim())?;
    let u = x.apply(psi.amplitudes());
    let v = y.apply(psi.amplitudes());
    Ok(vdot(&u, &v))
}

/// `||X||^2 = (X, X)`, clamped at zero.
pub fn op_norm_sq(x: &ComplexMatrix, psi: &PureState) -> Result<f64> {
    psi.check_dim(x.dim())?;
    Ok(clamp_norm(vnorm_sqr(&x.apply(psi.amplitudes()))))
}

pub(crate) fn clamp_norm(v: f64) -> f64 {
    if v < 0.0 && v >= -NORM_CLAMP {
        0.0
    } else {
        v
    }
}

/// `[A, B] = AB - BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.checked_same_dim(b)?;
    Ok(&(a * b) - &(b * a))
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.checked_same_dim(b)?;
    Ok(&(a * b) + &(b * a))
}

/// `<psi| X |psi>`.
pub fn expectation(x: &ComplexMatrix, psi: &PureState) -> Result<C64> {
    psi.check_dim(x.dim())?;
    Ok(vdot(psi.amplitudes(), &x.apply(psi.amplitudes())))
}

/// Pauli matrices, used by the models and throughout the tests.
pub mod pauli {
    use super::{ComplexMatrix, C64};

    pub fn sigma1() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| if i != j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn sigma2() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => C64::new(0.0, -1.0),
            (1, 0) => C64::new(0.0, 1.0),
            _ => C64::new(0.0, 0.0),
        })
    }

    pub fn sigma3() -> ComplexMatrix {
        ComplexMatrix::diag(&[1.0, -1.0])
    }
}
