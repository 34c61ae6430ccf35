//! Dense complex linear algebra for small matrices.
//!
//! Matrices are square and stored row-major. Sizes in this crate stay at or
//! below 16×16, so plain cubic algorithms are used throughout.

mod eig;
mod lu;

pub use eig::{eigenvalues, expm_i_herm, herm_eig, real_symmetric_eig, HermEig};
pub use lu::Lu;

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

pub type C64 = Complex<f64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

/// Numerical tolerances shared by all validation checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub unitarity: f64,
    pub reconstruction: f64,
    pub equality: f64,
}

pub const TOL: Tolerances = Tolerances {
    hermiticity: 1e-12,
    unitarity: 1e-12,
    reconstruction: 1e-10,
    equality: 1e-9,
};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "MatrixRows", into = "MatrixRows"))]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

/// Serialized form: rows of `[re, im]` pairs.
#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct MatrixRows(pub Vec<Vec<[f64; 2]>>);

#[cfg(feature = "serde")]
impl TryFrom<MatrixRows> for ComplexMatrix {
    type Error = Error;
    fn try_from(rows: MatrixRows) -> Result<Self> {
        let dim = rows.0.len();
        if let Some(bad) = rows.0.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Self::from_vec(dim, rows.0.iter().flatten().map(|&[re, im]| Complex::new(re, im)).collect())
    }
}

#[cfg(feature = "serde")]
impl From<ComplexMatrix> for MatrixRows {
    fn from(m: ComplexMatrix) -> Self {
        MatrixRows(m.data.chunks(m.dim.max(1)).map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect())
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
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

    /// Builds a matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<const N: usize>(rows: [[C64; N]; N]) -> Self {
        Self {
            dim: N,
            data: rows.iter().flat_map(|r| r.iter().copied()).collect(),
        }
    }

    pub fn from_real<const N: usize>(rows: [[f64; N]; N]) -> Self {
        Self {
            dim: N,
            data: rows
                .iter()
                .flat_map(|r| r.iter().map(|&x| C64::new(x, 0.0)))
                .collect(),
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn diag(entries: &[C64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn column(&self, j: usize) -> Ket {
        Ket((0..self.dim).map(|i| self[(i, j)]).collect())
    }

    pub fn from_columns(cols: &[Ket]) -> Result<Self> {
        let dim = cols.len();
        if let Some(bad) = cols.iter().find(|k| k.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(dim, |i, j| cols[j][i]))
    }

    pub fn apply(&self, v: &Ket) -> Result<Ket> {
        self.check_dim(v.len())?;
        Ok(Ket((0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()))
    }

    /// `self · rho · self†`.
    pub fn sandwich(&self, rho: &ComplexMatrix) -> Self {
        &(self * rho) * &self.adjoint()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn unitarity_error(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let e = self.hermiticity_error();
        if e > TOL.hermiticity * self.max_abs().max(1.0) {
            return Err(Error::NotHermitian(e));
        }
        Ok(())
    }

    pub fn ensure_unitary(&self) -> Result<()> {
        let e = self.unitarity_error();
        if e > TOL.unitarity {
            return Err(Error::NotUnitary(e));
        }
        Ok(())
    }

    /// `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn commutator(&self, other: &ComplexMatrix) -> Self {
        &(self * other) - &(other * self)
    }

    /// `Tr(A† B)`.
    pub fn inner(&self, other: &ComplexMatrix) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Rectangular block `rows × cols` starting at `(r0, c0)`, row-major.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Vec<C64> {
        let mut out = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                out.push(self[(r0 + i, c0 + j)]);
            }
        }
        out
    }

    pub fn sub_block(&self, r0: usize, c0: usize, n: usize) -> Self {
        Self {
            dim: n,
            data: self.block(r0, c0, n, n),
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out.data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// A column vector of amplitudes.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ket(pub Vec<C64>);

impl Ket {
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        Ket(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Ket(self.0.iter().map(|z| z / n).collect())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Ket) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Ket(self.0.iter().map(|z| z * s).collect())
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Ket) -> ComplexMatrix {
        assert_eq!(self.len(), other.len(), "dimension mismatch");
        ComplexMatrix::from_fn(self.len(), |i, j| self[i] * other[j].conj())
    }

    pub fn projector(&self) -> ComplexMatrix {
        self.outer(self)
    }

    pub fn kron(&self, other: &Ket) -> Ket {
        let mut v = Vec::with_capacity(self.len() * other.len());
        for a in &self.0 {
            for b in &other.0 {
                v.push(a * b);
            }
        }
        Ket(v)
    }

    /// Same ray with the first non-negligible amplitude made real and
    /// non-negative.
    pub fn canonical_phase(&self) -> Self {
        match self.0.iter().find(|z| z.norm() > 1e-12) {
            Some(z) => self.scale(C64::from_polar(1.0, -z.arg())),
            None => self.clone(),
        }
    }
}

impl Index<usize> for Ket {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Ket {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.0[i]
    }
}

/// Kronecker product `a ⊗ b`, with `a` the most significant factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    ComplexMatrix::from_fn(na * nb, |i, j| a[(i / nb, j / nb)] * b[(i % nb, j % nb)])
}

pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    factors
        .iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Traces out every subsystem except `keep`.
///
/// `dims` lists subsystem dimensions, most significant first.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: usize) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if total != m.dim || dims.is_empty() {
        return Err(Error::SubsystemMismatch {
            dims: dims.to_vec(),
            dim: m.dim,
        });
    }
    if keep >= dims.len() {
        return Err(Error::DimensionMismatch {
            expected: dims.len(),
            found: keep,
        });
    }
    let dk = dims[keep];
    let inner: usize = dims[keep + 1..].iter().product();
    let outer: usize = dims[..keep].iter().product();
    let mut out = ComplexMatrix::zeros(dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut s = ZERO;
            for o in 0..outer {
                for r in 0..inner {
                    let i = (o * dk + a) * inner + r;
                    let j = (o * dk + b) * inner + r;
                    s += m[(i, j)];
                }
            }
            out[(a, b)] = s;
        }
    }
    Ok(out)
}

/// `1 − |Tr(U†V)|/d`, zero exactly when `U = e^{iγ}V`.
pub fn phase_invariant_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    if u.dim != v.dim {
        return Err(Error::DimensionMismatch {
            expected: u.dim,
            found: v.dim,
        });
    }
    let overlap = u.inner(v).norm() / u.dim as f64;
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

/// Embeds a gate acting on `wires` (first listed most significant) into the
/// full register with subsystem dimensions `dims`.
pub fn embed(local: &ComplexMatrix, wires: &[usize], dims: &[usize]) -> Result<ComplexMatrix> {
    let local_dim: usize = wires.iter().map(|&w| dims[w]).product();
    if local_dim != local.dim {
        return Err(Error::DimensionMismatch {
            expected: local_dim,
            found: local.dim,
        });
    }
    let total: usize = dims.iter().product();
    let digits = |mut idx: usize| {
        let mut ds = vec![0usize; dims.len()];
        for w in (0..dims.len()).rev() {
            ds[w] = idx % dims[w];
            idx /= dims[w];
        }
        ds
    };
    let local_index = |ds: &[usize]| wires.iter().fold(0, |acc, &w| acc * dims[w] + ds[w]);
    let mut out = ComplexMatrix::zeros(total);
    for col in 0..total {
        let dc = digits(col);
        let lc = local_index(&dc);
        for lr in 0..local_dim {
            let a = local[(lr, lc)];
            if a == ZERO {
                continue;
            }
            let mut dr = dc.clone();
            let mut rem = lr;
            for &w in wires.iter().rev() {
                dr[w] = rem % dims[w];
                rem /= dims[w];
            }
            let row = dr.iter().zip(dims).fold(0, |acc, (&d, &n)| acc * n + d);
            out[(row, col)] += a;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(dim: usize, rng: &mut crate::rng::SplitMix64) -> ComplexMatrix {
    let s = core::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(dim, |_, _| C64::new(rng.normal() * s, rng.normal() * s))
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `R`'s
/// diagonal divided out.
pub fn haar_unitary(dim: usize, rng: &mut crate::rng::SplitMix64) -> ComplexMatrix {
    let g = ginibre(dim, rng);
    let mut cols: Vec<Ket> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for q in &cols {
            let proj = q.inner(&v);
            for (x, y) in v.0.iter_mut().zip(&q.0) {
                *x -= proj * y;
            }
        }
        // Gram–Schmidt yields R with positive real diagonal already.
        cols.push(v.normalized());
    }
    ComplexMatrix::from_columns(&cols).expect("square")
}

/// Random Hermitian matrix `(G + G†)/2`.
pub fn random_hermitian(dim: usize, rng: &mut crate::rng::SplitMix64) -> ComplexMatrix {
    ginibre(dim, rng).hermitian_part()
}
