use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::{cis, ComplexMatrix, Ket, C64, ONE, ZERO};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix.
///
/// `values` ascend; column `k` of `vectors` pairs with `values[k]`. Within a
/// degenerate group the eigenvectors are re-orthonormalized, each has its
/// first significant component made real and positive, and the group is
/// ordered lexicographically by the real parts of the components.
#[derive(Clone, Debug)]
pub struct HermEig {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.values.iter().map(|&x| C64::new(x, 0.0)).collect();
        let v = &self.vectors;
        &(v * &ComplexMatrix::diag(&d)) * &v.adjoint()
    }

    /// `V diag(values) V†` with replacement eigenvalues.
    pub fn map_values(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, |i, j| (0..n).map(|k| self.vectors[(i, k)] * self.vectors[(j, k)].conj() * values[k]).sum())
    }

    /// `V f(Λ) V†`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let d: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        let v = &self.vectors;
        &(v * &ComplexMatrix::diag(&d)) * &v.adjoint()
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first phase-aligns the pivot so it becomes real, then applies
/// an ordinary real Jacobi rotation.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEig> {
    h.ensure_hermitian()?;
    let n = h.dim();
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = f64::EPSILON * 0.1 * scale;

    let mut converged = n <= 1 || scale == 0.0;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }

    let mut pairs: Vec<(f64, Ket)> = (0..n).map(|k| (a[(k, k)].re, v.column(k))).collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    canonicalize_degenerate(&mut pairs, 1e-10 * scale.max(1.0));

    let values = pairs.iter().map(|p| p.0).collect();
    let cols: Vec<Ket> = pairs.into_iter().map(|p| p.1).collect();
    Ok(HermEig {
        values,
        vectors: ComplexMatrix::from_columns(&cols)?,
    })
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    // Phase of the pivot; conj(e) is applied to column q first.
    let e = apq / r;
    let ec = e.conj();
    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    // A ← A G with G = [[c, s], [−s ē, c ē]] on columns p, q.
    for k in 0..n {
        let (x, y) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = x * cs - y * ec * sn;
        a[(k, q)] = x * sn + y * ec * cs;
        let (x, y) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = x * cs - y * ec * sn;
        v[(k, q)] = x * sn + y * ec * cs;
    }
    // A ← G† A on rows p, q.
    for k in 0..n {
        let (x, y) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = x * cs - y * e * sn;
        a[(q, k)] = x * sn + y * e * cs;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

fn canonicalize_degenerate(pairs: &mut [(f64, Ket)], tie: f64) {
    for p in pairs.iter_mut() {
        p.1 = p.1.canonical_phase();
    }
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= tie {
            end += 1;
        }
        if end - start > 1 {
            let group = &mut pairs[start..end];
            let mut values: Vec<f64> = group.iter().map(|p| p.0).collect();
            // Modified Gram–Schmidt.
            for i in 0..group.len() {
                for j in 0..i {
                    let proj = group[j].1.inner(&group[i].1);
                    let vj = group[j].1.clone();
                    for (x, y) in group[i].1 .0.iter_mut().zip(&vj.0) {
                        *x -= proj * y;
                    }
                }
                group[i].1 = group[i].1.normalized().canonical_phase();
            }
            group.sort_by(|x, y| {
                x.1 .0
                    .iter()
                    .zip(&y.1 .0)
                    .map(|(a, b)| b.re.total_cmp(&a.re))
                    .find(|o| o.is_ne())
                    .unwrap_or(core::cmp::Ordering::Equal)
            });
            values.sort_by(f64::total_cmp);
            for (p, val) in group.iter_mut().zip(values) {
                p.0 = val;
            }
        }
        start = end;
    }
}

/// `exp(−iH)` for Hermitian `H`.
pub fn expm_i_herm(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(h)?;
    Ok(eig.map(|x| cis(-x)))
}

/// Eigen-decomposition of a real symmetric matrix stored as complex.
///
/// Returns ascending eigenvalues and a real orthogonal eigenvector matrix
/// (row-major) with determinant +1.
pub fn real_symmetric_eig(m: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if m.len() != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: m.len(),
        });
    }
    let cm = ComplexMatrix::from_fn(n, |i, j| C64::new(m[i * n + j], 0.0));
    let eig = herm_eig(&cm)?;
    let mut vecs: Vec<f64> = eig.vectors.as_slice().iter().map(|z| z.re).collect();
    if real_det(&vecs, n) < 0.0 {
        for i in 0..n {
            vecs[i * n] = -vecs[i * n];
        }
    }
    Ok((eig.values, vecs))
}

fn real_det(m: &[f64], n: usize) -> f64 {
    let cm = ComplexMatrix::from_fn(n, |i, j| C64::new(m[i * n + j], 0.0));
    super::Lu::new(&cm).map(|lu| lu.det().re).unwrap_or(0.0)
}

/// Eigenvalues of a general complex matrix.
///
/// Householder reduction to Hessenberg form followed by single-shift QR with
/// Wilkinson shifts and Givens rotations.
pub fn eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    let n = m.dim();
    let mut h = hessenberg(m);
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0usize;
    loop {
        if hi == 0 {
            out.push(h[(0, 0)]);
            break;
        }
        // Locate the top of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * diag.max(f64::EPSILON * scale) {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out.push(h[(hi, hi)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n {
            return Err(Error::NoConvergence);
        }
        let mu = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm(), 0.0) * 0.75
        } else {
            wilkinson_shift(&h, hi)
        };
        qr_step(&mut h, lo, hi, mu);
    }
    out.reverse();
    Ok(out)
}

fn wilkinson_shift(h: &ComplexMatrix, hi: usize) -> C64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr * 0.25 - det).sqrt();
    let l1 = tr * 0.5 + disc;
    let l2 = tr * 0.5 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn qr_step(h: &mut ComplexMatrix, lo: usize, hi: usize, mu: C64) {
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..=hi {
            let (x, y) = (h[(k, j)], h[(k + 1, j)]);
            h[(k, j)] = x * cs + sn * y;
            h[(k + 1, j)] = -sn.conj() * x + y * cs;
        }
        rots.push((cs, sn));
    }
    for (idx, &(cs, sn)) in rots.iter().enumerate() {
        let k = lo + idx;
        for i in lo..=(k + 1).min(hi) {
            let (x, y) = (h[(i, k)], h[(i, k + 1)]);
            h[(i, k)] = x * cs + y * sn.conj();
            h[(i, k + 1)] = -sn * x + y * cs;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

/// `(c, s)` with `[[c, s], [−s̄, c]] · [a, b]ᵀ = [r, 0]ᵀ`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, ONE);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn hessenberg(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.dim();
    let mut h = m.clone();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // H ← (I − 2vv†) H
        for j in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| vt.conj() * h[(k + 1 + t, j)])
                .sum();
            for (t, vt) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vt * s * 2.0;
            }
        }
        // H ← H (I − 2vv†)
        for i in 0..n {
            let s: C64 = v
                .iter()
                .enumerate()
                .map(|(t, vt)| h[(i, k + 1 + t)] * vt)
                .sum();
            for (t, vt) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= s * vt.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    h
}
