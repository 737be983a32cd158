//! Dense complex linear algebra for small general (non-Hermitian) matrices.
//!
//! Matrices are stored row-major with `f64` complex entries. The eigensolver
//! reduces to upper Hessenberg form by Householder reflections and runs a
//! shifted QR iteration with complex Givens rotations; eigenvectors come from
//! inverse iteration on the original matrix. Everything is deterministic:
//! identical input bits give identical output bits regardless of threading.

use crate::cvec::{self, C64};
use thiserror::Error;

/// Relative degeneracy threshold: eigenvalues closer than this times the
/// spectral scale are treated as one cluster.
pub const CLUSTER_GAP_REL: f64 = 1e-9;

/// Relative eigenvector residual accepted before an index is flagged
/// defective.
pub const RESIDUAL_TOL_REL: f64 = 1e-10;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 64;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix entries length {len} does not form a square matrix of dim {dim}")]
    NotSquare { dim: usize, len: usize },
    #[error("matrix dimension {0} outside supported range 1..={MAX_DIM}")]
    DimOutOfRange(usize),
    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("QR iteration did not converge within {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("matrix singular to working precision (pivot {pivot:.3e})")]
    Singular { pivot: f64 },
}

pub type Result<T> = std::result::Result<T, LinalgError>;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and
    /// finiteness.
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(LinalgError::DimOutOfRange(dim));
        }
        if entries.len() != dim * dim {
            return Err(LinalgError::NotSquare {
                dim,
                len: entries.len(),
            });
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(LinalgError::NonFinite {
                    row: k / dim,
                    col: k % dim,
                });
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Builds from nested rows; rows must all have the outer length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(LinalgError::NotSquare {
                    dim,
                    len: row.len() * dim,
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(LinalgError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            entries,
        })
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        debug_assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Maximum row-sum norm; the spectral scale all tolerances are relative
    /// to.
    pub fn max_row_sum_norm(&self) -> f64 {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// Eigenvalue/eigenvector decomposition of a general complex matrix.
///
/// Eigenvalues are sorted by (Re, Im) ascending and paired with unit-norm
/// right eigenvectors by index. `residuals[k] = ||A v_k - lambda_k v_k||`.
/// Indices whose residual exceeds the relative tolerance sit in a defective
/// cluster (geometric multiplicity below algebraic) and are flagged rather
/// than silently accepted.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<C64>,
    pub eigenvectors: Vec<Vec<C64>>,
    pub residuals: Vec<f64>,
    pub defective: Vec<bool>,
    /// Max row-sum norm of the input, the scale residuals are judged
    /// against.
    pub scale: f64,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| l.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn any_defective(&self) -> bool {
        self.defective.iter().any(|&d| d)
    }
}

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

pub(crate) struct Lu {
    dim: usize,
    data: Vec<C64>,
    perm: Vec<usize>,
    pub min_pivot: f64,
    pub max_pivot: f64,
}

impl Lu {
    /// Factors `a` with partial pivoting. A pivot below `singular_tol` aborts
    /// with `Singular` unless `replace_tiny` supplies the magnitude to patch
    /// it with (inverse iteration wants exactly that behaviour).
    pub(crate) fn factor(
        a: &ComplexMatrix,
        singular_tol: f64,
        replace_tiny: Option<f64>,
    ) -> Result<Self> {
        let n = a.dim;
        let mut data = a.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut min_pivot = f64::INFINITY;
        let mut max_pivot: f64 = 0.0;
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = data[col * n + col].norm();
            for r in col + 1..n {
                let mag = data[r * n + col].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag <= singular_tol {
                match replace_tiny {
                    Some(patch) => {
                        let cur = data[pivot_row * n + col];
                        data[pivot_row * n + col] = if cur.norm() > 0.0 {
                            cur / cur.norm() * patch
                        } else {
                            C64::new(patch, 0.0)
                        };
                        pivot_mag = patch;
                    }
                    None => return Err(LinalgError::Singular { pivot: pivot_mag }),
                }
            }
            if pivot_row != col {
                for j in 0..n {
                    data.swap(col * n + j, pivot_row * n + j);
                }
                perm.swap(col, pivot_row);
            }
            min_pivot = min_pivot.min(pivot_mag);
            max_pivot = max_pivot.max(pivot_mag);
            let pivot = data[col * n + col];
            for r in col + 1..n {
                let factor = data[r * n + col] / pivot;
                data[r * n + col] = factor;
                for j in col + 1..n {
                    let sub = factor * data[col * n + j];
                    data[r * n + j] -= sub;
                }
            }
        }
        Ok(Self {
            dim: n,
            data,
            perm,
            min_pivot,
            max_pivot,
        })
    }

    pub(crate) fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim;
        debug_assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 1..n {
            for j in 0..i {
                let sub = self.data[i * n + j] * x[j];
                x[i] -= sub;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let sub = self.data[i * n + j] * x[j];
                x[i] -= sub;
            }
            x[i] /= self.data[i * n + i];
        }
        x
    }

    /// Cheap condition proxy from the pivot spread.
    pub(crate) fn condition_estimate(&self) -> f64 {
        if self.min_pivot > 0.0 {
            self.max_pivot / self.min_pivot
        } else {
            f64::INFINITY
        }
    }
}

/// Solves `A x = b` by LU with partial pivoting.
///
/// The residual satisfies `||Ax - b|| <= 1e-12 (||A|| ||x|| + ||b||)` for any
/// well-scaled system of the supported sizes; a pivot at working-precision
/// zero is reported as `Singular` with its magnitude.
pub fn solve_linear(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if b.len() != a.dim {
        return Err(LinalgError::DimensionMismatch {
            left: a.dim,
            right: b.len(),
        });
    }
    let scale = a.max_row_sum_norm().max(f64::MIN_POSITIVE);
    let lu = Lu::factor(a, 1e-14 * scale, None)?;
    Ok(lu.solve(b))
}

/// Condition-number proxy of `a` from LU pivot magnitudes.
pub fn condition_estimate(a: &ComplexMatrix) -> Result<f64> {
    let scale = a.max_row_sum_norm().max(f64::MIN_POSITIVE);
    let lu = Lu::factor(a, 1e-14 * scale, None)?;
    Ok(lu.condition_estimate())
}

// ---------------------------------------------------------------------------
// Eigensolver: Hessenberg reduction + shifted QR + inverse iteration
// ---------------------------------------------------------------------------

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg_in_place(h: &mut [C64], n: usize) {
    for k in 0..n.saturating_sub(2) {
        // column k, rows k+1..n
        let col: Vec<C64> = (k + 1..n).map(|r| h[r * n + k]).collect();
        let xnorm = cvec::norm(&col);
        if xnorm == 0.0 {
            continue;
        }
        let x0 = col[0];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let beta = -phase * xnorm;
        let mut u = col;
        u[0] -= beta;
        let unorm2 = u.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if unorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / unorm2;
        // left: rows k+1..n of columns k..n
        for j in k..n {
            let mut s = C64::new(0.0, 0.0);
            for (idx, r) in (k + 1..n).enumerate() {
                s += u[idx].conj() * h[r * n + j];
            }
            s *= tau;
            for (idx, r) in (k + 1..n).enumerate() {
                let sub = s * u[idx];
                h[r * n + j] -= sub;
            }
        }
        // right: columns k+1..n of all rows
        for r in 0..n {
            let mut s = C64::new(0.0, 0.0);
            for (idx, c) in (k + 1..n).enumerate() {
                s += h[r * n + c] * u[idx];
            }
            s *= tau;
            for (idx, c) in (k + 1..n).enumerate() {
                let sub = s * u[idx].conj();
                h[r * n + c] -= sub;
            }
        }
        // enforce exact zeros below the subdiagonal
        for r in k + 2..n {
            h[r * n + k] = C64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalues of a 2x2 complex block.
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    (half_tr + disc, half_tr - disc)
}

/// Shifted QR iteration on an upper Hessenberg matrix; returns the
/// eigenvalues unordered.
fn qr_eigenvalues(h: &mut [C64], n: usize, scale: f64) -> Result<Vec<C64>> {
    let mut eigs = vec![C64::new(0.0, 0.0); n];
    let max_sweeps = 100 * n;
    let mut sweeps = 0usize;
    let mut hi = n; // active block is rows/cols [0, hi)
    let mut stall = 0usize;
    let eps = f64::EPSILON;
    let floor = 1e-6 * scale.max(f64::MIN_POSITIVE);
    while hi > 0 {
        if hi == 1 {
            eigs[0] = h[0];
            hi = 0;
            continue;
        }
        // deflate the lowest negligible subdiagonal in the active block
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[lo * n + lo - 1].norm();
            let diag_sum = h[(lo - 1) * n + lo - 1].norm() + h[lo * n + lo].norm();
            if sub <= eps * diag_sum.max(floor) {
                h[lo * n + lo - 1] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if h[(hi - 1) * n + hi - 2].norm() == 0.0 {
            eigs[hi - 1] = h[(hi - 1) * n + hi - 1];
            hi -= 1;
            stall = 0;
            continue;
        }
        if lo == hi - 2 {
            // decoupled trailing 2x2: read off directly
            let (l1, l2) = eig2(
                h[(hi - 2) * n + hi - 2],
                h[(hi - 2) * n + hi - 1],
                h[(hi - 1) * n + hi - 2],
                h[(hi - 1) * n + hi - 1],
            );
            eigs[hi - 2] = l1;
            eigs[hi - 1] = l2;
            hi -= 2;
            stall = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(LinalgError::NonConvergence { sweeps });
        }
        sweeps += 1;
        stall += 1;
        // Wilkinson shift from the trailing 2x2 of the active block
        let a = h[(hi - 2) * n + hi - 2];
        let b = h[(hi - 2) * n + hi - 1];
        let c = h[(hi - 1) * n + hi - 2];
        let d = h[(hi - 1) * n + hi - 1];
        let mut shift = {
            let (l1, l2) = eig2(a, b, c, d);
            if (l1 - d).norm() <= (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        if stall.is_multiple_of(12) {
            // exceptional shift to break rare limit cycles
            shift = d + C64::new(1.5 * c.norm(), 0.5 * c.norm());
        }
        // explicit single-shift QR step on [lo, hi): H <- R Q + shift I,
        // applied as a similarity of the full matrix (coupling rows and
        // columns outside the window move along)
        let mut rot: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            h[i * n + i] -= shift;
        }
        for k in lo..hi - 1 {
            let f = h[k * n + k];
            let g = h[(k + 1) * n + k];
            let (cs, sn) = givens(f, g);
            rot.push((cs, sn));
            for j in k..n {
                let hk = h[k * n + j];
                let hk1 = h[(k + 1) * n + j];
                h[k * n + j] = cs * hk + sn * hk1;
                h[(k + 1) * n + j] = -sn.conj() * hk + cs * hk1;
            }
        }
        for (k, &(cs, sn)) in (lo..hi - 1).zip(rot.iter()) {
            for r in 0..k + 2 {
                let hk = h[r * n + k];
                let hk1 = h[r * n + k + 1];
                h[r * n + k] = cs * hk + sn.conj() * hk1;
                h[r * n + k + 1] = -sn * hk + cs * hk1;
            }
        }
        for i in lo..hi {
            h[i * n + i] += shift;
        }
    }
    Ok(eigs)
}

/// Complex Givens rotation zeroing `g` against `f`.
fn givens(f: C64, g: C64) -> (f64, C64) {
    let fn_ = f.norm();
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let r = (fn_ * fn_ + gn * gn).sqrt();
    let cs = fn_ / r;
    let sn = (f / fn_) * g.conj() / r;
    (cs, sn)
}

/// Deterministic full-support start vector for inverse iteration.
fn start_vector(n: usize, k: usize, attempt: usize) -> Vec<C64> {
    let mut v: Vec<C64> = (0..n)
        .map(|j| {
            let t = 0.9 * (j as f64 + 1.0) * (k as f64 + 1.37) + 2.7 * attempt as f64;
            C64::from_polar(1.0, t)
        })
        .collect();
    cvec::normalize(&mut v);
    v
}

fn orthogonalize_against(v: &mut [C64], basis: &[Vec<C64>]) {
    for b in basis {
        let c = cvec::dot(b, v);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

/// Computes all eigenvalues (with multiplicity) and unit right eigenvectors.
///
/// Eigenvalues are sorted by (Re, Im) ascending. Within a near-degenerate
/// cluster, eigenvectors are obtained by deflated inverse iteration and
/// re-orthonormalized by modified Gram-Schmidt; if the cluster is defective
/// the surplus directions cannot reach the residual tolerance and the
/// offending indices are flagged in [`Spectrum::defective`].
pub fn eig_general(a: &ComplexMatrix) -> Result<Spectrum> {
    let n = a.dim;
    let scale = a.max_row_sum_norm();
    if n == 1 {
        return Ok(Spectrum {
            eigenvalues: vec![a[(0, 0)]],
            eigenvectors: vec![vec![C64::new(1.0, 0.0)]],
            residuals: vec![0.0],
            defective: vec![false],
            scale,
        });
    }
    let mut h = a.entries.clone();
    hessenberg_in_place(&mut h, n);
    let mut eigs = qr_eigenvalues(&mut h, n, scale)?;
    eigs.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });

    // cluster near-coincident eigenvalues (consecutive in sorted order)
    let gap_tol = CLUSTER_GAP_REL * scale.max(f64::MIN_POSITIVE);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for k in 0..n {
        let joined = clusters.last().is_some_and(|cl| {
            let prev = eigs[*cl.last().unwrap()];
            (eigs[k] - prev).norm() < gap_tol
        });
        if joined {
            clusters.last_mut().unwrap().push(k);
        } else {
            clusters.push(vec![k]);
        }
    }

    let mut vectors: Vec<Vec<C64>> = vec![Vec::new(); n];
    let res_tol = RESIDUAL_TOL_REL * scale.max(f64::MIN_POSITIVE);
    for cluster in &clusters {
        let lambda = {
            // iterate from the cluster mean for stability of the patched LU
            let sum: C64 = cluster.iter().map(|&k| eigs[k]).sum();
            sum / cluster.len() as f64
        };
        let shifted = a.sub(&ComplexMatrix::identity(n).scaled(lambda))?;
        let patch = (f64::EPSILON * scale).max(f64::MIN_POSITIVE);
        let lu = Lu::factor(&shifted, patch, Some(patch))?;
        let mut found: Vec<Vec<C64>> = Vec::new();
        for (slot, &k) in cluster.iter().enumerate() {
            let mut best: Option<(f64, Vec<C64>)> = None;
            for attempt in 0..3 {
                let mut v = start_vector(n, k, attempt);
                orthogonalize_against(&mut v, &found);
                if cvec::normalize(&mut v) < 1e-8 {
                    continue;
                }
                for _ in 0..(2 + slot) {
                    let mut w = lu.solve(&v);
                    orthogonalize_against(&mut w, &found);
                    if cvec::normalize(&mut w) < 1e-300 {
                        break;
                    }
                    v = w;
                }
                let av = a.apply(&v);
                let res = av
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - eigs[k] * y).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if best.as_ref().is_none_or(|(r, _)| res < *r) {
                    best = Some((res, v));
                }
                if best.as_ref().unwrap().0 <= res_tol {
                    break;
                }
            }
            let (_, v) = best.expect("inverse iteration produced no candidate");
            found.push(v);
        }
        // modified Gram-Schmidt re-orthonormalization of the cluster
        if cluster.len() > 1 {
            let mut ortho: Vec<Vec<C64>> = Vec::new();
            for mut v in found {
                orthogonalize_against(&mut v, &ortho);
                cvec::normalize(&mut v);
                ortho.push(v);
            }
            found = ortho;
        }
        for (&k, mut v) in cluster.iter().zip(found) {
            cvec::fix_phase(&mut v);
            vectors[k] = v;
        }
    }

    let mut residuals = vec![0.0; n];
    let mut defective = vec![false; n];
    for k in 0..n {
        let av = a.apply(&vectors[k]);
        residuals[k] = av
            .iter()
            .zip(&vectors[k])
            .map(|(x, y)| (x - eigs[k] * y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        defective[k] = residuals[k] > res_tol;
    }
    Ok(Spectrum {
        eigenvalues: eigs,
        eigenvectors: vectors,
        residuals,
        defective,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cvec::dot;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues_are_ones() {
        let spec = eig_general(&ComplexMatrix::identity(3)).unwrap();
        for l in &spec.eigenvalues {
            assert!((l - c(1.0, 0.0)).norm() < 1e-12);
        }
        assert!(!spec.any_defective());
        // degenerate but non-defective: vectors orthonormal
        assert!(dot(&spec.eigenvectors[0], &spec.eigenvectors[1]).norm() < 1e-10);
    }

    #[test]
    fn diagonal_imaginary_triplet() {
        let a = ComplexMatrix::diag(&[c(0.0, 1.0), c(0.0, 0.0), c(0.0, -1.0)]);
        let spec = eig_general(&a).unwrap();
        let expect = [c(0.0, -1.0), c(0.0, 0.0), c(0.0, 1.0)];
        for (l, e) in spec.eigenvalues.iter().zip(expect) {
            assert!((l - e).norm() < 1e-12, "{l} vs {e}");
        }
    }

    #[test]
    fn symmetric_triple_well_spectrum() {
        // fully symmetric hopping matrix: eigenvalues {-2, 1, 1}
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
            vec![c(-1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let spec = eig_general(&a).unwrap();
        let expect = [-2.0, 1.0, 1.0];
        for (l, e) in spec.eigenvalues.iter().zip(expect) {
            assert!((l - c(e, 0.0)).norm() < 1e-10);
        }
        assert!(!spec.any_defective());
        for r in &spec.residuals {
            assert!(*r <= RESIDUAL_TOL_REL * spec.scale);
        }
    }

    #[test]
    fn defective_jordan_block_is_flagged() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let spec = eig_general(&a).unwrap();
        assert!(spec.eigenvalues.iter().all(|l| l.norm() < 1e-7));
        assert!(spec.any_defective());
        // exactly one direction reaches the tolerance
        assert_eq!(spec.defective.iter().filter(|&&d| !d).count(), 1);
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let b = vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, 0.0)];
        let x = solve_linear(&ComplexMatrix::identity(3), &b).unwrap();
        for (xi, bi) in x.iter().zip(&b) {
            assert!((xi - bi).norm() < 1e-15);
        }
        let a = ComplexMatrix::diag(&[c(2.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]);
        let x = solve_linear(&a, &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(x[1].norm() < 1e-15 && x[2].norm() < 1e-15);
    }

    #[test]
    fn solve_residual_oracle() {
        // shifted hopping matrix against the multiplication oracle
        let a = ComplexMatrix::from_rows(&[
            vec![c(-0.5, 0.0), c(-1.0, 0.0), c(-1.0, 0.0)],
            vec![c(-1.0, 0.0), c(-0.5, 0.0), c(-1.0, 0.0)],
            vec![c(-1.0, 0.0), c(-1.0, 0.0), c(-0.5, 0.0)],
        ])
        .unwrap();
        let b = vec![c(1.0, 0.0), c(0.3, 0.1), c(1.0, 0.0)];
        let x = solve_linear(&a, &b).unwrap();
        let ax = a.apply(&x);
        let res: f64 = ax
            .iter()
            .zip(&b)
            .map(|(l, r)| (l - r).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let bound = 1e-12 * (a.max_row_sum_norm() * cvec::norm(&x) + cvec::norm(&b));
        assert!(res <= bound, "residual {res} above bound {bound}");
    }

    #[test]
    fn singular_matrix_reports_pivot() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        match solve_linear(&a, &[c(1.0, 0.0), c(1.0, 0.0)]) {
            Err(LinalgError::Singular { pivot }) => assert!(pivot < 1e-12),
            other => panic!("expected Singular, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_entries_rejected() {
        let e = ComplexMatrix::new(2, vec![c(f64::NAN, 0.0); 4]);
        assert!(matches!(e, Err(LinalgError::NonFinite { .. })));
    }

    #[test]
    fn trace_equals_eigenvalue_sum() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.3, 0.2), c(-1.0, 0.4), c(0.0, -0.7)],
            vec![c(0.9, 0.0), c(-0.2, 0.1), c(0.5, 0.5)],
            vec![c(0.0, 1.1), c(0.4, -0.3), c(0.6, -0.6)],
        ])
        .unwrap();
        let spec = eig_general(&a).unwrap();
        let sum: C64 = spec.eigenvalues.iter().sum();
        assert!((sum - a.trace()).norm() <= 1e-10 * a.max_row_sum_norm());
    }

    #[test]
    fn medium_dimension_round_trip() {
        // 24x24 with a known spectrum: exercises repeated deflation windows
        let n = 24;
        // unitary from a deterministic dense matrix via Gram-Schmidt
        let mut q: Vec<Vec<C64>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut v: Vec<C64> = (0..n)
                .map(|j| {
                    C64::from_polar(
                        1.0 + 0.3 * ((k * 7 + j * 3) as f64).sin(),
                        0.71 * (k as f64 + 1.3) * (j as f64 + 0.7),
                    )
                })
                .collect();
            for b in &q {
                let coeff = cvec::dot(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= coeff * y;
                }
            }
            assert!(cvec::normalize(&mut v) > 1e-8);
            q.push(v);
        }
        let d: Vec<C64> = (0..n)
            .map(|k| c(0.37 * k as f64 - 2.0, 0.5 * ((3 * k) as f64).cos()))
            .collect();
        let mut a = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = c(0.0, 0.0);
                for (k, dk) in d.iter().enumerate() {
                    s += q[k][i] * dk * q[k][j].conj();
                }
                a[(i, j)] = s;
            }
        }
        let spec = eig_general(&a).unwrap();
        assert!(!spec.any_defective());
        let mut want = d;
        want.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
        for (got, expect) in spec.eigenvalues.iter().zip(&want) {
            assert!((got - expect).norm() <= 1e-8, "{got} vs {expect}");
        }
        for k in 0..n {
            assert!(spec.residuals[k] <= RESIDUAL_TOL_REL * spec.scale);
        }
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let too_big = ComplexMatrix::new(65, vec![c(0.0, 0.0); 65 * 65]);
        assert!(matches!(too_big, Err(LinalgError::DimOutOfRange(65))));
        assert!(matches!(
            ComplexMatrix::new(0, Vec::new()),
            Err(LinalgError::DimOutOfRange(0))
        ));
    }
}
