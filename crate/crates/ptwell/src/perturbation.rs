//! Kato perturbation series for non-degenerate levels and the first-order
//! degenerate coupling-matrix criterion deciding whether PT symmetry
//! survives a small anti-Hermitian perturbation.

use crate::cvec::{self, C64};
use crate::dd::{pairwise_sum_ddc, DdMatrix};
use crate::linalg::{self, ComplexMatrix, LinalgError};
use thiserror::Error;

/// Degeneracy threshold relative to the spectral scale, matching the
/// eigensolver clustering.
pub const DEGENERACY_GAP_REL: f64 = 1e-9;

/// Largest supported Kato order; the composition count C(2s-1, s) grows
/// quickly and 8 already covers every series use in this crate.
pub const MAX_KATO_ORDER: usize = 8;

const ORTHO_TOL: f64 = 1e-10;
const PARITY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum PerturbationError {
    #[error("basis vectors are not orthonormal (defect {defect:.3e})")]
    NonOrthonormal { defect: f64 },
    #[error("level {index} is degenerate (gap {gap:.3e}); use the degenerate coupling matrix")]
    DegenerateLevel { index: usize, gap: f64 },
    #[error("order {0} outside supported range 1..={MAX_KATO_ORDER}")]
    OrderOutOfRange(usize),
    #[error("cluster is not parity-invariant (defect {defect:.3e}); H0 is not parity-symmetric")]
    ParityAsymmetric { defect: f64 },
    #[error("unperturbed eigenvalue {index} has imaginary part {imag:.3e}")]
    ComplexUnperturbedEigenvalue { index: usize, imag: f64 },
    #[error("index {index} out of range for basis of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, PerturbationError>;

/// Orthonormal eigenbasis of a parity-symmetric Hermitian operator with
/// each vector labeled by its parity eigenvalue (+1 or -1).
#[derive(Debug, Clone)]
pub struct UnperturbedBasis {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<C64>>,
    parity_labels: Vec<i8>,
}

impl UnperturbedBasis {
    /// Diagonalizes a Hermitian `h0` and parity-adapts the result.
    pub fn from_hermitian(h0: &ComplexMatrix, p: &ComplexMatrix) -> Result<Self> {
        let spec = linalg::eig_general(h0)?;
        let scale = spec.scale.max(1.0);
        let mut eigenvalues = Vec::with_capacity(spec.dim());
        for (k, l) in spec.eigenvalues.iter().enumerate() {
            if l.im.abs() > 1e-10 * scale {
                return Err(PerturbationError::ComplexUnperturbedEigenvalue {
                    index: k,
                    imag: l.im,
                });
            }
            eigenvalues.push(l.re);
        }
        let labels = vec![1; eigenvalues.len()];
        let raw = Self {
            eigenvalues,
            eigenvectors: spec.eigenvectors,
            parity_labels: labels,
        };
        parity_adapt(&raw, p)
    }

    /// Wraps precomputed data; orthonormality is validated, parity labels
    /// are taken as given (run [`parity_adapt`] to establish them).
    pub fn from_parts(
        eigenvalues: Vec<f64>,
        eigenvectors: Vec<Vec<C64>>,
        parity_labels: Vec<i8>,
    ) -> Result<Self> {
        let defect = orthonormality_defect(&eigenvectors);
        if defect > ORTHO_TOL {
            return Err(PerturbationError::NonOrthonormal { defect });
        }
        Ok(Self {
            eigenvalues,
            eigenvectors,
            parity_labels,
        })
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[C64] {
        &self.eigenvectors[k]
    }

    pub fn parity_labels(&self) -> &[i8] {
        &self.parity_labels
    }

    fn scale(&self) -> f64 {
        self.eigenvalues.iter().fold(1.0f64, |m, &v| m.max(v.abs()))
    }

    /// Gap from level `n` to the rest of the spectrum.
    pub fn gap(&self, n: usize) -> f64 {
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|&(m, _)| m != n)
            .map(|(_, &v)| (v - self.eigenvalues[n]).abs())
            .fold(f64::INFINITY, f64::min)
    }

    /// Indices grouped into degenerate clusters (gap below threshold),
    /// in eigenvalue order.
    pub fn degenerate_clusters(&self) -> Vec<Vec<usize>> {
        let tol = DEGENERACY_GAP_REL * self.scale();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.eigenvalues[a].total_cmp(&self.eigenvalues[b]));
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for k in order {
            let joined = clusters.last().is_some_and(|cl| {
                (self.eigenvalues[k] - self.eigenvalues[*cl.last().unwrap()]).abs() < tol
            });
            if joined {
                clusters.last_mut().unwrap().push(k);
            } else {
                clusters.push(vec![k]);
            }
        }
        clusters
    }

    fn check_level_non_degenerate(&self, n: usize) -> Result<()> {
        if n >= self.len() {
            return Err(PerturbationError::IndexOutOfRange {
                index: n,
                size: self.len(),
            });
        }
        let gap = self.gap(n);
        if gap <= DEGENERACY_GAP_REL * self.scale() {
            return Err(PerturbationError::DegenerateLevel { index: n, gap });
        }
        Ok(())
    }
}

fn orthonormality_defect(vectors: &[Vec<C64>]) -> f64 {
    let mut defect = 0.0f64;
    for (i, vi) in vectors.iter().enumerate() {
        for (j, vj) in vectors.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((cvec::dot(vi, vj) - want).norm());
        }
    }
    defect
}

/// Projects a labeled vector onto its parity sector: `v <- (v + label P
/// v)/2`, renormalized. For a signed-permutation parity the stored
/// components then satisfy the symmetry bit-exactly; the odd-order
/// cancellation of the Kato series is only as good as this symmetry.
fn symmetrize_exact(v: &mut [C64], label: i8, p: &ComplexMatrix) {
    let pv = p.apply(v);
    let sign = label as f64;
    for (x, y) in v.iter_mut().zip(pv) {
        *x = 0.5 * (*x + sign * y);
    }
    cvec::normalize(v);
}

/// Rotates each degenerate cluster into parity eigenvectors and labels every
/// vector with its parity eigenvalue.
///
/// Non-degenerate vectors are only phase-fixed and relabeled. Errors if some
/// cluster is not invariant under `p`, which signals a parity-asymmetric
/// unperturbed operator. Adapted input is returned unchanged up to phase.
pub fn parity_adapt(basis: &UnperturbedBasis, p: &ComplexMatrix) -> Result<UnperturbedBasis> {
    let defect = orthonormality_defect(&basis.eigenvectors);
    if defect > ORTHO_TOL {
        return Err(PerturbationError::NonOrthonormal { defect });
    }
    let mut vectors = basis.eigenvectors.clone();
    let mut labels = vec![0i8; basis.len()];
    for cluster in basis.degenerate_clusters() {
        if cluster.len() == 1 {
            let k = cluster[0];
            let pv = p.apply(&vectors[k]);
            let lam = cvec::dot(&vectors[k], &pv).re;
            let label = if lam >= 0.0 { 1i8 } else { -1i8 };
            let residual: f64 = pv
                .iter()
                .zip(&vectors[k])
                .map(|(a, b)| (a - b * label as f64).norm_sqr())
                .sum::<f64>()
                .sqrt();
            if residual > PARITY_TOL {
                return Err(PerturbationError::ParityAsymmetric { defect: residual });
            }
            labels[k] = label;
            symmetrize_exact(&mut vectors[k], label, p);
            cvec::fix_phase(&mut vectors[k]);
        } else {
            // diagonalize P restricted to the cluster
            let m = cluster.len();
            let mut pc = ComplexMatrix::zeros(m);
            for (a, &i) in cluster.iter().enumerate() {
                let pv = p.apply(&vectors[i]);
                for (b, &jj) in cluster.iter().enumerate() {
                    pc[(b, a)] = cvec::dot(&vectors[jj], &pv);
                }
            }
            let sub = linalg::eig_general(&pc)?;
            let mut rotated: Vec<(i8, Vec<C64>)> = Vec::with_capacity(m);
            for k in 0..m {
                let lam = sub.eigenvalues[k];
                if (lam.norm() - 1.0).abs() > 1e-6 || lam.im.abs() > 1e-6 {
                    return Err(PerturbationError::ParityAsymmetric {
                        defect: (lam.norm() - 1.0).abs().max(lam.im.abs()),
                    });
                }
                let coeffs = &sub.eigenvectors[k];
                let dim = vectors[cluster[0]].len();
                let mut v = vec![C64::new(0.0, 0.0); dim];
                for (b, &i) in cluster.iter().enumerate() {
                    for (x, y) in v.iter_mut().zip(&vectors[i]) {
                        *x += coeffs[b] * y;
                    }
                }
                let label = if lam.re >= 0.0 { 1i8 } else { -1i8 };
                symmetrize_exact(&mut v, label, p);
                cvec::fix_phase(&mut v);
                rotated.push((label, v));
            }
            // deterministic order: +1 sector first within the cluster
            rotated.sort_by_key(|(l, _)| -(*l as i32));
            for (&i, (label, v)) in cluster.iter().zip(rotated) {
                let pv = p.apply(&v);
                let residual: f64 = pv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * label as f64).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                if residual > PARITY_TOL {
                    return Err(PerturbationError::ParityAsymmetric { defect: residual });
                }
                labels[i] = label;
                vectors[i] = v;
            }
        }
    }
    Ok(UnperturbedBasis {
        eigenvalues: basis.eigenvalues.clone(),
        eigenvectors: vectors,
        parity_labels: labels,
    })
}

/// Reduced resolvent of level `n`:
/// `S = sum_{m != n} |m><m| / (mu_m - mu_n)`.
///
/// Satisfies `S v_n = 0` and commutes with the parity operator for a
/// parity-adapted basis. Errors on degenerate `n`.
pub fn reduced_resolvent(basis: &UnperturbedBasis, n: usize) -> Result<ComplexMatrix> {
    basis.check_level_non_degenerate(n)?;
    let dim = basis.eigenvector(0).len();
    let mut s = ComplexMatrix::zeros(dim);
    for m in 0..basis.len() {
        if m == n {
            continue;
        }
        let w = 1.0 / (basis.eigenvalues[m] - basis.eigenvalues[n]);
        let v = basis.eigenvector(m);
        for i in 0..dim {
            for j in 0..dim {
                s[(i, j)] += w * v[i] * v[j].conj();
            }
        }
    }
    Ok(s)
}

/// One term of the Kato series.
#[derive(Debug, Clone, Copy)]
pub struct KatoTerm {
    pub order: usize,
    pub value: C64,
    /// Number of weak compositions summed: C(2s-1, s).
    pub composition_count: usize,
}

/// Order-`s` energy correction of non-degenerate level `n` under the
/// perturbation `hp`:
///
/// `mu_{n,s} = (-1)^{s-1} Tr sum over weak compositions (k_1..k_{s+1}) of
/// s-1 of S^{k_1} HP S^{k_2} ... HP S^{k_{s+1}}`.
///
/// The zeroth power follows Kato's convention `S^0 = -|n><n|`; with the
/// projector sign left positive the series already fails against the exact
/// two-mode eigenvalue at fourth order. Compositions are enumerated
/// lexicographically and the terms accumulated by pairwise summation, so
/// the floating-point result is reproducible.
pub fn kato_correction(
    basis: &UnperturbedBasis,
    hp: &ComplexMatrix,
    n: usize,
    s: usize,
) -> Result<KatoTerm> {
    if !(1..=MAX_KATO_ORDER).contains(&s) {
        return Err(PerturbationError::OrderOutOfRange(s));
    }
    basis.check_level_non_degenerate(n)?;
    let resolvent = reduced_resolvent(basis, n)?;
    kato_sum(&resolvent, basis.eigenvector(n), hp, s)
}

/// Shared Kato accumulation once the resolvent and the projector vector are
/// fixed.
///
/// Surviving composition products reach `||S||^(s-1)` in magnitude while the
/// odd-order total cancels to zero, so the products and the pairwise sum run
/// in double-double arithmetic; with a parity-exact basis the cancellation
/// then holds to far below every tolerance.
fn kato_sum(
    resolvent: &ComplexMatrix,
    vn: &[C64],
    hp: &ComplexMatrix,
    s: usize,
) -> Result<KatoTerm> {
    let dim = vn.len();
    if hp.dim() != dim {
        return Err(LinalgError::DimensionMismatch {
            left: hp.dim(),
            right: dim,
        }
        .into());
    }
    // S^0 = -|n><n|
    let mut projector = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            projector[(i, j)] = -vn[i] * vn[j].conj();
        }
    }
    let mut powers: Vec<DdMatrix> = Vec::with_capacity(s);
    powers.push(DdMatrix::from_c64(dim, projector.entries()));
    if s >= 2 {
        let s_dd = DdMatrix::from_c64(dim, resolvent.entries());
        powers.push(s_dd.clone());
        for k in 2..s {
            let next = powers[k - 1].mul(&s_dd);
            powers.push(next);
        }
    }
    let hp_dd = DdMatrix::from_c64(dim, hp.entries());
    let mut traces = Vec::new();
    let mut composition = vec![0usize; s + 1];
    composition[s] = s - 1;
    loop {
        let mut acc = powers[composition[0]].clone();
        for &k in &composition[1..] {
            acc = acc.mul(&hp_dd).mul(&powers[k]);
        }
        traces.push(acc.trace());
        if !next_weak_composition(&mut composition) {
            break;
        }
    }
    let sign = if s % 2 == 1 { 1.0 } else { -1.0 };
    Ok(KatoTerm {
        order: s,
        value: sign * pairwise_sum_ddc(&traces).to_c64(),
        composition_count: traces.len(),
    })
}

/// Advances a weak composition to its lexicographic successor. Enumeration
/// starts from `(0, ..., 0, total)`: the rightmost position with a nonzero
/// suffix donates one unit leftward and the remainder collapses to the end.
fn next_weak_composition(k: &mut [usize]) -> bool {
    let parts = k.len();
    let mut suffix = 0usize;
    for i in (0..parts - 1).rev() {
        suffix += k[i + 1];
        if suffix >= 1 {
            k[i] += 1;
            for item in k.iter_mut().take(parts - 1).skip(i + 1) {
                *item = 0;
            }
            k[parts - 1] = suffix - 1;
            return true;
        }
    }
    false
}

/// Coupling matrix of a degenerate cluster: `S_ij = <phi_i| HP |phi_j>`.
///
/// Requires an orthonormal cluster; the defect is reported otherwise, since
/// unnormalized bases rescale the entries (see
/// [`degenerate_coupling_matrix_unnormalized`] for the deliberate escape
/// hatch). Inherits anti-Hermiticity from `hp`.
pub fn degenerate_coupling_matrix(
    cluster: &[Vec<C64>],
    hp: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let defect = orthonormality_defect(cluster);
    if defect > ORTHO_TOL {
        return Err(PerturbationError::NonOrthonormal { defect });
    }
    degenerate_coupling_matrix_unnormalized(cluster, hp)
}

/// Coupling matrix without the orthonormality guard.
///
/// Exists to reproduce reference matrix entries stated in an unnormalized
/// basis; physical first-order rates require the orthonormal form.
pub fn degenerate_coupling_matrix_unnormalized(
    cluster: &[Vec<C64>],
    hp: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let m = cluster.len();
    let mut out = ComplexMatrix::zeros(m);
    for (j, vj) in cluster.iter().enumerate() {
        if vj.len() != hp.dim() {
            return Err(LinalgError::DimensionMismatch {
                left: vj.len(),
                right: hp.dim(),
            }
            .into());
        }
        let hv = hp.apply(vj);
        for (i, vi) in cluster.iter().enumerate() {
            out[(i, j)] = cvec::dot(vi, &hv);
        }
    }
    Ok(out)
}

/// First-order verdict for a degenerate cluster.
#[derive(Debug, Clone)]
pub struct SplittingVerdict {
    /// Eigenvalues of the coupling matrix, sorted by imaginary part; these
    /// are the first-order energy shift rates and are purely imaginary or
    /// zero for an anti-Hermitian perturbation.
    pub splitting_eigenvalues: Vec<C64>,
    /// True when every splitting eigenvalue vanishes, i.e. the perturbation
    /// does not couple the degenerate states and PT symmetry survives at
    /// first order.
    pub pt_survives: bool,
}

const SPLITTING_TOL: f64 = 1e-10;

/// Decides whether PT symmetry survives a perturbation of the degenerate
/// cluster: it does exactly when the coupling matrix vanishes.
pub fn first_order_splitting(cluster: &[Vec<C64>], hp: &ComplexMatrix) -> Result<SplittingVerdict> {
    let coupling = degenerate_coupling_matrix(cluster, hp)?;
    let spec = linalg::eig_general(&coupling)?;
    let mut splitting = spec.eigenvalues;
    splitting.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
    let max_mod = splitting.iter().map(|l| l.norm()).fold(0.0, f64::max);
    Ok(SplittingVerdict {
        splitting_eigenvalues: splitting,
        pt_survives: max_mod <= SPLITTING_TOL,
    })
}

/// Kato correction for a member of a degenerate cluster whose first-order
/// coupling matrix vanishes.
///
/// The whole cluster is excluded from the reduced resolvent and the
/// non-degenerate machinery runs inside the parity-adapted basis. This is
/// the standard fallback once first order vanishes identically; it is an
/// approximation beyond that regime.
pub fn cluster_kato_correction(
    basis: &UnperturbedBasis,
    hp: &ComplexMatrix,
    cluster: &[usize],
    member: usize,
    s: usize,
) -> Result<KatoTerm> {
    if !(1..=MAX_KATO_ORDER).contains(&s) {
        return Err(PerturbationError::OrderOutOfRange(s));
    }
    if !cluster.contains(&member) {
        return Err(PerturbationError::IndexOutOfRange {
            index: member,
            size: cluster.len(),
        });
    }
    let dim = basis.eigenvector(0).len();
    let mut resolvent = ComplexMatrix::zeros(dim);
    for m in 0..basis.len() {
        if cluster.contains(&m) {
            continue;
        }
        let w = 1.0 / (basis.eigenvalues()[m] - basis.eigenvalues()[member]);
        let v = basis.eigenvector(m);
        for i in 0..dim {
            for j in 0..dim {
                resolvent[(i, j)] += w * v[i] * v[j].conj();
            }
        }
    }
    kato_sum(&resolvent, basis.eigenvector(member), hp, s)
}

/// Binomial coefficient, used by tests to check the composition count.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}
