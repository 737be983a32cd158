//! Linear (U = 0) spectral sweeps over gamma, PT classification of
//! eigenstates, branch continuity, and localization of second-order
//! exceptional points.

use crate::cvec::{self, C64};
use crate::linalg::{self, LinalgError, Spectrum};
use crate::model::{hamiltonian, StationaryState, SystemParams};
use crate::par;
use thiserror::Error;

/// Threshold on |Im mu| separating PT-symmetric from PT-broken eigenvalues.
pub const IM_TOL: f64 = 1e-10;

/// PT-defect threshold below which an eigenstate counts as PT-symmetric.
pub const PT_DEFECT_TOL: f64 = 1e-8;

/// Overlap-score margin below which a branch assignment is ambiguous.
const MATCH_MARGIN: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SpectrumError {
    #[error("gamma grid must be strictly increasing within [0, 2]")]
    InvalidGrid,
    #[error("bracket does not enclose an imaginary-part onset (lo_complex={lo_complex}, hi_complex={hi_complex})")]
    NotBracketing { lo_complex: bool, hi_complex: bool },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, SpectrumError>;

/// Which monotone coordinate orders the points of a [`Branch`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweptParam {
    /// The gain/loss rate itself; used by grid sweeps.
    Gamma,
    /// Arclength along a continuation curve, which may traverse folds where
    /// gamma reverses; the per-point gamma lives in each state's params.
    Arclength,
}

/// Branch annotations.
#[derive(Debug, Clone, Default)]
pub struct BranchLabels {
    pub id: usize,
    /// Gamma where an imaginary part first emerges along this branch, when
    /// one does (coarse estimate at grid resolution; refine with
    /// [`find_ep2`]).
    pub ep2_gamma: Option<f64>,
    /// Fold locations attached by fold detection.
    pub fold_gammas: Vec<f64>,
    /// PT defect of each point.
    pub pt_defects: Vec<f64>,
    /// Set when eigenvector-overlap matching could not distinguish two
    /// assignments; points near the ambiguity are tracked, not guessed.
    pub unresolved_near_ep: bool,
}

/// A parameter-ordered sequence of stationary states tracked by continuity.
#[derive(Debug, Clone)]
pub struct Branch {
    pub param: SweptParam,
    /// Strictly increasing.
    pub param_values: Vec<f64>,
    pub states: Vec<StationaryState>,
    pub labels: BranchLabels,
}

impl Branch {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Gamma values of the points, whatever the ordering parameter is.
    pub fn gammas(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.params().gamma).collect()
    }
}

/// PT defect of a normalized state: `min over theta ||P psi* - e^{i theta}
/// psi||`, evaluated at the optimal phase `theta = arg <psi, P psi*>`.
///
/// Zero for PT-symmetric states, sqrt(2) for a state fully localized in one
/// outer well. The residual is formed componentwise; the closed form through
/// `sqrt(2 - 2|c|)` would bottom out near sqrt(eps).
pub fn pt_defect(psi: &[C64]) -> f64 {
    let mut v = psi.to_vec();
    cvec::normalize(&mut v);
    let pconj: Vec<C64> = v.iter().rev().map(|z| z.conj()).collect();
    let c = cvec::dot(&v, &pconj);
    let rot = if c.norm() > 0.0 {
        c / c.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    pconj
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - rot * b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Sweeps the linear spectrum over a gamma grid and organizes the three
/// eigenvalue curves into branches matched by eigenvector overlap.
///
/// Grid points are diagonalized in parallel; the matching pass is a
/// sequential reduction over the sorted grid, so the output is independent
/// of worker scheduling. Where two assignments score within `1e-6` of each
/// other (the signature of an EP on the grid) the affected branches carry
/// [`BranchLabels::unresolved_near_ep`] instead of a guess.
pub fn sweep_gamma(j: f64, grid: &[f64]) -> Result<Vec<Branch>> {
    if grid.is_empty()
        || grid.windows(2).any(|w| w[1] <= w[0])
        || grid[0] < 0.0
        || *grid.last().unwrap() > 2.0
    {
        return Err(SpectrumError::InvalidGrid);
    }
    let spectra: Vec<linalg::Result<Spectrum>> =
        par::map_slice(grid, |&g| linalg::eig_general(&hamiltonian(j, g)));
    let mut specs = Vec::with_capacity(spectra.len());
    for s in spectra {
        specs.push(s?);
    }

    // assignment per grid point: perm[k][b] = eigen index of branch b
    let mut perms: Vec<[usize; 3]> = Vec::with_capacity(specs.len());
    let mut unresolved = false;
    perms.push([0, 1, 2]);
    for k in 1..specs.len() {
        let prev = &specs[k - 1];
        let cur = &specs[k];
        let prev_perm = perms[k - 1];
        let mut best: Option<(f64, [usize; 3])> = None;
        let mut second = f64::NEG_INFINITY;
        for cand in PERMUTATIONS_3 {
            let mut score = 0.0;
            for b in 0..3 {
                let vp = &prev.eigenvectors[prev_perm[b]];
                let vc = &cur.eigenvectors[cand[b]];
                score += cvec::dot(vp, vc).norm();
            }
            match &mut best {
                Some((s, p)) if score > *s => {
                    second = *s;
                    *s = score;
                    *p = cand;
                }
                Some((s, _)) => second = second.max(score.min(*s)),
                None => best = Some((score, cand)),
            }
        }
        let (best_score, perm) = best.unwrap();
        if best_score - second < MATCH_MARGIN {
            unresolved = true;
        }
        perms.push(perm);
    }

    let mut branches = Vec::with_capacity(3);
    #[allow(clippy::needless_range_loop)] // b is the branch identity, not a plain index
    for b in 0..3 {
        let mut states = Vec::with_capacity(grid.len());
        let mut defects = Vec::with_capacity(grid.len());
        let mut ep2 = None;
        for (k, &g) in grid.iter().enumerate() {
            let idx = perms[k][b];
            let v = &specs[k].eigenvectors[idx];
            let mu = specs[k].eigenvalues[idx];
            let params = SystemParams::linear(j, g).expect("finite sweep parameters");
            let st = StationaryState::new([v[0], v[1], v[2]], mu, params);
            defects.push(pt_defect(v));
            if ep2.is_none() && k > 0 {
                let prev_mu = specs[k - 1].eigenvalues[perms[k - 1][b]];
                if prev_mu.im.abs() <= IM_TOL && mu.im.abs() > IM_TOL {
                    ep2 = Some(0.5 * (grid[k - 1] + g));
                }
            }
            states.push(st);
        }
        branches.push(Branch {
            param: SweptParam::Gamma,
            param_values: grid.to_vec(),
            states,
            labels: BranchLabels {
                id: b,
                ep2_gamma: ep2,
                fold_gammas: Vec::new(),
                pt_defects: defects,
                unresolved_near_ep: unresolved,
            },
        });
    }
    Ok(split_discontinuous(branches))
}

const PERMUTATIONS_3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Enforces the branch continuity bound: a jump larger than ten times the
/// local slope estimate splits the branch rather than connecting through it.
fn split_discontinuous(branches: Vec<Branch>) -> Vec<Branch> {
    let mut out = Vec::with_capacity(branches.len());
    let mut next_id = branches.len();
    for branch in branches {
        let mut cut_points = Vec::new();
        for k in 2..branch.states.len() {
            let d_prev =
                cvec::aligned_distance(branch.states[k - 1].psi(), branch.states[k - 2].psi());
            let d_cur = cvec::aligned_distance(branch.states[k].psi(), branch.states[k - 1].psi());
            let dp_prev = branch.param_values[k - 1] - branch.param_values[k - 2];
            let dp_cur = branch.param_values[k] - branch.param_values[k - 1];
            let slope = d_prev / dp_prev.max(f64::MIN_POSITIVE);
            if d_cur > 10.0 * dp_cur * slope + 1e-6 {
                cut_points.push(k);
            }
        }
        if cut_points.is_empty() {
            out.push(branch);
            continue;
        }
        let mut start = 0;
        let mut cuts = cut_points.into_iter().peekable();
        while start < branch.states.len() {
            let end = cuts.next().unwrap_or(branch.states.len());
            let id = if start == 0 {
                branch.labels.id
            } else {
                next_id
            };
            if start > 0 {
                next_id += 1;
            }
            out.push(Branch {
                param: branch.param,
                param_values: branch.param_values[start..end].to_vec(),
                states: branch.states[start..end].to_vec(),
                labels: BranchLabels {
                    id,
                    ep2_gamma: branch.labels.ep2_gamma,
                    fold_gammas: Vec::new(),
                    pt_defects: branch.labels.pt_defects[start..end].to_vec(),
                    unresolved_near_ep: branch.labels.unresolved_near_ep,
                },
            });
            start = end;
        }
    }
    out
}

/// A located second-order exceptional point.
#[derive(Debug, Clone, Copy)]
pub struct Ep2 {
    pub gamma_ep: f64,
    /// Indices (in the sorted spectrum just above the EP) of the coalescing
    /// pair, identified by the freshly emerged conjugate imaginary parts.
    pub pair: (usize, usize),
}

/// Outcome of the EP2 search.
#[derive(Debug, Clone, Copy)]
pub enum Ep2Outcome {
    Found(Ep2),
    /// The spectrum is complex for every positive gamma: the EP collapsed
    /// into the Hermitian degeneracy at gamma = 0.
    DegenerateAtZero,
}

/// Width the bisection refines the bracket to.
pub const EP_BISECTION_TOL: f64 = 1e-8;

/// Locates the PT-breaking point inside `bracket` by bisection on the
/// indicator `max_k |Im mu_k(gamma)| > 1e-10`.
///
/// At an EP2 of a pseudo-Hermitian matrix the imaginary part switches from
/// numerically zero to finite, which makes this a clean predicate; gap
/// minimization would misidentify the pair whenever an uninvolved level sits
/// between the coalescing two (the decoupled middle well does exactly that
/// at J = 0).
pub fn find_ep2(j: f64, bracket: (f64, f64)) -> Result<Ep2Outcome> {
    let (mut lo, mut hi) = bracket;
    if lo >= hi {
        return Err(SpectrumError::NotBracketing {
            lo_complex: false,
            hi_complex: false,
        });
    }
    let indicator = |g: f64| -> Result<bool> {
        Ok(linalg::eig_general(&hamiltonian(j, g))?.max_abs_imag() > IM_TOL)
    };
    let lo_complex = indicator(lo)?;
    let hi_complex = indicator(hi)?;
    if (lo_complex && lo > 0.0) || !hi_complex {
        return Err(SpectrumError::NotBracketing {
            lo_complex,
            hi_complex,
        });
    }
    while hi - lo > EP_BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if indicator(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let gamma_ep = 0.5 * (lo + hi);
    if bracket.0 == 0.0 && gamma_ep <= 10.0 * EP_BISECTION_TOL {
        return Ok(Ep2Outcome::DegenerateAtZero);
    }
    // identify the coalescing pair a safe margin above the EP, where the
    // emerged imaginary parts clear the eigensolver noise: the conjugate
    // pair with the smallest nonzero |Im|
    let gamma_id = gamma_ep + 1e-6;
    let spec = linalg::eig_general(&hamiltonian(j, gamma_id))?;
    let mut candidates: Vec<usize> = (0..spec.dim())
        .filter(|&k| spec.eigenvalues[k].im.abs() > IM_TOL)
        .collect();
    candidates.sort_by(|&a, &b| {
        spec.eigenvalues[a]
            .im
            .abs()
            .total_cmp(&spec.eigenvalues[b].im.abs())
    });
    let first = candidates[0];
    let partner = candidates
        .iter()
        .skip(1)
        .copied()
        .min_by(|&a, &b| {
            let pa = (spec.eigenvalues[a] - spec.eigenvalues[first].conj()).norm();
            let pb = (spec.eigenvalues[b] - spec.eigenvalues[first].conj()).norm();
            pa.total_cmp(&pb)
        })
        .expect("conjugate partner exists for a pseudo-Hermitian spectrum");
    let pair = (first.min(partner), first.max(partner));
    Ok(Ep2Outcome::Found(Ep2 { gamma_ep, pair }))
}
