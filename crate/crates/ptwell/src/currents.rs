//! Current studies over parameter grids: net current, channel ratio,
//! maxima over gamma restricted to dynamically stable PT-symmetric states,
//! and the PT-broken-region flag that shades the linear-case figures.

use crate::cvec::{self, C64};
use crate::linalg::LinalgError;
use crate::model::{currents as state_currents, StationaryState, SystemParams};
use crate::nonlinear::{discover_states, solve_stationary, CensusConfig, SolveError};
use crate::par;
use crate::spectrum::{self, pt_defect, sweep_gamma, SpectrumError};
use crate::stability::{bdg_spectrum, StabilityError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CurrentsError {
    #[error("gamma grid must be strictly increasing and non-negative")]
    InvalidGrid,
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error(transparent)]
    Stability(#[from] StabilityError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, CurrentsError>;

/// One row of a current table: a stationary state at one grid point.
#[derive(Debug, Clone)]
pub struct CurrentRow {
    pub gamma: f64,
    pub branch: usize,
    pub mu: C64,
    pub j_ext: f64,
    pub j12: f64,
    pub j13: f64,
    /// `j12 / j13`; absent when the direct channel carries no current.
    pub ratio: Option<f64>,
    /// Some coexisting state at this gamma has a complex eigenvalue, which
    /// renders every stationary state unstable in the linear case.
    pub any_broken: bool,
    /// Bogoliubov-de Gennes verdict for this state.
    pub stable: bool,
    pub max_im_omega: f64,
    pub pt_defect: f64,
    pub residual: f64,
}

const RATIO_FLOOR: f64 = 1e-12;

/// A stationary state pinned to a grid point, as produced by
/// [`stationary_rows`].
#[derive(Debug, Clone)]
pub struct StationaryRow {
    pub gamma: f64,
    pub branch: usize,
    pub state: StationaryState,
    pub any_broken: bool,
}

fn row_from_state(state: &StationaryState, branch: usize, any_broken: bool) -> Result<CurrentRow> {
    let rep = state_currents(state);
    let bdg = bdg_spectrum(state)?;
    Ok(CurrentRow {
        gamma: state.params().gamma,
        branch,
        mu: state.mu(),
        j_ext: rep.j_ext,
        j12: rep.j12,
        j13: rep.j13,
        ratio: if rep.j13.abs() > RATIO_FLOOR {
            Some(rep.j12 / rep.j13)
        } else {
            None
        },
        any_broken,
        stable: bdg.stable,
        max_im_omega: bdg.max_im,
        pt_defect: pt_defect(state.psi()),
        residual: state.residual_norm(),
    })
}

/// Every stationary state at every grid point, tracked by branch.
///
/// For `U = 0` the rows come from the branch-matched linear sweep. For
/// interacting systems a multistart census anchors near the low end of the
/// grid and each discovered state is walked across the grid by re-solving
/// with the neighboring solution as seed; a walk ends where its branch does
/// (fold or census anchor limitations near the hidden degeneracy at gamma
/// = 0). Rows are ordered by (gamma, branch); the per-state walks run in
/// parallel.
pub fn stationary_rows(j: f64, u: f64, grid: &[f64]) -> Result<Vec<StationaryRow>> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] < 0.0 {
        return Err(CurrentsError::InvalidGrid);
    }
    let mut rows = if u == 0.0 {
        linear_rows(j, grid)?
    } else {
        interacting_rows(j, u, grid)?
    };
    rows.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.branch.cmp(&b.branch)));
    Ok(rows)
}

/// Tabulates currents of every stationary state over a gamma grid; see
/// [`stationary_rows`] for how states are enumerated.
pub fn current_sweep(j: f64, u: f64, grid: &[f64]) -> Result<Vec<CurrentRow>> {
    stationary_rows(j, u, grid)?
        .iter()
        .map(|r| row_from_state(&r.state, r.branch, r.any_broken))
        .collect()
}

fn linear_rows(j: f64, grid: &[f64]) -> Result<Vec<StationaryRow>> {
    let branches = sweep_gamma(j, grid)?;
    let mut broken_at = vec![false; grid.len()];
    for b in &branches {
        for (k, st) in b.states.iter().enumerate() {
            if st.mu().im.abs() > spectrum::IM_TOL {
                broken_at[k] = true;
            }
        }
    }
    let mut rows = Vec::new();
    for b in &branches {
        for (k, st) in b.states.iter().enumerate() {
            if !st.is_converged() {
                // defective EP grid point: eigenvector residual above
                // tolerance, currents undefined
                continue;
            }
            rows.push(StationaryRow {
                gamma: st.params().gamma,
                branch: b.labels.id,
                state: st.clone(),
                any_broken: broken_at[k],
            });
        }
    }
    Ok(rows)
}

fn interacting_rows(j: f64, u: f64, grid: &[f64]) -> Result<Vec<StationaryRow>> {
    // census anchor: the grid point nearest 0.05 keeps clear of the hidden
    // degeneracy of the symmetric trimer at gamma = 0
    let anchor_idx = grid
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| (*a - 0.05).abs().total_cmp(&(*b - 0.05).abs()))
        .map(|(k, _)| k)
        .unwrap();
    let anchor_params = SystemParams::new(j, grid[anchor_idx], u).expect("finite parameters");
    let census = discover_states(&anchor_params, &CensusConfig::default());

    // walk each census state across the grid, both directions from the anchor
    let walks: Vec<Vec<StationaryState>> = par::map_indexed(census.len(), |b| {
        let mut points = Vec::new();
        let anchor = census[b].state.clone();
        points.push(anchor.clone());
        let mut cur = anchor.clone();
        for k in (0..anchor_idx).rev() {
            match walk_to(&cur, grid[k]) {
                Some(next) => {
                    points.push(next.clone());
                    cur = next;
                }
                None => break,
            }
        }
        points.reverse();
        let mut cur = anchor;
        for &g in &grid[anchor_idx + 1..] {
            match walk_to(&cur, g) {
                Some(next) => {
                    points.push(next.clone());
                    cur = next;
                }
                None => break,
            }
        }
        points
    });

    // deduplicate states that met at a fold and flag broken columns
    let mut per_gamma: Vec<Vec<(usize, StationaryState)>> = vec![Vec::new(); grid.len()];
    for (b, walk) in walks.iter().enumerate() {
        for st in walk {
            let k = grid
                .iter()
                .position(|&g| (g - st.params().gamma).abs() < 1e-12)
                .expect("walk lands on grid points");
            let dup = per_gamma[k].iter().any(|(_, other)| {
                cvec::aligned_distance(other.psi(), st.psi()) <= 1e-6
                    && (other.mu() - st.mu()).norm() <= 1e-8
            });
            if !dup {
                per_gamma[k].push((b, st.clone()));
            }
        }
    }
    let mut rows = Vec::new();
    for column in &per_gamma {
        let any_broken = column
            .iter()
            .any(|(_, st)| st.mu().im.abs() > spectrum::IM_TOL);
        for (b, st) in column {
            rows.push(StationaryRow {
                gamma: st.params().gamma,
                branch: *b,
                state: st.clone(),
                any_broken,
            });
        }
    }
    Ok(rows)
}

/// One parameter-step of a branch walk: re-solve at `gamma` seeded by the
/// neighboring state, with one midpoint retry when the step is too long.
fn walk_to(from: &StationaryState, gamma: f64) -> Option<StationaryState> {
    let mut params = from.params();
    params.gamma = gamma;
    match try_step(from, &params) {
        Some(st) => Some(st),
        None => {
            let mut mid_params = from.params();
            mid_params.gamma = 0.5 * (from.params().gamma + gamma);
            let mid = try_step(from, &mid_params)?;
            try_step(&mid, &params)
        }
    }
}

fn try_step(seed: &StationaryState, params: &SystemParams) -> Option<StationaryState> {
    match solve_stationary(params, seed.psi(), seed.mu()) {
        Ok(st) => {
            // reject jumps to a different branch
            if cvec::aligned_distance(st.psi(), seed.psi()) < 0.35 {
                Some(st)
            } else {
                None
            }
        }
        Err(SolveError::NoConvergence { .. } | SolveError::SingularJacobian { .. }) => None,
        Err(_) => None,
    }
}

/// Result of the stable-current maximization.
#[derive(Debug, Clone, Copy)]
pub struct MaxCurrent {
    pub gamma_star: f64,
    pub branch: usize,
    pub j_max: f64,
    pub stable_at_max: bool,
    /// The maximum sits at (or hard against) an exceptional point, where
    /// the current is only marginally attainable.
    pub at_ep: bool,
}

/// Outcome of [`max_current`]: the linear symmetric case legitimately has
/// no stable current at all.
#[derive(Debug, Clone, Copy)]
pub enum MaxCurrentOutcome {
    Found(MaxCurrent),
    NoStableCurrent,
}

/// Default grid for the maximization: 0 to 1.5 in steps of 0.005.
pub fn default_gamma_grid() -> Vec<f64> {
    (0..=300).map(|k| k as f64 * 0.005).collect()
}

/// Maximizes `j_ext` over gamma among BdG-stable PT-symmetric states, with
/// a tenfold grid refinement around the coarse argmax.
pub fn max_current(j: f64, u: f64) -> Result<MaxCurrentOutcome> {
    max_current_on_grid(j, u, &default_gamma_grid())
}

fn stable_symmetric(row: &CurrentRow) -> bool {
    row.stable
        && row.pt_defect <= spectrum::PT_DEFECT_TOL
        && row.mu.im.abs() <= spectrum::IM_TOL
        && row.residual <= crate::model::STATE_RESIDUAL_TOL
}

/// [`max_current`] on a caller-supplied coarse grid.
pub fn max_current_on_grid(j: f64, u: f64, grid: &[f64]) -> Result<MaxCurrentOutcome> {
    let rows = current_sweep(j, u, grid)?;
    let coarse = rows
        .iter()
        .filter(|r| stable_symmetric(r))
        .max_by(|a, b| a.j_ext.total_cmp(&b.j_ext));
    let Some(best) = coarse else {
        return Ok(MaxCurrentOutcome::NoStableCurrent);
    };
    if best.j_ext <= RATIO_FLOOR {
        return Ok(MaxCurrentOutcome::NoStableCurrent);
    }
    // refine tenfold around the coarse argmax
    let step = if grid.len() > 1 {
        grid[1] - grid[0]
    } else {
        0.005
    };
    let lo = (best.gamma - step).max(grid[0]);
    let hi = (best.gamma + step).min(*grid.last().unwrap());
    let fine: Vec<f64> = (0..=20).map(|k| lo + (hi - lo) * k as f64 / 20.0).collect();
    let fine_rows = current_sweep(j, u, &fine)?;
    let refined = fine_rows
        .iter()
        .filter(|r| stable_symmetric(r))
        .max_by(|a, b| a.j_ext.total_cmp(&b.j_ext))
        .unwrap_or(best);
    let at_ep = near_exceptional_point(j, refined.gamma);
    Ok(MaxCurrentOutcome::Found(MaxCurrent {
        gamma_star: refined.gamma,
        branch: refined.branch,
        j_max: refined.j_ext,
        stable_at_max: refined.stable,
        at_ep,
    }))
}

/// True when the linear spectrum at this point has a near-coalescent pair,
/// the signature of sitting against an EP2.
fn near_exceptional_point(j: f64, gamma: f64) -> bool {
    let Ok(spec) = crate::linalg::eig_general(&crate::model::hamiltonian(j, gamma)) else {
        return false;
    };
    let mut min_gap = f64::INFINITY;
    for a in 0..spec.dim() {
        for b in a + 1..spec.dim() {
            min_gap = min_gap.min((spec.eigenvalues[a] - spec.eigenvalues[b]).norm());
        }
    }
    min_gap < 1e-2 * spec.scale
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
        (0..steps)
            .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
            .collect()
    }

    #[test]
    fn decoupled_double_well_reaches_unit_current() {
        // J=0, U=0: j_ext of the two-mode states is exactly gamma
        let rows = current_sweep(0.0, 0.0, &grid(0.0, 0.95, 20)).unwrap();
        for r in rows.iter().filter(|r| r.pt_defect < 1e-8 && r.branch != 1) {
            assert!(
                (r.j_ext - r.gamma).abs() < 1e-9,
                "gamma={} j={}",
                r.gamma,
                r.j_ext
            );
            assert!(r.j12.abs() < 1e-12, "middle well decoupled");
        }
        match max_current(0.0, 0.0).unwrap() {
            MaxCurrentOutcome::Found(m) => {
                assert!((m.j_max - 1.0).abs() <= 1e-3, "j_max = {}", m.j_max);
                assert!(m.at_ep, "the unit current sits at the EP");
            }
            MaxCurrentOutcome::NoStableCurrent => panic!("double well carries current"),
        }
    }

    #[test]
    fn second_excited_state_peaks_before_the_ep() {
        for j in [0.4, 0.8] {
            let rows = current_sweep(j, 0.0, &default_gamma_grid()).unwrap();
            let best = rows
                .iter()
                .filter(|r| r.mu.im.abs() <= spectrum::IM_TOL && !r.any_broken)
                .max_by(|a, b| a.j_ext.total_cmp(&b.j_ext))
                .unwrap();
            assert_eq!(best.branch, 2, "J={j}: second excited state leads");
            let ep = match spectrum::find_ep2(j, (0.0, 1.4)).unwrap() {
                spectrum::Ep2Outcome::Found(ep) => ep.gamma_ep,
                other => panic!("unexpected {other:?}"),
            };
            assert!(
                best.gamma < ep && best.gamma > 0.85 * ep,
                "slightly before the EP"
            );
        }
    }

    #[test]
    fn excited_states_push_backward_through_the_middle_well() {
        // below the EP the ground state routes particles forward through
        // well 2 while both excited states carry a reverse current
        let rows = current_sweep(0.8, 0.0, &grid(0.02, 0.2, 19)).unwrap();
        for r in rows.iter().filter(|r| r.mu.im.abs() <= spectrum::IM_TOL) {
            match r.branch {
                0 => assert!(r.j12 > 0.0, "ground at gamma={}", r.gamma),
                _ => assert!(r.j12 < 0.0, "branch {} at gamma={}", r.branch, r.gamma),
            }
        }
        // the second excited state's ratio is negative close to its EP
        let near_ep: Vec<&CurrentRow> = rows
            .iter()
            .filter(|r| r.branch == 2 && r.gamma > 0.15 && r.mu.im.abs() <= spectrum::IM_TOL)
            .collect();
        assert!(!near_ep.is_empty());
        for r in near_ep {
            assert!(r.ratio.expect("direct channel carries current") < 0.0);
        }
    }

    #[test]
    fn ratio_approaches_minus_one_near_symmetric_coupling() {
        let rows = current_sweep(0.99, 0.0, &grid(0.001, 0.011, 11)).unwrap();
        let min_ratio = rows
            .iter()
            .filter(|r| r.branch == 2 && r.mu.im.abs() <= spectrum::IM_TOL)
            .filter_map(|r| r.ratio)
            .fold(f64::INFINITY, f64::min);
        assert!(min_ratio <= -0.9, "ratio reaches {min_ratio}");
    }

    #[test]
    fn ground_state_routes_a_third_through_the_middle_well() {
        let rows = current_sweep(0.8, 0.0, &grid(0.05, 0.2, 16)).unwrap();
        for r in rows.iter().filter(|r| r.branch == 0) {
            let share = r.j12 / r.j_ext;
            assert!((share - 1.0 / 3.0).abs() <= 0.1, "share = {share}");
            assert!(r.j12 > 0.0, "ground state pushes forward through well 2");
        }
    }

    #[test]
    fn linear_symmetric_case_has_no_stable_current() {
        match max_current_on_grid(1.0, 0.0, &grid(0.0, 1.0, 81)).unwrap() {
            MaxCurrentOutcome::NoStableCurrent => {}
            MaxCurrentOutcome::Found(m) => {
                panic!(
                    "expected no stable current, found j={} at gamma={}",
                    m.j_max, m.gamma_star
                )
            }
        }
    }

    #[test]
    fn interacting_rows_balance_and_dedup() {
        let g = grid(0.02, 0.3, 15);
        let rows = current_sweep(1.0, 1.0, &g).unwrap();
        for r in &rows {
            if r.pt_defect <= 1e-8 && r.mu.im.abs() <= spectrum::IM_TOL {
                assert!(
                    (r.j_ext - r.j12 - r.j13).abs() <= 1e-9,
                    "balance defect at gamma={}",
                    r.gamma
                );
            }
        }
        // at gamma=0.1 the census-walk sees ground + 4 new + broken states
        let at_01: Vec<&CurrentRow> = rows
            .iter()
            .filter(|r| (r.gamma - 0.1).abs() < 1e-9)
            .collect();
        let symmetric = at_01
            .iter()
            .filter(|r| r.pt_defect <= 1e-8 && r.mu.im.abs() <= spectrum::IM_TOL)
            .count();
        assert_eq!(symmetric, 5);
    }
}
