//! Acceptance suite: one test per criterion, each printing a pass line
//! (visible with `cargo test --test acceptance -- --nocapture`). Tolerances
//! are pinned in code; no criterion defers to later calibration.

use ptwell::currents::{max_current, max_current_on_grid, MaxCurrentOutcome};
use ptwell::cvec::{self, C64};
use ptwell::linalg;
use ptwell::model::{build_h0, build_hp, hamiltonian, parity, StationaryState, SystemParams};
use ptwell::nonlinear::{
    continue_branch, detect_folds, discover_states, solve_stationary, CensusConfig,
    DiscoveredState, StepConfig,
};
use ptwell::par;
use ptwell::perturbation::{
    degenerate_coupling_matrix_unnormalized, first_order_splitting, kato_correction,
    UnperturbedBasis,
};
use ptwell::spectrum::{find_ep2, Ep2Outcome, IM_TOL, PT_DEFECT_TOL};
use ptwell::stability::{bdg_matrix, bdg_spectrum, propagate, Trajectory};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pass(n: usize, what: &str) {
    println!("acceptance criterion {n} ({what}): PASS");
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect()
}

/// Criterion 1: the gamma = 0 spectrum matches the closed-form eigenvalues
/// within 1e-10 for J in {0, 0.25, 0.5, 0.75, 1}.
#[test]
fn criterion_01_unperturbed_spectrum() {
    for j in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let spec = linalg::eig_general(&build_h0(j)).unwrap();
        let root = (2.0 * j * j + 0.25f64).sqrt();
        let mut expect = [-root - 0.5, root - 0.5, 1.0];
        expect.sort_by(f64::total_cmp);
        for (l, e) in spec.eigenvalues.iter().zip(expect) {
            assert!((l - c(e, 0.0)).norm() <= 1e-10, "J={j}: {l} vs {e}");
        }
    }
    pass(1, "unperturbed spectrum");
}

/// Criterion 2: the decoupled double well breaks PT at gamma = 1, located
/// to 1e-7.
#[test]
fn criterion_02_ep2_at_decoupled_well() {
    match find_ep2(0.0, (0.0, 1.5)).unwrap() {
        Ep2Outcome::Found(ep) => {
            assert!(
                (ep.gamma_ep - 1.0).abs() <= 1e-7,
                "gamma_EP = {}",
                ep.gamma_ep
            );
        }
        other => panic!("expected an EP, got {other:?}"),
    }
    pass(2, "EP2 at J=0");
}

/// Criterion 3: the symmetric-coupling degeneracy breaks PT at first order
/// with purely imaginary rates of magnitude 1/sqrt(3), cross-validated
/// against the finite-difference slope, and the unnormalized-basis hook
/// reproduces the reference matrix exactly.
#[test]
fn criterion_03_degenerate_breaking() {
    let basis = UnperturbedBasis::from_hermitian(&build_h0(1.0), &parity()).unwrap();
    let pair = basis
        .degenerate_clusters()
        .into_iter()
        .find(|cl| cl.len() == 2)
        .expect("degenerate pair at J=1");
    let cluster: Vec<Vec<C64>> = pair
        .iter()
        .map(|&k| basis.eigenvector(k).to_vec())
        .collect();
    let verdict = first_order_splitting(&cluster, &build_hp()).unwrap();
    assert!(!verdict.pt_survives);
    let expect = 1.0 / 3f64.sqrt();
    for l in &verdict.splitting_eigenvalues {
        assert!(l.re.abs() <= 1e-10, "purely imaginary, got {l}");
        assert!(
            (l.im.abs() - expect).abs() <= 1e-10,
            "|splitting| = {}",
            l.im.abs()
        );
    }
    // finite-difference slope of the exact eigenvalues at gamma = 1e-4
    let gamma = 1e-4;
    let spec = linalg::eig_general(&hamiltonian(1.0, gamma)).unwrap();
    let slope = spec.max_abs_imag() / gamma;
    assert!(
        (slope - expect).abs() / expect <= 1e-4,
        "slope {slope} vs {expect}"
    );
    // the reference matrix in the unnormalized basis, exactly
    let raw = vec![
        vec![c(1.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)],
        vec![c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)],
    ];
    let m = degenerate_coupling_matrix_unnormalized(&raw, &build_hp()).unwrap();
    assert_eq!(m[(0, 0)], c(0.0, 0.0));
    assert_eq!(m[(1, 1)], c(0.0, 0.0));
    assert_eq!(m[(0, 1)], c(0.0, 2.0));
    assert_eq!(m[(1, 0)], c(0.0, 2.0));
    pass(3, "degenerate PT breaking at J=1");
}

/// Criterion 4: Kato series structure. Odd orders vanish and even orders
/// are real on the J grid; the J=0 ground-state values match the analytic
/// two-mode expansion; the partial-sum error scales with slope >= 6.5.
#[test]
fn criterion_04_kato_series() {
    let hp = build_hp();
    for k in 0..10 {
        let j = 0.1 * k as f64;
        let basis = UnperturbedBasis::from_hermitian(&build_h0(j), &parity()).unwrap();
        for n in 0..3 {
            for s in [1usize, 3, 5, 7] {
                let t = kato_correction(&basis, &hp, n, s).unwrap();
                assert!(
                    t.value.norm() <= 1e-12,
                    "J={j} n={n} s={s}: {:.2e}",
                    t.value.norm()
                );
            }
            for s in [2usize, 4, 6] {
                let t = kato_correction(&basis, &hp, n, s).unwrap();
                assert!(
                    t.value.im.abs() <= 1e-12,
                    "J={j} n={n} s={s}: Im {:.2e}",
                    t.value.im
                );
            }
        }
    }
    // analytic oracle -sqrt(1 - gamma^2) for the J=0 ground state
    let basis = UnperturbedBasis::from_hermitian(&build_h0(0.0), &parity()).unwrap();
    let s2 = kato_correction(&basis, &hp, 0, 2).unwrap().value;
    let s4 = kato_correction(&basis, &hp, 0, 4).unwrap().value;
    assert!((s2 - c(0.5, 0.0)).norm() <= 1e-10, "s=2 -> {s2}");
    assert!((s4 - c(0.125, 0.0)).norm() <= 1e-10, "s=4 -> {s4}");
    // partial-sum error slope on gamma in [1e-3, 1e-1], fitted over the
    // points above the double-precision floor
    let coeffs: Vec<f64> = (1..=6)
        .map(|s| kato_correction(&basis, &hp, 0, s).unwrap().value.re)
        .collect();
    let mut pts = Vec::new();
    for k in 0..25 {
        let gamma = 1e-3 * 100f64.powf(k as f64 / 24.0);
        let mut approx = -1.0;
        for (t, co) in coeffs.iter().enumerate() {
            approx += gamma.powi(t as i32 + 1) * co;
        }
        let exact = -(1.0 - gamma * gamma).sqrt();
        let err = (exact - approx).abs();
        if err > 1e-13 {
            pts.push((gamma.ln(), err.ln()));
        }
    }
    assert!(pts.len() >= 4, "need points above the floating floor");
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    assert!(slope >= 6.5, "slope = {slope:.2}");
    pass(4, "Kato series");
}

/// Criterion 5: conjugate-pair closure of the spectrum for 1e4 random
/// parameter points within 1e-10.
#[test]
fn criterion_05_conjugate_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x434c4f53);
    let points: Vec<(f64, f64)> = (0..10_000)
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let v = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            (1.2 * u, 2.0 * v)
        })
        .collect();
    let failures: Vec<Option<(f64, f64)>> = par::map_slice(&points, |&(j, gamma)| {
        let spec = linalg::eig_general(&hamiltonian(j, gamma)).unwrap();
        let mut used = [false; 3];
        for l in &spec.eigenvalues {
            let target = l.conj();
            let best = (0..3)
                .filter(|&k| !used[k])
                .min_by(|&a, &b| {
                    (spec.eigenvalues[a] - target)
                        .norm()
                        .total_cmp(&(spec.eigenvalues[b] - target).norm())
                })
                .unwrap();
            if (spec.eigenvalues[best] - target).norm() > 1e-10 {
                return Some((j, gamma));
            }
            used[best] = true;
        }
        None
    });
    let bad: Vec<_> = failures.into_iter().flatten().collect();
    assert!(bad.is_empty(), "closure violated at {bad:?}");
    pass(5, "conjugate-pair closure on 10^4 points");
}

/// Criterion 6: current balance on the linear figure grids, the unit
/// current of the decoupled double well, the ratio -> -1 near symmetric
/// coupling, and the one-third channel share of the J=0.8 ground state.
#[test]
fn criterion_06_current_balance_and_figures() {
    // balance for every converged PT-symmetric state on the figure grids
    let g = grid(0.0, 1.5, 301);
    for j in [0.0, 0.1, 0.4, 0.8] {
        let rows = ptwell::currents::current_sweep(j, 0.0, &g).unwrap();
        for r in rows.iter().filter(|r| {
            r.pt_defect <= PT_DEFECT_TOL
                && r.mu.im.abs() <= IM_TOL
                && r.residual <= ptwell::model::STATE_RESIDUAL_TOL
        }) {
            assert!(
                (r.j_ext - r.j12 - r.j13).abs() <= 1e-9,
                "J={j}, gamma={}: balance defect {:.2e}",
                r.gamma,
                (r.j_ext - r.j12 - r.j13).abs()
            );
        }
    }
    // maximum current of the double well reaches 1 as gamma -> 1
    match max_current(0.0, 0.0).unwrap() {
        MaxCurrentOutcome::Found(m) => {
            assert!((m.j_max - 1.0).abs() <= 1e-3, "j_max = {}", m.j_max);
        }
        MaxCurrentOutcome::NoStableCurrent => panic!("double well supports currents"),
    }
    // second-excited ratio approaches -1 at J = 0.99
    let rows = ptwell::currents::current_sweep(0.99, 0.0, &grid(0.001, 0.011, 11)).unwrap();
    let min_ratio = rows
        .iter()
        .filter(|r| r.branch == 2 && r.mu.im.abs() <= IM_TOL)
        .filter_map(|r| r.ratio)
        .fold(f64::INFINITY, f64::min);
    assert!(min_ratio <= -0.9, "ratio reaches {min_ratio}");
    // ground state at J = 0.8 routes a third of the current through well 2
    let rows = ptwell::currents::current_sweep(0.8, 0.0, &grid(0.05, 0.2, 16)).unwrap();
    for r in rows.iter().filter(|r| r.branch == 0) {
        let share = r.j12 / r.j_ext;
        assert!((share - 1.0 / 3.0).abs() <= 0.1, "share = {share}");
    }
    pass(6, "current balance and linear figures");
}

/// The linear eigenstates at (J, gamma) continued in U to the target value.
fn linear_continued(j: f64, gamma: f64, u_target: f64) -> Vec<StationaryState> {
    let spec = linalg::eig_general(&hamiltonian(j, gamma)).unwrap();
    let mut out = Vec::new();
    for k in 0..3 {
        let v = &spec.eigenvectors[k];
        let mut psi = [v[0], v[1], v[2]];
        let mut mu = spec.eigenvalues[k];
        let steps = 20;
        let mut ok = true;
        for step in 1..=steps {
            let u = u_target * step as f64 / steps as f64;
            let params = SystemParams::new(j, gamma, u).unwrap();
            match solve_stationary(&params, &psi, mu) {
                Ok(st) => {
                    psi = *st.psi();
                    mu = st.mu();
                }
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            out.push(StationaryState::new(
                psi,
                mu,
                SystemParams::new(j, gamma, u_target).unwrap(),
            ));
        }
    }
    out
}

fn new_pt_symmetric_states(j: f64, gamma: f64, u: f64) -> Vec<DiscoveredState> {
    let params = SystemParams::new(j, gamma, u).unwrap();
    let census = discover_states(&params, &CensusConfig::default());
    let continued = linear_continued(j, gamma, u);
    census
        .into_iter()
        .filter(|d| d.pt_defect <= PT_DEFECT_TOL && d.state.mu().im.abs() <= IM_TOL)
        .filter(|d| {
            !continued.iter().any(|cont| {
                cvec::aligned_distance(cont.psi(), d.state.psi()) <= 1e-6
                    && (cont.mu() - d.state.mu()).norm() <= 1e-8
            })
        })
        .collect()
}

/// Criterion 7: the nonlinear census at (J=1, U=1, gamma=0.1) holds exactly
/// four new PT-symmetric states (3 stable, 1 unstable) terminating in two
/// folds; at U=4 only the highest-mu new state stays stable.
#[test]
fn criterion_07_nonlinear_census() {
    let fresh = new_pt_symmetric_states(1.0, 0.1, 1.0);
    assert_eq!(fresh.len(), 4, "exactly four new PT-symmetric states");
    let mut stable = 0;
    let mut unstable = 0;
    for d in &fresh {
        let rep = bdg_spectrum(&d.state).unwrap();
        if rep.stable {
            stable += 1;
        } else {
            unstable += 1;
        }
    }
    assert_eq!((stable, unstable), (3, 1), "three stable, one unstable");
    // the four states vanish in exactly two tangent bifurcations
    let config = StepConfig {
        gamma_range: (0.02, 1.4),
        ..StepConfig::default()
    };
    let mut folds: Vec<f64> = Vec::new();
    for d in &fresh {
        let run = continue_branch(&d.state, 1, &config).unwrap();
        for fold in detect_folds(&run.branch) {
            if !folds.iter().any(|g| (g - fold.gamma_fold).abs() <= 1e-3) {
                folds.push(fold.gamma_fold);
            }
        }
    }
    assert_eq!(folds.len(), 2, "two independent folds, got {folds:?}");
    // at U=4 only the highest-mu new state is stable
    let fresh4 = new_pt_symmetric_states(1.0, 0.1, 4.0);
    assert_eq!(fresh4.len(), 4);
    let verdicts: Vec<bool> = fresh4
        .iter()
        .map(|d| bdg_spectrum(&d.state).unwrap().stable)
        .collect();
    let highest = fresh4
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.state.mu().re.total_cmp(&b.state.mu().re))
        .map(|(k, _)| k)
        .unwrap();
    for (k, stable) in verdicts.iter().enumerate() {
        assert_eq!(
            *stable,
            k == highest,
            "state {k} (mu={})",
            fresh4[k].state.mu()
        );
    }
    pass(7, "nonlinear census, stability split, and folds");
}

/// Criterion 8: the stable-current maximum at (J=1, U=2) reaches 0.30 +-
/// 0.05, while the linear symmetric case supports no stable current.
#[test]
fn criterion_08_nonlinear_current_maximum() {
    match max_current(1.0, 2.0).unwrap() {
        MaxCurrentOutcome::Found(m) => {
            assert!((m.j_max - 0.30).abs() <= 0.05, "j_max = {}", m.j_max);
        }
        MaxCurrentOutcome::NoStableCurrent => panic!("U=2 supports stable currents"),
    }
    match max_current_on_grid(1.0, 0.0, &grid(0.0, 1.0, 201)).unwrap() {
        MaxCurrentOutcome::NoStableCurrent => {}
        MaxCurrentOutcome::Found(m) => {
            panic!(
                "linear symmetric case: unexpected stable current {} at {}",
                m.j_max, m.gamma_star
            )
        }
    }
    pass(8, "nonlinear current maximum");
}

/// Criterion 9: BdG structure. The spectrum is closed under omega ->
/// -omega*, the global-phase zero mode annihilates the BdG matrix for every
/// real-mu state, and at U=0 the verdict coincides with the reality of the
/// linear spectrum.
#[test]
fn criterion_09_bdg_structure() {
    // sample linear and nonlinear states
    let mut states: Vec<StationaryState> = Vec::new();
    for (j, gamma, u) in [(0.4, 0.3, 0.0), (1.0, 0.1, 0.0), (0.0, 0.5, 0.0)] {
        let spec = linalg::eig_general(&hamiltonian(j, gamma)).unwrap();
        for k in 0..3 {
            let v = &spec.eigenvectors[k];
            states.push(StationaryState::new(
                [v[0], v[1], v[2]],
                spec.eigenvalues[k],
                SystemParams::new(j, gamma, u).unwrap(),
            ));
        }
    }
    for u in [1.0, 4.0] {
        let params = SystemParams::new(1.0, 0.1, u).unwrap();
        states.extend(
            discover_states(&params, &CensusConfig::default())
                .into_iter()
                .map(|d| d.state),
        );
    }
    for st in &states {
        let rep = bdg_spectrum(st).unwrap();
        for o in &rep.omegas {
            let mirror = -o.conj();
            let dist = rep
                .omegas
                .iter()
                .map(|w| (w - mirror).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(dist <= 1e-9, "mirror of {o} missing by {dist:.2e}");
        }
        if st.has_real_mu() {
            // the global-phase mode annihilates the BdG matrix...
            let m = bdg_matrix(st).unwrap();
            let psi = st.psi();
            let mut mode = [
                psi[0],
                psi[1],
                psi[2],
                -psi[0].conj(),
                -psi[1].conj(),
                -psi[2].conj(),
            ];
            cvec::normalize(&mut mode);
            let image = m.apply(&mode);
            assert!(
                cvec::norm(&image) <= 1e-8,
                "zero mode violated: {:.2e}",
                cvec::norm(&image)
            );
            // ...and omega = 0 appears in the report
            let min_mod = rep
                .omegas
                .iter()
                .map(|o| o.norm())
                .fold(f64::INFINITY, f64::min);
            assert!(min_mod <= 1e-8);
        }
    }
    // U=0 verdict equals spectral reality on an EP-avoiding grid
    for j in [0.0, 0.3, 0.6, 0.9] {
        for k in 0..40 {
            let gamma = 0.003 + 0.037 * k as f64;
            let spec = linalg::eig_general(&hamiltonian(j, gamma)).unwrap();
            let all_real = spec.max_abs_imag() <= IM_TOL;
            for idx in 0..3 {
                if spec.defective[idx] {
                    continue;
                }
                let v = &spec.eigenvectors[idx];
                let st = StationaryState::new(
                    [v[0], v[1], v[2]],
                    spec.eigenvalues[idx],
                    SystemParams::linear(j, gamma).unwrap(),
                );
                let rep = bdg_spectrum(&st).unwrap();
                assert_eq!(
                    rep.stable, all_real,
                    "J={j}, gamma={gamma}, state {idx}: verdict {} vs reality {}",
                    rep.stable, all_real
                );
            }
        }
    }
    pass(9, "BdG structural checks");
}

/// Least-squares growth rate of the stationarity deviation inside the
/// linear-response window.
fn fitted_growth_rate(traj: &Trajectory) -> Option<f64> {
    let d0 = traj.deviation.iter().copied().find(|&d| d > 0.0)?;
    let pts: Vec<(f64, f64)> = traj
        .times
        .iter()
        .zip(&traj.deviation)
        .filter(|&(_, &d)| d > 3.0 * d0 && d < 1e-2)
        .map(|(&t, &d)| (t, d.ln()))
        .collect();
    if pts.len() < 8 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
}

fn linear_state(j: f64, gamma: f64, level: usize) -> StationaryState {
    let spec = linalg::eig_general(&hamiltonian(j, gamma)).unwrap();
    let v = &spec.eigenvectors[level];
    StationaryState::new(
        [v[0], v[1], v[2]],
        spec.eigenvalues[level],
        SystemParams::linear(j, gamma).unwrap(),
    )
}

fn census_state(j: f64, gamma: f64, u: f64, mu_near: f64) -> StationaryState {
    let params = SystemParams::new(j, gamma, u).unwrap();
    discover_states(&params, &CensusConfig::default())
        .into_iter()
        .filter(|d| d.state.mu().im.abs() <= IM_TOL)
        .min_by(|a, b| {
            (a.state.mu().re - mu_near)
                .abs()
                .total_cmp(&(b.state.mu().re - mu_near).abs())
        })
        .expect("census state near requested mu")
        .state
}

/// Criterion 10: propagation cross-check. Kicked unstable states grow at
/// the BdG rate within 20%; unkicked stable states stay within 1e-6 of
/// stationarity for t <= 50.
#[test]
fn criterion_10_propagation_oracle() {
    let unstable = [
        linear_state(1.0, 0.1, 0),
        linear_state(0.5, 0.6, 0),
        census_state(1.0, 0.1, 1.0, 1.4707),
        census_state(1.0, 0.1, 4.0, 2.9899),
        census_state(1.0, 0.1, 4.0, 2.3344),
    ];
    for st in &unstable {
        let rep = bdg_spectrum(st).unwrap();
        assert!(!rep.stable, "state chosen as unstable");
        let kick_scale = 1e-5 / 3f64.sqrt();
        let kick = [c(kick_scale, 0.0), c(0.0, kick_scale), c(-kick_scale, 0.0)];
        let t_end = (4.5 / rep.max_im).clamp(20.0, 120.0);
        let traj = propagate(st, &kick, t_end, 1e-3).unwrap();
        let rate = fitted_growth_rate(&traj).expect("visible growth");
        let rel = (rate - rep.max_im).abs() / rep.max_im;
        assert!(
            rel <= 0.2,
            "mu={}, measured {rate:.4} vs BdG {:.4} ({rel:.2})",
            st.mu(),
            rep.max_im
        );
    }
    let stable = [
        linear_state(0.0, 0.5, 0),
        linear_state(0.4, 0.3, 0),
        linear_state(0.8, 0.1, 0),
        census_state(1.0, 0.1, 1.0, 1.3476),
        census_state(1.0, 0.1, 1.0, 1.5563),
    ];
    for st in &stable {
        let rep = bdg_spectrum(st).unwrap();
        assert!(rep.stable, "state chosen as stable (max_im {})", rep.max_im);
        let traj = propagate(st, &[c(0.0, 0.0); 3], 50.0, 1e-3).unwrap();
        assert!(traj.diverged_at.is_none());
        let max_dev = traj.deviation.iter().fold(0.0f64, |m, &d| m.max(d));
        assert!(max_dev <= 1e-6, "mu={}: deviation {max_dev:.2e}", st.mu());
    }
    pass(10, "propagation oracle");
}

/// Criterion 11: two consecutive figure-5 runs produce byte-identical CSVs.
#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_ptwell"))
            .args(["fig", "--n", "5", "--out-dir", out.to_str().unwrap()])
            .status()
            .expect("binary runs");
        assert!(status.success());
        out
    };
    let a = run("first");
    let b = run("second");
    let mut names: Vec<String> = std::fs::read_dir(&a)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    assert!(!names.is_empty());
    for name in names {
        let left = std::fs::read(a.join(&name)).unwrap();
        let right = std::fs::read(b.join(&name)).unwrap();
        assert_eq!(left, right, "{name} differs between runs");
    }
    pass(11, "byte-identical figure data");
}
