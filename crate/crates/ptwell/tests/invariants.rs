//! Deterministic grid invariants: realness and odd-order vanishing of the
//! Kato series, partial-sum convergence order, exceptional-point
//! monotonicity, and the square-root branch-point signature.

use ptwell::linalg;
use ptwell::model::{build_h0, build_hp, hamiltonian, parity};
use ptwell::perturbation::{kato_correction, UnperturbedBasis};
use ptwell::spectrum::{find_ep2, Ep2Outcome};

fn basis_for(j: f64) -> UnperturbedBasis {
    UnperturbedBasis::from_hermitian(&build_h0(j), &parity()).unwrap()
}

/// Exact eigenvalue branch continued from the unperturbed level.
fn mu_exact(j: f64, level_mu: f64, gamma: f64) -> ptwell::C64 {
    let spec = linalg::eig_general(&hamiltonian(j, gamma)).unwrap();
    *spec
        .eigenvalues
        .iter()
        .min_by(|a, b| (*a - level_mu).norm().total_cmp(&(*b - level_mu).norm()))
        .unwrap()
}

#[test]
fn kato_corrections_real_and_odd_orders_vanish() {
    let hp = build_hp();
    for k in 0..10 {
        let j = 0.1 * k as f64;
        let basis = basis_for(j);
        for n in 0..3 {
            for s in 1..=6 {
                let term = kato_correction(&basis, &hp, n, s).unwrap();
                assert!(
                    term.value.im.abs() <= 1e-12,
                    "J={j}, n={n}, s={s}: Im = {:.2e}",
                    term.value.im
                );
            }
            for s in [1, 3, 5, 7] {
                let term = kato_correction(&basis, &hp, n, s).unwrap();
                assert!(
                    term.value.norm() <= 1e-12,
                    "J={j}, n={n}, s={s}: |mu_s| = {:.2e}",
                    term.value.norm()
                );
            }
        }
    }
}

#[test]
fn kato_partial_sums_converge_at_seventh_order() {
    // the truncation error after s <= 6 scales as gamma^7 (in fact gamma^8,
    // odd orders vanish); the fit uses the window where the error clears
    // the double-precision floor
    let hp = build_hp();
    for (j, n) in [(0.0, 0), (0.5, 2)] {
        let basis = basis_for(j);
        let mu0 = basis.eigenvalues()[n];
        let coeffs: Vec<f64> = (1..=6)
            .map(|s| kato_correction(&basis, &hp, n, s).unwrap().value.re)
            .collect();
        let mut pts = Vec::new();
        for k in 0..25 {
            let gamma = 1e-3 * (100f64).powf(k as f64 / 24.0); // 1e-3 .. 1e-1
            let mut approx = mu0;
            for (s, c) in coeffs.iter().enumerate() {
                approx += gamma.powi(s as i32 + 1) * c;
            }
            let err = (mu_exact(j, mu0, gamma) - approx).norm();
            if err > 1e-13 {
                pts.push((gamma.ln(), err.ln()));
            }
        }
        assert!(
            pts.len() >= 4,
            "J={j}, n={n}: error at numerical floor everywhere"
        );
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        assert!(slope >= 6.5, "J={j}, n={n}: slope {slope:.2}");
    }
}

#[test]
fn ep_location_weakly_decreases_with_coupling() {
    let mut last = f64::INFINITY;
    for k in 0..=20 {
        let j = 0.05 * k as f64;
        let gamma_ep = match find_ep2(j, (0.0, 1.5)).unwrap() {
            Ep2Outcome::Found(ep) => ep.gamma_ep,
            Ep2Outcome::DegenerateAtZero => 0.0,
        };
        assert!(
            gamma_ep <= last + 1e-7,
            "J={j}: gamma_EP={gamma_ep} rose above {last}"
        );
        last = gamma_ep;
    }
}

#[test]
fn eigenvalue_gap_shows_square_root_branch_point() {
    // just below the EP the coalescing gap scales as sqrt(gamma_EP - gamma)
    let j = 0.4;
    let gamma_ep = match find_ep2(j, (0.0, 1.5)).unwrap() {
        Ep2Outcome::Found(ep) => ep.gamma_ep,
        other => panic!("unexpected {other:?}"),
    };
    let mut pts = Vec::new();
    for k in 0..12 {
        let delta = 1e-5 * (1e3f64).powf(k as f64 / 11.0); // 1e-5 .. 1e-2
        let spec = linalg::eig_general(&hamiltonian(j, gamma_ep - delta)).unwrap();
        // the coalescing pair is the closest pair in the spectrum
        let mut gap = f64::INFINITY;
        for a in 0..3 {
            for b in a + 1..3 {
                gap = gap.min((spec.eigenvalues[a] - spec.eigenvalues[b]).norm());
            }
        }
        pts.push((delta.ln(), gap.ln()));
    }
    let m = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    assert!(
        (slope - 0.5).abs() <= 0.05,
        "branch-point exponent {slope:.3}"
    );
}

#[test]
fn degenerate_splitting_matches_finite_difference_slope() {
    // the first-order rates at J=1 equal the numerical d(Im mu)/d gamma
    use ptwell::perturbation::first_order_splitting;
    let basis = basis_for(1.0);
    let pair = basis.degenerate_clusters()[1].clone();
    let cluster: Vec<Vec<ptwell::C64>> = pair
        .iter()
        .map(|&k| basis.eigenvector(k).to_vec())
        .collect();
    let verdict = first_order_splitting(&cluster, &build_hp()).unwrap();
    let rate = verdict
        .splitting_eigenvalues
        .iter()
        .map(|l| l.im.abs())
        .fold(0.0f64, f64::max);
    let gamma = 1e-4;
    let spec = linalg::eig_general(&hamiltonian(1.0, gamma)).unwrap();
    let slope = spec.max_abs_imag() / gamma;
    assert!(
        (slope - rate).abs() / rate <= 1e-4,
        "finite-difference {slope:.8} vs first-order {rate:.8}"
    );
}
