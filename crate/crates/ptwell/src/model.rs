//! The triple-well model: Hamiltonian builders, symmetry checks, the
//! Gross-Pitaevskii residual, stationary states, and particle currents.
//!
//! Wells 1 and 3 carry the gain and loss (`+i gamma`, `-i gamma`) and are
//! coupled with fixed strength 1; the middle well couples to both with
//! strength `J`. All quantities are in dimensionless model units.

use crate::cvec::{self, C64};
use crate::linalg::{ComplexMatrix, LinalgError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("parameter {name} is not finite")]
    NonFiniteParam { name: &'static str },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Residual norm below which a state counts as converged.
pub const STATE_RESIDUAL_TOL: f64 = 1e-10;

/// Model point `(J, gamma, U)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Coupling strength to the middle well.
    pub j: f64,
    /// Gain/loss rate on the outer wells.
    pub gamma: f64,
    /// On-site interaction strength.
    pub u: f64,
}

impl SystemParams {
    pub fn new(j: f64, gamma: f64, u: f64) -> Result<Self, ModelError> {
        if !j.is_finite() {
            return Err(ModelError::NonFiniteParam { name: "j" });
        }
        if !gamma.is_finite() {
            return Err(ModelError::NonFiniteParam { name: "gamma" });
        }
        if !u.is_finite() {
            return Err(ModelError::NonFiniteParam { name: "u" });
        }
        Ok(Self { j, gamma, u })
    }

    pub fn linear(j: f64, gamma: f64) -> Result<Self, ModelError> {
        Self::new(j, gamma, 0.0)
    }

    /// J < 0 is accepted by every formula but lies outside the regime the
    /// model targets; front ends flag such runs.
    pub fn outside_standard_regime(&self) -> bool {
        self.j < 0.0
    }
}

/// Hermitian hopping matrix: wells 1-3 coupled with strength 1, the middle
/// well with strength `J` to both.
pub fn build_h0(j: f64) -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let mj = C64::new(-j, 0.0);
    let m1 = C64::new(-1.0, 0.0);
    ComplexMatrix::new(3, vec![z, mj, m1, mj, z, mj, m1, mj, z]).expect("static 3x3")
}

/// Anti-Hermitian gain/loss matrix `diag(i, 0, -i)`.
pub fn build_hp() -> ComplexMatrix {
    ComplexMatrix::diag(&[C64::new(0.0, 1.0), C64::new(0.0, 0.0), C64::new(0.0, -1.0)])
}

/// Parity operator: reversal of the well order (antidiagonal ones).
pub fn parity() -> ComplexMatrix {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    ComplexMatrix::new(3, vec![z, z, one, z, one, z, one, z, z]).expect("static 3x3")
}

/// Full linear Hamiltonian `H0(J) + gamma * HP`.
pub fn hamiltonian(j: f64, gamma: f64) -> ComplexMatrix {
    build_h0(j)
        .add(&build_hp().scaled(C64::new(gamma, 0.0)))
        .expect("same dim")
}

/// Defect norms of the pseudo-Hermiticity relations.
///
/// `h0_ok` requires `P H0 = H0^† P = H0 P` (Hermitian and parity-symmetric),
/// `hp_ok` requires `P HP = HP^† P = -HP P` (anti-Hermitian and parity-odd).
#[derive(Debug, Clone)]
pub struct PseudoHermiticityReport {
    pub h0_ok: bool,
    pub hp_ok: bool,
    /// `||P H0 - H0^† P||`
    pub h0_pseudo_defect: f64,
    /// `||H0^† P - H0 P||`
    pub h0_symmetry_defect: f64,
    /// `||P HP - HP^† P||`
    pub hp_pseudo_defect: f64,
    /// `||HP^† P + HP P||`
    pub hp_antisymmetry_defect: f64,
}

const PSEUDO_TOL: f64 = 1e-12;

pub fn check_pseudo_hermitian(
    h0: &ComplexMatrix,
    hp: &ComplexMatrix,
    p: &ComplexMatrix,
) -> Result<PseudoHermiticityReport, ModelError> {
    let h0_pseudo = p.mul(h0)?.sub(&h0.adjoint().mul(p)?)?.frobenius_norm();
    let h0_sym = h0.adjoint().mul(p)?.sub(&h0.mul(p)?)?.frobenius_norm();
    let hp_pseudo = p.mul(hp)?.sub(&hp.adjoint().mul(p)?)?.frobenius_norm();
    let hp_anti = hp.adjoint().mul(p)?.add(&hp.mul(p)?)?.frobenius_norm();
    Ok(PseudoHermiticityReport {
        h0_ok: h0_pseudo <= PSEUDO_TOL && h0_sym <= PSEUDO_TOL,
        hp_ok: hp_pseudo <= PSEUDO_TOL && hp_anti <= PSEUDO_TOL,
        h0_pseudo_defect: h0_pseudo,
        h0_symmetry_defect: h0_sym,
        hp_pseudo_defect: hp_pseudo,
        hp_antisymmetry_defect: hp_anti,
    })
}

/// Componentwise residual of the stationary three-mode GPE,
/// `sum_j H_ij psi_j + U |psi_i|^2 psi_i - mu psi_i`.
pub fn gpe_residual(psi: &[C64; 3], mu: C64, params: &SystemParams) -> [C64; 3] {
    let h = hamiltonian(params.j, params.gamma);
    let hpsi = h.apply(psi);
    let mut out = [C64::new(0.0, 0.0); 3];
    for i in 0..3 {
        out[i] = hpsi[i] + params.u * psi[i].norm_sqr() * psi[i] - mu * psi[i];
    }
    out
}

pub fn gpe_residual_norm(psi: &[C64; 3], mu: C64, params: &SystemParams) -> f64 {
    cvec::norm(&gpe_residual(psi, mu, params))
}

/// A normalized, gauge-fixed stationary state of the GPE at a model point.
///
/// Normalization is `sum |psi_i|^2 = 1`; the global phase makes `psi_2`
/// real and non-negative when it carries weight, otherwise the
/// largest-modulus component. `mu` may be complex (PT-broken nonlinear
/// states are representable); `residual_norm` is recomputed after the
/// gauge fix.
#[derive(Debug, Clone)]
pub struct StationaryState {
    psi: [C64; 3],
    mu: C64,
    params: SystemParams,
    residual_norm: f64,
}

impl StationaryState {
    /// Normalizes, fixes the gauge, and records the residual of the given
    /// amplitudes. The caller decides what residual it accepts; solvers in
    /// this crate enforce [`STATE_RESIDUAL_TOL`].
    pub fn new(mut psi: [C64; 3], mu: C64, params: SystemParams) -> Self {
        cvec::normalize(&mut psi);
        gauge_fix(&mut psi);
        let residual_norm = gpe_residual_norm(&psi, mu, &params);
        Self {
            psi,
            mu,
            params,
            residual_norm,
        }
    }

    pub fn psi(&self) -> &[C64; 3] {
        &self.psi
    }

    pub fn mu(&self) -> C64 {
        self.mu
    }

    pub fn params(&self) -> SystemParams {
        self.params
    }

    pub fn residual_norm(&self) -> f64 {
        self.residual_norm
    }

    pub fn is_converged(&self) -> bool {
        self.residual_norm <= STATE_RESIDUAL_TOL
    }

    /// True when the chemical potential is real to spectral accuracy.
    pub fn has_real_mu(&self) -> bool {
        self.mu.im.abs() <= 1e-10
    }
}

/// Global-phase gauge: `psi_2` real >= 0 when it carries weight, otherwise
/// the largest-modulus component.
fn gauge_fix(psi: &mut [C64; 3]) {
    let idx = if psi[1].norm() > 1e-12 {
        1
    } else {
        cvec::argmax_modulus(psi)
    };
    let m = psi[idx].norm();
    if m > 0.0 {
        let rot = (psi[idx] / m).conj();
        for z in psi.iter_mut() {
            *z *= rot;
        }
        psi[idx] = C64::new(psi[idx].re.abs(), 0.0);
    }
}

/// Particle currents of a stationary state.
///
/// `j_ext` is the external influx into the gain well, `j12` the current from
/// well 1 to 2, `j13` from well 1 to 3; positive `j12` means net flow 1->2.
/// For a converged state with real `mu` the continuity equation forces
/// `j_ext = j12 + j13`.
#[derive(Debug, Clone, Copy)]
pub struct CurrentReport {
    pub j_ext: f64,
    pub j12: f64,
    pub j13: f64,
    pub balance_defect: f64,
}

/// Evaluates the current balance of a state. Meaningful for residuals below
/// 1e-8; larger residuals leak into `balance_defect`.
pub fn currents(state: &StationaryState) -> CurrentReport {
    let psi = state.psi();
    let p = state.params();
    let j_ext = 2.0 * p.gamma * psi[0].norm_sqr();
    let j12 = 2.0 * p.j * (psi[0].conj() * psi[1]).im;
    let j13 = 2.0 * (psi[0].conj() * psi[2]).im;
    CurrentReport {
        j_ext,
        j12,
        j13,
        balance_defect: (j_ext - j12 - j13).abs(),
    }
}
