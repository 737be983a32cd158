//! Stationary states of the interacting three-mode GPE: damped Newton
//! solver, multistart discovery of coexisting states, pseudo-arclength
//! continuation through folds, and fold (tangent-bifurcation) detection.
//!
//! The stationarity problem is solved in real form: unknowns are
//! `(Re psi, Im psi, Re mu, Im mu)` constrained by the six residual
//! components, the normalization, and a phase gauge pinning the imaginary
//! part of one amplitude. Complex `mu` is representable throughout, so
//! PT-broken nonlinear states are first-class citizens.

use crate::cvec::{self, C64};
use crate::linalg::{ComplexMatrix, LinalgError, Lu};
use crate::model::{
    build_h0, gpe_residual_norm, StationaryState, SystemParams, STATE_RESIDUAL_TOL,
};
use crate::par;
use crate::spectrum::{pt_defect, Branch, BranchLabels, SweptParam};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("Newton did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("Jacobian singular to working precision (condition estimate {condition:.3e})")]
    SingularJacobian { condition: f64 },
    #[error("seed vector is zero")]
    ZeroSeed,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, SolveError>;

/// Newton iteration limits; the defaults satisfy every solver contract in
/// this crate.
#[derive(Debug, Clone, Copy)]
pub struct NewtonSettings {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
}

impl Default for NewtonSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 200,
            max_halvings: 8,
        }
    }
}

/// Per-solve diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub residual: f64,
    /// Pivot-spread estimate of the Jacobian condition number at the
    /// solution; finite at regular solutions, huge on non-isolated solution
    /// manifolds and at folds.
    pub condition_estimate: f64,
    /// The seed already satisfied the equations to tolerance.
    pub converged_at_entry: bool,
}

// ---------------------------------------------------------------------------
// real 8-dimensional Newton system
// ---------------------------------------------------------------------------

/// Unknown layout: [x1, y1, x2, y2, x3, y3, Re mu, Im mu].
#[derive(Debug, Clone, Copy)]
struct RealSystem {
    params: SystemParams,
    gauge: usize,
}

const NDIM: usize = 8;

impl RealSystem {
    fn pack(psi: &[C64; 3], mu: C64) -> [f64; NDIM] {
        [
            psi[0].re, psi[0].im, psi[1].re, psi[1].im, psi[2].re, psi[2].im, mu.re, mu.im,
        ]
    }

    fn unpack(u: &[f64; NDIM]) -> ([C64; 3], C64) {
        (
            [
                C64::new(u[0], u[1]),
                C64::new(u[2], u[3]),
                C64::new(u[4], u[5]),
            ],
            C64::new(u[6], u[7]),
        )
    }

    fn residual(&self, u: &[f64; NDIM]) -> [f64; NDIM] {
        let (psi, mu) = Self::unpack(u);
        let p = &self.params;
        let h0 = [[0.0, -p.j, -1.0], [-p.j, 0.0, -p.j], [-1.0, -p.j, 0.0]];
        let d = [p.gamma, 0.0, -p.gamma];
        let mut out = [0.0; NDIM];
        for i in 0..3 {
            let (x, y) = (psi[i].re, psi[i].im);
            let r2 = x * x + y * y;
            let mut hr_x = 0.0;
            let mut hr_y = 0.0;
            for j in 0..3 {
                hr_x += h0[i][j] * psi[j].re;
                hr_y += h0[i][j] * psi[j].im;
            }
            out[2 * i] = hr_x - d[i] * y + p.u * r2 * x - mu.re * x + mu.im * y;
            out[2 * i + 1] = hr_y + d[i] * x + p.u * r2 * y - mu.re * y - mu.im * x;
        }
        out[6] = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0;
        out[7] = u[2 * self.gauge + 1];
        out
    }

    /// Analytic Jacobian, plus the gamma column used by continuation.
    fn jacobian(&self, u: &[f64; NDIM]) -> ([[f64; NDIM]; NDIM], [f64; NDIM]) {
        let (psi, mu) = Self::unpack(u);
        let p = &self.params;
        let h0 = [[0.0, -p.j, -1.0], [-p.j, 0.0, -p.j], [-1.0, -p.j, 0.0]];
        let d = [p.gamma, 0.0, -p.gamma];
        let dsign = [1.0, 0.0, -1.0];
        let mut jac = [[0.0; NDIM]; NDIM];
        let mut dgamma = [0.0; NDIM];
        for i in 0..3 {
            let (x, y) = (psi[i].re, psi[i].im);
            for j in 0..3 {
                jac[2 * i][2 * j] += h0[i][j];
                jac[2 * i + 1][2 * j + 1] += h0[i][j];
            }
            jac[2 * i][2 * i] += p.u * (3.0 * x * x + y * y) - mu.re;
            jac[2 * i][2 * i + 1] += -d[i] + 2.0 * p.u * x * y + mu.im;
            jac[2 * i][6] = -x;
            jac[2 * i][7] = y;
            jac[2 * i + 1][2 * i] += d[i] + 2.0 * p.u * x * y - mu.im;
            jac[2 * i + 1][2 * i + 1] += p.u * (x * x + 3.0 * y * y) - mu.re;
            jac[2 * i + 1][6] = -y;
            jac[2 * i + 1][7] = -x;
            dgamma[2 * i] = -dsign[i] * y;
            dgamma[2 * i + 1] = dsign[i] * x;
        }
        for i in 0..3 {
            jac[6][2 * i] = 2.0 * psi[i].re;
            jac[6][2 * i + 1] = 2.0 * psi[i].im;
        }
        jac[7][2 * self.gauge + 1] = 1.0;
        (jac, dgamma)
    }
}

fn norm8(v: &[f64; NDIM]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn to_matrix(jac: &[[f64; NDIM]; NDIM]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(NDIM);
    for i in 0..NDIM {
        for j in 0..NDIM {
            m[(i, j)] = C64::new(jac[i][j], 0.0);
        }
    }
    m
}

fn newton_solve(
    system: &RealSystem,
    mut u: [f64; NDIM],
    settings: &NewtonSettings,
) -> Result<([f64; NDIM], SolveDiagnostics)> {
    let mut r = system.residual(&u);
    let mut rn = norm8(&r);
    let converged_at_entry = rn <= settings.tolerance;
    let mut iterations = 0;
    while rn > settings.tolerance {
        if iterations >= settings.max_iterations {
            return Err(SolveError::NoConvergence {
                iterations,
                residual: rn,
            });
        }
        iterations += 1;
        let (jac, _) = system.jacobian(&u);
        let m = to_matrix(&jac);
        let scale = m.max_row_sum_norm().max(f64::MIN_POSITIVE);
        let lu = match Lu::factor(&m, 1e-14 * scale, None) {
            Ok(lu) => lu,
            Err(LinalgError::Singular { pivot }) => {
                return Err(SolveError::SingularJacobian {
                    condition: if pivot > 0.0 {
                        scale / pivot
                    } else {
                        f64::INFINITY
                    },
                });
            }
            Err(e) => return Err(e.into()),
        };
        let rhs: Vec<C64> = r.iter().map(|&x| C64::new(-x, 0.0)).collect();
        let step = lu.solve(&rhs);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=settings.max_halvings {
            let mut candidate = u;
            for k in 0..NDIM {
                candidate[k] += lambda * step[k].re;
            }
            let cr = system.residual(&candidate);
            let crn = norm8(&cr);
            if crn < rn {
                u = candidate;
                r = cr;
                rn = crn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(SolveError::NoConvergence {
                iterations,
                residual: rn,
            });
        }
    }
    // condition of the Jacobian at the solution; infinite on non-isolated
    // solution manifolds, which the census uses to reject such points
    let (jac, _) = system.jacobian(&u);
    let condition = match Lu::factor(&to_matrix(&jac), 0.0, Some(f64::MIN_POSITIVE)) {
        Ok(lu) => lu.condition_estimate(),
        Err(_) => f64::INFINITY,
    };
    Ok((
        u,
        SolveDiagnostics {
            iterations,
            residual: rn,
            condition_estimate: condition,
            converged_at_entry,
        },
    ))
}

/// Solves the stationary GPE from a seed by damped Newton iteration.
///
/// The output is normalized and gauge-fixed; `mu` may come out complex.
/// Convergence means the full constrained residual falls below `1e-12` and
/// the plain GPE residual of the returned state below `1e-10`.
pub fn solve_stationary(
    params: &SystemParams,
    seed: &[C64; 3],
    mu_seed: C64,
) -> Result<StationaryState> {
    solve_stationary_with(params, seed, mu_seed, &NewtonSettings::default()).map(|(s, _)| s)
}

/// [`solve_stationary`] with explicit settings and diagnostics.
pub fn solve_stationary_with(
    params: &SystemParams,
    seed: &[C64; 3],
    mu_seed: C64,
    settings: &NewtonSettings,
) -> Result<(StationaryState, SolveDiagnostics)> {
    let mut psi = *seed;
    if cvec::normalize(&mut psi) == 0.0 {
        return Err(SolveError::ZeroSeed);
    }
    let gauge = cvec::argmax_modulus(&psi);
    // rotate the seed so the gauge constraint starts satisfied
    let rot = (psi[gauge] / psi[gauge].norm()).conj();
    for z in psi.iter_mut() {
        *z *= rot;
    }
    let system = RealSystem {
        params: *params,
        gauge,
    };
    let u = RealSystem::pack(&psi, mu_seed);
    let (u, diag) = newton_solve(&system, u, settings)?;
    let (psi, mu) = RealSystem::unpack(&u);
    let state = StationaryState::new(psi, mu, *params);
    if !state.is_converged() {
        return Err(SolveError::NoConvergence {
            iterations: diag.iterations,
            residual: state.residual_norm(),
        });
    }
    Ok((state, diag))
}

/// Rayleigh quotient of a normalized vector under `H + U diag(|psi|^2)`;
/// the standard parameter-free chemical-potential seed.
pub fn rayleigh_mu(params: &SystemParams, psi: &[C64; 3]) -> C64 {
    let mut v = *psi;
    cvec::normalize(&mut v);
    let h = crate::model::hamiltonian(params.j, params.gamma);
    let hv = h.apply(&v);
    let mut mu = C64::new(0.0, 0.0);
    for i in 0..3 {
        mu += v[i].conj() * (hv[i] + params.u * v[i].norm_sqr() * v[i]);
    }
    mu
}

// ---------------------------------------------------------------------------
// multistart census
// ---------------------------------------------------------------------------

/// Seeding and deduplication policy for [`discover_states`].
#[derive(Debug, Clone)]
pub struct CensusConfig {
    /// Amplitudes `a` of the PT-symmetric ansatz `(a e^{i phi}, b, a e^{-i
    /// phi})` with `b` fixed by normalization.
    pub ansatz_amplitudes: Vec<f64>,
    /// Phases `phi` of the ansatz family.
    pub ansatz_phases: Vec<f64>,
    /// Number of reproducible pseudo-random seeds.
    pub random_seed_count: usize,
    /// Stream seed of the census generator; fixed so repeated runs are
    /// byte-identical.
    pub rng_seed: u64,
    /// Gauge-aligned distance below which two states are the same.
    pub dedup_psi_radius: f64,
    /// Chemical-potential distance for deduplication.
    pub dedup_mu_radius: f64,
    /// Solutions whose Jacobian condition estimate exceeds this cap sit on
    /// a non-isolated solution manifold (degenerate linear point) and are
    /// dropped unless the seed itself was already stationary.
    pub singular_condition_cap: f64,
}

impl Default for CensusConfig {
    fn default() -> Self {
        Self {
            ansatz_amplitudes: (1..=7).map(|k| 0.1 * k as f64).collect(),
            ansatz_phases: (-4..=4)
                .map(|k| k as f64 * std::f64::consts::PI / 8.0)
                .collect(),
            random_seed_count: 64,
            rng_seed: 0x5054_5745_4c4c,
            dedup_psi_radius: 1e-6,
            dedup_mu_radius: 1e-8,
            singular_condition_cap: 1e10,
        }
    }
}

/// A census member with its PT defect tag.
#[derive(Debug, Clone)]
pub struct DiscoveredState {
    pub state: StationaryState,
    pub pt_defect: f64,
}

fn uniform_pm1(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) * 2.0 - 1.0
}

/// Runs the multistart census at a model point and returns the
/// deduplicated, deterministically ordered set of stationary states.
///
/// Seed families: the three linear eigenvectors of the Hermitian hopping
/// matrix, the PT-symmetric two-parameter ansatz grid, and a fixed-seed
/// pseudo-random batch. Solves run in parallel; deduplication and ordering
/// are a sequential reduction, so the output does not depend on worker
/// scheduling. An empty result is valid.
pub fn discover_states(params: &SystemParams, config: &CensusConfig) -> Vec<DiscoveredState> {
    let mut seeds: Vec<[C64; 3]> = Vec::new();
    let spec =
        crate::linalg::eig_general(&build_h0(params.j)).expect("3x3 hopping matrix diagonalizes");
    for v in &spec.eigenvectors {
        seeds.push([v[0], v[1], v[2]]);
    }
    for &a in &config.ansatz_amplitudes {
        let b2 = 1.0 - 2.0 * a * a;
        if b2 < 0.0 {
            continue;
        }
        let b = b2.sqrt();
        for &phi in &config.ansatz_phases {
            seeds.push([
                C64::from_polar(a, phi),
                C64::new(b, 0.0),
                C64::from_polar(a, -phi),
            ]);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    for _ in 0..config.random_seed_count {
        let mut s = [C64::new(0.0, 0.0); 3];
        for z in s.iter_mut() {
            let re = uniform_pm1(&mut rng);
            let im = uniform_pm1(&mut rng);
            *z = C64::new(re, im);
        }
        seeds.push(s);
    }

    let solved = par::map_slice(&seeds, |seed| {
        let mu = rayleigh_mu(params, seed);
        solve_stationary_with(params, seed, mu, &NewtonSettings::default()).ok()
    });

    let mut states: Vec<DiscoveredState> = Vec::new();
    let insert =
        |states: &mut Vec<DiscoveredState>, state: StationaryState, diag: SolveDiagnostics| {
            if diag.condition_estimate > config.singular_condition_cap && !diag.converged_at_entry {
                return;
            }
            let duplicate = states.iter().any(|existing| {
                cvec::aligned_distance(existing.state.psi(), state.psi()) <= config.dedup_psi_radius
                    && (existing.state.mu() - state.mu()).norm() <= config.dedup_mu_radius
            });
            if !duplicate {
                let defect = pt_defect(state.psi());
                states.push(DiscoveredState {
                    state,
                    pt_defect: defect,
                });
            }
        };
    for (state, diag) in solved.into_iter().flatten() {
        insert(&mut states, state, diag);
    }
    // solutions come in PT-partner pairs: if psi solves with mu, then
    // P psi* solves with mu*. A PT-broken state has a genuinely distinct
    // partner, which a seed family can miss; complete those explicitly.
    // (Real-mu states are their own partners up to gauge, and adding them
    // here would defeat the singular-manifold guard at degenerate points.)
    let partners: Vec<([C64; 3], C64)> = states
        .iter()
        .filter(|d| d.state.mu().im.abs() > crate::spectrum::IM_TOL)
        .map(|d| {
            let psi = d.state.psi();
            (
                [psi[2].conj(), psi[1].conj(), psi[0].conj()],
                d.state.mu().conj(),
            )
        })
        .collect();
    for (seed, mu) in partners {
        if let Ok((state, diag)) =
            solve_stationary_with(params, &seed, mu, &NewtonSettings::default())
        {
            insert(&mut states, state, diag);
        }
    }
    states.sort_by(|a, b| {
        let ma = a.state.mu();
        let mb = b.state.mu();
        ma.re
            .total_cmp(&mb.re)
            .then(ma.im.total_cmp(&mb.im))
            .then_with(|| {
                for (x, y) in a.state.psi().iter().zip(b.state.psi()) {
                    let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
                    if ord != std::cmp::Ordering::Equal {
                        return ord;
                    }
                }
                std::cmp::Ordering::Equal
            })
    });
    states
}

// ---------------------------------------------------------------------------
// pseudo-arclength continuation
// ---------------------------------------------------------------------------

/// Step policy and termination bounds for [`continue_branch`].
#[derive(Debug, Clone)]
pub struct StepConfig {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    pub grow_factor: f64,
    pub shrink_factor: f64,
    /// Consecutive successes before the step grows.
    pub grow_after: usize,
    /// Continuation stops once gamma leaves this closed interval.
    pub gamma_range: (f64, f64),
    /// Hard cap on accepted points.
    pub max_points: usize,
    /// Total arclength budget.
    pub max_arclength: f64,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self {
            initial_step: 0.005,
            min_step: 1e-6,
            max_step: 0.02,
            grow_factor: 1.3,
            shrink_factor: 0.5,
            grow_after: 3,
            gamma_range: (0.0, 1.5),
            max_points: 4000,
            max_arclength: 30.0,
        }
    }
}

/// Why a continuation run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    GammaBound,
    ArclengthBudget,
    PointBudget,
    /// The step control collapsed below `min_step`; the branch holds every
    /// point accepted up to the last good state.
    StepUnderflow,
}

/// A traced branch plus the reason tracing ended.
#[derive(Debug, Clone)]
pub struct Continuation {
    pub branch: Branch,
    pub stop: StopReason,
}

const AUG: usize = 9;

/// Augmented residual and Jacobian for the corrector: 8 stationarity rows
/// plus the arclength constraint.
fn corrector_step(
    system: &RealSystem,
    v: &[f64; AUG],
    anchor: &[f64; AUG],
    tangent: &[f64; AUG],
    ds: f64,
) -> Result<([f64; AUG], f64)> {
    let mut params = system.params;
    params.gamma = v[8];
    let sys = RealSystem {
        params,
        gauge: system.gauge,
    };
    let u: [f64; NDIM] = v[..8].try_into().expect("slice of 8");
    let r8 = sys.residual(&u);
    let (j8, dg) = sys.jacobian(&u);
    let mut m = ComplexMatrix::zeros(AUG);
    let mut rhs = vec![C64::new(0.0, 0.0); AUG];
    for i in 0..NDIM {
        for j in 0..NDIM {
            m[(i, j)] = C64::new(j8[i][j], 0.0);
        }
        m[(i, 8)] = C64::new(dg[i], 0.0);
        rhs[i] = C64::new(-r8[i], 0.0);
    }
    let mut cons = -ds;
    for k in 0..AUG {
        m[(8, k)] = C64::new(tangent[k], 0.0);
        cons += tangent[k] * (v[k] - anchor[k]);
    }
    rhs[8] = C64::new(-cons, 0.0);
    let scale = m.max_row_sum_norm().max(f64::MIN_POSITIVE);
    let lu = Lu::factor(&m, 1e-14 * scale, None)?;
    let step = lu.solve(&rhs);
    let mut out = *v;
    for k in 0..AUG {
        out[k] += step[k].re;
    }
    let mut res = r8.iter().map(|x| x * x).sum::<f64>();
    res += cons * cons;
    Ok((out, res.sqrt()))
}

/// Unit tangent of the solution curve at `v`, oriented along `orient`.
fn curve_tangent(system: &RealSystem, v: &[f64; AUG], orient: &[f64; AUG]) -> Result<[f64; AUG]> {
    let mut params = system.params;
    params.gamma = v[8];
    let sys = RealSystem {
        params,
        gauge: system.gauge,
    };
    let u: [f64; NDIM] = v[..8].try_into().expect("slice of 8");
    let (j8, dg) = sys.jacobian(&u);
    let mut m = ComplexMatrix::zeros(AUG);
    for i in 0..NDIM {
        for j in 0..NDIM {
            m[(i, j)] = C64::new(j8[i][j], 0.0);
        }
        m[(i, 8)] = C64::new(dg[i], 0.0);
    }
    for k in 0..AUG {
        m[(8, k)] = C64::new(orient[k], 0.0);
    }
    let mut rhs = vec![C64::new(0.0, 0.0); AUG];
    rhs[8] = C64::new(1.0, 0.0);
    let scale = m.max_row_sum_norm().max(f64::MIN_POSITIVE);
    let lu = Lu::factor(&m, 1e-14 * scale, None)?;
    let t = lu.solve(&rhs);
    let mut out = [0.0; AUG];
    let norm = t.iter().map(|z| z.re * z.re).sum::<f64>().sqrt();
    for k in 0..AUG {
        out[k] = t[k].re / norm;
    }
    let align: f64 = out.iter().zip(orient).map(|(a, b)| a * b).sum();
    if align < 0.0 {
        for x in out.iter_mut() {
            *x = -*x;
        }
    }
    Ok(out)
}

/// Traces the solution branch through `(psi, mu, gamma)` space by
/// pseudo-arclength continuation with adaptive steps.
///
/// Folds are traversed (gamma reverses along arclength); tracing terminates
/// at the gamma bounds, the arclength budget, or step underflow. The
/// returned branch is ordered by arclength, which is the strictly
/// increasing branch parameter; per-point gamma lives in each state.
pub fn continue_branch(
    start: &StationaryState,
    direction: i8,
    config: &StepConfig,
) -> Result<Continuation> {
    let params = start.params();
    let mut gauge = cvec::argmax_modulus(start.psi());
    let mut psi = *start.psi();
    let rot = (psi[gauge] / psi[gauge].norm()).conj();
    for z in psi.iter_mut() {
        *z *= rot;
    }
    let system = RealSystem { params, gauge };
    let u8 = RealSystem::pack(&psi, start.mu());
    let mut v: [f64; AUG] = [0.0; AUG];
    v[..8].copy_from_slice(&u8);
    v[8] = params.gamma;

    // initial orientation: unit gamma direction
    let mut orient = [0.0; AUG];
    orient[8] = direction as f64;
    let mut tangent = curve_tangent(&system, &v, &orient)?;
    if tangent[8] * direction as f64 <= 0.0 && tangent[8].abs() > 1e-12 {
        for x in tangent.iter_mut() {
            *x = -*x;
        }
    }

    let mut states = vec![state_at(&v, &params)];
    let mut arcs = vec![0.0f64];
    let mut ds = config.initial_step;
    let mut successes = 0usize;
    let mut stop = StopReason::PointBudget;
    let newton = NewtonSettings::default();
    while states.len() < config.max_points {
        if *arcs.last().unwrap() >= config.max_arclength {
            stop = StopReason::ArclengthBudget;
            break;
        }
        // predictor + corrector
        let mut pred = v;
        for k in 0..AUG {
            pred[k] += ds * tangent[k];
        }
        let mut w = pred;
        let mut ok = false;
        for _ in 0..newton.max_iterations.min(30) {
            match corrector_step(&system, &w, &v, &tangent, ds) {
                Ok((next, res)) => {
                    w = next;
                    if res <= newton.tolerance {
                        ok = true;
                        break;
                    }
                }
                Err(_) => break,
            }
        }
        if ok {
            // verify the plain residual of the corrected point
            let mut p2 = params;
            p2.gamma = w[8];
            let (psi_w, mu_w) = RealSystem::unpack(&w[..8].try_into().expect("slice of 8"));
            if gpe_residual_norm(&psi_w, mu_w, &p2) > STATE_RESIDUAL_TOL {
                ok = false;
            }
        }
        if !ok {
            ds *= config.shrink_factor;
            successes = 0;
            if ds < config.min_step {
                stop = StopReason::StepUnderflow;
                break;
            }
            continue;
        }
        if w[8] < config.gamma_range.0 - 1e-12 || w[8] > config.gamma_range.1 + 1e-12 {
            // land a final point exactly on the bound when one is reachable
            let bound = if w[8] < config.gamma_range.0 {
                config.gamma_range.0
            } else {
                config.gamma_range.1
            };
            let mut bp = params;
            bp.gamma = bound;
            let bsys = RealSystem { params: bp, gauge };
            let u8: [f64; NDIM] = v[..8].try_into().expect("slice of 8");
            if let Ok((ub, _)) = newton_solve(&bsys, u8, &newton) {
                let mut vb = [0.0; AUG];
                vb[..8].copy_from_slice(&ub);
                vb[8] = bound;
                let step_len: f64 = vb
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt();
                if step_len > 1e-14 {
                    arcs.push(arcs.last().unwrap() + step_len);
                    states.push(state_at(&vb, &bp));
                }
            }
            stop = StopReason::GammaBound;
            break;
        }
        let step_len: f64 = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        v = w;
        arcs.push(arcs.last().unwrap() + step_len);
        let mut p2 = params;
        p2.gamma = v[8];
        states.push(state_at(&v, &p2));
        successes += 1;
        if successes >= config.grow_after {
            ds = (ds * config.grow_factor).min(config.max_step);
            successes = 0;
        }
        // re-gauge when the pinned component loses its weight
        let (psi_now, _) = RealSystem::unpack(&v[..8].try_into().expect("slice of 8"));
        if psi_now[gauge].norm() < 0.1 {
            gauge = cvec::argmax_modulus(&psi_now);
            let rot = (psi_now[gauge] / psi_now[gauge].norm()).conj();
            let mut rotated = psi_now;
            for z in rotated.iter_mut() {
                *z *= rot;
            }
            let (_, mu_now) = RealSystem::unpack(&v[..8].try_into().expect("slice of 8"));
            let u8 = RealSystem::pack(&rotated, mu_now);
            v[..8].copy_from_slice(&u8);
        }
        let system = RealSystem {
            params: {
                let mut p = params;
                p.gamma = v[8];
                p
            },
            gauge,
        };
        tangent = curve_tangent(&system, &v, &tangent)?;
    }

    let defects: Vec<f64> = states.iter().map(|s| pt_defect(s.psi())).collect();
    Ok(Continuation {
        branch: Branch {
            param: SweptParam::Arclength,
            param_values: arcs,
            states,
            labels: BranchLabels {
                id: 0,
                ep2_gamma: None,
                fold_gammas: Vec::new(),
                pt_defects: defects,
                unresolved_near_ep: false,
            },
        },
        stop,
    })
}

fn state_at(v: &[f64; AUG], params: &SystemParams) -> StationaryState {
    let (psi, mu) = RealSystem::unpack(&v[..8].try_into().expect("slice of 8"));
    let mut p = *params;
    p.gamma = v[8];
    StationaryState::new(psi, mu, p)
}

// ---------------------------------------------------------------------------
// fold detection
// ---------------------------------------------------------------------------

/// How a fold location was estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FoldEstimator {
    /// Quadratic interpolation of gamma(arclength) through the turning
    /// point.
    ArclengthTurning,
    /// Midpoint of the bracketing points; used when the quadratic fit
    /// degenerates.
    Secant,
}

/// A detected tangent bifurcation.
#[derive(Debug, Clone)]
pub struct FoldRecord {
    pub gamma_fold: f64,
    /// The states just before and just after the turning point; their
    /// distance shrinks as the fold is approached.
    pub colliding_state_pair: (StationaryState, StationaryState),
    pub estimator: FoldEstimator,
}

/// Scans an arclength-ordered branch for sign changes of `d gamma / d s`
/// and localizes each fold by quadratic interpolation through the three
/// bracketing points.
pub fn detect_folds(branch: &Branch) -> Vec<FoldRecord> {
    let n = branch.states.len();
    if n < 3 || branch.param != SweptParam::Arclength {
        return Vec::new();
    }
    let gammas = branch.gammas();
    let s = &branch.param_values;
    let mut folds = Vec::new();
    for k in 1..n - 1 {
        let d_left = gammas[k] - gammas[k - 1];
        let d_right = gammas[k + 1] - gammas[k];
        if d_left.abs() < 1e-14 || d_right.abs() < 1e-14 || d_left * d_right >= 0.0 {
            continue;
        }
        // quadratic through (s, gamma) at k-1, k, k+1
        let (s0, s1, s2) = (s[k - 1], s[k], s[k + 1]);
        let (g0, g1, g2) = (gammas[k - 1], gammas[k], gammas[k + 1]);
        let denom = (s0 - s1) * (s0 - s2) * (s1 - s2);
        let a = (s2 * (g1 - g0) + s1 * (g0 - g2) + s0 * (g2 - g1)) / denom;
        let b = (s2 * s2 * (g0 - g1) + s1 * s1 * (g2 - g0) + s0 * s0 * (g1 - g2)) / denom;
        let (gamma_fold, estimator) = if a.abs() > 1e-12 {
            let s_star = -b / (2.0 * a);
            let c = g0 - a * s0 * s0 - b * s0;
            (
                a * s_star * s_star + b * s_star + c,
                FoldEstimator::ArclengthTurning,
            )
        } else {
            (g1, FoldEstimator::Secant)
        };
        folds.push(FoldRecord {
            gamma_fold,
            colliding_state_pair: (branch.states[k - 1].clone(), branch.states[k + 1].clone()),
            estimator,
        });
    }
    folds
}
