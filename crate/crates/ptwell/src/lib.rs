//! Numerical toolkit for a PT-symmetric triple-well Bose-Einstein condensate.
//!
//! The model is a three-mode tight-binding system with balanced gain and loss
//! on the outer wells (rate `gamma`), a tunable coupling `J` to the middle
//! well, and an optional on-site interaction `U`. The crate provides
//!
//! * dense complex linear algebra for small non-Hermitian matrices
//!   ([`linalg`]),
//! * model builders, currents, and symmetry checks ([`model`]),
//! * a Kato perturbation series and the degenerate first-order splitting
//!   criterion ([`perturbation`]),
//! * linear spectral sweeps, PT classification, and exceptional-point
//!   localization ([`spectrum`]),
//! * stationary states of the interacting system: Newton solver, multistart
//!   census, pseudo-arclength continuation, fold detection ([`nonlinear`]),
//! * Bogoliubov-de Gennes stability and time propagation ([`stability`]),
//! * current tables and maxima over parameter grids ([`currents`]).
//!
//! Grid sweeps and multistart solves run data-parallel through [`par`] when
//! the `parallel` feature (default) is enabled; results are identical to the
//! sequential fallback.

pub mod currents;
pub mod cvec;
pub(crate) mod dd;
pub mod linalg;
pub mod model;
pub mod nonlinear;
pub mod par;
pub mod perturbation;
pub mod spectrum;
pub mod stability;

pub use cvec::C64;
pub use linalg::{eig_general, solve_linear, ComplexMatrix, Spectrum};
pub use model::{
    build_h0, build_hp, check_pseudo_hermitian, currents as state_currents, gpe_residual,
    hamiltonian, parity, CurrentReport, StationaryState, SystemParams,
};
