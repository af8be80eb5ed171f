//! Nonperturbative simulator for phonon-mediated photon-pair generation in
//! Raman-active waveguides ("photonic Cooper pairs").
//!
//! A strong pump in a Raman-active medium couples a Stokes photon, an
//! anti-Stokes photon and an optical phonon into a single quadratic bosonic
//! Hamiltonian (the *Ramaniton* model). Because the Hamiltonian is quadratic,
//! it is diagonalized exactly by a bosonic Bogoliubov transformation in a
//! doubled (Nambu) mode space, and the vacuum evolves into a Gaussian state
//! whose second moments carry all observables: mode occupations, two-mode
//! quadrature squeezing, and the Stokes/anti-Stokes cross-correlation g².
//!
//! Pipeline:
//!
//! 1. [`model`] — dimensionless parameters (pump ratio ω_L/Ω, coupling η,
//!    Raman shift q), the derived vertex couplings η±, and conversions to
//!    physical waveguide quantities.
//! 2. [`nambu`] — the 6×6 Hamiltonian matrix in doubled mode space and its
//!    canonical (symplectic) diagonalization, cross-checked against the
//!    closed-form dispersion at every call.
//! 3. [`dynamics`] — Heisenberg propagator, vacuum second moments, and the
//!    derived observables.
//! 4. [`perturbative`] — the effective second-order pair coupling (valid off
//!    resonance, q ≠ 1) used as an independent consistency check.
//! 5. [`oracle`] — brute-force truncated-Fock-space evolution; an independent
//!    verification path that shares no linear algebra with [`nambu`].
//! 6. [`sweep`] — parameter sweeps, resonance (phonon-node) finding, and the
//!    global squeezing optimum.
//!
//! Grids evaluate in parallel when the default `parallel` feature is on; all
//! results are assembled in index order so output is bit-identical at any
//! thread count.

pub mod dynamics;
pub(crate) mod hermitian;
pub mod model;
pub mod nambu;
pub mod oracle;
pub mod parallel;
pub mod perturbative;
pub mod sweep;

/// Crate-wide error type.
///
/// Variants map one-to-one onto the failure modes of the physics pipeline;
/// operations that cannot fail simply do not return `Result`.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Parameter validation failed (constructor preconditions).
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// Two mode frequencies are closer than the resolvable gap, so a unique
    /// canonical eigenbasis does not exist (e.g. q = 0, or η = 0 at q = 1).
    /// Perturb q or use the decoupled analytic construction instead.
    #[error("degenerate mode frequencies: {0}")]
    DegenerateModes(String),

    /// The eigensolver produced a basis that fails the canonical
    /// (Bogoliubov) normalization or the dispersion cross-check.
    #[error("non-canonical Bogoliubov basis: {0}")]
    NonCanonical(String),

    /// g² is undefined because an occupation is below threshold (e.g. τ = 0).
    #[error("cross-correlation undefined: {0}")]
    UndefinedCorrelation(String),

    /// Occupations violate N_S ≥ N_c ≥ 0, outside the two-mode-squeezed
    /// family this model produces from vacuum.
    #[error("invalid occupations: {0}")]
    InvalidOccupations(String),

    /// The perturbative pair coupling diverges on resonance (q → 1).
    #[error("perturbative coupling singular: {0}")]
    Singularity(String),

    /// The Fock cutoff is too small for the requested regime: either an
    /// occupation exceeded cutoff/4 or doubling the cutoff moved an
    /// observable by more than the convergence threshold.
    #[error("Fock truncation inadequate: {0}")]
    TruncationInadequate(String),

    /// No qualifying phonon node in the scanned window.
    #[error("no resonance found: {0}")]
    NoResonance(String),

    /// An always-on internal cross-check (conservation law, symplectic
    /// residual, exact observable identity) failed — indicates a numerical
    /// defect, not a user error.
    #[error("internal self-check failed: {0}")]
    SelfCheck(String),

    /// The underlying LAPACK call failed.
    #[error("linear algebra backend: {0}")]
    Backend(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}

pub use dynamics::{
    analytic_variance_ratio, evolve_series, g2, moments, occupations, optimal_phase, propagator,
    quadrature_variance, squeezing_db, GaussianMoments, ObservablePoint, PhiPolicy, Propagator,
};
pub use model::{
    derive_couplings, dimensionless_length_to_physical, estimate_eta, ModelParams,
    PhysicalConstants,
};
pub use nambu::{
    analytic_dispersion, build_nambu_matrix, diagonalize, verify_canonical, BogoliubovBasis,
    NambuMatrix, ParityMetric,
};
pub use oracle::{
    build_basis, build_hamiltonian, compare, default_compare_window, evolve_exact,
    oracle_observables, CompareReport, Deviations, FockBasis, OracleState,
};
pub use perturbative::{sw_coupling, sw_prediction, sw_squeezing_db, SwPrediction};
pub use sweep::{
    find_resonances, optimize_global, sweep_dispersion, sweep_q, Optimum, ResonancePoint,
    SweepRow, SweepSpec,
};
