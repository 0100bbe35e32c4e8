//! Squeezed-light generation by two-level atoms in a lossy cavity beyond the
//! rotating-wave approximation, including the diamagnetic A² term.
//!
//! After adiabatic elimination of the atoms the cavity field obeys a linear
//! Langevin equation with a parametric term. This crate evaluates its
//! steady state and output spectra along several independent routes:
//!
//! - closed-form moments and a moment-equation solve ([`steady_state`]),
//! - frequency-domain input–output spectra ([`spectrum`]),
//! - a phase-space stochastic ensemble ([`montecarlo`]),
//! - the exact Lindblad steady state in a truncated Fock basis ([`fock`]).

pub mod error;
pub mod fock;
pub mod grid;
pub mod model;
pub mod montecarlo;
pub mod spectrum;
pub mod steady_state;

pub use error::{Result, SqueezeError};
pub use fock::{
    build_liouvillian, convergence_check, oracle_moments, solve_adaptive, solve_oracle,
    steady_state_density_matrix, DensityMatrix, FockConfig,
};
pub use grid::Grid;
pub use model::{
    build_params, classify_regime, effective_drift, stability, EffectiveDrift, RegimeReport,
    StabilityReport, SystemParams,
};
pub use montecarlo::{ensemble_moments, ensemble_spectrum, Estimate, Scheme, TrajectoryConfig};
pub use spectrum::{
    output_spectrum, spectrum_as_printed, spectrum_sweep, transfer_matrix, SpectrumMethod,
    SpectrumPoint, TransferMatrix,
};
pub use steady_state::{
    closed_form_moments, critical_coupling, intracavity_photon_number, lyapunov_moments,
    bisect_critical_u0, no_go_check, quadrature_variances, variance_sweep, MomentSource, QuadratureVariances,
    SecondMoments, SweepAxis,
};
