//! Two two-level Rydberg atoms crossing a single-mode cavity one after the
//! other, and the CHSH Bell sums their detector outcomes can reach.
//!
//! The crate is layered bottom-up:
//!
//! - [`fock`]: sparse state vectors over `|a1, a2, n>` and single-atom operators.
//! - [`cavity`]: resonant Jaynes-Cummings cavity passes, building the
//!   states before and after each atom has crossed the cavity.
//! - [`correlators`]: detector correlations for the phase-pulse and
//!   Bloch-rotation measurement schemes, both from a generic expectation value
//!   and from closed forms in the coefficients alpha and beta.
//! - [`bell`]: the CHSH sum and its analytic maxima.
//! - [`optimize`]: grid-then-golden-section maximization over Rabi angles and
//!   the figure curves.
//! - [`exec`]: data-parallel grid evaluation (rayon behind the `parallel`
//!   feature, sequential otherwise).

pub mod bell;
pub mod cavity;
pub mod correlators;
pub mod exec;
pub mod fock;
pub mod optimize;

pub use bell::{
    bell_sum, bell_sum_closed_form, bell_sum_mixture, maximize_chsh_unrestricted, smax_bloch_restricted,
    smax_phase_analytic, ChshSettings, SchemeKind,
};
pub use cavity::{build_psi0, build_psi1, build_psi2, cavity_pass, InitialCase, Scenario, TrigCoefficients};
pub use correlators::{
    alpha_coefficient, beta_coefficient, bloch_operator, correlation_closed_form, correlation_generic,
    correlation_mixture, phase_operator, phase_pulse, CoefficientKernel, CorrelationCoefficients, MeasurementScheme,
};
pub use exec::Execution;
pub use fock::{Amplitude, Atom, AtomOperator, BasisKet, Level, StateVector};
pub use optimize::{
    optimize_case, optimize_over_n, scan_curve_fig1, scan_curve_fig2, BellResult, EtaRange, OptimizeOptions,
    RabiSubcase,
};

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("operator on atom {atom} is not self-adjoint (deviation {deviation:e})")]
    NonHermitian { atom: u8, deviation: f64 },
    #[error("non-finite amplitude for {0}")]
    NonFinite(BasisKet),
    #[error("empty eta range [{min}, {max}]")]
    EmptyRange { min: f64, max: f64 },
    #[error("step must be positive and finite, got {0}")]
    InvalidStep(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
