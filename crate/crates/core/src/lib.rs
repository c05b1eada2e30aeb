//! Analytic modeling of transmon qubits via high-order perturbation series
//! with exact rational coefficients, validated against dense numerical
//! diagonalization, plus the static and parametrically-modulated coupled-pair
//! analysis built on top of the series.
//!
//! Layout:
//!
//! - [`series`]: exact rational power series in the expansion parameter.
//! - [`perturbation`]: the Fock-basis recurrence producing the transmon
//!   frequency, anharmonicity, and charge/nonadiabatic weights.
//! - [`oracle`]: independent dense diagonalization used to cross-check every
//!   analytic quantity.
//! - [`tunable`]: flux-to-effective-junction mapping and parameter evaluation.
//! - [`coupling`]: static coupled-pair couplings and dispersive shifts.
//! - [`modulation`]: Fourier analysis of flux-modulated parameters, effective
//!   gate couplings and drives, operating points, and time-domain simulation.
//! - [`verification`]: the end-to-end check suite behind `transmon verify`.

pub mod coupling;
pub mod error;
pub mod modulation;
pub mod oracle;
pub mod parallel;
pub mod perturbation;
pub mod series;
pub mod tunable;
pub mod verification;

pub use error::{Error, Result};
