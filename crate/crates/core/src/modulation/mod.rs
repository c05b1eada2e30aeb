//! Time-dependent analysis of flux-modulated transmons: harmonic content of
//! the modulated parameters, effective sideband couplings and drives, gate
//! operating points, and a time-domain integrator used to cross-check the
//! predicted Rabi rates.

mod bessel;
mod fourier;
mod gates;
mod phase;
mod simulate;
mod waveform;

pub use bessel::{bessel_j, bessel_j_table};
pub use fourier::{
    fourier_coefficients_analytic, fourier_coefficients_hypergeometric,
    fourier_coefficients_quadrature, FourierExpansion,
};
pub use gates::{
    activation_frequency, coupling_waveform, drive_waveform, effective_coupling, effective_drives,
    Channel, Drives, EffectiveCoupling, GateKind, GateOperatingPoint,
};
pub use phase::{integrated_phase_expansion, phase_beta, PhaseExpansion};
pub use simulate::{simulate_gate, GateSimulation, Trajectory};
pub use waveform::{parameter_power_law, parameter_waveform, PowerLaw, TransmonParameter, Waveform};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flux-bias drive: `phi_ext(t) = parking + amplitude cos(2 pi f t + phase)`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FluxPulse {
    /// Parking flux, radians.
    pub parking: f64,
    /// Modulation amplitude, radians.
    pub amplitude: f64,
    /// Modulation frequency, MHz.
    pub frequency: f64,
    /// Modulation phase, radians.
    pub phase: f64,
}

impl FluxPulse {
    pub fn new(parking: f64, amplitude: f64, frequency: f64, phase: f64) -> Result<Self> {
        if amplitude < 0.0 {
            return Err(Error::NonPhysical(format!(
                "modulation amplitude must be >= 0 (got {amplitude})"
            )));
        }
        Ok(Self {
            parking,
            amplitude,
            frequency,
            phase,
        })
    }

    /// External flux at phase `x = 2 pi f t + phase`.
    pub fn flux_at_phase(&self, x: f64) -> f64 {
        self.parking + self.amplitude * x.cos()
    }

    /// Modulation period in microseconds.
    pub fn period_us(&self) -> Result<f64> {
        if self.frequency <= 0.0 {
            return Err(Error::Domain(format!(
                "modulation frequency must be positive (got {} MHz)",
                self.frequency
            )));
        }
        Ok(1.0 / self.frequency)
    }

    /// True when parked at a flux sweet spot (sin(parking) = 0).
    pub fn parked_at_sweet_spot(&self) -> bool {
        self.parking.sin().abs() < 1e-12
    }
}

/// Tolerances and truncations shared across the modulation routines.
#[derive(Clone, Copy, Debug)]
pub struct ModOptions {
    /// Perturbation order for every series evaluation.
    pub order: u32,
    /// Number of retained harmonics.
    pub k_max: usize,
    /// Waveform samples per period.
    pub grid: usize,
    /// Term cap for the analytic Fourier series.
    pub n_max: usize,
    /// Harmonics with |f_k/(k omega_p)| below this only contribute the
    /// zeroth Bessel order.
    pub epsilon_cutoff: f64,
}

impl Default for ModOptions {
    fn default() -> Self {
        Self {
            order: 25,
            k_max: 50,
            grid: 2048,
            n_max: 120,
            epsilon_cutoff: 1e-12,
        }
    }
}
