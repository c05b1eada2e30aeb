//! Sampled waveforms of flux-modulated parameters over one modulation
//! period, and the generalized power-law representation the analytic Fourier
//! paths differentiate.

use serde::Serialize;

use crate::error::Result;
use crate::series::{rational_to_f64, RationalSeries};
use crate::tunable::TransmonSpec;

use super::FluxPulse;

/// A finite sum `sum_i c_i xi^{p_i}` with real (possibly half-integer)
/// powers. The transmon parameters and every derived coupling or drive
/// coefficient take this form in `xi`.
#[derive(Clone, Debug)]
pub struct PowerLaw {
    /// (power, coefficient) pairs.
    terms: Vec<(f64, f64)>,
}

impl PowerLaw {
    pub fn new(terms: Vec<(f64, f64)>) -> Self {
        Self { terms }
    }

    pub fn from_series(series: &RationalSeries, scale: f64, power_shift: f64) -> Self {
        let terms = series
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let coeff = rational_to_f64(c) * scale;
                (coeff != 0.0)
                    .then(|| ((series.min_power() + i as i64) as f64 + power_shift, coeff))
            })
            .collect();
        Self { terms }
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn extend(mut self, other: PowerLaw) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn eval(&self, xi: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(p, c)| c * xi.powf(p))
            .sum()
    }
}

/// Single-transmon quantities that can be modulated through the flux.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TransmonParameter {
    /// Transition frequency E1 - E0, MHz.
    Omega,
    /// Anharmonicity, MHz.
    Eta,
    /// Same as Omega (the 0-1 transition).
    Omega01,
    /// 1-2 transition frequency omega - eta, MHz.
    Omega12,
    /// 0-2 transition frequency 2 omega - eta, MHz.
    Omega02,
    /// Charge weight on the 0-1 transition, dimensionless.
    Lambda,
    /// Charge weight on the 1-2 transition, dimensionless.
    LambdaBig,
    /// Nonadiabatic weight (physical sign), dimensionless.
    Upsilon,
}

impl TransmonParameter {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Omega | Self::Omega01 => "omega_01",
            Self::Eta => "eta",
            Self::Omega12 => "omega_12",
            Self::Omega02 => "omega_02",
            Self::Lambda => "lambda",
            Self::LambdaBig => "lambda_big",
            Self::Upsilon => "upsilon",
        }
    }
}

/// Power law of the chosen parameter in xi, using the series truncated at
/// `order`. Frequencies come out in MHz.
pub fn parameter_power_law(spec: &TransmonSpec, kind: TransmonParameter, order: u32) -> PowerLaw {
    let set = crate::perturbation::reference_series().truncated(order);
    let e_c = spec.e_c();
    match kind {
        TransmonParameter::Omega | TransmonParameter::Omega01 => {
            PowerLaw::from_series(&set.omega, e_c, 0.0)
        }
        TransmonParameter::Eta => PowerLaw::from_series(&set.eta, e_c, 0.0),
        TransmonParameter::Omega12 => PowerLaw::from_series(&(&set.omega - &set.eta), e_c, 0.0),
        TransmonParameter::Omega02 => PowerLaw::from_series(
            &(&set.omega.scale(&crate::series::ratio(2, 1)) - &set.eta),
            e_c,
            0.0,
        ),
        TransmonParameter::Lambda => PowerLaw::from_series(&set.lambda, 1.0, 0.0),
        TransmonParameter::LambdaBig => PowerLaw::from_series(&set.lambda_big, 1.0, 0.0),
        TransmonParameter::Upsilon => {
            PowerLaw::from_series(&set.upsilon, -std::f64::consts::SQRT_2, 0.0)
        }
    }
}

/// A parameter sampled on a uniform grid of modulation phase
/// `x_i = phase + 2 pi i / n` over one period.
#[derive(Clone, Debug)]
pub struct Waveform {
    values: Vec<f64>,
    pulse: FluxPulse,
    label: String,
}

impl Waveform {
    pub fn from_samples(values: Vec<f64>, pulse: FluxPulse, label: impl Into<String>) -> Self {
        Self {
            values,
            pulse,
            label: label.into(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn pulse(&self) -> &FluxPulse {
        &self.pulse
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Modulation phase of sample i.
    pub fn phase_at(&self, i: usize) -> f64 {
        self.pulse.phase + 2.0 * std::f64::consts::PI * i as f64 / self.values.len() as f64
    }

    pub fn min_max(&self) -> (f64, f64) {
        self.values.iter().fold((f64::MAX, f64::MIN), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
    }
}

/// Sample a parameter over one modulation period, checking the junction
/// stays finite at every grid point.
pub fn parameter_waveform(
    spec: &TransmonSpec,
    pulse: &FluxPulse,
    kind: TransmonParameter,
    grid_size: usize,
    order: u32,
) -> Result<Waveform> {
    let law = parameter_power_law(spec, kind, order);
    sample_power_law(spec, pulse, &law, grid_size, kind.label())
}

/// Sample an arbitrary power law of xi over one modulation period.
pub(crate) fn sample_power_law(
    spec: &TransmonSpec,
    pulse: &FluxPulse,
    law: &PowerLaw,
    grid_size: usize,
    label: &str,
) -> Result<Waveform> {
    let mut values = Vec::with_capacity(grid_size);
    for i in 0..grid_size {
        let x = pulse.phase + 2.0 * std::f64::consts::PI * i as f64 / grid_size as f64;
        let phi = pulse.flux_at_phase(x);
        let xi = spec.xi_at(phi)?;
        values.push(law.eval(xi));
    }
    Ok(Waveform::from_samples(values, *pulse, label))
}
