//! Parametrically-activated two-qubit gates: modulation frequencies that
//! bring a pair of two-qubit states into resonance, and the Bessel-ladder
//! renormalization of the corresponding coupling.

use serde::Serialize;

use crate::coupling::CoupledPair;
use crate::error::{Error, Result};

use super::bessel::bessel_j;
use super::fourier::{fourier_coefficients_quadrature, FourierExpansion};
use super::phase::{epsilon_from_depths, phase_beta};
use super::waveform::{
    parameter_waveform, sample_power_law, PowerLaw, TransmonParameter,
    Waveform,
};
use super::{FluxPulse, ModOptions};

/// Eigenbasis coupling channel: the first index is the fixed-side operator
/// (1 = 0-1 ladder, 2 = 1-2 ladder), the second the tunable-side operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Channel {
    G11,
    G12,
    G21,
    G22,
}

impl Channel {
    /// Which tunable-side transition drives the sideband ladder.
    fn transition(&self) -> TransmonParameter {
        match self {
            Channel::G11 | Channel::G21 => TransmonParameter::Omega01,
            Channel::G12 | Channel::G22 => TransmonParameter::Omega12,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Channel::G11 => "g_11",
            Channel::G12 => "g_12",
            Channel::G21 => "g_21",
            Channel::G22 => "g_22",
        }
    }
}

/// Entangling gates reachable by modulating the tunable transmon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GateKind {
    /// |10> <-> |01> at omega_p = |Delta| / 2.
    ISwap,
    /// |11> <-> |02> at omega_p = |Delta + eta_T| / 2.
    Cz02,
    /// |11> <-> |20> at omega_p = |Delta - eta_F| / 2.
    Cz20,
    /// |00> <-> |11> at omega_p = Sigma / 2.
    BellRabi,
}

impl GateKind {
    pub fn channel(&self) -> Channel {
        match self {
            GateKind::ISwap | GateKind::BellRabi => Channel::G11,
            GateKind::Cz02 => Channel::G12,
            GateKind::Cz20 => Channel::G21,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GateKind::ISwap => "iswap",
            GateKind::Cz02 => "cz02",
            GateKind::Cz20 => "cz20",
            GateKind::BellRabi => "bell_rabi",
        }
    }
}

/// Gate operating point: resonance frequency and the renormalized coupling.
#[derive(Clone, Debug, Serialize)]
pub struct GateOperatingPoint {
    pub kind: GateKind,
    /// Modulation frequency activating the resonance, MHz.
    pub omega_p: f64,
    /// Effective coupling at the resonant sideband including the
    /// modulated-coupling correction, MHz (signed); this is what sets the
    /// Rabi rate.
    pub g_eff: f64,
    /// Bare-average renormalization `eps_n` of the resonant sideband
    /// (signed, correction excluded): the plotted renormalization
    /// coefficient.
    pub ratio: f64,
    /// Signed sideband index providing the resonance.
    pub sideband: i64,
    /// Sideband phase beta, radians.
    pub beta: f64,
}

/// Effective coupling of one channel at one sideband.
#[derive(Clone, Debug, Serialize)]
pub struct EffectiveCoupling {
    /// Full multi-harmonic value including the modulated-coupling
    /// correction, MHz.
    pub value: f64,
    /// Averaged bare coupling over the pulse, MHz.
    pub bare: f64,
    /// Second-harmonic amplitude of the coupling, MHz.
    pub bare_tilde: f64,
    /// Single-harmonic approximation `g_bar J_n(z)`, MHz.
    pub small_amplitude: f64,
    /// The `-(1/2) g_tilde (J_{n-1} + J_{n+1})` correction, MHz.
    pub correction: f64,
}

impl EffectiveCoupling {
    pub fn ratio(&self) -> f64 {
        self.value / self.bare
    }
}

/// Power law of the time-dependent eigenbasis coupling for one channel
/// (everything fixed-side evaluated at its bias point).
pub(crate) fn coupling_power_law(
    pair: &CoupledPair,
    channel: Channel,
    order: u32,
) -> Result<PowerLaw> {
    let pf = pair.point_f(order)?;
    let rt2 = std::f64::consts::SQRT_2;
    let (f_weight, t_param, extra) = match channel {
        Channel::G11 => (pf.lambda, TransmonParameter::Lambda, 1.0),
        Channel::G12 => (pf.lambda, TransmonParameter::LambdaBig, rt2),
        Channel::G21 => (pf.lambda_big, TransmonParameter::Lambda, rt2),
        Channel::G22 => (pf.lambda_big, TransmonParameter::LambdaBig, 2.0),
    };
    // g(t) = g_C/(4 sqrt(xi_F xi_T)): the xi_T^(-1/2) shifts every power
    let scale = extra * f_weight * pair.g_c / (4.0 * pf.xi.sqrt());
    let set = crate::perturbation::reference_series().truncated(order);
    let series = match t_param {
        TransmonParameter::Lambda => &set.lambda,
        _ => &set.lambda_big,
    };
    Ok(PowerLaw::from_series(series, scale, -0.5))
}

/// Sampled coupling waveform `g_ij(t)` over one period.
pub fn coupling_waveform(
    pair: &CoupledPair,
    pulse: &FluxPulse,
    channel: Channel,
    opts: &ModOptions,
) -> Result<Waveform> {
    let law = coupling_power_law(pair, channel, opts.order)?;
    sample_power_law(&pair.qubit_t, pulse, &law, opts.grid, channel.label())
}

/// Modulation-depth ladder of a transition's even harmonics:
/// `z_j = f_{2j} / (2 j omega_p)`.
fn even_depths(f: &FourierExpansion, omega_p: f64) -> Vec<(i64, f64)> {
    (1..=f.k_max() / 2)
        .map(|j| (j as i64, f.coeffs[2 * j] / (2.0 * j as f64 * omega_p)))
        .collect()
}

/// Effective coupling `g_ij^(n)` of a channel at sideband `n`:
/// the bare average times the constrained Bessel-product sum over the even
/// harmonics of the relevant tunable transition, plus the leading
/// modulated-coupling correction.
pub fn effective_coupling(
    pair: &CoupledPair,
    pulse: &FluxPulse,
    channel: Channel,
    sideband: i64,
    opts: &ModOptions,
) -> Result<EffectiveCoupling> {
    if pulse.frequency <= 0.0 {
        return Err(Error::Domain(
            "modulation frequency must be positive".into(),
        ));
    }
    if !pulse.parked_at_sweet_spot() {
        log::warn!(
            "parking {} rad is not a sweet spot: odd harmonics are dropped by this expansion",
            pulse.parking
        );
    }
    let transition = parameter_waveform(
        &pair.qubit_t,
        pulse,
        channel.transition(),
        opts.grid,
        opts.order,
    )?;
    let trans_f = fourier_coefficients_quadrature(&transition, opts.k_max)?;

    let g_wave = coupling_waveform(pair, pulse, channel, opts)?;
    let g_f = fourier_coefficients_quadrature(&g_wave, opts.k_max.min(12))?;
    let bare = g_f.mean();
    let bare_tilde = g_f.second_harmonic();

    let depths = even_depths(&trans_f, pulse.frequency);
    let harmonics = g_f.k_max() / 2;
    let n_max = sideband.abs().max(1) + harmonics as i64 + 1;
    let eps = epsilon_from_depths(&depths, n_max, opts.epsilon_cutoff);
    let eps_at = |n: i64| eps[(n + n_max) as usize];
    let eps_n = eps_at(sideband);

    // the modulated part of the coupling mixes neighboring sidebands:
    // (1/2) g_{2k} (eps_{n-k} + eps_{n+k}); k = 1 with a single phase
    // harmonic reduces to the g_tilde Bessel-pair correction
    let mut correction = 0.0;
    for k in 1..=harmonics {
        let gk = g_f.coeffs[2 * k];
        if gk != 0.0 {
            correction += 0.5 * gk * (eps_at(sideband - k as i64) + eps_at(sideband + k as i64));
        }
    }

    let z_tilde = trans_f.second_harmonic() / (2.0 * pulse.frequency);
    Ok(EffectiveCoupling {
        value: bare * eps_n + correction,
        bare,
        bare_tilde,
        small_amplitude: bare * bessel_j(sideband, z_tilde),
        correction,
    })
}

/// Effective single-qubit drive amplitudes at sideband n, MHz.
#[derive(Clone, Debug, Serialize)]
pub struct Drives {
    pub omega_01: f64,
    pub omega_12: f64,
    pub omega_02: f64,
}

/// Power laws of the three nonadiabatic drive coefficients `nu(t)`.
pub(crate) fn drive_power_law(
    pair: &CoupledPair,
    pulse: &FluxPulse,
    which: usize,
    order: u32,
) -> PowerLaw {
    let t = &pair.qubit_t;
    let (e1, e2, e_c) = (t.e_j1(), t.e_j2(), t.e_c());
    let set = crate::perturbation::reference_series().truncated(order);
    let drive_scale = pulse.frequency * pulse.amplitude;
    if which == 2 {
        // nu_02 = w_p a J_1(a) (E_J1 E_J2 / 4 E_Jeff^2) upsilon
        //       = w_p a J_1(a) E_J1 E_J2 / (16 E_C^2) * upsilon(xi) xi^4
        let k = drive_scale * bessel_j(1, pulse.amplitude) * e1 * e2 / (16.0 * e_c * e_c);
        return PowerLaw::from_series(&set.upsilon, -std::f64::consts::SQRT_2 * k, 4.0);
    }
    // nu_01 = w_p a (lambda/(4 sqrt xi)) (E_J1 E_J2/E_Jeff^2)[E_J1/E_J2 + cos(phi)]
    // with 1/E_Jeff^2 = xi^4/(4 E_C^2) and cos(phi) = (xi^-4 - Xi_bar)/Xi_tilde
    let (series, front) = if which == 0 {
        (&set.lambda, 1.0 / 4.0)
    } else {
        (&set.lambda_big, 1.0 / (2.0 * std::f64::consts::SQRT_2))
    };
    let xi_bar_4 = (e1 * e1 + e2 * e2) / (4.0 * e_c * e_c);
    let xi_tilde = e1 * e2 / (2.0 * e_c * e_c);
    let k = drive_scale * front * e1 * e2 / (4.0 * e_c * e_c);
    let smooth = PowerLaw::from_series(series, k * (e1 / e2 - xi_bar_4 / xi_tilde), 3.5);
    let singular = PowerLaw::from_series(series, k / xi_tilde, -0.5);
    smooth.extend(singular)
}

/// Sampled drive coefficient `nu(t)` over one period; `which` selects
/// 0 -> nu_01, 1 -> nu_12, 2 -> nu_02.
pub fn drive_waveform(
    pair: &CoupledPair,
    pulse: &FluxPulse,
    which: usize,
    opts: &ModOptions,
) -> Result<Waveform> {
    let law = drive_power_law(pair, pulse, which, opts.order);
    let label = ["nu_01", "nu_12", "nu_02"][which];
    sample_power_law(&pair.qubit_t, pulse, &law, opts.grid, label)
}

/// Effective drives at sideband n from the mean and second harmonic of each
/// `nu(t)` and the Bessel ladder of the corresponding transition frequency.
pub fn effective_drives(
    pair: &CoupledPair,
    pulse: &FluxPulse,
    sideband: i64,
    opts: &ModOptions,
) -> Result<Drives> {
    if pulse.amplitude == 0.0 {
        return Ok(Drives {
            omega_01: 0.0,
            omega_12: 0.0,
            omega_02: 0.0,
        });
    }
    let n = sideband;
    let mut nu_stats = [(0.0, 0.0); 3];
    for (which, slot) in nu_stats.iter_mut().enumerate() {
        let w = drive_waveform(pair, pulse, which, opts)?;
        let f = fourier_coefficients_quadrature(&w, 4)?;
        *slot = (f.mean(), f.second_harmonic());
    }
    let z = |param: TransmonParameter| -> Result<f64> {
        let w = parameter_waveform(&pair.qubit_t, pulse, param, opts.grid, opts.order)?;
        let f = fourier_coefficients_quadrature(&w, 2)?;
        Ok(f.second_harmonic() / (2.0 * pulse.frequency))
    };

    let z01 = z(TransmonParameter::Omega01)?;
    let (nu, nut) = nu_stats[0];
    let omega_01 = (nu - 0.5 * nut) * (bessel_j(n, z01) + bessel_j(n + 1, z01))
        - 0.5 * nut * (bessel_j(n - 1, z01) + bessel_j(n + 2, z01));

    let z12 = z(TransmonParameter::Omega12)?;
    let (nu, nut) = nu_stats[1];
    let omega_12 = (nu - 0.5 * nut) * (bessel_j(n, z12) + bessel_j(n + 1, z12))
        - 0.5 * nut * (bessel_j(n - 1, z12) + bessel_j(n + 2, z12));

    let z02 = z(TransmonParameter::Omega02)?;
    let (nu, _) = nu_stats[2];
    let omega_02 = nu * (bessel_j(n - 1, z02) - bessel_j(n + 1, z02));

    Ok(Drives {
        omega_01,
        omega_12,
        omega_02,
    })
}

/// Compute the modulation frequency activating a gate at the given
/// amplitude, using the amplitude-averaged tunable frequency, and attach the
/// first-sideband effective coupling.
pub fn activation_frequency(
    pair: &CoupledPair,
    amplitude: f64,
    kind: GateKind,
    opts: &ModOptions,
) -> Result<GateOperatingPoint> {
    // harmonic content is frequency-independent, so a placeholder frequency
    // can sample the averaged parameters first
    let probe = FluxPulse::new(pair.parking, amplitude, 1.0, 0.0)?;
    if !probe.parked_at_sweet_spot() {
        log::warn!("gate activation away from a sweet spot is outside the even-harmonic expansion");
    }
    let omega_t = fourier_coefficients_quadrature(
        &parameter_waveform(
            &pair.qubit_t,
            &probe,
            TransmonParameter::Omega01,
            opts.grid,
            opts.order,
        )?,
        opts.k_max,
    )?;
    let eta_t = fourier_coefficients_quadrature(
        &parameter_waveform(
            &pair.qubit_t,
            &probe,
            TransmonParameter::Eta,
            opts.grid,
            opts.order,
        )?,
        opts.k_max,
    )?;
    let pf = pair.point_f(opts.order)?;
    let delta = pf.omega - omega_t.mean();
    let sigma = pf.omega + omega_t.mean();

    // the line rotating at 2 n omega_p - detuning comes to rest at
    // n = sign(detuning): the sideband index is signed, and eps_{-n} differs
    // from eps_n once several harmonics contribute
    let detuning = match kind {
        GateKind::ISwap => delta,
        GateKind::Cz02 => delta + eta_t.mean(),
        GateKind::Cz20 => delta - pf.eta,
        GateKind::BellRabi => -sigma,
    };
    let omega_p = detuning.abs() / 2.0;
    if omega_p <= 0.0 {
        return Err(Error::TransitionNotReachable { omega_p });
    }
    let sideband: i64 = if detuning > 0.0 { 1 } else { -1 };

    let pulse = FluxPulse::new(pair.parking, amplitude, omega_p, 0.0)?;
    let coupling = effective_coupling(pair, &pulse, kind.channel(), sideband, opts)?;
    let transition = parameter_waveform(
        &pair.qubit_t,
        &pulse,
        kind.channel().transition(),
        opts.grid,
        opts.order,
    )?;
    let trans_f = fourier_coefficients_quadrature(&transition, opts.k_max)?;
    let beta = phase_beta(&trans_f, &pulse, sideband);

    Ok(GateOperatingPoint {
        kind,
        omega_p,
        g_eff: coupling.value,
        ratio: (coupling.value - coupling.correction) / coupling.bare,
        sideband,
        beta,
    })
}
