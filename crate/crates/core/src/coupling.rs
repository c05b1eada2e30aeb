//! Static analysis of a capacitively-coupled transmon pair: coupling
//! strengths in the transmon eigenbasis and dispersive frequency shifts,
//! with an end-to-end numerical cross-check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle;
use crate::tunable::{params_at_flux, FluxPoint, TransmonSpec};

/// Default resonance guard on the dispersive denominators, MHz.
pub const RESONANCE_TOL: f64 = 1.0;

/// Detuning-to-coupling factor below which the dispersive expansion is
/// flagged invalid.
pub const DISPERSIVE_VALIDITY_FACTOR: f64 = 10.0;

/// Two transmons and their charge-charge coupling. Qubit 1 is the
/// fixed-frequency side, qubit 2 the (possibly) tunable side evaluated at its
/// parking flux.
#[derive(Clone, Debug, Serialize)]
pub struct CoupledPair {
    pub qubit_f: TransmonSpec,
    pub qubit_t: TransmonSpec,
    /// Charge-charge coupling `g_C`, MHz.
    pub g_c: f64,
    /// Parking flux of the tunable side, radians.
    pub parking: f64,
}

impl CoupledPair {
    pub fn new(qubit_f: TransmonSpec, qubit_t: TransmonSpec, g_c: f64, parking: f64) -> Result<Self> {
        if g_c < 0.0 {
            return Err(Error::NonPhysical(format!("g_C must be >= 0 (got {g_c})")));
        }
        Ok(Self {
            qubit_f,
            qubit_t,
            g_c,
            parking,
        })
    }

    /// Parameters of the fixed side (flux 0 by definition).
    pub fn point_f(&self, order: u32) -> Result<FluxPoint> {
        params_at_flux(&self.qubit_f, 0.0, order)
    }

    /// Parameters of the tunable side at its parking flux.
    pub fn point_t(&self, order: u32) -> Result<FluxPoint> {
        params_at_flux(&self.qubit_t, self.parking, order)
    }
}

/// Coupling strengths in the transmon eigenbasis:
/// `g = g_C / (4 sqrt(xi_1 xi_2))`, `g_11 = g l1 l2`,
/// `g_21 = sqrt2 g L1 l2`, `g_12 = sqrt2 g l1 L2`, `g_22 = 2 g L1 L2`
/// with `l = lambda`, `L = Lambda` of each side.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EigenbasisCouplings {
    pub g: f64,
    pub g_11: f64,
    pub g_12: f64,
    pub g_21: f64,
    pub g_22: f64,
}

pub fn eigenbasis_couplings(pair: &CoupledPair, order: u32) -> Result<EigenbasisCouplings> {
    let p1 = pair.point_f(order)?;
    let p2 = pair.point_t(order)?;
    Ok(couplings_from_points(pair.g_c, &p1, &p2))
}

pub(crate) fn couplings_from_points(
    g_c: f64,
    p1: &FluxPoint,
    p2: &FluxPoint,
) -> EigenbasisCouplings {
    let g = g_c / (4.0 * (p1.xi * p2.xi).sqrt());
    let rt2 = std::f64::consts::SQRT_2;
    EigenbasisCouplings {
        g,
        g_11: g * p1.lambda * p2.lambda,
        g_12: rt2 * g * p1.lambda * p2.lambda_big,
        g_21: rt2 * g * p1.lambda_big * p2.lambda,
        g_22: 2.0 * g * p1.lambda_big * p2.lambda_big,
    }
}

/// Dispersive-regime report: all shifts in MHz.
#[derive(Clone, Debug, Serialize)]
pub struct DispersiveReport {
    pub couplings: EigenbasisCouplings,
    pub delta_omega_1: f64,
    pub delta_omega_2: f64,
    pub delta_eta_1: f64,
    pub delta_eta_2: f64,
    pub chi: f64,
    /// False when `|omega_1 - omega_2|` is not large against g.
    pub dispersive_valid: bool,
}

/// State-dependent frequency shifts at lowest order in `g / detuning`:
/// `delta omega_{1,2} = +- g^2 l1^2 l2^2 / (omega_1 - omega_2)`, the eta
/// shifts with their straddling-pole denominators, and the cross shift
/// `chi = 2 g^2 [l1^2 L2^2/(D + eta_2) - L1^2 l2^2/(D - eta_1)]`.
pub fn dispersive_shifts(pair: &CoupledPair, order: u32) -> Result<DispersiveReport> {
    let p1 = pair.point_f(order)?;
    let p2 = pair.point_t(order)?;
    let couplings = couplings_from_points(pair.g_c, &p1, &p2);
    let detuning = p1.omega - p2.omega;

    if detuning.abs() < RESONANCE_TOL {
        return Err(Error::DispersiveSingular(format!(
            "|omega_1 - omega_2| = {:.3} MHz below the {RESONANCE_TOL} MHz guard",
            detuning.abs()
        )));
    }
    if (detuning - p1.eta).abs() < RESONANCE_TOL {
        return Err(Error::DispersiveSingular(format!(
            "straddling pole omega_1 - omega_2 = eta_1 (= {:.3} MHz)",
            p1.eta
        )));
    }
    if (detuning + p2.eta).abs() < RESONANCE_TOL {
        return Err(Error::DispersiveSingular(format!(
            "straddling pole omega_1 - omega_2 = -eta_2 (= {:.3} MHz)",
            -p2.eta
        )));
    }

    let g2 = couplings.g * couplings.g;
    let (l1, l2) = (p1.lambda, p2.lambda);
    let (bl1, bl2) = (p1.lambda_big, p2.lambda_big);
    let delta_omega_1 = g2 * l1 * l1 * l2 * l2 / detuning;
    let delta_omega_2 = -delta_omega_1;
    let delta_eta_1 = 2.0 * delta_omega_1 - 2.0 * g2 * l2 * l2 * bl1 * bl1 / (detuning - p1.eta);
    let delta_eta_2 = 2.0 * delta_omega_2 + 2.0 * g2 * l1 * l1 * bl2 * bl2 / (detuning + p2.eta);
    let chi = 2.0
        * g2
        * (l1 * l1 * bl2 * bl2 / (detuning + p2.eta) - bl1 * bl1 * l2 * l2 / (detuning - p1.eta));

    let dispersive_valid = detuning.abs() > DISPERSIVE_VALIDITY_FACTOR * couplings.g.abs();
    if !dispersive_valid {
        log::warn!(
            "dispersive validity is marginal: |detuning| = {:.1} MHz vs g = {:.1} MHz",
            detuning.abs(),
            couplings.g
        );
    }

    Ok(DispersiveReport {
        couplings,
        delta_omega_1,
        delta_omega_2,
        delta_eta_1,
        delta_eta_2,
        chi,
        dispersive_valid,
    })
}

/// Numerically extracted dispersive quantities from the coupled spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct OracleDispersive {
    pub chi: f64,
    pub delta_omega_1: f64,
    pub delta_omega_2: f64,
    pub delta_eta_1: f64,
    pub delta_eta_2: f64,
}

/// Diagonalize the coupled pair and read the shifts off the labeled dressed
/// spectrum.
pub fn oracle_dispersive(pair: &CoupledPair, dim: usize) -> Result<OracleDispersive> {
    let xi1 = pair.qubit_f.xi_at(0.0)?;
    let xi2 = pair.qubit_t.xi_at(pair.parking)?;
    let (ej1, _) = crate::tunable::effective_junction(&pair.qubit_f, 0.0)?;
    let (ej2, _) = crate::tunable::effective_junction(&pair.qubit_t, pair.parking)?;

    let h1 = oracle::build_single(pair.qubit_f.e_c(), ej1, dim)?;
    let h2 = oracle::build_single(pair.qubit_t.e_c(), ej2, dim)?;
    let s1 = oracle::diagonalize(&h1)?;
    let s2 = oracle::diagonalize(&h2)?;
    let hc = oracle::build_coupled(&h1, xi1, &h2, xi2, pair.g_c)?;
    let sc = oracle::diagonalize(&hc)?;
    let labels = oracle::dressed_labels(&sc, &s1, &s2, 3)?;

    let e = |i: usize, j: usize| labels.energy(i, j) - labels.energy(0, 0);
    let omega1_bare = s1.omega();
    let omega2_bare = s2.omega();
    let delta_omega_1 = e(1, 0) - omega1_bare;
    let delta_omega_2 = e(0, 1) - omega2_bare;
    let delta_eta_1 = (2.0 * e(1, 0) - e(2, 0)) - s1.eta();
    let delta_eta_2 = (2.0 * e(0, 1) - e(0, 2)) - s2.eta();
    Ok(OracleDispersive {
        chi: labels.chi(),
        delta_omega_1,
        delta_omega_2,
        delta_eta_1,
        delta_eta_2,
    })
}
