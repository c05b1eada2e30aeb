//! Flux-tunable transmons: the SQUID maps an external flux to an effective
//! single-junction transmon, so every fixed-frequency result applies with
//! `xi(phi) = sqrt(2 E_C / E_Jeff(phi))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perturbation::{reference_series, TransmonSeriesSet};

/// Hard ceiling on xi: beyond this the expansion has left the transmon
/// regime.
pub const XI_LIMIT: f64 = 0.5;

/// Physical parameters of one transmon. `e_j2 = 0` denotes a fixed-frequency
/// device with a single junction `e_j1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransmonSpec {
    e_c: f64,
    e_j1: f64,
    e_j2: f64,
    label: Option<String>,
}

impl TransmonSpec {
    /// Fixed-frequency transmon with a single junction.
    pub fn fixed(e_c: f64, e_j: f64) -> Result<Self> {
        Self::tunable(e_c, e_j, 0.0)
    }

    /// Tunable transmon from both junction energies (MHz).
    pub fn tunable(e_c: f64, e_j1: f64, e_j2: f64) -> Result<Self> {
        if e_c <= 0.0 || e_j1 <= 0.0 || e_j2 < 0.0 {
            return Err(Error::NonPhysical(format!(
                "require E_C > 0, E_J1 > 0, E_J2 >= 0 (got {e_c}, {e_j1}, {e_j2})"
            )));
        }
        Ok(Self {
            e_c,
            e_j1,
            e_j2,
            label: None,
        })
    }

    /// Fixed-frequency transmon targeting the given xi: `E_J = 2 E_C / xi^2`.
    pub fn from_xi(e_c: f64, xi: f64) -> Result<Self> {
        if xi <= 0.0 || xi >= XI_LIMIT {
            return Err(Error::XiOutOfRange { xi, limit: XI_LIMIT });
        }
        Self::fixed(e_c, 2.0 * e_c / (xi * xi))
    }

    /// Tunable transmon from the xi values at the top and bottom sweet spots;
    /// inverts the effective-junction extrema
    /// `E_J1 + E_J2 = 2 E_C / xi_max^2`, `|E_J1 - E_J2| = 2 E_C / xi_min^2`.
    pub fn from_xi_range(e_c: f64, xi_max: f64, xi_min: f64) -> Result<Self> {
        if !(0.0 < xi_max && xi_max <= xi_min && xi_min < XI_LIMIT) {
            return Err(Error::NonPhysical(format!(
                "need 0 < xi_max <= xi_min < {XI_LIMIT} (got {xi_max}, {xi_min})"
            )));
        }
        let sum = 2.0 * e_c / (xi_max * xi_max);
        let diff = 2.0 * e_c / (xi_min * xi_min);
        Self::tunable(e_c, (sum + diff) / 2.0, (sum - diff) / 2.0)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn e_c(&self) -> f64 {
        self.e_c
    }

    pub fn e_j1(&self) -> f64 {
        self.e_j1
    }

    pub fn e_j2(&self) -> f64 {
        self.e_j2
    }

    pub fn is_tunable(&self) -> bool {
        self.e_j2 > 0.0
    }

    /// xi at the given external flux (radians).
    pub fn xi_at(&self, phi_ext: f64) -> Result<f64> {
        let (e_j_eff, _) = effective_junction(self, phi_ext)?;
        let xi = (2.0 * self.e_c / e_j_eff).sqrt();
        if xi >= XI_LIMIT {
            return Err(Error::XiOutOfRange { xi, limit: XI_LIMIT });
        }
        Ok(xi)
    }
}

/// Effective Josephson energy and offset phase of the SQUID at an external
/// flux (radians):
/// `E_Jeff = sqrt(E_J1^2 + E_J2^2 + 2 E_J1 E_J2 cos(phi))` and the
/// quadrant-correct `phi_eff = atan2(sin phi, cos phi + E_J2/E_J1)`.
pub fn effective_junction(spec: &TransmonSpec, phi_ext: f64) -> Result<(f64, f64)> {
    let (e1, e2) = (spec.e_j1, spec.e_j2);
    let sq = e1 * e1 + e2 * e2 + 2.0 * e1 * e2 * phi_ext.cos();
    let e_j_eff = sq.max(0.0).sqrt();
    if e_j_eff < 1e-9 * (e1 + e2) {
        return Err(Error::JunctionCollapse { phi_ext });
    }
    let phi_eff = phi_ext.sin().atan2(phi_ext.cos() + e2 / e1);
    Ok((e_j_eff, phi_eff))
}

/// Derivative of the offset phase with respect to the external flux,
/// `E_J1 E_J2 / E_Jeff^2 (E_J1/E_J2 + cos phi)`; for a single junction this
/// is 1.
pub fn phi_eff_derivative(spec: &TransmonSpec, phi_ext: f64) -> Result<f64> {
    let (e_j_eff, _) = effective_junction(spec, phi_ext)?;
    if spec.e_j2 == 0.0 {
        return Ok(1.0);
    }
    Ok(spec.e_j1 * (spec.e_j1 + spec.e_j2 * phi_ext.cos()) / (e_j_eff * e_j_eff))
}

/// Logarithmic flux sensitivity of xi:
/// `d(ln xi)/d(phi) = E_J1 E_J2 sin(phi) / (2 E_Jeff^2)`.
pub fn xi_log_derivative(spec: &TransmonSpec, phi_ext: f64) -> Result<f64> {
    let (e_j_eff, _) = effective_junction(spec, phi_ext)?;
    Ok(spec.e_j1 * spec.e_j2 * phi_ext.sin() / (2.0 * e_j_eff * e_j_eff))
}

/// All transmon parameters evaluated at one flux point.
#[derive(Clone, Debug, Serialize)]
pub struct FluxPoint {
    pub phi_ext: f64,
    pub e_j_eff: f64,
    pub phi_eff: f64,
    pub xi: f64,
    /// Transition frequency, MHz.
    pub omega: f64,
    /// Anharmonicity, MHz.
    pub eta: f64,
    pub lambda: f64,
    pub lambda_big: f64,
    /// Physical nonadiabatic weight (negative).
    pub upsilon: f64,
}

/// Evaluate every parameter series at `xi(phi_ext)` at the given expansion
/// order.
pub fn params_at_flux(spec: &TransmonSpec, phi_ext: f64, order: u32) -> Result<FluxPoint> {
    let set = reference_series().truncated(order);
    params_at_flux_with(&set, spec, phi_ext)
}

/// Same as [`params_at_flux`] with a caller-held series set (avoids
/// re-truncating in sweeps).
pub fn params_at_flux_with(
    set: &TransmonSeriesSet,
    spec: &TransmonSpec,
    phi_ext: f64,
) -> Result<FluxPoint> {
    let (e_j_eff, phi_eff) = effective_junction(spec, phi_ext)?;
    let xi = spec.xi_at(phi_ext)?;
    Ok(FluxPoint {
        phi_ext,
        e_j_eff,
        phi_eff,
        xi,
        omega: spec.e_c * set.omega_over_ec(xi)?,
        eta: spec.e_c * set.eta_over_ec(xi)?,
        lambda: set.lambda_at(xi)?,
        lambda_big: set.lambda_big_at(xi)?,
        upsilon: set.upsilon_at(xi)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SweetSpotKind {
    Maximum,
    Minimum,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweetSpot {
    pub phi_ext: f64,
    pub kind: SweetSpotKind,
}

/// Flux bias points that are first-order insensitive to flux noise: the
/// extrema of the effective Josephson energy, at 0 (maximum) and pi
/// (minimum) modulo 2 pi.
pub fn sweet_spots(_spec: &TransmonSpec) -> Vec<SweetSpot> {
    vec![
        SweetSpot {
            phi_ext: 0.0,
            kind: SweetSpotKind::Maximum,
        },
        SweetSpot {
            phi_ext: std::f64::consts::PI,
            kind: SweetSpotKind::Minimum,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn constructive_flux() {
        let spec = TransmonSpec::tunable(200.0, 9000.0, 4000.0).unwrap();
        let (e, p) = effective_junction(&spec, 0.0).unwrap();
        assert_abs_diff_eq!(e, 13_000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(p, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_squid_at_quarter_flux() {
        let spec = TransmonSpec::tunable(200.0, 8000.0, 8000.0).unwrap();
        let (e, p) = effective_junction(&spec, PI / 2.0).unwrap();
        assert_abs_diff_eq!(e, 8000.0 * 2.0_f64.sqrt(), epsilon = 1e-6);
        assert_abs_diff_eq!(p, PI / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetric_squid_collapses_at_pi() {
        let spec = TransmonSpec::tunable(200.0, 8000.0, 8000.0).unwrap();
        assert!(matches!(
            effective_junction(&spec, PI),
            Err(Error::JunctionCollapse { .. })
        ));
    }

    #[test]
    fn phi_eff_continuous_for_asymmetric_squid() {
        // a single-argument arctan would jump by pi at phi_ext = pi; the
        // quadrant-correct form is continuous modulo the 2 pi winding
        let spec = TransmonSpec::tunable(200.0, 9000.0, 3000.0).unwrap();
        let mut last = effective_junction(&spec, PI - 0.2).unwrap().1;
        for i in 1..=40 {
            let phi = PI - 0.2 + 0.01 * i as f64;
            let (_, p) = effective_junction(&spec, phi).unwrap();
            let mut step = p - last;
            step -= (step / (2.0 * PI)).round() * 2.0 * PI;
            assert!(step.abs() < 0.2, "jump at phi = {phi}: {last} -> {p}");
            last = p;
        }
    }

    #[test]
    fn phi_eff_derivative_matches_finite_difference() {
        let spec = TransmonSpec::tunable(200.0, 12_812.5, 1406.25).unwrap();
        for &phi in &[0.3, 1.2, 2.5, 3.4] {
            let h = 1e-6;
            let fd = (effective_junction(&spec, phi + h).unwrap().1
                - effective_junction(&spec, phi - h).unwrap().1)
                / (2.0 * h);
            assert_abs_diff_eq!(phi_eff_derivative(&spec, phi).unwrap(), fd, epsilon = 1e-7);
        }
    }

    #[test]
    fn xi_log_derivative_matches_finite_difference() {
        let spec = TransmonSpec::from_xi_range(200.0, 0.16, 0.2).unwrap();
        for &phi in &[0.4, 1.5, 2.8] {
            let h = 1e-6;
            let fd = (spec.xi_at(phi + h).unwrap().ln() - spec.xi_at(phi - h).unwrap().ln())
                / (2.0 * h);
            assert_abs_diff_eq!(xi_log_derivative(&spec, phi).unwrap(), fd, epsilon = 1e-7);
        }
    }

    #[test]
    fn xi_range_inversion() {
        // E_C = 200, xi_max = 0.16, xi_min = 0.2:
        // sum = 15625, diff = 10000
        let spec = TransmonSpec::from_xi_range(200.0, 0.16, 0.2).unwrap();
        assert_abs_diff_eq!(spec.e_j1() + spec.e_j2(), 15_625.0, epsilon = 1e-9);
        assert_abs_diff_eq!(spec.e_j1() - spec.e_j2(), 10_000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(spec.xi_at(0.0).unwrap(), 0.16, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.xi_at(PI).unwrap(), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn tunable_extremes_reproduce_reference_frequencies() {
        // omega_max 4791 / eta_max 222 at phi = 0, omega_min 3788 / eta_min
        // 230 at phi = pi
        let spec = TransmonSpec::from_xi_range(200.0, 0.16, 0.2).unwrap();
        let top = params_at_flux(&spec, 0.0, 25).unwrap();
        assert_eq!(top.omega.round(), 4791.0);
        assert_eq!(top.eta.round(), 222.0);
        let bottom = params_at_flux(&spec, PI, 25).unwrap();
        assert_eq!(bottom.omega.round(), 3788.0);
        assert_eq!(bottom.eta.round(), 230.0);
    }

    #[test]
    fn flux_parity() {
        let spec = TransmonSpec::from_xi_range(200.0, 0.16, 0.2).unwrap();
        let a = params_at_flux(&spec, 0.7, 25).unwrap();
        let b = params_at_flux(&spec, -0.7, 25).unwrap();
        assert_eq!(a.omega, b.omega);
        assert_eq!(a.eta, b.eta);
    }

    #[test]
    fn sweet_spot_flatness() {
        let spec = TransmonSpec::from_xi_range(200.0, 0.16, 0.2).unwrap();
        for spot in sweet_spots(&spec) {
            let h = 1e-5;
            let d_ej = (effective_junction(&spec, spot.phi_ext + h).unwrap().0
                - effective_junction(&spec, spot.phi_ext - h).unwrap().0)
                / (2.0 * h);
            assert!(d_ej.abs() < 1e-4, "dE_Jeff/dphi = {d_ej} at sweet spot");
            let d_omega = (params_at_flux(&spec, spot.phi_ext + h, 25).unwrap().omega
                - params_at_flux(&spec, spot.phi_ext - h, 25).unwrap().omega)
                / (2.0 * h);
            assert!(d_omega.abs() < 1e-6 * 1.0, "domega/dphi = {d_omega} MHz/rad");
        }
        assert_eq!(sweet_spots(&spec)[0].kind, SweetSpotKind::Maximum);
    }

    #[test]
    fn asymmetric_minimum() {
        let spec = TransmonSpec::tunable(200.0, 9000.0, 4000.0).unwrap();
        let (e, _) = effective_junction(&spec, PI).unwrap();
        assert_abs_diff_eq!(e, 5000.0, epsilon = 1e-9);
    }

    #[test]
    fn xi_monotone_in_effective_junction() {
        let spec = TransmonSpec::from_xi_range(200.0, 0.16, 0.2).unwrap();
        let mut last = spec.xi_at(0.0).unwrap();
        for i in 1..=20 {
            let xi = spec.xi_at(PI * i as f64 / 20.0).unwrap();
            assert!(xi >= last);
            last = xi;
        }
    }

    #[test]
    fn regime_guard() {
        assert!(TransmonSpec::from_xi(200.0, 0.6).is_err());
        let spec = TransmonSpec::tunable(200.0, 1700.0, 1690.0).unwrap();
        // near-destructive flux drives xi past the guard
        assert!(matches!(
            spec.xi_at(PI),
            Err(Error::XiOutOfRange { .. })
        ));
    }
}
