//! The documented reference devices used throughout the verification suite.

use crate::coupling::CoupledPair;
use crate::tunable::TransmonSpec;

/// Fixed transmon, E_C = 200 MHz, xi = 0.2 (omega 3788, eta 230 MHz).
pub fn fixed_reference() -> TransmonSpec {
    TransmonSpec::from_xi(200.0, 0.2).expect("valid reference device")
}

/// Tunable transmon, E_C = 200 MHz, xi from 0.16 (top) to 0.2 (bottom):
/// omega 4791 -> 3788 MHz, eta 222 -> 230 MHz.
pub fn tunable_reference() -> TransmonSpec {
    TransmonSpec::from_xi_range(200.0, 0.16, 0.2).expect("valid reference device")
}

/// Two fixed transmons at xi = 0.18 / 0.175, both E_C = 200 MHz
/// (4234/226 and 4361/225 MHz), coupled by `g_c`.
pub fn coupled_reference_pair(g_c: f64) -> CoupledPair {
    CoupledPair::new(
        TransmonSpec::from_xi(200.0, 0.18).expect("valid reference device"),
        TransmonSpec::from_xi(200.0, 0.175).expect("valid reference device"),
        g_c,
        0.0,
    )
    .expect("valid pair")
}

/// Gate device: fixed transmon at xi = 0.21, E_C = 200 MHz (3597/232 MHz)
/// coupled to a tunable one at E_C = 190 MHz, xi in [0.16, 0.2]
/// (4551 -> 3599 MHz, eta 211 -> 218 MHz), parked at the top sweet spot.
pub fn gate_reference_pair(g_c: f64) -> CoupledPair {
    CoupledPair::new(
        TransmonSpec::from_xi(200.0, 0.21).expect("valid reference device"),
        TransmonSpec::from_xi_range(190.0, 0.16, 0.2).expect("valid reference device"),
        g_c,
        0.0,
    )
    .expect("valid pair")
}
