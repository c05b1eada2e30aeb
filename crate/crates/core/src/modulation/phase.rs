//! Harmonic expansion of the integrated-phase factor `exp(i int f dt')`.
//!
//! Writing `f(t) = f_0 + sum_k f_k cos(k(w_p t + q_p))`, the oscillating part
//! integrates to a sum of sine phase modulations with depths
//! `z_k = f_k / (k w_p)`; the Jacobi-Anger ladder of each harmonic then
//! multiplies out into sideband amplitudes
//! `eps_n = sum_{sum k l_k = n} prod_k J_{l_k}(z_k)`.

use serde::Serialize;

use crate::error::{Error, Result};

use super::bessel::bessel_j_table;
use super::fourier::FourierExpansion;
use super::FluxPulse;

/// Sideband decomposition of `exp(i int f dt')`: the phase offset and the
/// amplitudes `eps_n` for `n in [-n_max, n_max]`.
#[derive(Clone, Debug, Serialize)]
pub struct PhaseExpansion {
    pub theta_p: f64,
    epsilon: Vec<f64>,
    n_max: i64,
}

impl PhaseExpansion {
    pub fn epsilon(&self, n: i64) -> f64 {
        if n.abs() > self.n_max {
            return 0.0;
        }
        self.epsilon[(n + self.n_max) as usize]
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }
}

/// One active harmonic of the phase modulation.
struct ActiveHarmonic {
    k: i64,
    /// J_l(z_k) for l in [-l_max, l_max], indexed l + l_max.
    bessels: Vec<f64>,
    l_max: i64,
}

impl ActiveHarmonic {
    fn new(k: i64, z: f64, cutoff: f64) -> Self {
        // table big enough that dropped orders carry < cutoff weight
        let hi = (z.abs().ceil() as usize) + 36;
        let table = bessel_j_table(hi, z.abs());
        let mut l_max = 1;
        for (l, &v) in table.iter().enumerate() {
            if v.abs() > cutoff {
                l_max = l as i64;
            }
        }
        l_max += 2;
        let mut bessels = vec![0.0; (2 * l_max + 1) as usize];
        let neg = z < 0.0;
        for l in -l_max..=l_max {
            let a = l.unsigned_abs() as usize;
            let mut v = table[a];
            // J_{-l}(x) = (-1)^l J_l(x); J_l(-x) = (-1)^l J_l(x)
            if (l < 0) ^ neg && l % 2 != 0 {
                v = -v;
            }
            bessels[(l + l_max) as usize] = v;
        }
        Self { k, bessels, l_max }
    }

    fn j(&self, l: i64) -> f64 {
        self.bessels[(l + self.l_max) as usize]
    }
}

/// `eps_n` from explicit modulation depths `(k, z_k)`, by bounded
/// depth-first search over the Bessel ladders.
pub(crate) fn epsilon_from_depths(depths: &[(i64, f64)], n_max: i64, cutoff: f64) -> Vec<f64> {
    let mut eps = vec![0.0; (2 * n_max + 1) as usize];
    let active: Vec<ActiveHarmonic> = depths
        .iter()
        .filter(|&&(_, z)| z.abs() > cutoff)
        .map(|&(k, z)| ActiveHarmonic::new(k, z, 1e-15))
        .collect();
    if active.is_empty() {
        eps[n_max as usize] = 1.0;
        return eps;
    }
    // reach[i] = max |sum_{j >= i} k_j l_j| over the remaining ladders
    let mut reach = vec![0i64; active.len() + 1];
    for i in (0..active.len()).rev() {
        reach[i] = reach[i + 1] + active[i].k * active[i].l_max;
    }
    dfs(&active, &reach, 0, 0, 1.0, n_max, &mut eps);
    eps
}

fn dfs(
    active: &[ActiveHarmonic],
    reach: &[i64],
    idx: usize,
    n_partial: i64,
    weight: f64,
    n_max: i64,
    eps: &mut [f64],
) {
    if weight.abs() < 1e-14 {
        return;
    }
    if idx == active.len() {
        if n_partial.abs() <= n_max {
            eps[(n_partial + n_max) as usize] += weight;
        }
        return;
    }
    if n_partial.abs() - reach[idx] > n_max {
        return; // cannot come back into range
    }
    let h = &active[idx];
    for l in -h.l_max..=h.l_max {
        let j = h.j(l);
        if j == 0.0 {
            continue;
        }
        dfs(active, reach, idx + 1, n_partial + h.k * l, weight * j, n_max, eps);
    }
}

/// Sideband expansion of `exp(i int f dt')` for a parameter with the given
/// harmonic content under the given pulse. `n_max` bounds the returned
/// sideband index.
pub fn integrated_phase_expansion(
    f: &FourierExpansion,
    pulse: &FluxPulse,
    n_max: i64,
    cutoff: f64,
) -> Result<PhaseExpansion> {
    if pulse.frequency <= 0.0 {
        return Err(Error::Domain(format!(
            "modulation frequency must be positive (got {} MHz)",
            pulse.frequency
        )));
    }
    let mut theta_p = 0.0;
    let mut depths = Vec::new();
    for k in 1..=f.k_max() {
        let z = f.coeffs[k] / (k as f64 * pulse.frequency);
        theta_p += z * (k as f64 * pulse.phase).sin();
        depths.push((k as i64, z));
    }
    Ok(PhaseExpansion {
        theta_p,
        epsilon: epsilon_from_depths(&depths, n_max, cutoff),
        n_max,
    })
}

/// Sideband phase `beta = 2 n theta_p - sum_k z_{2k} sin(2 k theta_p)` of a
/// transition's even harmonics.
pub fn phase_beta(f: &FourierExpansion, pulse: &FluxPulse, sideband: i64) -> f64 {
    let mut beta = 2.0 * sideband as f64 * pulse.phase;
    for k in 1..=(f.k_max() / 2) {
        let z = f.coeffs[2 * k] / (2.0 * k as f64 * pulse.frequency);
        beta -= z * (2.0 * k as f64 * pulse.phase).sin();
    }
    beta
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::bessel::bessel_j;

    fn expansion(coeffs: Vec<f64>, sweet: bool) -> FourierExpansion {
        FourierExpansion {
            label: "test".into(),
            coeffs,
            parked_at_sweet_spot: sweet,
        }
    }

    #[test]
    fn no_harmonics_is_identity() {
        let f = expansion(vec![123.0, 0.0, 0.0, 0.0], true);
        let pulse = FluxPulse::new(0.0, 0.0, 100.0, 0.0).unwrap();
        let p = integrated_phase_expansion(&f, &pulse, 5, 1e-12).unwrap();
        assert_eq!(p.epsilon(0), 1.0);
        for n in 1..=5 {
            assert_eq!(p.epsilon(n), 0.0);
            assert_eq!(p.epsilon(-n), 0.0);
        }
        assert_eq!(p.theta_p, 0.0);
    }

    #[test]
    fn single_harmonic_reduces_to_bessel() {
        // only f_2: eps_n = J_{n/2}(f_2 / (2 w_p)) for even n, 0 for odd
        let f2 = 220.0;
        let wp = 100.0;
        let f = expansion(vec![4000.0, 0.0, f2, 0.0, 0.0], true);
        let pulse = FluxPulse::new(0.0, 0.5, wp, 0.0).unwrap();
        let p = integrated_phase_expansion(&f, &pulse, 8, 1e-12).unwrap();
        let z = f2 / (2.0 * wp);
        for n in -8i64..=8 {
            let want = if n % 2 == 0 { bessel_j(n / 2, z) } else { 0.0 };
            assert!(
                (p.epsilon(n) - want).abs() < 1e-12,
                "eps_{n} = {} want {want}",
                p.epsilon(n)
            );
        }
    }

    #[test]
    fn epsilon_weight_is_conserved() {
        // sum_n eps_n^2 = 1: the sidebands redistribute, never create, weight
        let f = expansion(vec![4000.0, 0.0, 300.0, 0.0, -40.0, 0.0, 6.0], true);
        let pulse = FluxPulse::new(0.0, 1.0, 120.0, 0.0).unwrap();
        let p = integrated_phase_expansion(&f, &pulse, 30, 1e-12).unwrap();
        let total: f64 = (-30i64..=30).map(|n| p.epsilon(n) * p.epsilon(n)).sum();
        assert!((total - 1.0).abs() < 1e-10, "sideband weight {total}");
    }

    #[test]
    fn reconstructs_integrated_exponential() {
        // sum_n eps_n e^{i n x} must reproduce e^{i int (f - f_0)} sampled
        // in time, including the theta_p offset
        let coeffs = vec![3800.0, 0.0, 250.0, 0.0, -35.0, 0.0, 4.0];
        let f = expansion(coeffs.clone(), true);
        let wp = 140.0;
        let theta = 0.37;
        let pulse = FluxPulse::new(0.0, 1.0, wp, theta).unwrap();
        let p = integrated_phase_expansion(&f, &pulse, 24, 1e-12).unwrap();

        let two_pi = 2.0 * std::f64::consts::PI;
        let mut worst = 0.0f64;
        for step in 0..200 {
            let t = step as f64 * 0.9 / (wp * 200.0);
            // phase angle of e^{i int 2pi (f - f_0) dt'}; the 2 pi from the
            // MHz/us convention cancels against the one in d/dt sin(k x)
            let mut integral = 0.0;
            for (k, &c) in coeffs.iter().enumerate().skip(1) {
                let kf = k as f64;
                integral += c * ((kf * (two_pi * wp * t + theta)).sin() - (kf * theta).sin())
                    / (kf * wp);
            }
            // lhs = e^{i 2pi * integral_MHz_us}; note the angular factor
            let lhs = num_complex::Complex64::from_polar(1.0, integral);
            let mut rhs = num_complex::Complex64::new(0.0, 0.0);
            for n in -24i64..=24 {
                let x = two_pi * wp * t + theta;
                rhs += num_complex::Complex64::from_polar(p.epsilon(n), n as f64 * x);
            }
            rhs *= num_complex::Complex64::from_polar(1.0, -p.theta_p);
            worst = worst.max((lhs - rhs).norm());
        }
        assert!(worst < 1e-8, "reconstruction deviation {worst}");
    }

    #[test]
    fn beta_reductions() {
        let f = expansion(vec![4000.0, 0.0, 260.0, 0.0, -30.0], true);
        // theta_p = 0 -> beta = 0
        let p0 = FluxPulse::new(0.0, 1.0, 100.0, 0.0).unwrap();
        assert_eq!(phase_beta(&f, &p0, 1), 0.0);

        // single harmonic, n = 0: beta = -(f_2/(2 w_p)) sin(2 theta)
        let single = expansion(vec![4000.0, 0.0, 260.0], true);
        let theta = 0.8;
        let p = FluxPulse::new(0.0, 1.0, 100.0, theta).unwrap();
        let want = -(260.0 / 200.0) * (2.0 * theta).sin();
        assert!((phase_beta(&single, &p, 0) - want).abs() < 1e-15);

        // theta_p = pi: beta = 2 n pi (mod 2 pi) = 0
        let ppi = FluxPulse::new(0.0, 1.0, 100.0, std::f64::consts::PI).unwrap();
        let b = phase_beta(&f, &ppi, 1);
        let wrapped = (b / (2.0 * std::f64::consts::PI)).round();
        assert!((b - wrapped * 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
