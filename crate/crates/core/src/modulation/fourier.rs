//! Harmonic content of flux-modulated parameters, through three routes: the
//! discrete cosine projection of the sampled waveform (the default), and two
//! analytic resummations of the same coefficients (a binomial/Bessel ladder
//! and its hypergeometric regrouping). The analytic routes expand around the
//! mean of `Xi = xi^{-4}`, which is linear in `cos(phi_ext)`; their expansion
//! ratio `X = Xi_tilde/Xi_bar` reaches 1 for a symmetric SQUID, where only
//! the quadrature route is reliable.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tunable::TransmonSpec;

use super::bessel::bessel_j_table;
use super::waveform::{parameter_power_law, PowerLaw, TransmonParameter, Waveform};
use super::FluxPulse;

/// Cosine-series coefficients `f(t) = sum_k f_k cos(k (2 pi f t + phase))`.
#[derive(Clone, Debug, Serialize)]
pub struct FourierExpansion {
    pub label: String,
    /// f_k for k = 0 ..= k_max, in the parameter's units.
    pub coeffs: Vec<f64>,
    pub parked_at_sweet_spot: bool,
}

impl FourierExpansion {
    pub fn k_max(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Mean value (k = 0).
    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    /// Second harmonic: the dominant oscillation amplitude at a sweet spot.
    pub fn second_harmonic(&self) -> f64 {
        self.coeffs.get(2).copied().unwrap_or(0.0)
    }

    /// Reconstruct at modulation phase `x`.
    pub fn reconstruct(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c * (k as f64 * x).cos())
            .sum()
    }
}

/// Discrete cosine projection of a sampled waveform; exact for band-limited
/// content below the aliasing guard.
pub fn fourier_coefficients_quadrature(
    waveform: &Waveform,
    k_max: usize,
) -> Result<FourierExpansion> {
    let n = waveform.grid_size();
    if n < 8 * k_max.max(1) {
        return Err(Error::AliasingGuard {
            grid: n,
            required: 8 * k_max,
        });
    }
    let values = waveform.values();
    let mut coeffs = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        // project against cos(k x) at the true modulation phase x_i; the
        // uniform grid keeps discrete orthogonality for any pulse phase
        let mut acc = 0.0;
        for (i, &v) in values.iter().enumerate() {
            acc += v * (k as f64 * waveform.phase_at(i)).cos();
        }
        let weight = if k == 0 { 1.0 } else { 2.0 };
        coeffs.push(weight * acc / n as f64);
    }
    Ok(FourierExpansion {
        label: waveform.label().to_string(),
        coeffs,
        parked_at_sweet_spot: waveform.pulse().parked_at_sweet_spot(),
    })
}

/// cos(k pi / 2) and sin(k pi / 2) without rounding residue.
fn quarter_turn(k: usize) -> (f64, f64) {
    match k % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

/// cos(a phi + k pi/2) with the quarter turns applied exactly, so the odd-k
/// coefficients vanish identically at a parking maximum.
fn shifted_cos(a: f64, phi: f64, k: usize) -> f64 {
    let (c, s) = quarter_turn(k);
    let (sp, cp) = (a * phi).sin_cos();
    c * cp - s * sp
}

struct ExpansionSetup {
    xi_bar: f64,
    ratio: f64, // X = Xi_tilde / Xi_bar
}

fn expansion_setup(spec: &TransmonSpec) -> ExpansionSetup {
    let e_c = spec.e_c();
    let xi_bar_4 = (spec.e_j1() * spec.e_j1() + spec.e_j2() * spec.e_j2()) / (4.0 * e_c * e_c);
    let xi_tilde = spec.e_j1() * spec.e_j2() / (2.0 * e_c * e_c);
    ExpansionSetup {
        xi_bar: xi_bar_4.powf(-0.25),
        ratio: xi_tilde / xi_bar_4,
    }
}

/// Incremental Gamma-ratio ladder `R(n, p) = prod_{i<n} (p/4 + i)`; the
/// `p = 0, n > 0` case vanishes automatically through the `i = 0` factor.
struct GammaLadder {
    values: Vec<f64>, // one per power-law term
    n: usize,
}

impl GammaLadder {
    fn new(len: usize) -> Self {
        Self {
            values: vec![1.0; len],
            n: 0,
        }
    }

    fn advance(&mut self, powers: &[f64]) {
        for (v, &p) in self.values.iter_mut().zip(powers) {
            *v *= p / 4.0 + self.n as f64;
        }
        self.n += 1;
    }
}

/// Binomial/Bessel form of the harmonic coefficients:
/// `f_k = sum_n (Xi_tilde^n / n!) F^(n)(Xi_bar) S_{k,n}` with
/// `S_{k,n} = (2 - d_{k0}) 2^{-n} sum_j (2 - d_{2j,n}) C(n,j)
///            cos[(n-2j) parking + k pi/2] J_k[(n-2j) amplitude]`.
pub fn fourier_coefficients_analytic(
    spec: &TransmonSpec,
    pulse: &FluxPulse,
    kind: TransmonParameter,
    k_max: usize,
    n_max: usize,
    order: u32,
) -> Result<FourierExpansion> {
    let law = parameter_power_law(spec, kind, order);
    fourier_power_law_analytic(&law, spec, pulse, k_max, n_max, kind.label())
}

/// Binomial/Bessel route for an arbitrary power law of xi.
pub(crate) fn fourier_power_law_analytic(
    law: &PowerLaw,
    spec: &TransmonSpec,
    pulse: &FluxPulse,
    k_max: usize,
    n_max: usize,
    label: &str,
) -> Result<FourierExpansion> {
    let setup = expansion_setup(spec);
    let powers: Vec<f64> = law.terms().iter().map(|&(p, _)| p).collect();
    let scaled: Vec<f64> = law
        .terms()
        .iter()
        .map(|&(p, c)| c * setup.xi_bar.powf(p))
        .collect();
    let magnitude: f64 = scaled.iter().map(|c| c.abs()).sum::<f64>().max(1e-300);
    let sweet = pulse.parked_at_sweet_spot();

    // d_n = (-X)^n / n! * sum_q c_q xi_bar^q R(n, q)
    let mut ladder = GammaLadder::new(powers.len());
    let mut x_pow_over_fact = 1.0;
    let mut coeffs = vec![0.0; k_max + 1];
    let mut bessel_cache: Vec<Vec<f64>> = Vec::new();
    let mut converged = false;
    let mut tail = f64::INFINITY;
    for n in 0..=n_max {
        if n > 0 {
            x_pow_over_fact *= -setup.ratio / n as f64;
        }
        let d_n: f64 = x_pow_over_fact
            * scaled
                .iter()
                .zip(&ladder.values)
                .map(|(c, r)| c * r)
                .sum::<f64>();
        ladder.advance(&powers);

        // S_{k,n} needs J_k(m * amplitude) for m = n - 2j
        while bessel_cache.len() <= n {
            let m = bessel_cache.len() as f64;
            bessel_cache.push(bessel_j_table(k_max, m * pulse.amplitude));
        }

        let half = 0.5f64.powi(n as i32);
        let mut binom = 1.0f64; // C(n, j) updated incrementally
        for j in 0..=(n / 2) {
            if j > 0 {
                binom *= (n - j + 1) as f64 / j as f64;
            }
            let m = n - 2 * j;
            let diagonal = if m == 0 { 1.0 } else { 2.0 };
            for k in 0..=k_max {
                if sweet && k % 2 == 1 {
                    continue;
                }
                let front = if k == 0 { 1.0 } else { 2.0 };
                let s = front * half * diagonal * binom
                    * shifted_cos(m as f64, pulse.parking, k)
                    * bessel_cache[m][k];
                coeffs[k] += d_n * s;
            }
        }

        // |S| <= 2 sum_j C(n,j)/2^n <= 2, so |d_n| bounds the added weight
        tail = 2.0 * d_n.abs();
        if n > 4 && tail < 1e-10 * magnitude {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::HarmonicNonConvergence {
            terms: n_max,
            tail: tail / magnitude,
        });
    }
    Ok(FourierExpansion {
        label: label.to_string(),
        coeffs,
        parked_at_sweet_spot: sweet,
    })
}

/// Gauss series for 2F1(a, b; c; z), |z| < 1.
fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 0..1000 {
        let mf = m as f64;
        term *= (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * z;
        sum += term;
        if term.abs() < 1e-16 * sum.abs().max(1.0) {
            return Ok(sum);
        }
    }
    Err(Error::HarmonicNonConvergence {
        terms: 1000,
        tail: term.abs(),
    })
}

/// Hypergeometric regrouping of the same coefficients:
/// `f_k = sum_n ((-X/2)^n / n!) cos(n parking + k pi/2) J_k(n amplitude) S_{k,n}`
/// with `S_{k,n} = (2-d_{k0})(2-d_{n0}) sum_p c_p xi_bar^p R(n,p)
/// 2F1(n/2 + p/8, (n+1)/2 + p/8; n+1; X^2)`.
///
/// Falls back to the binomial/Bessel route when `X^2 >= 1` (symmetric SQUID),
/// where the Gauss series has no convergence domain.
pub fn fourier_coefficients_hypergeometric(
    spec: &TransmonSpec,
    pulse: &FluxPulse,
    kind: TransmonParameter,
    k_max: usize,
    n_max: usize,
    order: u32,
) -> Result<FourierExpansion> {
    let setup = expansion_setup(spec);
    if setup.ratio * setup.ratio >= 1.0 - 1e-9 {
        log::warn!(
            "hypergeometric route diverges at X^2 = {:.6}; using the binomial/Bessel route",
            setup.ratio * setup.ratio
        );
        return fourier_coefficients_analytic(spec, pulse, kind, k_max, n_max, order);
    }
    let law = parameter_power_law(spec, kind, order);
    let powers: Vec<f64> = law.terms().iter().map(|&(p, _)| p).collect();
    let scaled: Vec<f64> = law
        .terms()
        .iter()
        .map(|&(p, c)| c * setup.xi_bar.powf(p))
        .collect();
    let magnitude: f64 = scaled.iter().map(|c| c.abs()).sum::<f64>().max(1e-300);
    let z = setup.ratio * setup.ratio;
    let sweet = pulse.parked_at_sweet_spot();

    let mut ladder = GammaLadder::new(powers.len());
    let mut front_pow = 1.0; // (-X/2)^n / n!
    let mut coeffs = vec![0.0; k_max + 1];
    let mut converged = false;
    let mut tail = f64::INFINITY;
    for n in 0..=n_max {
        if n > 0 {
            front_pow *= -setup.ratio / (2.0 * n as f64);
        }
        // sum over power-law terms with their hypergeometric factors
        let mut s_n = 0.0;
        let mut s_n_abs = 0.0;
        for (idx, (&p, &c)) in powers.iter().zip(&scaled).enumerate() {
            let r = ladder.values[idx];
            if r == 0.0 || c == 0.0 {
                continue;
            }
            let f = hyp2f1(
                n as f64 / 2.0 + p / 8.0,
                (n as f64 + 1.0) / 2.0 + p / 8.0,
                n as f64 + 1.0,
                z,
            )?;
            s_n += c * r * f;
            s_n_abs += (c * r * f).abs();
        }
        ladder.advance(&powers);

        let n_weight = if n == 0 { 1.0 } else { 2.0 };
        let bessels = bessel_j_table(k_max, n as f64 * pulse.amplitude);
        for k in 0..=k_max {
            if sweet && k % 2 == 1 {
                continue;
            }
            let front = if k == 0 { 1.0 } else { 2.0 };
            coeffs[k] += front_pow
                * front
                * n_weight
                * shifted_cos(n as f64, pulse.parking, k)
                * bessels[k]
                * s_n;
        }

        tail = 4.0 * front_pow.abs() * s_n_abs;
        if n > 4 && tail < 1e-10 * magnitude {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::HarmonicNonConvergence {
            terms: n_max,
            tail: tail / magnitude,
        });
    }
    Ok(FourierExpansion {
        label: kind.label().to_string(),
        coeffs,
        parked_at_sweet_spot: sweet,
    })
}
