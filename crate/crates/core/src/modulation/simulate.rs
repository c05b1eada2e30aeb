//! Time-domain integration of the two-transmon Hamiltonian in the lab
//! eigenbasis (3 x 3 levels), including the rotating coupling and the
//! nonadiabatic single-qubit drives. Used to cross-check the predicted
//! sideband coupling against an actual Rabi oscillation.
//!
//! The Hamiltonian splits as `H = R + iB` with `R` real symmetric and `B`
//! real antisymmetric, so the state `u + iv` evolves with four real
//! matrix-vector products per derivative evaluation.

use serde::Serialize;

use crate::coupling::CoupledPair;
use crate::error::{Error, Result};
use crate::tunable::{params_at_flux, phi_eff_derivative, xi_log_derivative, TransmonSpec};

use super::fourier::fourier_coefficients_quadrature;
use super::gates::{effective_coupling, GateKind};
use super::waveform::{parameter_waveform, TransmonParameter};
use super::{FluxPulse, ModOptions};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Populations of the nine product states over time.
#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    /// Sample times, microseconds.
    pub times: Vec<f64>,
    /// `populations[s][3 nF + nT]` at `times[s]`.
    pub populations: Vec<[f64; 9]>,
    /// Largest |1 - norm^2| seen along the trajectory.
    pub norm_drift: f64,
}

/// Result of one gate simulation.
#[derive(Clone, Debug, Serialize)]
pub struct GateSimulation {
    pub kind: GateKind,
    pub trajectory: Trajectory,
    /// Fitted population oscillation frequency, MHz.
    pub fitted_rabi: f64,
    /// Predicted population oscillation frequency `2 |g_eff|`, MHz.
    pub predicted_rabi: f64,
    /// Effective coupling used for the prediction, MHz.
    pub g_eff: f64,
    /// Integration step, microseconds.
    pub step: f64,
}

impl GateKind {
    /// (initial, target) product-state indices `3 nF + nT`.
    pub fn states(&self) -> (usize, usize) {
        match self {
            GateKind::ISwap => (3, 1),    // |10> <-> |01>
            GateKind::Cz02 => (4, 2),     // |11> <-> |02>
            GateKind::Cz20 => (4, 6),     // |11> <-> |20>
            GateKind::BellRabi => (0, 4), // |00> <-> |11>
        }
    }
}

/// 3x3 real ladder antisymmetric matrices: sigma_y = i a.
fn ladder(upper: usize, lower: usize) -> [[f64; 3]; 3] {
    let mut a = [[0.0; 3]; 3];
    a[upper][lower] = 1.0;
    a[lower][upper] = -1.0;
    a
}

struct HamiltonianBuilder<'a> {
    spec_t: &'a TransmonSpec,
    pulse: FluxPulse,
    order: u32,
    // fixed-side constants
    e_f: [f64; 3],
    a_f: [[f64; 3]; 3],
    xi_f: f64,
    g_c: f64,
    /// Constant diagonal shift (angular), pure gauge.
    shift: f64,
    a01: [[f64; 3]; 3],
    a12: [[f64; 3]; 3],
    a02: [[f64; 3]; 3],
}

/// Dense real symmetric + antisymmetric parts of H(t), angular units.
struct HamiltonianParts {
    r: [[f64; 9]; 9],
    b: [[f64; 9]; 9],
}

impl<'a> HamiltonianBuilder<'a> {
    fn new(pair: &'a CoupledPair, pulse: FluxPulse, order: u32, shift_mhz: f64) -> Result<Self> {
        let pf = pair.point_f(order)?;
        let a01 = ladder(1, 0);
        let a12 = ladder(2, 1);
        let a02 = ladder(2, 0);
        let mut a_f = [[0.0; 3]; 3];
        let rt2 = std::f64::consts::SQRT_2;
        for i in 0..3 {
            for j in 0..3 {
                a_f[i][j] = pf.lambda * a01[i][j] + rt2 * pf.lambda_big * a12[i][j];
            }
        }
        Ok(Self {
            spec_t: &pair.qubit_t,
            pulse,
            order,
            e_f: [0.0, pf.omega, 2.0 * pf.omega - pf.eta],
            a_f,
            xi_f: pf.xi,
            g_c: pair.g_c,
            shift: TWO_PI * shift_mhz,
            a01,
            a12,
            a02,
        })
    }

    fn build(&self, t: f64) -> Result<HamiltonianParts> {
        let x = TWO_PI * self.pulse.frequency * t + self.pulse.phase;
        let phi = self.pulse.flux_at_phase(x);
        let phi_dot = -self.pulse.amplitude * TWO_PI * self.pulse.frequency * x.sin();

        let p = params_at_flux(self.spec_t, phi, self.order)?;
        let e_t = [0.0, p.omega, 2.0 * p.omega - p.eta];
        let g = self.g_c / (4.0 * (self.xi_f * p.xi).sqrt());

        let phi_eff_dot = phi_eff_derivative(self.spec_t, phi)? * phi_dot;
        let ln_xi_dot = xi_log_derivative(self.spec_t, phi)? * phi_dot;
        // drive coefficients, angular already (phi_dot is rad/us)
        let c01 = -phi_eff_dot / (2.0 * p.xi.sqrt()) * p.lambda;
        let c12 = -phi_eff_dot / (2.0 * p.xi).sqrt() * p.lambda_big;
        let c02 = -ln_xi_dot * p.upsilon;

        let mut r = [[0.0; 9]; 9];
        let mut b = [[0.0; 9]; 9];
        for nf in 0..3 {
            for nt in 0..3 {
                let i = 3 * nf + nt;
                r[i][i] = TWO_PI * (self.e_f[nf] + e_t[nt]) - self.shift;
            }
        }
        // coupling g (i a_F) x (i a_T) = -g a_F x a_T
        let rt2 = std::f64::consts::SQRT_2;
        let mut a_t = [[0.0; 3]; 3];
        for k in 0..3 {
            for l in 0..3 {
                a_t[k][l] = p.lambda * self.a01[k][l] + rt2 * p.lambda_big * self.a12[k][l];
            }
        }
        let gang = TWO_PI * g;
        for i in 0..3 {
            for j in 0..3 {
                if self.a_f[i][j] == 0.0 {
                    continue;
                }
                for k in 0..3 {
                    for l in 0..3 {
                        if a_t[k][l] != 0.0 {
                            r[3 * i + k][3 * j + l] -= gang * self.a_f[i][j] * a_t[k][l];
                        }
                    }
                }
            }
        }
        // drives H += c * sigma-like = c (i a): B += c a, block diagonal in F
        for nf in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let v = c01 * self.a01[k][l] + c12 * self.a12[k][l] + c02 * self.a02[k][l];
                    if v != 0.0 {
                        b[3 * nf + k][3 * nf + l] += v;
                    }
                }
            }
        }
        Ok(HamiltonianParts { r, b })
    }
}

/// u' = R v + B u, v' = -R u + B v.
fn derivative(h: &HamiltonianParts, u: &[f64; 9], v: &[f64; 9]) -> ([f64; 9], [f64; 9]) {
    let mut du = [0.0; 9];
    let mut dv = [0.0; 9];
    for i in 0..9 {
        let (mut au, mut av, mut bu, mut bv) = (0.0, 0.0, 0.0, 0.0);
        for j in 0..9 {
            au += h.r[i][j] * u[j];
            av += h.r[i][j] * v[j];
            bu += h.b[i][j] * u[j];
            bv += h.b[i][j] * v[j];
        }
        du[i] = av + bu;
        dv[i] = -au + bv;
    }
    (du, dv)
}

fn axpy(y: &[f64; 9], a: f64, x: &[f64; 9]) -> [f64; 9] {
    let mut out = [0.0; 9];
    for i in 0..9 {
        out[i] = y[i] + a * x[i];
    }
    out
}

/// Integrate the Schroedinger equation with fixed-step RK4 from the gate's
/// initial product state; returns populations and the fitted oscillation
/// frequency of the resonant pair.
pub fn simulate_gate(
    pair: &CoupledPair,
    pulse: &FluxPulse,
    kind: GateKind,
    duration: f64,
    step: Option<f64>,
    opts: &ModOptions,
) -> Result<GateSimulation> {
    let (initial, target) = kind.states();

    // resonant sideband for this pulse: the integer nearest to
    // detuning / (2 omega_p), signed
    let probe = FluxPulse::new(pulse.parking, pulse.amplitude, 1.0, 0.0)?;
    let omega_t_mean = fourier_coefficients_quadrature(
        &parameter_waveform(
            &pair.qubit_t,
            &probe,
            TransmonParameter::Omega01,
            opts.grid,
            opts.order,
        )?,
        2,
    )?
    .mean();
    let eta_t_mean = fourier_coefficients_quadrature(
        &parameter_waveform(&pair.qubit_t, &probe, TransmonParameter::Eta, opts.grid, opts.order)?,
        2,
    )?
    .mean();
    let pf0 = pair.point_f(opts.order)?;
    let detuning = match kind {
        GateKind::ISwap => pf0.omega - omega_t_mean,
        GateKind::Cz02 => pf0.omega - omega_t_mean + eta_t_mean,
        GateKind::Cz20 => pf0.omega - omega_t_mean - pf0.eta,
        GateKind::BellRabi => -(pf0.omega + omega_t_mean),
    };
    let mut sideband = (detuning / (2.0 * pulse.frequency)).round() as i64;
    if sideband == 0 {
        sideband = 1;
    }

    // prediction from the sideband expansion
    let coupling = effective_coupling(pair, pulse, kind.channel(), sideband, opts)?;
    let g_eff = coupling.value;
    let predicted_rabi = 2.0 * g_eff.abs();
    if predicted_rabi > 0.0 && duration * predicted_rabi < 2.0 {
        log::warn!(
            "duration {duration} us covers only {:.2} predicted oscillation periods",
            duration * predicted_rabi
        );
    }

    // spectral span over one modulation period, for the default step and the
    // step guard
    let pf = pair.point_f(opts.order)?;
    let mut e_min = f64::MAX;
    let mut e_max = f64::MIN;
    let mut omega_t_max: f64 = 0.0;
    for i in 0..64 {
        let x = TWO_PI * i as f64 / 64.0;
        let p = params_at_flux(&pair.qubit_t, pulse.flux_at_phase(x), opts.order)?;
        omega_t_max = omega_t_max.max(p.omega);
        for nf in 0..3 {
            for nt in 0..3 {
                let e = [0.0, pf.omega, 2.0 * pf.omega - pf.eta][nf]
                    + [0.0, p.omega, 2.0 * p.omega - p.eta][nt];
                e_min = e_min.min(e);
                e_max = e_max.max(e);
            }
        }
    }
    let step_limit = 1.0 / (50.0 * pf.omega.max(omega_t_max));
    let h = match step {
        Some(h) => {
            if h > step_limit {
                return Err(Error::StepTooLarge {
                    step: h,
                    limit: step_limit,
                });
            }
            h
        }
        // keep the phase advance of the fastest (shifted) level near 0.03 rad
        None => 1.0 / (200.0 * (e_max - e_min) / 2.0),
    };

    // gauge shift centering the resonant pair
    let probe = HamiltonianBuilder::new(pair, *pulse, opts.order, 0.0)?;
    let h0 = probe.build(0.0)?;
    let shift_mhz = (h0.r[initial][initial] + h0.r[target][target]) / (2.0 * TWO_PI);
    let builder = HamiltonianBuilder::new(pair, *pulse, opts.order, shift_mhz)?;

    let steps = (duration / h).ceil() as usize;
    let stride = (steps / 4000).max(1);

    let mut u = [0.0f64; 9];
    let mut v = [0.0f64; 9];
    u[initial] = 1.0;

    let mut times = Vec::with_capacity(steps / stride + 2);
    let mut populations = Vec::with_capacity(steps / stride + 2);
    let mut norm_drift = 0.0f64;
    let record = |times: &mut Vec<f64>, pops: &mut Vec<[f64; 9]>, t: f64, u: &[f64; 9], v: &[f64; 9]| {
        let mut p = [0.0; 9];
        for i in 0..9 {
            p[i] = u[i] * u[i] + v[i] * v[i];
        }
        times.push(t);
        pops.push(p);
    };
    record(&mut times, &mut populations, 0.0, &u, &v);

    let mut h_left = builder.build(0.0)?;
    for s in 0..steps {
        let t = s as f64 * h;
        let h_mid = builder.build(t + 0.5 * h)?;
        let h_right = builder.build(t + h)?;

        let (k1u, k1v) = derivative(&h_left, &u, &v);
        let (k2u, k2v) = derivative(&h_mid, &axpy(&u, 0.5 * h, &k1u), &axpy(&v, 0.5 * h, &k1v));
        let (k3u, k3v) = derivative(&h_mid, &axpy(&u, 0.5 * h, &k2u), &axpy(&v, 0.5 * h, &k2v));
        let (k4u, k4v) = derivative(&h_right, &axpy(&u, h, &k3u), &axpy(&v, h, &k3v));
        for i in 0..9 {
            u[i] += h / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
            v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        h_left = h_right;

        if (s + 1) % stride == 0 || s + 1 == steps {
            record(&mut times, &mut populations, t + h, &u, &v);
        }
        if (s + 1) % 512 == 0 || s + 1 == steps {
            let norm2: f64 = (0..9).map(|i| u[i] * u[i] + v[i] * v[i]).sum();
            norm_drift = norm_drift.max((1.0 - norm2).abs());
            if norm_drift > NORM_DRIFT_LIMIT {
                return Err(Error::NormDrift {
                    drift: norm_drift,
                    limit: NORM_DRIFT_LIMIT,
                });
            }
        }
    }

    let target_pop: Vec<f64> = populations.iter().map(|p| p[target]).collect();
    let fitted_rabi = fit_oscillation_frequency(&times, &target_pop);

    Ok(GateSimulation {
        kind,
        trajectory: Trajectory {
            times,
            populations,
            norm_drift,
        },
        fitted_rabi,
        predicted_rabi,
        g_eff,
        step: h,
    })
}

/// Frequency of `A sin^2(pi f t + phase) + c`, i.e. of the
/// `cos(2 pi f t + 2 phase)` component: periodogram peak for the bracket,
/// then least squares with the offset/amplitude/phase projected out exactly
/// at each trial frequency (no leakage bias).
pub fn fit_oscillation_frequency(times: &[f64], values: &[f64]) -> f64 {
    let n = times.len();
    if n < 8 {
        return 0.0;
    }
    let span = times[n - 1] - times[0];
    let mean = values.iter().sum::<f64>() / n as f64;
    let power = |freq: f64| -> f64 {
        let mut re = 0.0;
        let mut im = 0.0;
        for (t, v) in times.iter().zip(values) {
            let (s, c) = (TWO_PI * freq * t).sin_cos();
            re += (v - mean) * c;
            im += (v - mean) * s;
        }
        re * re + im * im
    };
    // residual of the best linear fit over [1, cos, sin] at this frequency
    let residual = |freq: f64| -> f64 {
        let mut g = [[0.0f64; 3]; 3];
        let mut rhs = [0.0f64; 3];
        let mut yy = 0.0;
        for (t, v) in times.iter().zip(values) {
            let (s, c) = (TWO_PI * freq * t).sin_cos();
            let basis = [1.0, c, s];
            for i in 0..3 {
                for j in 0..3 {
                    g[i][j] += basis[i] * basis[j];
                }
                rhs[i] += basis[i] * v;
            }
            yy += v * v;
        }
        // solve the 3x3 normal equations by elimination
        let mut a = g;
        let mut b = rhs;
        for col in 0..3 {
            let piv = (col..3)
                .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            if a[col][col].abs() < 1e-300 {
                return f64::MAX;
            }
            for row in col + 1..3 {
                let f = a[row][col] / a[col][col];
                for k in col..3 {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
        let mut x = [0.0f64; 3];
        for row in (0..3).rev() {
            let mut acc = b[row];
            for k in row + 1..3 {
                acc -= a[row][k] * x[k];
            }
            x[row] = acc / a[row][row];
        }
        yy - (x[0] * rhs[0] + x[1] * rhs[1] + x[2] * rhs[2])
    };

    let f_lo = 0.25 / span;
    let f_hi = 0.45 * (n as f64 - 1.0) / span; // below the record Nyquist
    let grid = 4000;
    let mut best = (f_lo, 0.0f64);
    for i in 0..=grid {
        let f = f_lo + (f_hi - f_lo) * i as f64 / grid as f64;
        let p = power(f);
        if p > best.1 {
            best = (f, p);
        }
    }
    // golden-section on the projected least-squares residual
    let df = (f_hi - f_lo) / grid as f64;
    let (mut a, mut b) = ((best.0 - 2.0 * df).max(f_lo), best.0 + 2.0 * df);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    for _ in 0..70 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if residual(c) > residual(d) {
            a = c;
        } else {
            b = d;
        }
    }
    (a + b) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modulation::gates::{activation_frequency, tests::gate_pair};

    #[test]
    fn static_pair_stays_put() {
        let pair = gate_pair(0.0);
        let pulse = FluxPulse::new(0.0, 0.0, 300.0, 0.0).unwrap();
        let opts = ModOptions::default();
        let sim = simulate_gate(&pair, &pulse, GateKind::ISwap, 0.01, None, &opts).unwrap();
        let (initial, _) = GateKind::ISwap.states();
        for p in &sim.trajectory.populations {
            assert!((p[initial] - 1.0).abs() < 1e-9);
        }
        assert!(sim.trajectory.norm_drift < 1e-8);
    }

    #[test]
    fn step_guard() {
        let pair = gate_pair(10.0);
        let pulse = FluxPulse::new(0.0, 0.5, 400.0, 0.0).unwrap();
        let opts = ModOptions::default();
        let err = simulate_gate(&pair, &pulse, GateKind::ISwap, 0.01, Some(1e-3), &opts);
        assert!(matches!(err, Err(Error::StepTooLarge { .. })));
    }

    #[test]
    fn iswap_rabi_rate_matches_prediction() {
        let pair = gate_pair(20.0);
        let opts = ModOptions::default();
        let op = activation_frequency(&pair, std::f64::consts::PI, GateKind::ISwap, &opts).unwrap();
        let pulse = FluxPulse::new(0.0, std::f64::consts::PI, op.omega_p, 0.0).unwrap();
        let duration = 2.4 / op.g_eff.abs().max(1.0) / 2.0;
        let sim = simulate_gate(&pair, &pulse, GateKind::ISwap, duration, None, &opts).unwrap();
        assert!(sim.trajectory.norm_drift < 1e-8, "norm drift {}", sim.trajectory.norm_drift);
        let rel = (sim.fitted_rabi - sim.predicted_rabi).abs() / sim.predicted_rabi;
        assert!(
            rel < 0.05,
            "fitted {} vs predicted {} ({}%)",
            sim.fitted_rabi,
            sim.predicted_rabi,
            100.0 * rel
        );
        // the oscillation actually transfers population
        let peak = sim
            .trajectory
            .populations
            .iter()
            .map(|p| p[1])
            .fold(0.0f64, f64::max);
        assert!(peak > 0.5, "target population peak {peak}");
    }

    #[test]
    fn oscillation_fit_recovers_known_frequency() {
        let f = 17.37;
        let times: Vec<f64> = (0..3000).map(|i| i as f64 * 1e-4).collect();
        let values: Vec<f64> = times
            .iter()
            .map(|t| 0.8 * (std::f64::consts::PI * f * t + 0.3).sin().powi(2) + 0.05)
            .collect();
        let got = fit_oscillation_frequency(&times, &values);
        // the unwindowed periodogram peak has a small leakage bias ~ 0.1/T
        assert!((got - f).abs() < 5e-3 * f, "fit {got} vs {f}");
    }
}
