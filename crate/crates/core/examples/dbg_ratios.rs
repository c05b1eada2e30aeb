use transmon::modulation::*;
use transmon::verification::gate_reference_pair;

fn main() {
    let pair = gate_reference_pair(10.0);
    let opts = ModOptions::default();
    println!("amp, omega_p, sideband, ratio_with_corr, ratio_pure, z1");
    for i in (2..=280).step_by(4) {
        let amp = 2.0 * std::f64::consts::PI * i as f64 / 280.0;
        match activation_frequency(&pair, amp, GateKind::Cz02, &opts) {
            Ok(op) => {
                let pulse = FluxPulse::new(0.0, amp, op.omega_p, 0.0).unwrap();
                let c = effective_coupling(&pair, &pulse, GateKind::Cz02.channel(), op.sideband, &opts).unwrap();
                let w = parameter_waveform(&pair.qubit_t, &pulse, TransmonParameter::Omega12, opts.grid, 25).unwrap();
                let f = fourier_coefficients_quadrature(&w, 4).unwrap();
                let z1 = f.second_harmonic() / (2.0 * pulse.frequency);
                println!(
                    "{amp:.3}, {:.1}, {}, {:+.4}, {:+.4}, {:+.3}",
                    op.omega_p,
                    op.sideband,
                    (c.value / c.bare),
                    ((c.value - c.correction) / c.bare),
                    z1
                );
            }
            Err(e) => println!("{amp:.3}: {e}"),
        }
    }
}
