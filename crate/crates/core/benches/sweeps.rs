//! Parallel vs sequential sweep benchmarks: flux sweeps with the oracle in
//! the loop, and the gate operating-point curve. Build with
//! `--no-default-features` to force the default path sequential as well.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use transmon::modulation::{activation_frequency, GateKind, ModOptions};
use transmon::oracle;
use transmon::parallel::{sweep_map, sweep_map_seq};
use transmon::tunable::{effective_junction, params_at_flux_with, TransmonSpec};
use transmon::verification::{gate_reference_pair, tunable_reference};

fn flux_sweep_point(spec: &TransmonSpec, phi: f64) -> (f64, f64) {
    let set = transmon::perturbation::reference_series();
    let p = params_at_flux_with(set, spec, phi).unwrap();
    let (e_j_eff, _) = effective_junction(spec, phi).unwrap();
    let s = oracle::diagonalize(&oracle::build_single(spec.e_c(), e_j_eff, 30).unwrap()).unwrap();
    ((p.omega - s.omega()).abs(), (p.eta - s.eta()).abs())
}

fn bench_flux_sweep(c: &mut Criterion) {
    let spec = tunable_reference();
    let fluxes: Vec<f64> = (0..48)
        .map(|i| std::f64::consts::PI * i as f64 / 47.0)
        .collect();
    // warm the shared series cache outside the measurement
    let _ = transmon::perturbation::reference_series();

    let mut group = c.benchmark_group("flux_sweep_oracle");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("parallel", fluxes.len()), |b| {
        b.iter(|| sweep_map(&fluxes, |&phi| flux_sweep_point(&spec, phi)))
    });
    group.bench_function(BenchmarkId::new("sequential", fluxes.len()), |b| {
        b.iter(|| sweep_map_seq(&fluxes, |&phi| flux_sweep_point(&spec, phi)))
    });
    group.finish();
}

fn bench_gate_curve(c: &mut Criterion) {
    let pair = gate_reference_pair(10.0);
    let opts = ModOptions::default();
    let amplitudes: Vec<f64> = (1..=32)
        .map(|i| 2.0 * std::f64::consts::PI * i as f64 / 32.0)
        .collect();
    let _ = transmon::perturbation::reference_series();

    let mut group = c.benchmark_group("gate_operating_points");
    group.sample_size(10);
    group.bench_function(BenchmarkId::new("parallel", amplitudes.len()), |b| {
        b.iter(|| {
            sweep_map(&amplitudes, |&amp| {
                activation_frequency(&pair, amp, GateKind::ISwap, &opts)
                    .map(|op| op.ratio)
                    .ok()
            })
        })
    });
    group.bench_function(BenchmarkId::new("sequential", amplitudes.len()), |b| {
        b.iter(|| {
            sweep_map_seq(&amplitudes, |&amp| {
                activation_frequency(&pair, amp, GateKind::ISwap, &opts)
                    .map(|op| op.ratio)
                    .ok()
            })
        })
    });
    group.finish();
}

criterion_group!(benches, bench_flux_sweep, bench_gate_curve);
criterion_main!(benches);
