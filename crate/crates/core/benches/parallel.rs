//! Parallel vs sequential throughput on the two data-parallel hot paths:
//! spectrum rows and Maxwell-Bloch atomic updates (via a short simulate).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use diamondconv::mbsolver::{simulate, GridSpec, PulseShape, Scenario};
use diamondconv::model::{coefficients, DecayRates, EnsembleConfig, ProbeConfig, PumpConfig};
use diamondconv::par;
use diamondconv::parametric::{efficiencies, uniform_grid};

fn reference_pump() -> PumpConfig {
    PumpConfig {
        omega_a: 33.0,
        omega_b: 20.0,
        delta_1: 39.0,
        delta_b: 2.0,
    }
}

fn spectrum_rows(c: &mut Criterion) {
    let pump = reference_pump();
    let ens = EnsembleConfig::default();
    let rates = DecayRates::default();
    let grid = uniform_grid(-60.0, 60.0, 4001);
    let row = |dw_i: &f64| {
        let probe = ProbeConfig::new(*dw_i, &pump);
        coefficients(&pump, &probe, &ens, &rates).map(|c| efficiencies(&c).eta_d)
    };

    let mut group = c.benchmark_group("spectrum_rows");
    group.bench_with_input(BenchmarkId::new("parallel", grid.len()), &grid, |b, g| {
        b.iter(|| par::map_ordered(g, row))
    });
    group.bench_with_input(BenchmarkId::new("sequential", grid.len()), &grid, |b, g| {
        b.iter(|| par::map_ordered_seq(g, row))
    });
    group.finish();
}

fn mb_short_pulse(c: &mut Criterion) {
    let pump = reference_pump();
    let scenario = Scenario {
        pump_a: PulseShape::ramped_square(pump.omega_a, 10.0, 5.0, 25.0),
        pump_b: PulseShape::cw(pump.omega_b),
        idler_in: PulseShape::ramped_square(0.1, 15.0, 10.0, 5.0),
        signal_in: PulseShape::off(),
        pump,
        probe: ProbeConfig::new(-21.0, &pump),
        ens: EnsembleConfig::default(),
        rates: DecayRates::default(),
        gamma03_per_ns: diamondconv::mbsolver::DEFAULT_GAMMA03_PER_NS,
    };
    // coarse z grid keeps a bench iteration well under a second; the
    // relative parallel/sequential cost is what matters here
    let grid = GridSpec {
        dt: 1.0,
        dz: 0.002,
        t_span_ns: Some(40.0),
        corrector_iters: 2,
    };

    let mut group = c.benchmark_group("mb_short_pulse");
    group.sample_size(10);
    group.bench_function("simulate", |b| {
        b.iter(|| simulate(&scenario, &grid).unwrap())
    });
    group.finish();
}

criterion_group!(benches, spectrum_rows, mb_short_pulse);
criterion_main!(benches);
