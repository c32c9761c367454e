//! Acceptance gate: one pass/fail line per criterion, all criteria
//! asserted at the stated tolerances. Run with
//! `cargo test --test acceptance -- --nocapture` to see every line.

mod common;

use common::{max_entry_diff, reference_coeffs, reference_pump, setup};
use diamondconv::mbsolver::{
    characteristic_scales, convergence_report, modulation_frequency, pulse_efficiency, simulate,
    GridSpec, PulseShape, Scenario, DEFAULT_GAMMA03_PER_NS,
};
use diamondconv::model::{ProbeConfig, PumpConfig};
use diamondconv::optimizer::{optimize_at_opd, verify_detuning_symmetry, Bounds, ParamPoint};
use diamondconv::parametric::{
    dressed_spectrum, efficiencies, ideal_limit, transfer,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Gate {
    results: Vec<(usize, &'static str, bool, String)>,
}

impl Gate {
    fn check(&mut self, id: usize, name: &'static str, pass: bool, detail: String) {
        println!(
            "[{}] criterion {id:2}: {name} — {detail}",
            if pass { "PASS" } else { "FAIL" }
        );
        self.results.push((id, name, pass, detail));
    }

    fn finish(self) {
        let failed: Vec<_> = self.results.iter().filter(|r| !r.2).collect();
        assert!(
            failed.is_empty(),
            "{} acceptance criteria failed: {:?}",
            failed.len(),
            failed.iter().map(|r| (r.0, r.1, &r.3)).collect::<Vec<_>>()
        );
    }
}

fn pulsed_scenario(idler: PulseShape, pump_a: PulseShape) -> Scenario {
    let pump = reference_pump();
    Scenario {
        pump_a,
        pump_b: PulseShape::cw(pump.omega_b),
        idler_in: idler,
        signal_in: PulseShape::off(),
        pump,
        probe: ProbeConfig::new(-21.0, &pump),
        ens: Default::default(),
        rates: Default::default(),
        gamma03_per_ns: DEFAULT_GAMMA03_PER_NS,
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate { results: Vec::new() };
    let (ens, rates) = setup();
    let bounds = Bounds::default();

    // 1: optimized efficiency at opd = 150 reproduces the reported value,
    // and the reported operating point itself is within tolerance
    let opt150 = optimize_at_opd(150.0, &bounds, 24_000, 0, &ens, &rates);
    let reference_eta = efficiencies(&reference_coeffs()).eta_d;
    let pass1 = (opt150.eta_d - 0.92).abs() < 0.02 && (reference_eta - 0.92).abs() < 0.02;
    gate.check(
        1,
        "optimum and reported point reach ~0.92",
        pass1,
        format!("optimized {:.4}, reported point {:.4}", opt150.eta_d, reference_eta),
    );

    // 2: up- and down-conversion agree at the optimum
    let pass2 = (opt150.eta_d - opt150.eta_u).abs() < 0.01;
    gate.check(
        2,
        "up/down efficiencies agree to 0.01",
        pass2,
        format!("|eta_d - eta_u| = {:.2e}", (opt150.eta_d - opt150.eta_u).abs()),
    );

    // 3: ideal-limit unitarity over 100 coupling values
    let mut worst3: f64 = 0.0;
    for k in 0..100 {
        let x = -3.0 + 6.0 * k as f64 / 99.0;
        let (eta, t) = ideal_limit(x, 1.0);
        worst3 = worst3.max((eta + t - 1.0).abs());
    }
    gate.check(
        3,
        "ideal limit conserves eta + T = 1",
        worst3 < 1e-12,
        format!("worst |eta + T - 1| = {worst3:.2e}"),
    );

    // 4: closed-form transfer map against RK4 integration, random draws
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst4: f64 = 0.0;
    for _ in 0..200 {
        let mut draw = |s: f64| Complex64::new(rng.gen_range(-s..s), rng.gen_range(-s..s));
        let c = diamondconv::model::CouplingCoefficients {
            beta_sl: draw(1.5) - 1.0,
            alpha_il: draw(1.5) - 1.0,
            kappa_sl: draw(2.5),
            kappa_il: draw(2.5),
        };
        let t = transfer(&c);
        let closed = [[t.m11, t.m12], [t.m21, t.m22]];
        let oracle = common::rk4_transfer_adaptive(&c, 1e-9);
        worst4 = worst4.max(max_entry_diff(&closed, &oracle));
    }
    gate.check(
        4,
        "transfer map matches ODE integration",
        worst4 < 1e-8,
        format!("worst entry diff = {worst4:.2e} over 200 draws"),
    );

    // 5: square-root branch independence of the map entries
    let mut worst5: f64 = 0.0;
    for _ in 0..200 {
        let mut draw = |s: f64| Complex64::new(rng.gen_range(-s..s), rng.gen_range(-s..s));
        let c = diamondconv::model::CouplingCoefficients {
            beta_sl: draw(2.0),
            alpha_il: draw(2.0),
            kappa_sl: draw(2.0),
            kappa_il: draw(2.0),
        };
        let t = transfer(&c);
        let w = -t.w;
        let sh = if w.norm() < 1e-4 {
            let w2 = w * w;
            Complex64::from(1.0) + w2 / 6.0 + w2 * w2 / 120.0
        } else {
            w.sinh() / w
        };
        let phase = ((c.alpha_il + c.beta_sl) / 2.0).exp();
        let scale = t.m11.norm().max(t.m22.norm()).max(1.0);
        worst5 = worst5
            .max((phase * (w.cosh() + t.q * sh) - t.m11).norm() / scale)
            .max((phase * (w.cosh() - t.q * sh) - t.m22).norm() / scale)
            .max((phase * c.kappa_sl * sh - t.m21).norm() / scale)
            .max((phase * c.kappa_il * sh - t.m12).norm() / scale);
    }
    gate.check(
        5,
        "map is independent of the w branch",
        worst5 < 1e-12,
        format!("worst relative entry diff = {worst5:.2e}"),
    );

    // 6: dressed-state structure — four peaks, three windows, resonant
    // positions at the pump-set values
    let d = dressed_spectrum(&PumpConfig {
        omega_a: 33.0,
        omega_b: 20.0,
        delta_1: 0.0,
        delta_b: 0.0,
    });
    let expected = [-53.0, -13.0, 13.0, 53.0];
    let pass6 = d.peak_positions.len() == 4
        && d.window_centers.len() == 3
        && d.peak_positions
            .iter()
            .zip(expected)
            .all(|(p, e)| (p - e).abs() <= 0.15 * e.abs());
    gate.check(
        6,
        "resonant dressed peaks at ±(Ωa+Ωb), ±|Ωa−Ωb|",
        pass6,
        format!("peaks {:?}", d.peak_positions),
    );

    // 7: optimized efficiency grows with optical depth
    let curve = diamondconv::optimizer::efficiency_vs_opd(
        &[10.0, 50.0, 150.0, 300.0],
        &bounds,
        24_000,
        0,
        &ens,
        &rates,
    );
    let etas: Vec<f64> = curve.iter().map(|r| r.eta_d).collect();
    let pass7 = etas.windows(2).all(|w| w[1] >= w[0] - 1e-6);
    gate.check(
        7,
        "efficiency nondecreasing in optical depth",
        pass7,
        format!("etas = {etas:?}"),
    );

    // 8: simultaneous detuning sign flip leaves the optimum unchanged
    let mut worst8 = verify_detuning_symmetry(&opt150, &ens, &rates);
    let mut rng8 = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let p = ParamPoint {
            omega_a: rng8.gen_range(0.5..60.0),
            omega_b: rng8.gen_range(0.5..60.0),
            delta_1: rng8.gen_range(-60.0..60.0),
            delta_b: rng8.gen_range(-60.0..60.0),
            dw_i: rng8.gen_range(-90.0..90.0),
        };
        let a = diamondconv::optimizer::eta_d_at(&p, 150.0, &ens, &rates);
        let b = diamondconv::optimizer::eta_d_at(&p.negated_detunings(), 150.0, &ens, &rates);
        worst8 = worst8.max((a - b).abs());
    }
    gate.check(
        8,
        "detuning sign-flip degeneracy",
        worst8 < 1e-10,
        format!("worst |Δη| = {worst8:.2e}"),
    );

    // 9: 100 ns pulsed conversion matches the cw value
    let grid = GridSpec::default();
    let long = pulsed_scenario(
        PulseShape::ramped_square(0.1, 20.0, 20.0, 80.0),
        PulseShape::ramped_square(33.0, 10.0, 10.0, 140.0),
    );
    let fields_long = simulate(&long, &grid).unwrap();
    let eta_long = pulse_efficiency(&fields_long).unwrap();
    gate.check(
        9,
        "100 ns pulse efficiency near 0.92",
        (eta_long - 0.92).abs() < 0.03,
        format!("eta = {eta_long:.4}"),
    );

    // 10: short pulses convert less and show pump-rate beating at the
    // generalized Rabi frequency √(Δ1² + 4Ωa²)
    let short = pulsed_scenario(
        PulseShape::ramped_square(0.1, 15.0, 10.0, 5.0),
        PulseShape::ramped_square(33.0, 10.0, 5.0, 42.5),
    );
    let fields_short = simulate(&short, &grid).unwrap();
    let eta_short = pulse_efficiency(&fields_short).unwrap();
    let trace = fields_short.exit_signal_intensity_window(18.0, 28.0);
    let expected_mod = (39.0f64 * 39.0 + 4.0 * 33.0 * 33.0).sqrt();
    let modulation = modulation_frequency(&trace, fields_short.dt, fields_short.gamma03_tc);
    let (pass10, detail10) = match modulation {
        Ok(m) => (
            eta_short < eta_long
                && eta_short > 0.5
                && (m.frequency - expected_mod).abs() < 0.10 * expected_mod,
            format!(
                "eta = {eta_short:.4} (< {eta_long:.4}), modulation {:.2} vs {expected_mod:.2}",
                m.frequency
            ),
        ),
        Err(e) => (false, format!("modulation analysis failed: {e}")),
    };
    gate.check(10, "short-pulse efficiency drop and beating", pass10, detail10);

    // 11: time-domain cw limit against the closed-form efficiency
    let pump = reference_pump();
    let cw = Scenario {
        pump_a: PulseShape::cw(pump.omega_a),
        pump_b: PulseShape::cw(pump.omega_b),
        idler_in: PulseShape::cw(0.01),
        signal_in: PulseShape::off(),
        pump,
        probe: ProbeConfig::new(-21.0, &pump),
        ens: ens.clone(),
        rates: rates.clone(),
        gamma03_per_ns: DEFAULT_GAMMA03_PER_NS,
    };
    let fields_cw = simulate(
        &cw,
        &GridSpec {
            // the detuned pump point rings toward steady state on the
            // ~26 ns saturation timescale; 300 ns settles it
            t_span_ns: Some(300.0),
            ..grid
        },
    )
    .unwrap();
    let k = fields_cw.t_tau.len() - 1;
    let eta_cw = fields_cw.e_s_out[k].norm_sqr() / fields_cw.e_i_in[k].norm_sqr();
    let rel11 = (eta_cw - reference_eta).abs() / reference_eta;
    gate.check(
        11,
        "time-domain cw agrees with closed form",
        rel11 < 0.02,
        format!("time {eta_cw:.4} vs closed {reference_eta:.4} (rel {rel11:.2e})"),
    );

    // 12: grid refinement stability of the pulsed efficiency
    let report = convergence_report(&long, &grid).unwrap();
    gate.check(
        12,
        "halved steps change efficiency < 1%",
        report.converged,
        format!(
            "dt delta {:.2e}, dz delta {:.2e}",
            report.rel_delta_dt, report.rel_delta_dz
        ),
    );

    // 13: characteristic cooperation scales of the default ensemble
    let scales = characteristic_scales(&ens, &rates, DEFAULT_GAMMA03_PER_NS);
    let t_c_ns = scales.t_c * 1e9;
    let l_c_mm = scales.l_c * 1e3;
    let pass13 = (t_c_ns - 0.086).abs() < 0.002 && (l_c_mm - 26.0).abs() < 1.0;
    gate.check(
        13,
        "cooperation time and length scales",
        pass13,
        format!("T_c = {t_c_ns:.4} ns, L_c = {l_c_mm:.2} mm"),
    );

    gate.finish();
}
