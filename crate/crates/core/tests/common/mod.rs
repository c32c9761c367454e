//! Shared fixtures and numerical oracles for the integration suites.

#![allow(dead_code)]

use diamondconv::model::{
    coefficients, default_rb87_rates, CouplingCoefficients, DecayRates, EnsembleConfig,
    ProbeConfig, PumpConfig,
};
use num_complex::Complex64;

pub fn reference_pump() -> PumpConfig {
    PumpConfig {
        omega_a: 33.0,
        omega_b: 20.0,
        delta_1: 39.0,
        delta_b: 2.0,
    }
}

pub fn reference_coeffs() -> CouplingCoefficients {
    let pump = reference_pump();
    let probe = ProbeConfig::new(-21.0, &pump);
    coefficients(&pump, &probe, &EnsembleConfig::default(), &default_rb87_rates()).unwrap()
}

pub fn setup() -> (EnsembleConfig, DecayRates) {
    (EnsembleConfig::default(), default_rb87_rates())
}

/// Independently integrate the coupled linear system
/// dE_s/dζ = β_sL·E_s + κ_sL·E_i, dE_i/dζ = κ_iL·E_s + α_iL·E_i over
/// ζ ∈ [0, 1] with classical RK4 on a fine fixed grid, returning the
/// resulting 2×2 map columns [(m11, m12), (m21, m22)] in the same
/// (input, output) indexing as `TransferRecord`.
pub fn rk4_transfer(c: &CouplingCoefficients, steps: usize) -> [[Complex64; 2]; 2] {
    let rhs = |e_s: Complex64, e_i: Complex64| {
        (
            c.beta_sl * e_s + c.kappa_sl * e_i,
            c.kappa_il * e_s + c.alpha_il * e_i,
        )
    };
    let h = 1.0 / steps as f64;
    let propagate = |mut e_s: Complex64, mut e_i: Complex64| {
        for _ in 0..steps {
            let (k1s, k1i) = rhs(e_s, e_i);
            let (k2s, k2i) = rhs(e_s + k1s * (h / 2.0), e_i + k1i * (h / 2.0));
            let (k3s, k3i) = rhs(e_s + k2s * (h / 2.0), e_i + k2i * (h / 2.0));
            let (k4s, k4i) = rhs(e_s + k3s * h, e_i + k3i * h);
            e_s += (k1s + 2.0 * k2s + 2.0 * k3s + k4s) * (h / 6.0);
            e_i += (k1i + 2.0 * k2i + 2.0 * k3i + k4i) * (h / 6.0);
        }
        (e_s, e_i)
    };
    let one = Complex64::from(1.0);
    let zero = Complex64::from(0.0);
    let (m11, m12) = propagate(one, zero); // signal in
    let (m21, m22) = propagate(zero, one); // idler in
    [[m11, m12], [m21, m22]]
}

/// RK4 step-halving until the map stabilizes to `tol` (in the max-norm of
/// the entry differences), so the oracle's own truncation error is below
/// the comparison threshold.
pub fn rk4_transfer_adaptive(c: &CouplingCoefficients, tol: f64) -> [[Complex64; 2]; 2] {
    let mut steps = 256;
    let mut prev = rk4_transfer(c, steps);
    loop {
        steps *= 2;
        let next = rk4_transfer(c, steps);
        let diff = max_entry_diff(&prev, &next);
        if diff < tol || steps >= 1 << 20 {
            return next;
        }
        prev = next;
    }
}

pub fn max_entry_diff(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((a[i][j] - b[i][j]).norm());
        }
    }
    worst
}
