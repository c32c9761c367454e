//! Physical parameters in γ03 units, steady-state atomic solutions, and the
//! complex coupling coefficients of the linearized signal/idler equations.
//!
//! All frequencies (decay rates, Rabi frequencies, detunings) are
//! dimensionless multiples of γ03. Coefficients are represented as the
//! dimensionless products β_sL, α_iL, κ_sL, κ_iL; per-length values never
//! appear. The physical prefactors N|g|²L/c reduce to (opd·γ03/2)·r^p via
//! the cooperation-time relation T_c⁻² = N|g_i|² = γ03·c·opd/(2L) with
//! r = |g_s|/|g_i|.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    /// |D| fell below the scale-relative tolerance; the parameter point is
    /// pathological and the coefficient formulas are unreliable there.
    #[error("singular denominator D (|D| = {magnitude:.3e}, tolerance {tolerance:.3e})")]
    SingularDenominator { magnitude: f64, tolerance: f64 },
}

/// Natural decay rates in units of γ03 (so `gamma_03` is 1 by default).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRates {
    pub gamma_03: f64,
    pub gamma_01: f64,
    pub gamma_12: f64,
    pub gamma_32: f64,
}

impl DecayRates {
    /// Combined decay rate of level |2⟩: γ2 = γ12 + γ32.
    pub fn gamma_2(&self) -> f64 {
        self.gamma_12 + self.gamma_32
    }
}

impl Default for DecayRates {
    fn default() -> Self {
        default_rb87_rates()
    }
}

/// Rb-87 decay rates for the (5S1/2, 5P3/2, 6S1/2, 5P1/2) diamond levels:
/// γ03 = 1/27.7 ns, γ01 = 1/26.24 ns, γ12 = γ03/2.76, γ32 = γ03/5.38,
/// all expressed in γ03 units.
pub fn default_rb87_rates() -> DecayRates {
    DecayRates {
        gamma_03: 1.0,
        gamma_01: 27.7 / 26.24,
        gamma_12: 1.0 / 2.76,
        gamma_32: 1.0 / 5.38,
    }
}

/// Pump Rabi frequencies and detunings (γ03 units).
///
/// Ω is half the standard Rabi frequency definition. Detunings:
/// Δ1 = ω_a − ω_1, Δb = ω_b − ω_23.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpConfig {
    pub omega_a: f64,
    pub omega_b: f64,
    pub delta_1: f64,
    pub delta_b: f64,
}

/// Probe (idler) detuning and the detunings derived from it by energy
/// conservation: Δω_s = Δω_i − Δ1 + Δb and Δ2 = Δ1 + Δω_s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub dw_i: f64,
    pub dw_s: f64,
    pub delta_2: f64,
}

impl ProbeConfig {
    pub fn new(dw_i: f64, pump: &PumpConfig) -> Self {
        let dw_s = dw_i - pump.delta_1 + pump.delta_b;
        ProbeConfig {
            dw_i,
            dw_s,
            delta_2: pump.delta_1 + dw_s,
        }
    }
}

/// Ensemble geometry: optical depth ρσL, length, and the coupling ratio
/// r = |g_s|/|g_i|.
///
/// The coupling constants are taken real positive; only their ratio matters
/// for efficiencies. Defaults to 1 when no better estimate is available.
/// `density` is used only for reporting physical scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub opd: f64,
    pub length: f64,
    pub coupling_ratio: f64,
    pub density: Option<f64>,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        EnsembleConfig {
            opd: 150.0,
            length: 6e-3,
            coupling_ratio: 1.0,
            density: None,
        }
    }
}

/// Zeroth-order (probe-free) steady state of the pump-a driven |0⟩↔|1⟩
/// two-level subsystem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyStateAtoms {
    pub sigma11_s: f64,
    pub sigma00_s: f64,
    pub sigma01_s: Complex64,
}

/// Complex linewidth/detuning factors and the denominator D entering the
/// coupling coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Denominators {
    pub t01: Complex64,
    /// T32*, the conjugated |3⟩↔|2⟩ factor.
    pub t32c: Complex64,
    pub t02: Complex64,
    pub t13: Complex64,
    pub t12: Complex64,
    pub t03: Complex64,
    pub d: Complex64,
}

/// The four dimensionless complex coefficient-length products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingCoefficients {
    pub beta_sl: Complex64,
    pub alpha_il: Complex64,
    pub kappa_sl: Complex64,
    pub kappa_il: Complex64,
}

/// σ̃11,s = |Ωa|²/(Δ1² + γ01²/4 + 2|Ωa|²), σ̃00,s = 1 − σ̃11,s,
/// σ̃01,s = iΩa(1 − 2σ̃11,s)/(γ01/2 − iΔ1).
pub fn steady_state(pump: &PumpConfig, rates: &DecayRates) -> SteadyStateAtoms {
    let oa2 = pump.omega_a * pump.omega_a;
    let g01 = rates.gamma_01;
    let sigma11_s = oa2 / (pump.delta_1 * pump.delta_1 + g01 * g01 / 4.0 + 2.0 * oa2);
    let sigma01_s = Complex64::new(0.0, pump.omega_a) * (1.0 - 2.0 * sigma11_s)
        / Complex64::new(g01 / 2.0, -pump.delta_1);
    SteadyStateAtoms {
        sigma11_s,
        sigma00_s: 1.0 - sigma11_s,
        sigma01_s,
    }
}

/// The six T-factors and the denominator D.
pub fn denominators(pump: &PumpConfig, probe: &ProbeConfig, rates: &DecayRates) -> Denominators {
    let g01 = rates.gamma_01;
    let g03 = rates.gamma_03;
    let g2 = rates.gamma_2();
    let t01 = Complex64::new(g01 / 2.0, -pump.delta_1);
    let t32c = Complex64::new((g03 + g2) / 2.0, pump.delta_b);
    let t02 = Complex64::new(g2 / 2.0, -probe.delta_2);
    let t13 = Complex64::new((g01 + g03) / 2.0, pump.delta_1 - probe.dw_i);
    let t12 = Complex64::new((g01 + g2) / 2.0, -probe.dw_s);
    let t03 = Complex64::new(g03 / 2.0, -probe.dw_i);
    let oa2 = pump.omega_a * pump.omega_a;
    let ob2 = pump.omega_b * pump.omega_b;
    let d = t12 * t03
        + t12 * (oa2 / t13 + ob2 / t02)
        + t03 * (oa2 / t02 + ob2 / t13)
        + (oa2 - ob2) * (oa2 - ob2) / (t02 * t13);
    Denominators {
        t01,
        t32c,
        t02,
        t13,
        t12,
        t03,
        d,
    }
}

/// The dimensionless coefficient products β_sL, α_iL, κ_sL, κ_iL.
///
/// Prefactors: N|g|²L/c → (opd·γ03/2)·r^p with p = 2 for β_sL, p = 1 for
/// the κ's, p = 0 for α_iL.
pub fn coefficients(
    pump: &PumpConfig,
    probe: &ProbeConfig,
    ens: &EnsembleConfig,
    rates: &DecayRates,
) -> Result<CouplingCoefficients, ModelError> {
    let den = denominators(pump, probe, rates);
    let t_max = [den.t02, den.t13, den.t12, den.t03]
        .iter()
        .map(|t| t.norm())
        .fold(0.0_f64, f64::max);
    let tolerance = 1e-12 * t_max * t_max;
    if den.d.norm() < tolerance {
        return Err(ModelError::SingularDenominator {
            magnitude: den.d.norm(),
            tolerance,
        });
    }
    let ss = steady_state(pump, rates);
    let oa = Complex64::from(pump.omega_a);
    let ob = Complex64::from(pump.omega_b);
    let oa2 = pump.omega_a * pump.omega_a;
    let ob2 = pump.omega_b * pump.omega_b;
    let i = Complex64::i();
    let r = ens.coupling_ratio;
    let pre = ens.opd * rates.gamma_03 / 2.0;
    let (t02, t13, t12, t03, d) = (den.t02, den.t13, den.t12, den.t03, den.d);

    let beta_sl = -(pre * r * r) / d
        * (ss.sigma11_s * (t03 + oa2 / t13 + ob2 / t02)
            - i * oa * ss.sigma01_s / t02 * (t03 + (oa2 - ob2) / t13));
    let kappa_sl = -(pre * r) / d
        * (ss.sigma00_s * (oa * ob / t02 + oa * ob / t13)
            + i * ob * ss.sigma01_s.conj() / t13 * (t03 + (ob2 - oa2) / t02));
    let kappa_il = -(pre * r) / d
        * (ss.sigma11_s * (oa * ob / t02 + oa * ob / t13)
            + i * ob * ss.sigma01_s / t02 * (t12 + (ob2 - oa2) / t13));
    let alpha_il = -pre / d
        * (ss.sigma00_s * (t12 + oa2 / t02 + ob2 / t13)
            - i * oa * ss.sigma01_s.conj() / t13 * (t12 + (oa2 - ob2) / t02));

    Ok(CouplingCoefficients {
        beta_sl,
        alpha_il,
        kappa_sl,
        kappa_il,
    })
}
