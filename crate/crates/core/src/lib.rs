//! Frequency up- and down-conversion of light in a diamond-configuration
//! atomic ensemble.
//!
//! The crate is organized around four physics layers:
//!
//! - [`model`]: dimensionless physical parameters (γ03 units), steady-state
//!   atomic solutions and the complex self-/cross-coupling coefficients of
//!   the linearized signal/idler equations.
//! - [`parametric`]: closed-form propagation of the coupled parametric
//!   equations, conversion efficiency and transmission, detuning spectra,
//!   and dressed-state window prediction.
//! - [`optimizer`]: multi-start bounded Nelder-Mead maximization of the
//!   down-conversion efficiency over the five pump/probe parameters.
//! - [`mbsolver`]: time-domain Maxwell-Bloch integration in co-moving
//!   coordinates for finite-duration pulses.
//!
//! The [`cli`] module provides configuration ingestion and tabular output
//! for the `diamondconv` binary.
//!
//! Unit convention: all rates, Rabi frequencies and detunings are expressed
//! in units of γ03 (the |3⟩→|0⟩ decay rate). Rabi frequencies follow the
//! half-standard definition Ω = dE/(2ħ).

pub mod cli;
pub mod mbsolver;
pub mod model;
pub mod optimizer;
pub mod par;
pub mod parametric;

pub use model::{
    coefficients, default_rb87_rates, denominators, steady_state, CouplingCoefficients,
    DecayRates, Denominators, EnsembleConfig, ModelError, ProbeConfig, PumpConfig,
    SteadyStateAtoms,
};
pub use parametric::{
    dressed_spectrum, efficiencies, ideal_limit, spectrum, transfer, ConversionResult,
    DressedSpectrum, SpectrumTable, TransferRecord,
};
