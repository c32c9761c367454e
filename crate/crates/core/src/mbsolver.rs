//! Time-domain Maxwell-Bloch integration in co-moving coordinates
//! (z, τ = t − z/c) for finite-duration pulses.
//!
//! Space, time and field amplitudes are scaled by the Arecchi-Courtens
//! cooperation length L_c, time T_c and the coupling (Ẽ ≡ g·E·T_c), which
//! turns the field equations into dẼ_s/dz̃ = i·r²·σ̃12, dẼ_i/dz̃ = i·σ̃03.
//! Atoms are advanced by an implicit-midpoint rule with a fixed number of
//! fixed-point corrector iterations for the bilinear atom-field products;
//! fields are marched forward in z̃ by trapezoidal quadrature of the
//! midpoint polarizations. Atomic updates are site-local and run in
//! parallel across z̃; the z̃ march and the τ̃ loop are sequential.

use crate::model::{DecayRates, EnsembleConfig, ProbeConfig, PumpConfig};
use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// Default γ03 in ns⁻¹ (Rb 5P1/2 lifetime 27.7 ns).
pub const DEFAULT_GAMMA03_PER_NS: f64 = 1.0 / 27.7;
/// Idler wavelength used only for the reporting-only cooperative field
/// normalization (Rb D1 line).
const IDLER_WAVELENGTH_M: f64 = 795e-9;
const HBAR: f64 = 1.054_571_817e-34;
const EPSILON_0: f64 = 8.854_187_8128e-12;

const POPULATION_TOL: f64 = 1e-6;
/// Interior snapshots are kept every this many time steps; boundary traces
/// are kept at every step.
const INTERIOR_DECIMATION: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    /// A state variable became NaN/Inf; the grid is too coarse for the
    /// scenario (reduce dt).
    #[error("non-finite state at step {step} (t = {t_ns:.2} ns); try a smaller dt")]
    NonFiniteState { step: usize, t_ns: f64 },
    /// A population left [0, 1] beyond tolerance; the corrector is
    /// under-iterated for this grid.
    #[error("population invariant violated at step {step}: value {value:.3e}; increase corrector_iters or reduce dt")]
    PopulationViolation { step: usize, value: f64 },
    #[error("input idler energy below threshold; pulse efficiency undefined")]
    ZeroInput,
    #[error("no dominant modulation peak (peak/floor = {ratio:.2}, required >= 10)")]
    NoModulation { ratio: f64 },
    #[error("modulation trace too short: {len} samples, need at least 64")]
    TraceTooShort { len: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Arecchi-Courtens scales: T_c⁻² = N|g_i|² = γ03·c·opd/(2L), L_c = c·T_c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicScales {
    /// Cooperation time in seconds.
    pub t_c: f64,
    /// Cooperation length in meters.
    pub l_c: f64,
    /// Cooperative field normalization √(ρħω_i/(2ε0)) in V/m, reported
    /// only when the ensemble density is known.
    pub e_c: Option<f64>,
    /// Medium length in cooperation lengths, L/L_c.
    pub z_extent: f64,
}

/// Scales from the defining relation; `gamma03_per_ns` is the physical
/// γ03 in ns⁻¹.
pub fn characteristic_scales(
    ens: &EnsembleConfig,
    rates: &DecayRates,
    gamma03_per_ns: f64,
) -> CharacteristicScales {
    assert!(ens.opd > 0.0 && ens.length > 0.0);
    let gamma03_si = gamma03_per_ns * 1e9 * rates.gamma_03;
    let t_c = (2.0 * ens.length / (gamma03_si * SPEED_OF_LIGHT * ens.opd)).sqrt();
    let l_c = SPEED_OF_LIGHT * t_c;
    let e_c = ens.density.map(|rho| {
        let omega_i = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / IDLER_WAVELENGTH_M;
        (rho * HBAR * omega_i / (2.0 * EPSILON_0)).sqrt()
    });
    CharacteristicScales {
        t_c,
        l_c,
        e_c,
        z_extent: ens.length / l_c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PulseKind {
    Cw,
    RampedSquare,
}

/// Temporal envelope: either continuous wave, or a square pulse with
/// sine-ramped edges, amplitude/2·[1 + sin(π(t−t_r)/t_s)] on the rising
/// interval (t_r − t_s/2, t_r + t_s/2), a flat top of duration `hold`,
/// and a mirror-symmetric fall.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseShape {
    pub kind: PulseKind,
    /// Peak value, in γ03 units when the field is a Rabi frequency g·E.
    pub amplitude: f64,
    /// Rise-center time (ns).
    pub t_r: f64,
    /// Rise duration (ns).
    pub t_s: f64,
    /// Flat-top duration (ns).
    pub hold: f64,
}

impl PulseShape {
    pub fn cw(amplitude: f64) -> Self {
        PulseShape {
            kind: PulseKind::Cw,
            amplitude,
            t_r: 0.0,
            t_s: 0.0,
            hold: 0.0,
        }
    }

    pub fn ramped_square(amplitude: f64, t_r: f64, t_s: f64, hold: f64) -> Self {
        PulseShape {
            kind: PulseKind::RampedSquare,
            amplitude,
            t_r,
            t_s,
            hold,
        }
    }

    pub fn off() -> Self {
        Self::cw(0.0)
    }

    /// Start of the flat top (ns).
    pub fn rise_end(&self) -> f64 {
        self.t_r + self.t_s / 2.0
    }

    /// Start of the falling ramp (ns).
    pub fn fall_start(&self) -> f64 {
        self.rise_end() + self.hold
    }

    /// End of support (ns); infinite for cw.
    pub fn support_end(&self) -> f64 {
        match self.kind {
            PulseKind::Cw => {
                if self.amplitude == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            PulseKind::RampedSquare => self.fall_start() + self.t_s,
        }
    }
}

/// Envelope value at time `t_ns` (ns).
pub fn envelope(shape: &PulseShape, t_ns: f64) -> f64 {
    match shape.kind {
        PulseKind::Cw => {
            if t_ns >= 0.0 {
                shape.amplitude
            } else {
                0.0
            }
        }
        PulseKind::RampedSquare => {
            let (a, tr, ts) = (shape.amplitude, shape.t_r, shape.t_s);
            if ts <= 0.0 {
                // degenerate ramp: hard-edged square
                return if t_ns >= tr && t_ns <= tr + shape.hold { a } else { 0.0 };
            }
            let fall_center = shape.fall_start() + ts / 2.0;
            if t_ns < tr - ts / 2.0 || t_ns > fall_center + ts / 2.0 {
                0.0
            } else if t_ns < tr + ts / 2.0 {
                a / 2.0 * (1.0 + (std::f64::consts::PI * (t_ns - tr) / ts).sin())
            } else if t_ns < shape.fall_start() {
                a
            } else {
                a / 2.0 * (1.0 - (std::f64::consts::PI * (t_ns - fall_center) / ts).sin())
            }
        }
    }
}

/// Space-time grid in scaled units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Time step Δτ̃ (units of T_c).
    pub dt: f64,
    /// Space step Δz̃ (units of L_c).
    pub dz: f64,
    /// Total time window in ns; derived from the input pulse support plus
    /// a tail when absent.
    pub t_span_ns: Option<f64>,
    /// Fixed-point corrector iterations per implicit-midpoint step.
    pub corrector_iters: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            dt: 0.5,
            dz: 0.001,
            t_span_ns: None,
            corrector_iters: 2,
        }
    }
}

/// A complete pulse-propagation scenario.
///
/// The pulse shapes carry the time-dependent Rabi amplitudes (γ03 units);
/// `pump` and `probe` supply the detunings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub pump_a: PulseShape,
    pub pump_b: PulseShape,
    pub idler_in: PulseShape,
    pub signal_in: PulseShape,
    pub pump: PumpConfig,
    pub probe: ProbeConfig,
    pub ens: EnsembleConfig,
    pub rates: DecayRates,
    pub gamma03_per_ns: f64,
}

/// Scaled field envelopes on the (z̃, τ̃) grid.
///
/// Boundary traces (z̃ = 0 and z̃ = z_extent) are stored at every time
/// step; interior snapshots are decimated.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeFields {
    /// τ̃ at each stored boundary sample (units of T_c).
    pub t_tau: Vec<f64>,
    /// Scaled input envelopes at z̃ = 0.
    pub e_s_in: Vec<Complex64>,
    pub e_i_in: Vec<Complex64>,
    /// Scaled output envelopes at z̃ = z_extent.
    pub e_s_out: Vec<Complex64>,
    pub e_i_out: Vec<Complex64>,
    /// Decimated interior snapshots: (τ̃, Ẽ_s over z̃, Ẽ_i over z̃).
    pub interior: Vec<(f64, Vec<Complex64>, Vec<Complex64>)>,
    /// z̃ axis of interior snapshots.
    pub z_tau: Vec<f64>,
    /// Cooperation time in seconds (ns conversion for the time axis).
    pub t_c: f64,
    /// γ03·T_c, the scaled unit frequency.
    pub gamma03_tc: f64,
    /// Coupling ratio r = |g_s|/|g_i| of the run; intensities in physical
    /// units carry 1/r² relative to |Ẽ_s|².
    pub coupling_ratio: f64,
    /// Time step Δτ̃ of the boundary traces.
    pub dt: f64,
}

impl SpaceTimeFields {
    /// Time axis in ns.
    pub fn t_ns(&self) -> Vec<f64> {
        self.t_tau.iter().map(|t| t * self.t_c * 1e9).collect()
    }

    /// |Ẽ_s(z_extent)|² samples with t inside [lo, hi] ns.
    pub fn exit_signal_intensity_window(&self, lo_ns: f64, hi_ns: f64) -> Vec<f64> {
        self.t_tau
            .iter()
            .zip(&self.e_s_out)
            .filter(|(t, _)| {
                let tn = *t * self.t_c * 1e9;
                tn >= lo_ns && tn <= hi_ns
            })
            .map(|(_, e)| e.norm_sqr())
            .collect()
    }
}

// Nine slow atomic variables per site; σ̃00 is derived.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
struct Atom {
    s01: Complex64,
    s12: Complex64,
    s02: Complex64,
    s11: Complex64,
    s22: Complex64,
    s33: Complex64,
    s13: Complex64,
    s03: Complex64,
    s32d: Complex64,
}

impl Atom {
    fn midpoint(&self, other: &Atom) -> Atom {
        Atom {
            s01: (self.s01 + other.s01) / 2.0,
            s12: (self.s12 + other.s12) / 2.0,
            s02: (self.s02 + other.s02) / 2.0,
            s11: (self.s11 + other.s11) / 2.0,
            s22: (self.s22 + other.s22) / 2.0,
            s33: (self.s33 + other.s33) / 2.0,
            s13: (self.s13 + other.s13) / 2.0,
            s03: (self.s03 + other.s03) / 2.0,
            s32d: (self.s32d + other.s32d) / 2.0,
        }
    }
}

// Scenario constants pre-scaled to T_c units.
struct Scaled {
    oa: f64,
    ob: f64,
    d1: f64,
    db: f64,
    dwi: f64,
    dws: f64,
    d2: f64,
    g01: f64,
    g03: f64,
    g12: f64,
    g2: f64,
    r2: f64,
}

fn rhs(a: &Atom, es: Complex64, ei: Complex64, oa_t: f64, ob_t: f64, p: &Scaled) -> Atom {
    let i = Complex64::i();
    let s00 = Complex64::from(1.0) - a.s11 - a.s22 - a.s33;
    let esm = es.conj();
    let eim = ei.conj();
    let s32 = a.s32d.conj();
    Atom {
        s01: Complex64::new(-p.g01 / 2.0, p.d1) * a.s01
            + i * oa_t * (s00 - a.s11)
            + i * a.s02 * esm
            - i * a.s13.conj() * ei,
        s12: Complex64::new(-(p.g01 + p.g2) / 2.0, p.dws) * a.s12 - i * oa_t * a.s02
            + i * (a.s11 - a.s22) * es
            + i * ob_t * a.s13,
        s02: Complex64::new(-p.g2 / 2.0, p.d2) * a.s02 - i * oa_t * a.s12 + i * a.s01 * es
            + i * ob_t * a.s03
            - i * s32 * ei,
        s11: -p.g01 * a.s11 + p.g12 * a.s22 + i * oa_t * (a.s01.conj() - a.s01)
            - i * a.s12.conj() * es
            + i * a.s12 * esm,
        s22: -p.g2 * a.s22 + i * a.s12.conj() * es - i * a.s12 * esm
            + i * ob_t * (a.s32d - s32),
        s33: -p.g03 * a.s33 + p.g32() * a.s22 - i * ob_t * (a.s32d - s32)
            + i * a.s03.conj() * ei
            - i * a.s03 * eim,
        s13: Complex64::new(-(p.g01 + p.g03) / 2.0, p.dwi - p.d1) * a.s13 - i * oa_t * a.s03
            - i * a.s32d * es
            + i * ob_t * a.s12
            + i * a.s01.conj() * ei,
        s03: Complex64::new(-p.g03 / 2.0, p.dwi) * a.s03 - i * oa_t * a.s13 + i * ob_t * a.s02
            + i * (s00 - a.s33) * ei,
        s32d: Complex64::new(-(p.g03 + p.g2) / 2.0, -p.db) * a.s32d - i * a.s13 * esm
            + i * ob_t * (a.s22 - a.s33)
            + i * a.s02.conj() * ei,
    }
}

impl Scaled {
    fn g32(&self) -> f64 {
        self.g2 - self.g12
    }
}

fn advance(a: &Atom, d: &Atom, dt: f64) -> Atom {
    Atom {
        s01: a.s01 + dt * d.s01,
        s12: a.s12 + dt * d.s12,
        s02: a.s02 + dt * d.s02,
        s11: a.s11 + dt * d.s11,
        s22: a.s22 + dt * d.s22,
        s33: a.s33 + dt * d.s33,
        s13: a.s13 + dt * d.s13,
        s03: a.s03 + dt * d.s03,
        s32d: a.s32d + dt * d.s32d,
    }
}

// Forward march of the scaled field equations over z̃ by trapezoidal
// quadrature of the atomic polarizations.
fn march_fields(
    atoms: &[Atom],
    es0: Complex64,
    ei0: Complex64,
    dz: f64,
    r2: f64,
    es: &mut [Complex64],
    ei: &mut [Complex64],
) {
    let i = Complex64::i();
    es[0] = es0;
    ei[0] = ei0;
    for j in 1..atoms.len() {
        es[j] = es[j - 1] + dz / 2.0 * i * r2 * (atoms[j - 1].s12 + atoms[j].s12);
        ei[j] = ei[j - 1] + dz / 2.0 * i * (atoms[j - 1].s03 + atoms[j].s03);
    }
}

fn update_atoms(
    atoms: &[Atom],
    mid: &[Atom],
    es: &[Complex64],
    ei: &[Complex64],
    oa_t: f64,
    ob_t: f64,
    dt: f64,
    p: &Scaled,
    out: &mut [Atom],
) {
    #[cfg(feature = "parallel")]
    {
        out.par_iter_mut().enumerate().for_each(|(j, o)| {
            *o = advance(&atoms[j], &rhs(&mid[j], es[j], ei[j], oa_t, ob_t, p), dt);
        });
    }
    #[cfg(not(feature = "parallel"))]
    {
        for (j, o) in out.iter_mut().enumerate() {
            *o = advance(&atoms[j], &rhs(&mid[j], es[j], ei[j], oa_t, ob_t, p), dt);
        }
    }
}

fn check_state(atoms: &[Atom], step: usize, t_ns: f64) -> Result<(), SolverError> {
    for a in atoms {
        let pops = [a.s11, a.s22, a.s33];
        for pv in pops {
            if !pv.re.is_finite() || !pv.im.is_finite() {
                return Err(SolverError::NonFiniteState { step, t_ns });
            }
            if pv.im.abs() > POPULATION_TOL
                || pv.re < -POPULATION_TOL
                || pv.re > 1.0 + POPULATION_TOL
            {
                return Err(SolverError::PopulationViolation {
                    step,
                    value: if pv.im.abs() > POPULATION_TOL { pv.im } else { pv.re },
                });
            }
        }
        if !a.s01.re.is_finite() || !a.s03.re.is_finite() || !a.s12.re.is_finite() {
            return Err(SolverError::NonFiniteState { step, t_ns });
        }
    }
    Ok(())
}

/// Integrate the full Maxwell-Bloch system for the scenario.
///
/// Atoms start in the ground state with zero coherences and zero fields.
/// Boundary fields at z̃ = 0 follow the input envelopes.
pub fn simulate(scenario: &Scenario, grid: &GridSpec) -> Result<SpaceTimeFields, SolverError> {
    if grid.dt <= 0.0 || grid.dz <= 0.0 {
        return Err(SolverError::InvalidGrid("dt and dz must be positive".into()));
    }
    if grid.corrector_iters == 0 {
        return Err(SolverError::InvalidGrid("corrector_iters must be >= 1".into()));
    }
    let scales = characteristic_scales(&scenario.ens, &scenario.rates, scenario.gamma03_per_ns);
    let t_c_ns = scales.t_c * 1e9;
    let gamma03_tc = scenario.gamma03_per_ns * 1e9 * scenario.rates.gamma_03 * scales.t_c;

    // time window: input support plus a tail of 5x the idler fall time or
    // 200 T_c, whichever is larger
    let support = scenario
        .idler_in
        .support_end()
        .max(scenario.signal_in.support_end());
    let t_span_ns = match grid.t_span_ns {
        Some(v) => v,
        None => {
            if !support.is_finite() {
                return Err(SolverError::InvalidGrid(
                    "cw probe input requires an explicit t_span_ns".into(),
                ));
            }
            support + (5.0 * scenario.idler_in.t_s).max(200.0 * t_c_ns)
        }
    };

    let sc = |x: f64| x * gamma03_tc;
    let p = Scaled {
        oa: sc(scenario.pump_a.amplitude),
        ob: sc(scenario.pump_b.amplitude),
        d1: sc(scenario.pump.delta_1),
        db: sc(scenario.pump.delta_b),
        dwi: sc(scenario.probe.dw_i),
        dws: sc(scenario.probe.dw_s),
        d2: sc(scenario.probe.delta_2),
        g01: sc(scenario.rates.gamma_01),
        g03: sc(scenario.rates.gamma_03),
        g12: sc(scenario.rates.gamma_12),
        g2: sc(scenario.rates.gamma_2()),
        r2: scenario.ens.coupling_ratio * scenario.ens.coupling_ratio,
    };

    let nz = (scales.z_extent / grid.dz).round() as usize + 1;
    let n_steps = (t_span_ns / t_c_ns / grid.dt).ceil() as usize;
    let dt = grid.dt;
    let dz = scales.z_extent / (nz - 1) as f64;

    let mut atoms = vec![Atom::default(); nz];
    let mut atoms_new = vec![Atom::default(); nz];
    let mut mid = vec![Atom::default(); nz];
    let mut es = vec![Complex64::default(); nz];
    let mut ei = vec![Complex64::default(); nz];
    let mut es_mid = vec![Complex64::default(); nz];
    let mut ei_mid = vec![Complex64::default(); nz];

    // unit envelope profiles; amplitudes already folded into the scaling
    let profile = |shape: &PulseShape, t_ns: f64| {
        if shape.amplitude == 0.0 {
            0.0
        } else {
            envelope(shape, t_ns) / shape.amplitude
        }
    };
    let idler_bc = |t_ns: f64| Complex64::from(sc(envelope(&scenario.idler_in, t_ns)));
    let signal_bc = |t_ns: f64| Complex64::from(sc(envelope(&scenario.signal_in, t_ns)));

    let cap = n_steps + 1;
    let mut fields = SpaceTimeFields {
        t_tau: Vec::with_capacity(cap),
        e_s_in: Vec::with_capacity(cap),
        e_i_in: Vec::with_capacity(cap),
        e_s_out: Vec::with_capacity(cap),
        e_i_out: Vec::with_capacity(cap),
        interior: Vec::new(),
        z_tau: (0..nz).map(|j| j as f64 * dz).collect(),
        t_c: scales.t_c,
        gamma03_tc,
        coupling_ratio: scenario.ens.coupling_ratio,
        dt,
    };
    fields.t_tau.push(0.0);
    fields.e_s_in.push(signal_bc(0.0));
    fields.e_i_in.push(idler_bc(0.0));
    fields.e_s_out.push(Complex64::default());
    fields.e_i_out.push(Complex64::default());

    for n in 0..n_steps {
        let t0 = n as f64 * dt;
        let t1 = t0 + dt;
        let tm = t0 + dt / 2.0;
        let (tm_ns, t1_ns) = (tm * t_c_ns, t1 * t_c_ns);
        let oa_m = p.oa * profile(&scenario.pump_a, tm_ns);
        let ob_m = p.ob * profile(&scenario.pump_b, tm_ns);
        let es_bc_m = signal_bc(tm_ns);
        let ei_bc_m = idler_bc(tm_ns);

        atoms_new.copy_from_slice(&atoms);
        for _ in 0..grid.corrector_iters {
            for j in 0..nz {
                mid[j] = atoms[j].midpoint(&atoms_new[j]);
            }
            march_fields(&mid, es_bc_m, ei_bc_m, dz, p.r2, &mut es_mid, &mut ei_mid);
            update_atoms(&atoms, &mid, &es_mid, &ei_mid, oa_m, ob_m, dt, &p, &mut atoms_new);
        }
        std::mem::swap(&mut atoms, &mut atoms_new);
        check_state(&atoms, n + 1, t1_ns)?;

        march_fields(&atoms, signal_bc(t1_ns), idler_bc(t1_ns), dz, p.r2, &mut es, &mut ei);

        fields.t_tau.push(t1);
        fields.e_s_in.push(es[0]);
        fields.e_i_in.push(ei[0]);
        fields.e_s_out.push(es[nz - 1]);
        fields.e_i_out.push(ei[nz - 1]);
        if (n + 1) % INTERIOR_DECIMATION == 0 {
            fields.interior.push((t1, es.clone(), ei.clone()));
        }
    }
    Ok(fields)
}

/// η_d = ∫|E_s(L,t)|²dt / ∫|E_i(0,t)|²dt by trapezoidal integration of
/// the stored boundary traces, with the r² conversion between Ẽ and
/// physical intensity.
pub fn pulse_efficiency(fields: &SpaceTimeFields) -> Result<f64, SolverError> {
    let trapz = |ys: &[Complex64]| -> f64 {
        ys.windows(2)
            .map(|w| (w[0].norm_sqr() + w[1].norm_sqr()) / 2.0 * fields.dt)
            .sum()
    };
    let input = trapz(&fields.e_i_in);
    if input < 1e-30 {
        return Err(SolverError::ZeroInput);
    }
    let r2 = fields.coupling_ratio * fields.coupling_ratio;
    Ok(trapz(&fields.e_s_out) / input / r2)
}

/// Refinement study: η_d at (dt, dz), (dt/2, dz) and (dt, dz/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceReport {
    pub eta_base: f64,
    pub eta_half_dt: f64,
    pub eta_half_dz: f64,
    pub rel_delta_dt: f64,
    pub rel_delta_dz: f64,
    /// Both refinement deltas below 1%.
    pub converged: bool,
}

pub fn convergence_report(
    scenario: &Scenario,
    base: &GridSpec,
) -> Result<ConvergenceReport, SolverError> {
    let run = |g: GridSpec| simulate(scenario, &g).and_then(|f| pulse_efficiency(&f));
    let eta_base = run(*base)?;
    let (eta_dt, eta_dz) = crate::par::join(
        || run(GridSpec { dt: base.dt / 2.0, ..*base }),
        || run(GridSpec { dz: base.dz / 2.0, ..*base }),
    );
    let (eta_half_dt, eta_half_dz) = (eta_dt?, eta_dz?);
    let rel_delta_dt = (eta_half_dt - eta_base).abs() / eta_base.abs().max(1e-300);
    let rel_delta_dz = (eta_half_dz - eta_base).abs() / eta_base.abs().max(1e-300);
    Ok(ConvergenceReport {
        eta_base,
        eta_half_dt,
        eta_half_dz,
        rel_delta_dt,
        rel_delta_dz,
        converged: rel_delta_dt < 0.01 && rel_delta_dz < 0.01,
    })
}

/// Dominant modulation of an exit-plane intensity trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Modulation {
    /// Peak frequency in γ03 units.
    pub frequency: f64,
    pub peak_amplitude: f64,
    pub floor: f64,
}

/// Dominant nonzero-frequency spectral peak of an intensity trace sampled
/// every `dt_tau` cooperation times, in γ03 units.
///
/// The mean is removed and a Hann window applied; the spectrum is
/// zero-padded 16x and the peak refined by parabolic interpolation. Bins
/// below 1.5 cycles per window are excluded so residual envelope variation
/// does not masquerade as modulation.
pub fn modulation_frequency(
    trace: &[f64],
    dt_tau: f64,
    gamma03_tc: f64,
) -> Result<Modulation, SolverError> {
    let n = trace.len();
    if n < 64 {
        return Err(SolverError::TraceTooShort { len: n });
    }
    let mean = trace.iter().sum::<f64>() / n as f64;
    let mut buf: Vec<Complex64> = trace
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            let hann =
                0.5 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64).cos());
            Complex64::from((v - mean) * hann)
        })
        .collect();
    let n_pad = (16 * n).next_power_of_two();
    buf.resize(n_pad, Complex64::default());
    FftPlanner::new().plan_fft_forward(n_pad).process(&mut buf);

    let mag: Vec<f64> = buf[..n_pad / 2].iter().map(|c| c.norm()).collect();
    // frequency per bin in cycles per T_c
    let df = 1.0 / (n_pad as f64 * dt_tau);
    let k_min = ((1.5 / (n as f64 * dt_tau)) / df).ceil() as usize;
    let k_min = k_min.max(1);
    if k_min >= mag.len() - 1 {
        return Err(SolverError::TraceTooShort { len: n });
    }

    let (k_peak, &peak) = mag[k_min..mag.len() - 1]
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, v)| (i + k_min, v))
        .unwrap();
    let mut sorted: Vec<f64> = mag[k_min..].to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let floor = sorted[sorted.len() / 2];
    if !(peak > 10.0 * floor) {
        return Err(SolverError::NoModulation {
            ratio: peak / floor.max(1e-300),
        });
    }
    // parabolic interpolation on the log-magnitude
    let (a, b, c) = (
        mag[k_peak - 1].max(1e-300).ln(),
        mag[k_peak].max(1e-300).ln(),
        mag[k_peak + 1].max(1e-300).ln(),
    );
    let denom = a - 2.0 * b + c;
    let delta = if denom.abs() > 1e-300 { 0.5 * (a - c) / denom } else { 0.0 };
    let f_cyc = (k_peak as f64 + delta) * df;
    Ok(Modulation {
        frequency: 2.0 * std::f64::consts::PI * f_cyc / gamma03_tc,
        peak_amplitude: peak,
        floor,
    })
}
