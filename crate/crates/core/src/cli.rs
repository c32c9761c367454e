//! Configuration ingestion, scenario orchestration and deterministic
//! tabular output for the `diamondconv` binary.
//!
//! Configs are flat TOML key-value documents (nesting only for pulse
//! shapes) with a strict schema: unknown keys are rejected. All physics
//! parameters are in γ03 units; note that the Rabi-frequency convention is
//! half the standard definition (Ω = dE/(2ħ)), so values are half of what
//! the usual convention would give.
//!
//! Output is comma-separated values with a `#`-prefixed metadata header
//! (tool version, fully resolved config, seed). Floats are serialized with
//! 17 significant digits, so identical configs give byte-identical tables
//! on one platform (modulo the version field).

use crate::mbsolver::{
    self, characteristic_scales, convergence_report, envelope, modulation_frequency,
    pulse_efficiency, simulate, GridSpec, PulseKind, PulseShape, Scenario, SolverError,
};
use crate::model::{
    coefficients, DecayRates, EnsembleConfig, ModelError, ProbeConfig, PumpConfig,
};
use crate::optimizer::{self, Bounds, OptimumRecord};
use crate::parametric::{dressed_spectrum, efficiencies, spectrum, uniform_grid, SpectrumError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}\nresolved config:\n{1}")]
    Numerical(String, String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(..) => 3,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Coeffs,
    Spectrum,
    Dressed,
    Optimize,
    OpdCurve,
    Pulse,
    Convergence,
}

impl std::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScenarioKind::Coeffs => "coeffs",
            ScenarioKind::Spectrum => "spectrum",
            ScenarioKind::Dressed => "dressed",
            ScenarioKind::Optimize => "optimize",
            ScenarioKind::OpdCurve => "opd-curve",
            ScenarioKind::Pulse => "pulse",
            ScenarioKind::Convergence => "convergence",
        };
        f.write_str(s)
    }
}

/// Pulse-shape document fragment (the only nested tables in a config).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseDoc {
    pub kind: PulseKind,
    pub amplitude: f64,
    pub t_r: f64,
    pub t_s: f64,
    pub hold: f64,
}

impl Default for PulseDoc {
    fn default() -> Self {
        PulseDoc {
            kind: PulseKind::RampedSquare,
            amplitude: 0.0,
            t_r: 0.0,
            t_s: 0.0,
            hold: 0.0,
        }
    }
}

impl From<PulseDoc> for PulseShape {
    fn from(d: PulseDoc) -> Self {
        PulseShape {
            kind: d.kind,
            amplitude: d.amplitude,
            t_r: d.t_r,
            t_s: d.t_s,
            hold: d.hold,
        }
    }
}

/// Fully-resolved run configuration. Every field has a documented default;
/// unknown keys in the document are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Optional scenario kind; must agree with the subcommand when set.
    pub scenario: Option<ScenarioKind>,

    // pump/probe point (γ03 units); resonant pumps by default
    pub omega_a: f64,
    pub omega_b: f64,
    pub delta_1: f64,
    pub delta_b: f64,
    pub dw_i: f64,

    // ensemble
    pub opd: f64,
    pub length_m: f64,
    pub coupling_ratio: f64,
    pub density_per_m3: Option<f64>,

    // decay rates (γ03 units) and the physical γ03
    pub gamma_03: f64,
    pub gamma_01: f64,
    pub gamma_12: f64,
    pub gamma_32: f64,
    pub gamma03_per_ns: f64,

    // spectrum grid
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,

    // optimizer
    pub budget: u64,
    pub opd_list: Vec<f64>,
    pub bounds_omega_a_min: f64,
    pub bounds_omega_a_max: f64,
    pub bounds_omega_b_min: f64,
    pub bounds_omega_b_max: f64,
    pub bounds_delta_1_min: f64,
    pub bounds_delta_1_max: f64,
    pub bounds_delta_b_min: f64,
    pub bounds_delta_b_max: f64,
    pub bounds_dw_i_min: f64,
    pub bounds_dw_i_max: f64,

    // Maxwell-Bloch grid
    pub dt: f64,
    pub dz: f64,
    pub t_span_ns: Option<f64>,
    pub corrector_iters: usize,

    // pulse shapes; pump_a hold is auto-extended to enclose the idler
    // when left at zero
    pub pump_a: Option<PulseDoc>,
    pub pump_b: Option<PulseDoc>,
    pub idler: PulseDoc,
    pub signal: Option<PulseDoc>,

    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: None,
            omega_a: 33.0,
            omega_b: 20.0,
            delta_1: 0.0,
            delta_b: 0.0,
            dw_i: 0.0,
            opd: 150.0,
            length_m: 6e-3,
            coupling_ratio: 1.0,
            density_per_m3: None,
            gamma_03: 1.0,
            gamma_01: 27.7 / 26.24,
            gamma_12: 1.0 / 2.76,
            gamma_32: 1.0 / 5.38,
            gamma03_per_ns: mbsolver::DEFAULT_GAMMA03_PER_NS,
            grid_min: -60.0,
            grid_max: 60.0,
            grid_points: 1201,
            budget: 24_000,
            opd_list: vec![10.0, 50.0, 150.0, 300.0],
            bounds_omega_a_min: 0.1,
            bounds_omega_a_max: 100.0,
            bounds_omega_b_min: 0.1,
            bounds_omega_b_max: 100.0,
            bounds_delta_1_min: -100.0,
            bounds_delta_1_max: 100.0,
            bounds_delta_b_min: -100.0,
            bounds_delta_b_max: 100.0,
            bounds_dw_i_min: -150.0,
            bounds_dw_i_max: 150.0,
            dt: 0.5,
            dz: 0.001,
            t_span_ns: None,
            corrector_iters: 2,
            pump_a: None,
            pump_b: None,
            idler: PulseDoc {
                kind: PulseKind::RampedSquare,
                amplitude: 0.1,
                t_r: 20.0,
                t_s: 20.0,
                hold: 80.0,
            },
            signal: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn pump(&self) -> PumpConfig {
        PumpConfig {
            omega_a: self.omega_a,
            omega_b: self.omega_b,
            delta_1: self.delta_1,
            delta_b: self.delta_b,
        }
    }

    pub fn probe(&self) -> ProbeConfig {
        ProbeConfig::new(self.dw_i, &self.pump())
    }

    pub fn ensemble(&self) -> EnsembleConfig {
        EnsembleConfig {
            opd: self.opd,
            length: self.length_m,
            coupling_ratio: self.coupling_ratio,
            density: self.density_per_m3,
        }
    }

    pub fn rates(&self) -> DecayRates {
        DecayRates {
            gamma_03: self.gamma_03,
            gamma_01: self.gamma_01,
            gamma_12: self.gamma_12,
            gamma_32: self.gamma_32,
        }
    }

    pub fn bounds(&self) -> Bounds {
        Bounds {
            omega_a: (self.bounds_omega_a_min, self.bounds_omega_a_max),
            omega_b: (self.bounds_omega_b_min, self.bounds_omega_b_max),
            delta_1: (self.bounds_delta_1_min, self.bounds_delta_1_max),
            delta_b: (self.bounds_delta_b_min, self.bounds_delta_b_max),
            dw_i: (self.bounds_dw_i_min, self.bounds_dw_i_max),
        }
    }

    pub fn grid(&self) -> GridSpec {
        GridSpec {
            dt: self.dt,
            dz: self.dz,
            t_span_ns: self.t_span_ns,
            corrector_iters: self.corrector_iters,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("opd", self.opd),
            ("length_m", self.length_m),
            ("coupling_ratio", self.coupling_ratio),
            ("gamma_03", self.gamma_03),
            ("gamma_01", self.gamma_01),
            ("gamma_12", self.gamma_12),
            ("gamma_32", self.gamma_32),
            ("gamma03_per_ns", self.gamma03_per_ns),
            ("dt", self.dt),
            ("dz", self.dz),
        ];
        for (key, v) in positive {
            if !(v > 0.0) {
                return Err(CliError::Config(format!("{key} must be positive, got {v}")));
            }
        }
        for (key, v) in [("omega_a", self.omega_a), ("omega_b", self.omega_b)] {
            if v < 0.0 {
                return Err(CliError::Config(format!("{key} must be nonnegative, got {v}")));
            }
        }
        if self.grid_points < 2 {
            return Err(CliError::Config(format!(
                "grid_points must be at least 2, got {}",
                self.grid_points
            )));
        }
        if self.grid_min >= self.grid_max {
            return Err(CliError::Config(format!(
                "grid_min {} must be below grid_max {}",
                self.grid_min, self.grid_max
            )));
        }
        if self.budget < 1000 {
            return Err(CliError::Config(format!(
                "budget must be at least 1000, got {}",
                self.budget
            )));
        }
        if self.corrector_iters == 0 {
            return Err(CliError::Config("corrector_iters must be at least 1".into()));
        }
        if !self.opd_list.windows(2).all(|w| w[0] < w[1])
            || self.opd_list.iter().any(|&v| v <= 0.0)
            || self.opd_list.is_empty()
        {
            return Err(CliError::Config(
                "opd_list must be strictly increasing and positive".into(),
            ));
        }
        self.bounds().validate().map_err(CliError::Config)?;
        for (key, shape) in [
            ("pump_a", &self.pump_a.unwrap_or_default()),
            ("pump_b", &self.pump_b.unwrap_or_default()),
            ("idler", &self.idler),
            ("signal", &self.signal.unwrap_or_default()),
        ] {
            if shape.amplitude < 0.0 || shape.t_s < 0.0 || shape.hold < 0.0 {
                return Err(CliError::Config(format!(
                    "{key}: amplitude, t_s and hold must be nonnegative"
                )));
            }
        }
        Ok(())
    }

    /// Canonical TOML rendering of the fully resolved config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Parse a TOML document, apply `--set key=value` overrides, fill defaults
/// and validate.
pub fn parse_config(text: &str, overrides: &[(String, String)]) -> Result<RunConfig, CliError> {
    let mut table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    for (key, value) in overrides {
        apply_override(&mut table, key, value)?;
    }
    let config: RunConfig = toml::Table::try_into(table)
        .map_err(|e| CliError::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

fn apply_override(table: &mut toml::Table, key: &str, value: &str) -> Result<(), CliError> {
    // values parse as TOML scalars/arrays; bare words fall back to strings
    let parsed: toml::Value = match format!("v = {value}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap(),
        Err(_) => toml::Value::String(value.to_string()),
    };
    let mut parts = key.split('.').peekable();
    let mut current = table;
    while let Some(part) = parts.next() {
        if parts.peek().is_none() {
            current.insert(part.to_string(), parsed);
            return Ok(());
        }
        current = current
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("--set {key}: {part} is not a table")))?;
    }
    Ok(())
}

/// Deterministic comma-separated output with a `#`-prefixed metadata header.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputTable {
    pub metadata: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// 17-significant-digit decimal rendering, stable across runs.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl OutputTable {
    fn new(config: &RunConfig, scenario: ScenarioKind, columns: &[&str]) -> Self {
        let mut metadata = vec![
            format!("diamondconv {}", env!("CARGO_PKG_VERSION")),
            format!("scenario: {scenario}"),
            format!("seed: {}", config.seed),
            "resolved config:".to_string(),
        ];
        metadata.extend(config.to_toml().lines().map(|l| format!("  {l}")));
        OutputTable {
            metadata,
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.metadata {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

fn numerical<E: std::fmt::Display>(config: &RunConfig) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Numerical(e.to_string(), config.to_toml())
}

/// Execute a scenario and produce its table.
pub fn run(scenario: ScenarioKind, config: &RunConfig) -> Result<OutputTable, CliError> {
    if let Some(declared) = config.scenario {
        if declared != scenario {
            return Err(CliError::Config(format!(
                "config declares scenario {declared} but the {scenario} subcommand was invoked"
            )));
        }
    }
    match scenario {
        ScenarioKind::Coeffs => run_coeffs(config),
        ScenarioKind::Spectrum => run_spectrum(config),
        ScenarioKind::Dressed => run_dressed(config),
        ScenarioKind::Optimize => run_optimize(config),
        ScenarioKind::OpdCurve => run_opd_curve(config),
        ScenarioKind::Pulse => run_pulse(config),
        ScenarioKind::Convergence => run_convergence(config),
    }
}

const COEFF_COLUMNS: [&str; 13] = [
    "dw_i",
    "re_beta_sL",
    "im_beta_sL",
    "re_alpha_iL",
    "im_alpha_iL",
    "re_kappa_sL",
    "im_kappa_sL",
    "re_kappa_iL",
    "im_kappa_iL",
    "eta_d",
    "eta_u",
    "t_d",
    "t_u",
];

fn coeff_row(
    dw_i: f64,
    c: &crate::model::CouplingCoefficients,
    r: &crate::parametric::ConversionResult,
) -> Vec<String> {
    vec![
        fmt_f64(dw_i),
        fmt_f64(c.beta_sl.re),
        fmt_f64(c.beta_sl.im),
        fmt_f64(c.alpha_il.re),
        fmt_f64(c.alpha_il.im),
        fmt_f64(c.kappa_sl.re),
        fmt_f64(c.kappa_sl.im),
        fmt_f64(c.kappa_il.re),
        fmt_f64(c.kappa_il.im),
        fmt_f64(r.eta_d),
        fmt_f64(r.eta_u),
        fmt_f64(r.t_d),
        fmt_f64(r.t_u),
    ]
}

fn run_coeffs(config: &RunConfig) -> Result<OutputTable, CliError> {
    let c = coefficients(&config.pump(), &config.probe(), &config.ensemble(), &config.rates())
        .map_err(numerical::<ModelError>(config))?;
    let r = efficiencies(&c);
    let mut table = OutputTable::new(config, ScenarioKind::Coeffs, &COEFF_COLUMNS);
    table.push_row(coeff_row(config.dw_i, &c, &r));
    Ok(table)
}

fn run_spectrum(config: &RunConfig) -> Result<OutputTable, CliError> {
    let grid = uniform_grid(config.grid_min, config.grid_max, config.grid_points);
    let tab = spectrum(&config.pump(), &config.ensemble(), &config.rates(), &grid)
        .map_err(numerical::<SpectrumError>(config))?;
    let mut table = OutputTable::new(config, ScenarioKind::Spectrum, &COEFF_COLUMNS);
    for (dw_i, c, r) in &tab.rows {
        table.push_row(coeff_row(*dw_i, c, r));
    }
    Ok(table)
}

fn run_dressed(config: &RunConfig) -> Result<OutputTable, CliError> {
    let d = dressed_spectrum(&config.pump());
    let mut table = OutputTable::new(
        config,
        ScenarioKind::Dressed,
        &["kind", "index", "value_gamma03"],
    );
    table
        .metadata
        .push(format!("peak positions: {}", if d.resonant { "exact (resonant pumps)" } else { "predicted (detuned pumps)" }));
    for (i, v) in d.shift_a.iter().enumerate() {
        table.push_row(vec!["shift_a".into(), i.to_string(), fmt_f64(*v)]);
    }
    for (i, v) in d.shift_b.iter().enumerate() {
        table.push_row(vec!["shift_b".into(), i.to_string(), fmt_f64(*v)]);
    }
    for (i, v) in d.peak_positions.iter().enumerate() {
        table.push_row(vec!["peak".into(), i.to_string(), fmt_f64(*v)]);
    }
    for (i, v) in d.window_centers.iter().enumerate() {
        table.push_row(vec!["window".into(), i.to_string(), fmt_f64(*v)]);
    }
    Ok(table)
}

const OPTIMUM_COLUMNS: [&str; 12] = [
    "opd",
    "omega_a",
    "omega_b",
    "delta_1",
    "delta_b",
    "dw_i",
    "eta_d",
    "eta_u",
    "t_d",
    "evaluations",
    "converged",
    "starts_used",
];

fn optimum_row(r: &OptimumRecord) -> Vec<String> {
    vec![
        fmt_f64(r.opd),
        fmt_f64(r.params.omega_a),
        fmt_f64(r.params.omega_b),
        fmt_f64(r.params.delta_1),
        fmt_f64(r.params.delta_b),
        fmt_f64(r.params.dw_i),
        fmt_f64(r.eta_d),
        fmt_f64(r.eta_u),
        fmt_f64(r.t_d),
        r.evaluations.to_string(),
        r.converged.to_string(),
        r.starts_used.to_string(),
    ]
}

fn run_optimize(config: &RunConfig) -> Result<OutputTable, CliError> {
    let rec = optimizer::optimize_at_opd(
        config.opd,
        &config.bounds(),
        config.budget,
        config.seed,
        &config.ensemble(),
        &config.rates(),
    );
    let mut table = OutputTable::new(config, ScenarioKind::Optimize, &OPTIMUM_COLUMNS);
    table.push_row(optimum_row(&rec));
    Ok(table)
}

fn run_opd_curve(config: &RunConfig) -> Result<OutputTable, CliError> {
    let records = optimizer::efficiency_vs_opd(
        &config.opd_list,
        &config.bounds(),
        config.budget,
        config.seed,
        &config.ensemble(),
        &config.rates(),
    );
    let mut table = OutputTable::new(config, ScenarioKind::OpdCurve, &OPTIMUM_COLUMNS);
    for rec in &records {
        table.push_row(optimum_row(rec));
    }
    Ok(table)
}

/// Assemble the Maxwell-Bloch scenario from the config: explicit pulse
/// tables win; otherwise pump-a is a ramped square auto-extended to
/// enclose the input idler with a 2·t_s margin, pump-b is cw, and the
/// signal input is off.
pub fn build_scenario(config: &RunConfig) -> Scenario {
    let idler: PulseShape = config.idler.into();
    let pump_a: PulseShape = match config.pump_a {
        Some(doc) => {
            let mut shape: PulseShape = doc.into();
            if shape.kind == PulseKind::RampedSquare && shape.hold == 0.0 {
                shape.hold =
                    (idler.support_end() + 2.0 * shape.t_s - shape.rise_end()).max(0.0);
            }
            shape
        }
        None => {
            let (t_r, t_s) = (10.0, 10.0);
            let hold = idler.support_end() + 2.0 * t_s - (t_r + t_s / 2.0);
            PulseShape::ramped_square(config.omega_a, t_r, t_s, hold.max(0.0))
        }
    };
    let pump_b: PulseShape = config
        .pump_b
        .map(PulseShape::from)
        .unwrap_or_else(|| PulseShape::cw(config.omega_b));
    let signal: PulseShape = config
        .signal
        .map(PulseShape::from)
        .unwrap_or_else(PulseShape::off);
    Scenario {
        pump_a,
        pump_b,
        idler_in: idler,
        signal_in: signal,
        pump: config.pump(),
        probe: config.probe(),
        ens: config.ensemble(),
        rates: config.rates(),
        gamma03_per_ns: config.gamma03_per_ns,
    }
}

fn run_pulse(config: &RunConfig) -> Result<OutputTable, CliError> {
    let scenario = build_scenario(config);
    let fields = simulate(&scenario, &config.grid()).map_err(numerical::<SolverError>(config))?;
    let eta = pulse_efficiency(&fields).map_err(numerical::<SolverError>(config))?;
    let mut table = OutputTable::new(
        config,
        ScenarioKind::Pulse,
        &[
            "t_ns",
            "idler_in_intensity",
            "signal_out_intensity",
            "pump_a_rabi",
            "pump_b_rabi",
        ],
    );
    table.metadata.push(format!("eta_d = {}", fmt_f64(eta)));
    table.metadata.push(
        "intensities are |Rabi|^2 in gamma03^2 units; signal intensity carries no extra r^2 factor (r = coupling_ratio)"
            .to_string(),
    );
    let g = fields.gamma03_tc;
    for (k, t) in fields.t_ns().iter().enumerate() {
        table.push_row(vec![
            fmt_f64(*t),
            fmt_f64(fields.e_i_in[k].norm_sqr() / (g * g)),
            fmt_f64(fields.e_s_out[k].norm_sqr() / (g * g)),
            fmt_f64(envelope(&scenario.pump_a, *t)),
            fmt_f64(envelope(&scenario.pump_b, *t)),
        ]);
    }
    // exit-plane modulation over the idler flat top, when resolvable
    let lo = scenario.idler_in.rise_end() - 0.2 * scenario.idler_in.t_s;
    let hi = scenario.idler_in.fall_start() + 0.3 * scenario.idler_in.t_s;
    let trace = fields.exit_signal_intensity_window(lo, hi);
    match modulation_frequency(&trace, fields.dt, fields.gamma03_tc) {
        Ok(m) => table
            .metadata
            .push(format!("exit modulation frequency: {} gamma03", fmt_f64(m.frequency))),
        Err(e) => table.metadata.push(format!("exit modulation: {e}")),
    }
    Ok(table)
}

fn run_convergence(config: &RunConfig) -> Result<OutputTable, CliError> {
    let scenario = build_scenario(config);
    let report = convergence_report(&scenario, &config.grid())
        .map_err(numerical::<SolverError>(config))?;
    let mut table = OutputTable::new(
        config,
        ScenarioKind::Convergence,
        &["grid", "dt", "dz", "eta_d", "rel_delta"],
    );
    table
        .metadata
        .push(format!("converged (both deltas < 1%): {}", report.converged));
    table.push_row(vec![
        "base".into(),
        fmt_f64(config.dt),
        fmt_f64(config.dz),
        fmt_f64(report.eta_base),
        fmt_f64(0.0),
    ]);
    table.push_row(vec![
        "half-dt".into(),
        fmt_f64(config.dt / 2.0),
        fmt_f64(config.dz),
        fmt_f64(report.eta_half_dt),
        fmt_f64(report.rel_delta_dt),
    ]);
    table.push_row(vec![
        "half-dz".into(),
        fmt_f64(config.dt),
        fmt_f64(config.dz / 2.0),
        fmt_f64(report.eta_half_dz),
        fmt_f64(report.rel_delta_dz),
    ]);
    Ok(table)
}

/// Physical-scale report used by the pulse/convergence metadata and tests.
pub fn scales_line(config: &RunConfig) -> String {
    let s = characteristic_scales(&config.ensemble(), &config.rates(), config.gamma03_per_ns);
    format!(
        "T_c = {:.4} ns, L_c = {:.2} mm, z_extent = {:.4}",
        s.t_c * 1e9,
        s.l_c * 1e3,
        s.z_extent
    )
}
