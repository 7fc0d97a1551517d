use std::fmt;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    EosCheck,
    FluidCertify,
    FluidSimulate,
    PlasmaCertify,
    PlasmaSimulate,
    ScanNbar,
    ScanLambda,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::EosCheck => "eos-check",
            Mode::FluidCertify => "fluid-certify",
            Mode::FluidSimulate => "fluid-simulate",
            Mode::PlasmaCertify => "plasma-certify",
            Mode::PlasmaSimulate => "plasma-simulate",
            Mode::ScanNbar => "scan-nbar",
            Mode::ScanLambda => "scan-lambda",
        }
    }

    fn is_plasma(self) -> bool {
        matches!(self, Mode::PlasmaCertify | Mode::PlasmaSimulate | Mode::ScanLambda)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EosConfig {
    pub gamma: f64,
    pub a0: f64,
}

impl Default for EosConfig {
    fn default() -> Self {
        EosConfig { gamma: 5.0 / 3.0, a0: 1.0 }
    }
}

/// Quiet background of the relativistic fluid. Without `nbar` the
/// certifying modes pick it with the background-density scan.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BackgroundConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nbar: Option<f64>,
    pub sbar: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Units {
    /// `e`, `m`, `c`, lengths and densities enter the core as given.
    #[default]
    Nondimensional,
    /// Gaussian cgs inputs, rescaled to `m = c = 1` and unit support radius.
    Cgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlasmaConfig {
    pub nbar: f64,
    pub sbar: f64,
    pub e: f64,
    pub m: f64,
    pub c: f64,
    pub units: Units,
    /// Support radius of the perturbation in cm (cgs mode only).
    pub length_cm: f64,
}

impl Default for PlasmaConfig {
    fn default() -> Self {
        PlasmaConfig { nbar: 0.01, sbar: 0.0, e: 1.0, m: 1.0, c: 1.0, units: Units::Nondimensional, length_cm: 1.0 }
    }
}

/// Amplitudes of the default profile families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShapesConfig {
    /// Fluid velocity/entropy amplitude `κ`.
    pub kappa: f64,
    /// Fluid density amplitude `μ`.
    pub mu: f64,
    /// Plasma charge amplitude `δ`.
    pub delta: f64,
    /// Plasma entropy amplitude `σ`.
    pub sigma: f64,
    /// Plasma velocity amplitude `λ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl Default for ShapesConfig {
    fn default() -> Self {
        ShapesConfig { kappa: 16.0, mu: 0.5, delta: 0.1, sigma: 0.5, lambda: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub r_max: f64,
    pub cfl: f64,
    pub t_end: f64,
    /// Sampling interval of the diagnostics; `null` samples every step.
    pub sample_interval: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { n: 2048, r_max: 2.0, cfl: 0.4, t_end: 1.0, sample_interval: Some(1e-3) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub report: String,
    pub series: String,
    /// Final radial profile, written only when set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<String>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { report: "report.json".into(), series: "series.csv".into(), profile: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub mode: Mode,
    #[serde(default)]
    pub eos: EosConfig,
    #[serde(default)]
    pub background: BackgroundConfig,
    #[serde(default)]
    pub plasma: PlasmaConfig,
    #[serde(default)]
    pub shapes: ShapesConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn new(mode: Mode) -> Self {
        ExperimentConfig {
            mode,
            eos: EosConfig::default(),
            background: BackgroundConfig::default(),
            plasma: PlasmaConfig::default(),
            shapes: ShapesConfig::default(),
            grid: GridConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io(String),
    Parse(String),
    Field { field: &'static str, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io(m) => write!(f, "cannot read config: {m}"),
            ConfigError::Parse(m) => write!(f, "malformed config: {m}"),
            ConfigError::Field { field, message } => write!(f, "invalid `{field}`: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn field(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field, message: message.into() }
}

fn positive(name: &'static str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(field(name, format!("must be finite and positive, got {v}")))
    }
}

fn finite(name: &'static str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(field(name, format!("must be finite, got {v}")))
    }
}

/// Parse JSON text, fill defaults and validate.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    validate(&cfg)?;
    Ok(cfg)
}

/// Read from `path`, or from stdin when `path` is `-`.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| ConfigError::Io(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?
    };
    parse_config(&text)
}

pub fn validate(cfg: &ExperimentConfig) -> Result<(), ConfigError> {
    let g = cfg.eos.gamma;
    if !(g > 1.0 && g.is_finite()) {
        return Err(field("eos.gamma", format!("must exceed 1, got {g}")));
    }
    positive("eos.a0", cfg.eos.a0)?;
    let fluid_gamma_limit = matches!(cfg.mode, Mode::FluidCertify | Mode::FluidSimulate | Mode::ScanNbar);
    if fluid_gamma_limit && g >= 2.0 {
        return Err(field("eos.gamma", format!("the relativistic fluid needs gamma < 2, got {g}")));
    }
    if let Some(nbar) = cfg.background.nbar {
        positive("background.nbar", nbar)?;
    }
    if !(cfg.background.sbar >= 0.0 && cfg.background.sbar.is_finite()) {
        return Err(field("background.sbar", "must be finite and non-negative"));
    }
    let p = &cfg.plasma;
    positive("plasma.nbar", p.nbar)?;
    positive("plasma.e", p.e)?;
    positive("plasma.m", p.m)?;
    positive("plasma.c", p.c)?;
    positive("plasma.length_cm", p.length_cm)?;
    if !(p.sbar >= 0.0 && p.sbar.is_finite()) {
        return Err(field("plasma.sbar", "must be finite and non-negative"));
    }
    let s = &cfg.shapes;
    finite("shapes.kappa", s.kappa)?;
    finite("shapes.mu", s.mu)?;
    finite("shapes.delta", s.delta)?;
    if !(s.sigma >= 0.0 && s.sigma.is_finite()) {
        return Err(field("shapes.sigma", "must be finite and non-negative"));
    }
    match s.lambda {
        Some(l) if !(l >= 0.0 && l.is_finite()) => return Err(field("shapes.lambda", format!("must be finite and non-negative, got {l}"))),
        None if cfg.mode == Mode::PlasmaCertify => return Err(field("shapes.lambda", "required by plasma-certify")),
        _ => {}
    }
    let gr = &cfg.grid;
    if gr.n < 16 {
        return Err(field("grid.N", format!("need at least 16 cells, got {}", gr.n)));
    }
    if !(gr.r_max > 1.0 && gr.r_max.is_finite()) {
        return Err(field("grid.r_max", format!("must exceed the unit support radius, got {}", gr.r_max)));
    }
    if !(gr.cfl > 0.0 && gr.cfl <= 1.0) {
        return Err(field("grid.cfl", format!("must lie in (0, 1], got {}", gr.cfl)));
    }
    if !(gr.t_end >= 0.0 && gr.t_end.is_finite()) {
        return Err(field("grid.t_end", format!("must be finite and non-negative, got {}", gr.t_end)));
    }
    if let Some(h) = gr.sample_interval {
        positive("grid.sample_interval", h)?;
    }
    if cfg.mode.is_plasma() && p.units == Units::Nondimensional && p.length_cm != 1.0 {
        return Err(field("plasma.length_cm", "only meaningful with units = \"cgs\""));
    }
    if cfg.output.report.is_empty() {
        return Err(field("output.report", "must name a file"));
    }
    if cfg.output.series.is_empty() {
        return Err(field("output.series", "must name a file"));
    }
    Ok(())
}

/// Plasma parameters in the units the core works in.
///
/// In cgs mode the mass unit is `m`, the velocity unit `c` and the length
/// unit the support radius `L`, so `m = c = 1`, `e → e/√(m c² L)`,
/// `n̄ → n̄ L³`, `a₀ → a₀ L^{3−3γ}/(m c²)` and times are measured in `L/c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoreUnits {
    pub nbar: f64,
    pub e: f64,
    pub m: f64,
    pub c: f64,
    pub a0: f64,
    /// Seconds per core time unit (1 in nondimensional mode).
    pub time_unit: f64,
}

pub fn plasma_core_units(cfg: &ExperimentConfig) -> CoreUnits {
    let p = &cfg.plasma;
    match p.units {
        Units::Nondimensional => CoreUnits { nbar: p.nbar, e: p.e, m: p.m, c: p.c, a0: cfg.eos.a0, time_unit: 1.0 },
        Units::Cgs => {
            let l = p.length_cm;
            let mc2 = p.m * p.c * p.c;
            CoreUnits {
                nbar: p.nbar * l * l * l,
                e: p.e / (mc2 * l).sqrt(),
                m: 1.0,
                c: 1.0,
                a0: cfg.eos.a0 * l.powf(3.0 - 3.0 * cfg.eos.gamma) / mc2,
                time_unit: l / p.c,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = parse_config(r#"{"mode": "eos-check"}"#).unwrap();
        assert_eq!(cfg, ExperimentConfig::new(Mode::EosCheck));
        assert_eq!(cfg.grid.n, 2048);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(parse_config(r#"{"mode": "eos-check", "colour": 1}"#), Err(ConfigError::Parse(_))));
        assert!(matches!(parse_config(r#"{"mode": "eos-check", "eos": {"gama": 1.4}}"#), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse_config(r#"{"mode": "eos-check", "eos": {"gamma": 0.9}}"#).unwrap_err();
        assert!(matches!(e, ConfigError::Field { field: "eos.gamma", .. }));
        let e = parse_config(r#"{"mode": "plasma-certify"}"#).unwrap_err();
        assert!(matches!(e, ConfigError::Field { field: "shapes.lambda", .. }));
        let e = parse_config(r#"{"mode": "fluid-simulate", "grid": {"cfl": 2.0}}"#).unwrap_err();
        assert!(e.to_string().contains("grid.cfl"));
    }

    #[test]
    fn round_trip() {
        let mut cfg = ExperimentConfig::new(Mode::PlasmaSimulate);
        cfg.shapes.lambda = Some(3.5);
        cfg.background.nbar = Some(0.25);
        cfg.grid.sample_interval = None;
        cfg.output.profile = Some("profile.csv".into());
        let text = serde_json::to_string(&cfg).unwrap();
        assert_eq!(parse_config(&text).unwrap(), cfg);
    }

    #[test]
    fn cgs_rescaling() {
        let mut cfg = ExperimentConfig::new(Mode::PlasmaCertify);
        cfg.plasma = PlasmaConfig { nbar: 1e12, sbar: 0.0, e: 4.8e-10, m: 9.1e-28, c: 3e10, units: Units::Cgs, length_cm: 1e-3 };
        let u = plasma_core_units(&cfg);
        assert!((u.nbar - 1e3).abs() < 1e-9);
        let mc2 = 9.1e-28 * 9e20;
        // Coulomb energy at the support radius over the rest energy is unit-free.
        assert!((u.e * u.e - 4.8e-10f64.powi(2) / (mc2 * 1e-3)).abs() < 1e-12 * u.e * u.e);
        assert_eq!((u.m, u.c), (1.0, 1.0));
        // ω t is invariant: ω² = 4π e² n̄/m in either unit system.
        let omega_cgs = (4.0 * std::f64::consts::PI * 4.8e-10f64.powi(2) * 1e12 / 9.1e-28).sqrt();
        let omega_core = (4.0 * std::f64::consts::PI * u.e * u.e * u.nbar / u.m).sqrt();
        assert!((omega_core / u.time_unit - omega_cgs).abs() < 1e-9 * omega_cgs);
    }
}
