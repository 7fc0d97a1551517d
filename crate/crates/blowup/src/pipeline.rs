use std::fmt;
use std::path::{Path, PathBuf};

use blowup_core::plasma::{
    certify_blowup, lambda_candidates, make_plasma_data, BlowupCertificate, EntropyBump, NeutralDensity, PlasmaBackground,
    PlasmaFamily, RadialPlasmaData,
};
use blowup_core::relfluid::{
    certify_fluid, evaluate_nbar, make_initial_data, nbar_candidates, BalancedDensity, ConditionReport, DataFamily,
    FluidCertificate, MomentumBump, QuietBackground, RadialFluidData, RadialShape,
};
use blowup_core::solver::{
    run, BreakdownCriterion, DiagnosticsSeries, FluidSolver, PlasmaSolver, RadialGrid, RunConfig,
};
use blowup_core::eos::{default_assumption_grids, verify_assumptions};
use blowup_core::{AssumptionReport, NodeGrid, PolytropicEos};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{plasma_core_units, ExperimentConfig, Mode};
use crate::output::{to_json, write_file, write_profile_csv, write_series_csv, Profile};

#[derive(Debug)]
pub enum PipelineError {
    Core(blowup_core::Error),
    Io(std::io::Error),
    /// A configuration value that passed parsing but does not fit the data.
    Config { field: &'static str, message: String },
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PipelineError::Core(e) => write!(f, "{e}"),
            PipelineError::Io(e) => write!(f, "io: {e}"),
            PipelineError::Config { field, message } => write!(f, "invalid `{field}`: {message}"),
        }
    }
}

impl std::error::Error for PipelineError {}

impl From<blowup_core::Error> for PipelineError {
    fn from(e: blowup_core::Error) -> Self {
        PipelineError::Core(e)
    }
}

impl From<std::io::Error> for PipelineError {
    fn from(e: std::io::Error) -> Self {
        PipelineError::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, PipelineError>;

/// Exit status of a finished experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    NotCertified,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::NotCertified => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: Status,
    /// JSON text of the report, exactly as written.
    pub report: String,
    pub written: Vec<PathBuf>,
    pub summary: String,
}

fn eos(cfg: &ExperimentConfig) -> Result<PolytropicEos> {
    Ok(PolytropicEos::new(cfg.eos.gamma, cfg.eos.a0)?)
}

fn node_grid(cfg: &ExperimentConfig) -> Result<NodeGrid> {
    NodeGrid::new(cfg.grid.n, cfg.grid.r_max).map_err(|e| PipelineError::Config {
        field: "grid.N",
        message: format!("{e} (the unit support radius must fall on a grid node)"),
    })
}

fn criterion_name(c: BreakdownCriterion) -> &'static str {
    match c {
        BreakdownCriterion::GradientGrowth => "gradient-growth",
        BreakdownCriterion::RecoveryFailure => "recovery-failure",
        BreakdownCriterion::LimiterSaturation => "limiter-saturation",
    }
}

/// Default fluid profiles at the configured amplitudes.
pub fn fluid_shapes(cfg: &ExperimentConfig) -> (MomentumBump, BalancedDensity) {
    (MomentumBump { amplitude: cfg.shapes.kappa }, BalancedDensity { amplitude: cfg.shapes.mu })
}

#[derive(Debug, Clone, Serialize)]
pub struct NbarCandidate {
    pub nbar: f64,
    #[serde(flatten)]
    pub report: ConditionReport,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NbarScanReport {
    pub mode: &'static str,
    pub candidates: Vec<NbarCandidate>,
    /// Largest passing candidate.
    pub selected: Option<f64>,
    pub selected_index: Option<usize>,
}

/// Evaluate every candidate `n̄` concurrently; the result is in candidate
/// order, so the selection matches the sequential scan.
pub fn scan_nbar(cfg: &ExperimentConfig) -> Result<NbarScanReport> {
    let eos = eos(cfg)?;
    let grid = node_grid(cfg)?;
    let (phi, psi) = fluid_shapes(cfg);
    let sbar = cfg.background.sbar;
    let candidates: Vec<f64> = nbar_candidates().collect();
    let evaluated: Vec<NbarCandidate> = candidates
        .par_iter()
        .map(|&nbar| {
            evaluate_nbar(&phi, &psi, sbar, eos, &grid, nbar).map(|report| NbarCandidate { nbar, pass: report.all_pass(), report })
        })
        .collect::<std::result::Result<_, _>>()?;
    let selected_index = evaluated.iter().position(|c| c.pass);
    Ok(NbarScanReport {
        mode: Mode::ScanNbar.name(),
        selected: selected_index.map(|i| evaluated[i].nbar),
        selected_index,
        candidates: evaluated,
    })
}

/// Certified fluid data ready for simulation.
#[derive(Debug, Clone)]
pub struct FluidCase {
    pub bg: QuietBackground,
    pub data: RadialFluidData,
    pub certificate: FluidCertificate,
    /// Whether `n̄` came from the scan rather than the config.
    pub scanned: bool,
}

pub fn fluid_case(cfg: &ExperimentConfig) -> Result<FluidCase> {
    let eos = eos(cfg)?;
    let grid = node_grid(cfg)?;
    let (phi, psi) = fluid_shapes(cfg);
    let sbar = cfg.background.sbar;
    let (nbar, scanned) = match cfg.background.nbar {
        Some(n) => (n, false),
        None => {
            let scan = scan_nbar(cfg)?;
            let nbar = scan.selected.ok_or(PipelineError::Core(blowup_core::Error::ScanExhausted(
                "no background density on the scan grid satisfies all conditions",
            )))?;
            (nbar, true)
        }
    };
    let family = DataFamily { phi, psi, nbar, sbar };
    let data = make_initial_data(&family, &grid, eos)?;
    let bg = QuietBackground::new(eos, nbar, sbar)?;
    let certificate = certify_fluid(&data, &bg)?;
    Ok(FluidCase { bg, data, certificate, scanned })
}

fn check_range(cfg: &ExperimentConfig, etabar: f64) -> Result<()> {
    let dr = cfg.grid.r_max / cfg.grid.n as f64;
    let need = 1.0 + etabar * cfg.grid.t_end + 4.0 * dr;
    if cfg.grid.r_max < need {
        return Err(PipelineError::Config {
            field: "grid.r_max",
            message: format!("the range of influence reaches {need:.6} by t_end; enlarge r_max or shorten t_end"),
        });
    }
    Ok(())
}

fn run_config(cfg: &ExperimentConfig) -> RunConfig {
    RunConfig {
        cfl: cfg.grid.cfl,
        t_end: cfg.grid.t_end,
        sample_interval: cfg.grid.sample_interval,
        ..RunConfig::default()
    }
}

/// Integrate the fluid case to `t_end` or breakdown.
pub fn simulate_fluid(cfg: &ExperimentConfig, case: &FluidCase) -> Result<(FluidSolver, DiagnosticsSeries)> {
    let bg = case.bg;
    check_range(cfg, bg.etabar)?;
    let (phi, psi) = fluid_shapes(cfg);
    let grid = RadialGrid::new(cfg.grid.n, cfg.grid.r_max)?;
    let mut state = FluidSolver::new(grid, bg, 1.0, |r| {
        let f = phi.eval(r);
        (bg.nbar * psi.eval(r), f, bg.sbar + f)
    })?;
    let series = run(&mut state, &run_config(cfg))?;
    Ok((state, series))
}

/// Plasma background and data at amplitude `lambda`, in core units.
pub fn plasma_case(cfg: &ExperimentConfig, lambda: f64) -> Result<(PlasmaBackground, RadialPlasmaData)> {
    let u = plasma_core_units(cfg);
    let eos = PolytropicEos::new(cfg.eos.gamma, u.a0)?;
    let bg = PlasmaBackground::new(eos, u.nbar, cfg.plasma.sbar, u.e, u.m, u.c)?;
    let data = make_plasma_data(&plasma_family(cfg), lambda, &node_grid(cfg)?, &bg)?;
    Ok((bg, data))
}

pub fn plasma_family(cfg: &ExperimentConfig) -> PlasmaFamily<NeutralDensity, EntropyBump, MomentumBump> {
    PlasmaFamily {
        nu0: NeutralDensity { amplitude: cfg.shapes.delta },
        sigma0: EntropyBump { amplitude: cfg.shapes.sigma },
        u0: MomentumBump { amplitude: 1.0 },
    }
}

pub fn simulate_plasma(cfg: &ExperimentConfig, lambda: f64) -> Result<(PlasmaSolver, DiagnosticsSeries)> {
    let (bg, _) = plasma_case(cfg, lambda)?;
    check_range(cfg, bg.etabar)?;
    let fam = plasma_family(cfg);
    let grid = RadialGrid::new(cfg.grid.n, cfg.grid.r_max)?;
    let mut state = PlasmaSolver::new(grid, bg, |r| (fam.nu0.eval(r), fam.sigma0.eval(r), lambda * fam.u0.eval(r)))?;
    let series = run(&mut state, &run_config(cfg))?;
    Ok((state, series))
}

#[derive(Debug, Clone, Serialize)]
pub struct LambdaScanReport {
    pub mode: &'static str,
    pub candidates: Vec<BlowupCertificate>,
    /// Smallest certified candidate.
    pub selected: Option<f64>,
    pub selected_index: Option<usize>,
}

pub fn scan_lambda(cfg: &ExperimentConfig) -> Result<LambdaScanReport> {
    let (bg, data) = plasma_case(cfg, 1.0)?;
    let candidates: Vec<f64> = lambda_candidates().collect();
    let evaluated: Vec<BlowupCertificate> = candidates
        .par_iter()
        .map(|&lambda| certify_blowup(&data, &bg, lambda))
        .collect::<std::result::Result<_, _>>()?;
    let selected_index = evaluated.iter().position(|c| c.certified());
    Ok(LambdaScanReport {
        mode: Mode::ScanLambda.name(),
        selected: selected_index.map(|i| evaluated[i].lambda),
        selected_index,
        candidates: evaluated,
    })
}

#[derive(Debug, Clone, Serialize)]
struct EosCheckReport {
    mode: &'static str,
    gamma: f64,
    a0: f64,
    #[serde(flatten)]
    assumptions: AssumptionReport,
}

#[derive(Debug, Clone, Serialize)]
struct FluidCertifyReport {
    mode: &'static str,
    gamma: f64,
    nbar: f64,
    sbar: f64,
    nbar_from_scan: bool,
    kappa: f64,
    mu: f64,
    #[serde(flatten)]
    certificate: FluidCertificate,
}

#[derive(Debug, Clone, Serialize)]
struct RunSummary {
    steps: usize,
    samples: usize,
    t_final: f64,
    breakdown_time: Option<f64>,
    breakdown_criterion: Option<&'static str>,
    initial_gradient: f64,
    max_dod_dev: f64,
}

fn summarize(series: &DiagnosticsSeries) -> RunSummary {
    RunSummary {
        steps: series.steps,
        samples: series.samples.len(),
        t_final: series.samples.last().map_or(0.0, |s| s.t),
        breakdown_time: series.breakdown.map(|b| b.time),
        breakdown_criterion: series.breakdown.map(|b| criterion_name(b.criterion)),
        initial_gradient: series.initial_gradient,
        max_dod_dev: series.samples.iter().map(|s| s.dod_dev).fold(0.0, f64::max),
    }
}

#[derive(Debug, Clone, Serialize)]
struct FluidSimulateReport {
    #[serde(flatten)]
    certify: FluidCertifyReport,
    #[serde(rename = "N")]
    n: usize,
    r_max: f64,
    run: RunSummary,
    /// Breakdown detected no later than the certified bound.
    breakdown_before_bound: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
struct PlasmaCertifyReport {
    mode: &'static str,
    gamma: f64,
    nbar: f64,
    sbar: f64,
    e: f64,
    m: f64,
    c: f64,
    delta: f64,
    sigma: f64,
    time_unit: f64,
    #[serde(flatten)]
    certificate: BlowupCertificate,
}

#[derive(Debug, Clone, Serialize)]
struct PlasmaSimulateReport {
    #[serde(flatten)]
    certify: PlasmaCertifyReport,
    #[serde(rename = "N")]
    n: usize,
    r_max: f64,
    run: RunSummary,
}

fn plasma_certify_report(cfg: &ExperimentConfig, lambda: f64) -> Result<PlasmaCertifyReport> {
    let (bg, data) = plasma_case(cfg, lambda)?;
    let certificate = certify_blowup(&data, &bg, lambda)?;
    Ok(PlasmaCertifyReport {
        mode: cfg.mode.name(),
        gamma: cfg.eos.gamma,
        nbar: bg.nbar,
        sbar: bg.sbar,
        e: bg.e,
        m: bg.m,
        c: bg.c,
        delta: cfg.shapes.delta,
        sigma: cfg.shapes.sigma,
        time_unit: plasma_core_units(cfg).time_unit,
        certificate,
    })
}

fn fluid_certify_report(cfg: &ExperimentConfig, case: &FluidCase) -> FluidCertifyReport {
    FluidCertifyReport {
        mode: cfg.mode.name(),
        gamma: cfg.eos.gamma,
        nbar: case.bg.nbar,
        sbar: case.bg.sbar,
        nbar_from_scan: case.scanned,
        kappa: cfg.shapes.kappa,
        mu: cfg.shapes.mu,
        certificate: case.certificate,
    }
}

fn fluid_profile(s: &FluidSolver) -> Profile {
    Profile {
        r: (0..s.grid.cells()).map(|j| s.grid.center(j)).collect(),
        n: s.n.clone(),
        s: s.ent.clone(),
        u: s.u.clone(),
        e_field: None,
    }
}

fn plasma_profile(s: &PlasmaSolver) -> Profile {
    Profile {
        r: (0..s.grid.cells()).map(|j| s.grid.center(j)).collect(),
        n: s.n.clone(),
        s: s.ent.clone(),
        u: s.u.clone(),
        e_field: Some(s.cell_field()),
    }
}

/// Run the configured experiment and write its artifacts under `out`.
pub fn run_experiment(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let mut written = Vec::new();
    let mut series_out: Option<DiagnosticsSeries> = None;
    let mut profile_out: Option<Profile> = None;
    let (status, report, summary) = match cfg.mode {
        Mode::EosCheck => {
            let (n, s) = default_assumption_grids();
            let assumptions = verify_assumptions(&eos(cfg)?, &n, &s)?;
            let status = if assumptions.pass { Status::Ok } else { Status::NotCertified };
            let summary = format!("EOS assumptions {}", if assumptions.pass { "hold" } else { "fail" });
            let r = EosCheckReport { mode: cfg.mode.name(), gamma: cfg.eos.gamma, a0: cfg.eos.a0, assumptions };
            (status, to_json(&r), summary)
        }
        Mode::FluidCertify => {
            let case = fluid_case(cfg)?;
            let r = fluid_certify_report(cfg, &case);
            let ok = case.certificate.report.all_pass() && case.certificate.t_star.is_some();
            let summary = match case.certificate.t_star {
                Some(t) if ok => format!("certified at nbar = {}: T* = {t}", case.bg.nbar),
                _ => format!("not certified at nbar = {}", case.bg.nbar),
            };
            (if ok { Status::Ok } else { Status::NotCertified }, to_json(&r), summary)
        }
        Mode::FluidSimulate => {
            let case = fluid_case(cfg)?;
            let (state, series) = simulate_fluid(cfg, &case)?;
            let run = summarize(&series);
            let before = match (run.breakdown_time, case.certificate.t_star) {
                (Some(tb), Some(ts)) => Some(tb <= ts),
                _ => None,
            };
            let summary = match run.breakdown_time {
                Some(t) => format!("breakdown at t = {t} ({})", run.breakdown_criterion.unwrap_or("")),
                None => format!("no breakdown up to t = {}", run.t_final),
            };
            let ok = case.certificate.report.all_pass() && case.certificate.t_star.is_some();
            let r = FluidSimulateReport {
                certify: fluid_certify_report(cfg, &case),
                n: cfg.grid.n,
                r_max: cfg.grid.r_max,
                run,
                breakdown_before_bound: before,
            };
            profile_out = Some(fluid_profile(&state));
            series_out = Some(series);
            (if ok { Status::Ok } else { Status::NotCertified }, to_json(&r), summary)
        }
        Mode::PlasmaCertify => {
            let lambda = cfg.shapes.lambda.expect("validated");
            let r = plasma_certify_report(cfg, lambda)?;
            let ok = r.certificate.certified();
            let summary = format!("lambda = {lambda}: {}", if ok { "certified" } else { "not certified" });
            (if ok { Status::Ok } else { Status::NotCertified }, to_json(&r), summary)
        }
        Mode::PlasmaSimulate => {
            let lambda = cfg.shapes.lambda.unwrap_or(1.0);
            let certify = plasma_certify_report(cfg, lambda)?;
            let (state, series) = simulate_plasma(cfg, lambda)?;
            let run = summarize(&series);
            let summary = match run.breakdown_time {
                Some(t) => format!("lambda = {lambda}: breakdown at t = {t} ({})", run.breakdown_criterion.unwrap_or("")),
                None => format!("lambda = {lambda}: no breakdown up to t = {}", run.t_final),
            };
            let r = PlasmaSimulateReport { certify, n: cfg.grid.n, r_max: cfg.grid.r_max, run };
            profile_out = Some(plasma_profile(&state));
            series_out = Some(series);
            (Status::Ok, to_json(&r), summary)
        }
        Mode::ScanNbar => {
            let r = scan_nbar(cfg)?;
            let summary = match r.selected {
                Some(n) => format!("largest passing nbar = {n}"),
                None => "no candidate passes".to_string(),
            };
            (if r.selected.is_some() { Status::Ok } else { Status::NotCertified }, to_json(&r), summary)
        }
        Mode::ScanLambda => {
            let r = scan_lambda(cfg)?;
            let summary = match r.selected {
                Some(l) => format!("smallest certified lambda = {l}"),
                None => "no candidate is certified".to_string(),
            };
            (if r.selected.is_some() { Status::Ok } else { Status::NotCertified }, to_json(&r), summary)
        }
    };
    let report_path = out.join(&cfg.output.report);
    write_file(&report_path, |w| std::io::Write::write_all(w, report.as_bytes()))?;
    written.push(report_path);
    if let Some(series) = series_out {
        let path = out.join(&cfg.output.series);
        write_file(&path, |w| write_series_csv(w, &series.samples))?;
        written.push(path);
    }
    if let (Some(profile), Some(name)) = (profile_out, cfg.output.profile.as_ref()) {
        let path = out.join(name);
        write_file(&path, |w| write_profile_csv(w, &profile))?;
        written.push(path);
    }
    Ok(Outcome { status, report, written, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_scans_match_sequential() {
        let mut cfg = ExperimentConfig::new(Mode::ScanNbar);
        cfg.grid.n = 512;
        let par = scan_nbar(&cfg).unwrap();
        let (phi, psi) = fluid_shapes(&cfg);
        let seq = blowup_core::relfluid::find_blowup_nbar(&phi, &psi, 0.0, eos(&cfg).unwrap(), &node_grid(&cfg).unwrap()).unwrap();
        assert_eq!(par.selected, Some(seq.nbar));
        assert_eq!(par.selected_index, Some(seq.index));
        assert_eq!(par.candidates[seq.index].report, seq.report);

        let mut cfg = ExperimentConfig::new(Mode::ScanLambda);
        cfg.grid.n = 512;
        let par = scan_lambda(&cfg).unwrap();
        let (bg, data) = plasma_case(&cfg, 1.0).unwrap();
        let seq = blowup_core::plasma::scan_lambda(&data, &bg).unwrap();
        assert_eq!(par.selected, Some(seq.lambda));
        assert_eq!(par.candidates[seq.index], seq.certificate);
    }

    #[test]
    fn explicit_nbar_skips_scan() {
        let mut cfg = ExperimentConfig::new(Mode::FluidCertify);
        cfg.grid.n = 512;
        cfg.background.nbar = Some(0.1);
        let case = fluid_case(&cfg).unwrap();
        assert!(!case.scanned);
        assert_eq!(case.bg.nbar, 0.1);
        let dir = tempfile::tempdir().unwrap();
        let out = run_experiment(&cfg, dir.path()).unwrap();
        assert_eq!(out.status, Status::NotCertified);
    }

    #[test]
    fn cgs_units_reach_the_core() {
        let mut cfg = ExperimentConfig::new(Mode::PlasmaCertify);
        cfg.shapes.lambda = Some(1.0);
        cfg.plasma.units = crate::config::Units::Cgs;
        cfg.plasma.length_cm = 2.0;
        cfg.plasma.nbar = 0.01 / 8.0;
        let (bg, _) = plasma_case(&cfg, 1.0).unwrap();
        assert!((bg.nbar - 0.01).abs() < 1e-15);
    }
}
