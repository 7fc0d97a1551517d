use alloc::vec::Vec;
use core::f64::consts::PI;

use super::fluid::FluidSolver;
use super::grid::RadialGrid;
use super::plasma::PlasmaSolver;
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::plasma::{energy_script, field_moment, g_function, kinetic_moment, mass_m, momentum_q, PlasmaSnapshot};
use crate::relfluid::{kinetic_integral, q_prime_integrand, radial_momentum, FluidSnapshot};

/// One row of the diagnostics series.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Sample {
    pub t: f64,
    /// Radial momentum `Q`.
    pub q: f64,
    /// `E` for the fluid, `𝓔` for the plasma.
    pub energy: f64,
    /// Excess particle number (fluid: `4π∫(D − n̄)r²`; plasma: `M`).
    pub mass: f64,
    pub poisson_res: f64,
    pub max_grad_u: f64,
    pub max_grad_p: f64,
    pub dod_dev: f64,
    pub breakdown: bool,
    /// Right-hand side of the `dQ/dt` identity evaluated on the state.
    pub q_prime: f64,
    /// Fluid: `4π∫(ρ+p)u²r²`; plasma: `∫nu²r²`.
    pub kinetic: f64,
    /// Plasma `G(t)`; zero for the fluid.
    pub g: f64,
    /// Plasma `∫ rE r² dr`; zero for the fluid.
    pub field_moment: f64,
    pub min_entropy: f64,
    /// Largest `|dr/dt|` of the flow (fluid: `|u|/u⁰`).
    pub max_flow_speed: f64,
    pub floor_cells: usize,
}

/// A state the generic driver can advance and measure.
pub trait RadialSystem: Clone {
    fn time(&self) -> f64;
    fn grid(&self) -> RadialGrid;
    fn max_speed(&self) -> f64;
    fn advance(&mut self, dt: f64) -> Result<()>;
    fn velocity(&self) -> &[f64];
    /// `max|∂_r p|` converted to the velocity gradient a linear sound wave
    /// of that pressure gradient carries; the breakdown reference when the
    /// data start at rest.
    fn acoustic_gradient(&self) -> f64;
    fn measure(&self) -> Result<Sample>;
    /// Largest normalized deviation from the background over cells lying
    /// at least three cells beyond the range of influence.
    fn dod_deviation(&self) -> f64;
}

/// Largest normalized deviation from the background outside
/// `R(t) + 3Δr`.
pub fn dod_check<S: RadialSystem>(state: &S) -> f64 {
    state.dod_deviation()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownThresholds {
    /// Flag once `max|∂_r u|` exceeds this multiple of its initial value.
    pub gradient_factor: f64,
    /// A one-cell velocity jump counts as a captured shock once it exceeds
    /// `saturation_factor · g₀ Δr` ...
    pub saturation_factor: f64,
    /// ... and this multiple of both jumps two cells away.
    pub saturation_ratio: f64,
}

impl Default for BreakdownThresholds {
    fn default() -> Self {
        BreakdownThresholds { gradient_factor: 100.0, saturation_factor: 10.0, saturation_ratio: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BreakdownCriterion {
    GradientGrowth,
    RecoveryFailure,
    LimiterSaturation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownEvent {
    pub time: f64,
    pub criterion: BreakdownCriterion,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub cfl: f64,
    pub t_end: f64,
    /// Uniform sampling interval; `None` samples after every step.
    pub sample_interval: Option<f64>,
    pub thresholds: BreakdownThresholds,
    pub max_steps: usize,
    /// Keep running past a detected breakdown (diagnostics only).
    pub stop_at_breakdown: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cfl: 0.4,
            t_end: 1.0,
            sample_interval: None,
            thresholds: BreakdownThresholds::default(),
            max_steps: 10_000_000,
            stop_at_breakdown: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsSeries {
    pub samples: Vec<Sample>,
    pub breakdown: Option<BreakdownEvent>,
    pub steps: usize,
    /// `max|∂_r u|` at `t = 0`.
    pub initial_gradient: f64,
}

fn max_gradient(v: &[f64], dr: f64) -> f64 {
    v.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max) / dr
}

/// A velocity jump well above the initial gradient that dominates the jumps
/// two cells away: the limiter has collapsed the profile onto a two- or
/// three-cell discontinuity.
fn limiter_saturated(u: &[f64], dr: f64, g0: f64, th: &BreakdownThresholds) -> bool {
    let jumps: Vec<f64> = u.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    (2..jumps.len().saturating_sub(2)).any(|k| {
        let jk = jumps[k];
        jk > 0.0 && jk > th.saturation_factor * g0 * dr && jk >= th.saturation_ratio * jumps[k - 2].max(jumps[k + 2])
    })
}

fn classify(u: &[f64], dr: f64, g0: f64, th: &BreakdownThresholds) -> Option<BreakdownCriterion> {
    if max_gradient(u, dr) > th.gradient_factor * g0 {
        Some(BreakdownCriterion::GradientGrowth)
    } else if limiter_saturated(u, dr, g0, th) {
        Some(BreakdownCriterion::LimiterSaturation)
    } else {
        None
    }
}

/// `cfl · Δr / (largest characteristic speed)`.
pub fn cfl_dt<S: RadialSystem>(state: &S, cfl: f64) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::Domain { what: "cfl (must lie in (0, 1])", value: cfl });
    }
    let speed = state.max_speed();
    if !speed.is_finite() {
        return Err(Error::NonFinite("characteristic speed"));
    }
    if !(speed > 0.0) {
        return Err(Error::Domain { what: "characteristic speed", value: speed });
    }
    Ok(cfl * state.grid().spacing() / speed)
}

/// Integrate until `t_end`, the step budget or breakdown.
pub fn run<S: RadialSystem>(state: &mut S, config: &RunConfig) -> Result<DiagnosticsSeries> {
    if !(config.cfl > 0.0 && config.cfl <= 1.0) {
        return Err(Error::Domain { what: "cfl (must lie in (0, 1])", value: config.cfl });
    }
    if !(config.t_end >= 0.0) || !config.t_end.is_finite() {
        return Err(Error::Domain { what: "t_end", value: config.t_end });
    }
    if let Some(h) = config.sample_interval {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::Domain { what: "sample interval", value: h });
        }
    }
    let dr = state.grid().spacing();
    let g0 = max_gradient(state.velocity(), dr).max(state.acoustic_gradient());
    let mut samples = Vec::new();
    samples.push(state.measure()?);
    let mut breakdown = None;
    let mut steps = 0;
    let mut next_sample = 1usize;
    let t0 = state.time();
    while state.time() < config.t_end && steps < config.max_steps {
        let mut dt = match cfl_dt(state, config.cfl) {
            Ok(dt) => dt,
            Err(Error::NonFinite(_)) => {
                let mut s = state.measure()?;
                s.breakdown = true;
                samples.push(s);
                breakdown = Some(BreakdownEvent { time: state.time(), criterion: BreakdownCriterion::RecoveryFailure });
                break;
            }
            Err(e) => return Err(e),
        };
        let mut sample_now = config.sample_interval.is_none();
        if let Some(h) = config.sample_interval {
            let target = t0 + next_sample as f64 * h;
            if state.time() + dt >= target - 1e-12 * h {
                dt = target - state.time();
                sample_now = true;
            }
        }
        if state.time() + dt >= config.t_end {
            dt = config.t_end - state.time();
            sample_now = true;
        }
        let backup = state.clone();
        match state.advance(dt) {
            Ok(()) => {}
            Err(Error::Recovery { .. }) | Err(Error::NoConvergence(_)) | Err(Error::NonFinite(_)) => {
                *state = backup;
                let mut s = state.measure()?;
                s.breakdown = true;
                samples.push(s);
                breakdown = Some(BreakdownEvent { time: state.time() + dt, criterion: BreakdownCriterion::RecoveryFailure });
                break;
            }
            Err(e) => return Err(e),
        }
        steps += 1;
        if sample_now && config.sample_interval.is_some() && state.time() < config.t_end {
            next_sample += 1;
        }
        let flagged = if breakdown.is_none() {
            classify(state.velocity(), dr, g0, &config.thresholds)
        } else {
            None
        };
        if let Some(criterion) = flagged {
            breakdown = Some(BreakdownEvent { time: state.time(), criterion });
            let mut s = state.measure()?;
            s.breakdown = true;
            samples.push(s);
            if config.stop_at_breakdown {
                break;
            }
        } else if sample_now {
            samples.push(state.measure()?);
        }
    }
    Ok(DiagnosticsSeries { samples, breakdown, steps, initial_gradient: g0 })
}

/// Earliest sample at which the gradient has grown past the threshold, or
/// which carries the breakdown flag of a recovery failure or a saturated
/// limiter.
pub fn breakdown_detector(series: &DiagnosticsSeries, thresholds: &BreakdownThresholds) -> Option<BreakdownEvent> {
    series.samples.first()?;
    let g0 = series.initial_gradient;
    for s in &series.samples {
        if s.max_grad_u > thresholds.gradient_factor * g0 {
            return Some(BreakdownEvent { time: s.t, criterion: BreakdownCriterion::GradientGrowth });
        }
        if s.breakdown {
            let criterion = series.breakdown.map_or(BreakdownCriterion::LimiterSaturation, |b| b.criterion);
            return Some(BreakdownEvent { time: s.t, criterion });
        }
    }
    None
}

fn quiet_start(grid: &RadialGrid, radius: f64) -> usize {
    let dr = grid.spacing();
    let r = radius + 3.0 * dr;
    let k = libm::ceil(r / dr);
    if k >= grid.cells() as f64 {
        grid.cells()
    } else {
        k as usize
    }
}

impl RadialSystem for FluidSolver {
    fn time(&self) -> f64 {
        self.t
    }

    fn grid(&self) -> RadialGrid {
        self.grid
    }

    fn max_speed(&self) -> f64 {
        FluidSolver::max_speed(self)
    }

    fn advance(&mut self, dt: f64) -> Result<()> {
        self.step(dt)
    }

    fn velocity(&self) -> &[f64] {
        &self.u
    }

    fn acoustic_gradient(&self) -> f64 {
        let bg = &self.bg;
        max_gradient(&self.p, self.grid.spacing()) / ((bg.rhobar + bg.pbar) * bg.etabar)
    }

    fn measure(&self) -> Result<Sample> {
        let quad = self.grid.quadrature();
        let snap = FluidSnapshot { quad: &quad, n: &self.n, u: &self.u, p: &self.p };
        let dr = self.grid.spacing();
        let mass = 4.0 * PI * quad.integrate_with(|j, _| self.d[j] - self.bg.nbar);
        // Energy straight from the conserved variables: the primitives carry
        // the entropy pressure where the internal energy is under-resolved.
        let rhobar = self.bg.rhobar;
        let energy = 4.0 * PI * quad.integrate_with(|j, _| self.tau[j] + self.d[j] - rhobar);
        Ok(Sample {
            t: self.t,
            q: radial_momentum(&snap, &self.bg)?,
            energy,
            mass,
            poisson_res: 0.0,
            max_grad_u: max_gradient(&self.u, dr),
            max_grad_p: max_gradient(&self.p, dr),
            dod_dev: self.dod_deviation(),
            breakdown: false,
            q_prime: q_prime_integrand(&snap, &self.bg)?,
            kinetic: kinetic_integral(&snap, &self.bg)?,
            g: 0.0,
            field_moment: 0.0,
            min_entropy: self.ent.iter().copied().fold(f64::INFINITY, f64::min),
            max_flow_speed: self.u.iter().map(|u| u.abs() / sqrt(1.0 + u * u)).fold(0.0, f64::max),
            floor_cells: self.floor_cells,
        })
    }

    fn dod_deviation(&self) -> f64 {
        let bg = &self.bg;
        let start = quiet_start(&self.grid, bg.influence_radius(self.support, self.t));
        (start..self.n.len())
            .map(|j| {
                let dn = (self.n[j] - bg.nbar).abs() / bg.nbar;
                let dp = (self.p[j] - bg.pbar).abs() / bg.pbar;
                let ds = (self.ent[j] - bg.sbar).abs();
                dn.max(dp).max(ds).max(self.u[j].abs())
            })
            .fold(0.0, f64::max)
    }
}

impl RadialSystem for PlasmaSolver {
    fn time(&self) -> f64 {
        self.t
    }

    fn grid(&self) -> RadialGrid {
        self.grid
    }

    fn max_speed(&self) -> f64 {
        PlasmaSolver::max_speed(self)
    }

    fn advance(&mut self, dt: f64) -> Result<()> {
        self.step(dt)
    }

    fn velocity(&self) -> &[f64] {
        &self.u
    }

    fn acoustic_gradient(&self) -> f64 {
        let bg = &self.bg;
        max_gradient(&self.p, self.grid.spacing()) / (bg.m * bg.nbar * bg.etabar)
    }

    fn measure(&self) -> Result<Sample> {
        let quad = self.grid.quadrature();
        let field = self.cell_field();
        let snap = PlasmaSnapshot { quad: &quad, n: &self.n, u: &self.u, p: &self.p, e_field: &field };
        let bg = &self.bg;
        let dr = self.grid.spacing();
        let g = g_function(&snap, self.moment4, bg)?;
        let fm = field_moment(&snap)?;
        Ok(Sample {
            t: self.t,
            q: momentum_q(&snap)?,
            energy: energy_script(&snap, bg)?,
            mass: mass_m(&snap, bg)?,
            poisson_res: self.poisson_residual(),
            max_grad_u: max_gradient(&self.u, dr),
            max_grad_p: max_gradient(&self.p, dr),
            dod_dev: self.dod_deviation(),
            breakdown: false,
            q_prime: g + 0.5 * bg.omega * bg.omega * self.moment4 + bg.e * bg.nbar / bg.m * fm,
            kinetic: kinetic_moment(&snap)?,
            g,
            field_moment: fm,
            min_entropy: self.ent.iter().copied().fold(f64::INFINITY, f64::min),
            max_flow_speed: self.u.iter().map(|u| u.abs()).fold(0.0, f64::max),
            floor_cells: 0,
        })
    }

    fn dod_deviation(&self) -> f64 {
        let bg = &self.bg;
        let start = quiet_start(&self.grid, bg.influence_radius(self.t));
        let e_scale = 4.0 * PI * bg.e * bg.nbar;
        (start..self.n.len())
            .map(|j| {
                let dn = (self.n[j] - bg.nbar).abs() / bg.nbar;
                let dp = (self.p[j] - bg.pbar).abs() / bg.pbar;
                let ds = (self.ent[j] - bg.sbar).abs();
                let du = self.u[j].abs() / bg.etabar;
                let de = self.ef[j].abs().max(self.ef[j + 1].abs()) / e_scale;
                dn.max(dp).max(ds).max(du).max(de)
            })
            .fold(0.0, f64::max)
    }
}
