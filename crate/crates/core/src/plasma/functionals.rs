use alloc::vec::Vec;
use core::f64::consts::PI;

use super::PlasmaBackground;
use crate::error::{Error, Result};
use crate::grid::Quadrature;
use crate::math::sin;
use crate::numerics::convolve_sin;

/// Radial plasma profiles sampled at `quad.radii`: density, radial
/// velocity, pressure and radial electric field.
#[derive(Debug, Clone, Copy)]
pub struct PlasmaSnapshot<'a> {
    pub quad: &'a Quadrature,
    pub n: &'a [f64],
    pub u: &'a [f64],
    pub p: &'a [f64],
    pub e_field: &'a [f64],
}

fn finite(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// `Q = ∫ r n u r² dr`.
pub fn momentum_q(s: &PlasmaSnapshot<'_>) -> Result<f64> {
    finite(s.quad.integrate_with(|i, r| r * s.n[i] * s.u[i]), "momentum_q")
}

/// `𝓔 = ∫ {½ n u² + (p − p̄)/(m(γ−1)) + E²/(8πm)} r² dr`.
pub fn energy_script(s: &PlasmaSnapshot<'_>, bg: &PlasmaBackground) -> Result<f64> {
    let g = bg.eos.gamma();
    let v = s.quad.integrate_with(|i, _| {
        let e = s.e_field[i];
        0.5 * s.n[i] * s.u[i] * s.u[i] + (s.p[i] - bg.pbar) / (bg.m * (g - 1.0)) + e * e / (8.0 * PI * bg.m)
    });
    finite(v, "energy_script")
}

/// `M = ∫ (n − n̄) r² dr`.
pub fn mass_m(s: &PlasmaSnapshot<'_>, bg: &PlasmaBackground) -> Result<f64> {
    finite(s.quad.integrate_with(|i, _| s.n[i] - bg.nbar), "mass_m")
}

/// `∫ n u² r² dr`.
pub fn kinetic_moment(s: &PlasmaSnapshot<'_>) -> Result<f64> {
    finite(s.quad.integrate_with(|i, _| s.n[i] * s.u[i] * s.u[i]), "kinetic_moment")
}

/// `∫ r E r² dr`.
pub fn field_moment(s: &PlasmaSnapshot<'_>) -> Result<f64> {
    finite(s.quad.integrate_with(|i, r| r * s.e_field[i]), "field_moment")
}

/// `G = −(ω²/2) ∫ν₀ r⁴ dr + ∫ {n u² + 3(p − p̄)/m + E²/(8πm)} r² dr`, the
/// forcing in `y″ + ω² y = G` for `y = ∫₀ᵗ Q`.
///
/// The constant term comes from `∫ r E(0) r² dr = −2πe ∫ν₀ r⁴ dr`
/// (integrate `r · 4πe∫₀ʳν₀ρ²dρ` by parts; the boundary term vanishes by
/// neutrality).
pub fn g_function(s: &PlasmaSnapshot<'_>, moment4: f64, bg: &PlasmaBackground) -> Result<f64> {
    let v = s.quad.integrate_with(|i, _| {
        let e = s.e_field[i];
        s.n[i] * s.u[i] * s.u[i] + 3.0 * (s.p[i] - bg.pbar) / bg.m + e * e / (8.0 * PI * bg.m)
    });
    finite(v - 0.5 * bg.omega * bg.omega * moment4, "g_function")
}

/// `y″(t) = −ω y′(0) sin ωt + G(t) − ω ∫₀^t sin ω(t−τ) G(τ) dτ` on the
/// uniform sample times `t_k = k Δt` of `g`.
pub fn ode_response(q0: f64, g: &[f64], omega: f64, dt: f64) -> Result<Vec<f64>> {
    let conv = convolve_sin(g, omega, dt)?;
    Ok((0..g.len())
        .map(|k| {
            let t = k as f64 * dt;
            -omega * q0 * sin(omega * t) + g[k] - omega * conv[k]
        })
        .collect())
}
