use core::f64::consts::PI;

use super::QuietBackground;
use crate::error::{Error, Result};
use crate::grid::Quadrature;
use crate::math::sqrt;

/// Radial profiles of a fluid state, sampled at `quad.radii`.
///
/// `u` is the radial component of the spatial four-velocity; `ρ` follows
/// from `(n, p)` through the equation of state.
#[derive(Debug, Clone, Copy)]
pub struct FluidSnapshot<'a> {
    pub quad: &'a Quadrature,
    pub n: &'a [f64],
    pub u: &'a [f64],
    pub p: &'a [f64],
}

fn finite(v: f64, what: &'static str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Perturbation energy `E = ∫ (T⁰⁰ − T̄⁰⁰) = 4π ∫ [(ρ+p)u² + ρ − ρ̄] r² dr`.
pub fn total_energy(snap: &FluidSnapshot<'_>, bg: &QuietBackground) -> Result<f64> {
    let eos = bg.eos;
    let v = snap.quad.integrate_with(|i, _| {
        let rho = eos.energy_density_np(snap.n[i], snap.p[i]);
        (rho + snap.p[i]) * snap.u[i] * snap.u[i] + rho - bg.rhobar
    });
    finite(4.0 * PI * v, "total_energy")
}

/// Radial momentum `Q = ∫ x·T⁰ʲ = 4π ∫ r u u⁰ (ρ+p) r² dr`.
pub fn radial_momentum(snap: &FluidSnapshot<'_>, bg: &QuietBackground) -> Result<f64> {
    let eos = bg.eos;
    let v = snap.quad.integrate_with(|i, r| {
        let u = snap.u[i];
        let rho = eos.energy_density_np(snap.n[i], snap.p[i]);
        r * u * sqrt(1.0 + u * u) * (rho + snap.p[i])
    });
    finite(4.0 * PI * v, "radial_momentum")
}

/// `dQ/dt = 4π ∫ [(ρ+p)u² + 3(p − p̄)] r² dr`.
pub fn q_prime_integrand(snap: &FluidSnapshot<'_>, bg: &QuietBackground) -> Result<f64> {
    let eos = bg.eos;
    let v = snap.quad.integrate_with(|i, _| {
        let rho = eos.energy_density_np(snap.n[i], snap.p[i]);
        (rho + snap.p[i]) * snap.u[i] * snap.u[i] + 3.0 * (snap.p[i] - bg.pbar)
    });
    finite(4.0 * PI * v, "q_prime_integrand")
}

/// `4π ∫ (ρ+p) u² r² dr`.
pub fn kinetic_integral(snap: &FluidSnapshot<'_>, bg: &QuietBackground) -> Result<f64> {
    let eos = bg.eos;
    let v = snap.quad.integrate_with(|i, _| {
        let rho = eos.energy_density_np(snap.n[i], snap.p[i]);
        (rho + snap.p[i]) * snap.u[i] * snap.u[i]
    });
    finite(4.0 * PI * v, "kinetic_integral")
}
