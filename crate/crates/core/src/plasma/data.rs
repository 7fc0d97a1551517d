use alloc::vec::Vec;
use core::f64::consts::PI;

use super::PlasmaBackground;
use crate::error::{Error, Result};
use crate::grid::{NodeGrid, Quadrature};
use crate::numerics::quad_profile;
use crate::relfluid::RadialShape;

/// Tolerance on `|∫₀¹ ν₀ r² dr|`.
pub const NEUTRALITY_TOL: f64 = 1e-10;

/// Default charge perturbation `ν₀(r) = δ (3/8 − r)(1 − r)⁴` on `[0, 1)`.
///
/// `∫₀¹ (a − r)(1 − r)⁴ r² dr = a/105 − 1/280`, which vanishes at `a = 3/8`.
/// The profile dips to `−δ/128` at `r = 1/2`, so `n̄ + ν₀ > 0` needs
/// `δ < 128 n̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutralDensity {
    pub amplitude: f64,
}

impl NeutralDensity {
    pub const ROOT: f64 = 0.375;
}

impl RadialShape for NeutralDensity {
    fn eval(&self, r: f64) -> f64 {
        if r < 1.0 {
            let w = (1.0 - r) * (1.0 - r);
            self.amplitude * (Self::ROOT - r) * w * w
        } else {
            0.0
        }
    }
}

/// Default entropy perturbation `σ₀(r) = σ r²(1 − r)⁴` on `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBump {
    pub amplitude: f64,
}

impl RadialShape for EntropyBump {
    fn eval(&self, r: f64) -> f64 {
        if r < 1.0 {
            let w = (1.0 - r) * (1.0 - r);
            self.amplitude * r * r * w * w
        } else {
            0.0
        }
    }
}

/// Shapes of `(ν₀, σ₀, u₀)`; the velocity is scaled by an amplitude `λ`
/// when data are made.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaFamily<N, S, U> {
    pub nu0: N,
    pub sigma0: S,
    pub u0: U,
}

/// Tabulated radial plasma data on a node grid with support radius 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPlasmaData {
    grid: NodeGrid,
    quad: Quadrature,
    pub nu0: Vec<f64>,
    pub sigma0: Vec<f64>,
    pub u0: Vec<f64>,
    /// `E(0, r)` from the Poisson constraint.
    pub e0: Vec<f64>,
}

impl RadialPlasmaData {
    pub fn new(grid: NodeGrid, nu0: Vec<f64>, sigma0: Vec<f64>, u0: Vec<f64>, bg: &PlasmaBackground) -> Result<Self> {
        let len = grid.len();
        if grid.support() != 1.0 {
            return Err(Error::InvalidData("plasma data are normalized to support radius 1"));
        }
        if nu0.len() != len || sigma0.len() != len || u0.len() != len {
            return Err(Error::InvalidData("profile length does not match the grid"));
        }
        if u0[0] != 0.0 {
            return Err(Error::InvalidData("u0 must vanish at the origin"));
        }
        for j in 0..len {
            if !nu0[j].is_finite() || !u0[j].is_finite() || !(sigma0[j] >= 0.0) || !sigma0[j].is_finite() {
                return Err(Error::InvalidData("profiles must be finite with sigma0 >= 0"));
            }
            if !(bg.nbar + nu0[j] > 0.0) {
                return Err(Error::InvalidData("electron density nbar + nu0 must stay positive"));
            }
        }
        for j in grid.support_index()..len {
            if nu0[j] != 0.0 || sigma0[j] != 0.0 || u0[j] != 0.0 {
                return Err(Error::InvalidData("nu0, sigma0 and u0 must vanish for r >= 1"));
            }
        }
        let (neutral, _) = check_neutrality(&nu0, &grid)?;
        if !neutral {
            return Err(Error::InvalidData("nu0 violates the neutrality condition"));
        }
        let e0 = initial_field(&nu0, &grid, bg.e)?;
        let quad = grid.quadrature();
        Ok(RadialPlasmaData { grid, quad, nu0, sigma0, u0, e0 })
    }

    pub fn grid(&self) -> &NodeGrid {
        &self.grid
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    /// `∫₀¹ ν₀ r⁴ dr`.
    pub fn moment4(&self) -> f64 {
        let r = self.grid.radii();
        let vals: Vec<f64> = (0..=self.grid.support_index()).map(|j| self.nu0[j] * r[j] * r[j] * r[j] * r[j]).collect();
        quad_profile(&vals, self.grid.spacing()).unwrap_or(f64::NAN)
    }

    /// Copy with the velocity multiplied by `lambda`.
    pub fn with_velocity_scale(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.u0 {
            *v *= lambda;
        }
        out
    }
}

/// Tabulate the family on `grid` with velocity amplitude `lambda`.
pub fn make_plasma_data<N: RadialShape, S: RadialShape, U: RadialShape>(
    family: &PlasmaFamily<N, S, U>,
    lambda: f64,
    grid: &NodeGrid,
    bg: &PlasmaBackground,
) -> Result<RadialPlasmaData> {
    if !lambda.is_finite() {
        return Err(Error::Domain { what: "lambda", value: lambda });
    }
    let r = grid.radii();
    let nu0 = r.iter().map(|x| family.nu0.eval(*x)).collect();
    let sigma0 = r.iter().map(|x| family.sigma0.eval(*x)).collect();
    let u0 = r.iter().map(|x| lambda * family.u0.eval(*x)).collect();
    RadialPlasmaData::new(grid.clone(), nu0, sigma0, u0, bg)
}

/// Whether `|∫₀¹ ν₀ r² dr| < 1e−10`, and the integral itself.
pub fn check_neutrality(nu0: &[f64], grid: &NodeGrid) -> Result<(bool, f64)> {
    if nu0.len() != grid.len() {
        return Err(Error::InvalidData("profile length does not match the grid"));
    }
    let r = grid.radii();
    let vals: Vec<f64> = (0..=grid.support_index()).map(|j| nu0[j] * r[j] * r[j]).collect();
    let m = quad_profile(&vals, grid.spacing())?;
    Ok((m.abs() < NEUTRALITY_TOL, m))
}

/// `E(0, r) = (4π e / r²) ∫₀^r ν₀ r'² dr'` at the grid nodes.
///
/// The running integral uses the four-point interval rule (exact for
/// cubics). Stencils do not reach across `r = 1`, where the profile is
/// only continuous, and turn one-sided at the ends of each side.
pub fn initial_field(nu0: &[f64], grid: &NodeGrid, e: f64) -> Result<Vec<f64>> {
    let n = nu0.len();
    if n != grid.len() {
        return Err(Error::InvalidData("profile length does not match the grid"));
    }
    let h = grid.spacing();
    let f: Vec<f64> = (0..n).map(|j| nu0[j] * grid.radius(j) * grid.radius(j)).collect();
    let split = grid.support_index();
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    for j in 0..n - 1 {
        let (lo, hi) = if j < split { (0, split) } else { (split, n - 1) };
        let piece = if hi - lo < 3 {
            12.0 * (f[j] + f[j + 1])
        } else if j == lo {
            9.0 * f[j] + 19.0 * f[j + 1] - 5.0 * f[j + 2] + f[j + 3]
        } else if j + 1 == hi {
            f[j - 2] - 5.0 * f[j - 1] + 19.0 * f[j] + 9.0 * f[j + 1]
        } else {
            -f[j - 1] + 13.0 * f[j] + 13.0 * f[j + 1] - f[j + 2]
        };
        acc += h / 24.0 * piece;
        let r = grid.radius(j + 1);
        out.push(4.0 * PI * e * acc / (r * r));
    }
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(Error::NonFinite("initial_field"))
    }
}
