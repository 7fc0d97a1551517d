use alloc::vec::Vec;

use super::{FluidSnapshot, QuietBackground};
use crate::eos::PolytropicEos;
use crate::error::{Error, Result};
use crate::grid::{NodeGrid, Quadrature};
use crate::numerics::quad_profile;

/// A radial shape function on `[0, ∞)`.
pub trait RadialShape {
    fn eval(&self, r: f64) -> f64;
}

impl<F: Fn(f64) -> f64> RadialShape for F {
    fn eval(&self, r: f64) -> f64 {
        self(r)
    }
}

/// Default velocity/entropy shape `φ(r) = κ r (1−r)⁴` on `[0, 1)`, zero
/// beyond. The quartic contact at `r = 1` keeps the numerical front below
/// round-off outside the range of influence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumBump {
    pub amplitude: f64,
}

impl RadialShape for MomentumBump {
    fn eval(&self, r: f64) -> f64 {
        if r < 1.0 {
            let w = 1.0 - r;
            let w2 = w * w;
            self.amplitude * r * w2 * w2
        } else {
            0.0
        }
    }
}

/// Default density shape `ψ(r) = 1 + μ (1 − 6r²)(1−r)⁴` on `[0, 1)`,
/// one beyond.
///
/// `∫₀¹ r²(1−r)⁴ dr = 1/105` and `∫₀¹ r⁴(1−r)⁴ dr = 1/630`, so the `6`
/// makes `∫₀¹ (ψ−1) r² dr` vanish identically. The bracket bottoms out at
/// about `−0.03356`, hence `ψ > 0` for `μ < 29.79`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalancedDensity {
    pub amplitude: f64,
}

impl BalancedDensity {
    pub const MOMENT_COEFFICIENT: f64 = 6.0;
}

impl RadialShape for BalancedDensity {
    fn eval(&self, r: f64) -> f64 {
        if r < 1.0 {
            let w = 1.0 - r;
            let w2 = w * w;
            1.0 + self.amplitude * (1.0 - Self::MOMENT_COEFFICIENT * r * r) * w2 * w2
        } else {
            1.0
        }
    }
}

/// The family `n₀ = n̄ψ(r)`, `u₀ = φ(r) x/r`, `s₀ = s̄ + φ(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataFamily<P, S> {
    pub phi: P,
    pub psi: S,
    pub nbar: f64,
    pub sbar: f64,
}

/// Tabulated radial initial data on a node grid, background-valued from
/// the support radius outward.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFluidData {
    grid: NodeGrid,
    quad: Quadrature,
    pub n0: Vec<f64>,
    pub s0: Vec<f64>,
    /// Radial component of the spatial four-velocity.
    pub u0: Vec<f64>,
    pub p0: Vec<f64>,
}

impl RadialFluidData {
    pub fn new(grid: NodeGrid, n0: Vec<f64>, s0: Vec<f64>, u0: Vec<f64>, bg: &QuietBackground) -> Result<Self> {
        let len = grid.len();
        if n0.len() != len || s0.len() != len || u0.len() != len {
            return Err(Error::InvalidData("profile length does not match the grid"));
        }
        if u0[0] != 0.0 {
            return Err(Error::InvalidData("u0 must vanish at the origin"));
        }
        for j in 0..len {
            if !(n0[j] > 0.0) || !n0[j].is_finite() {
                return Err(Error::InvalidData("n0 must be finite and positive"));
            }
            if !(s0[j] >= 0.0) || !s0[j].is_finite() || !u0[j].is_finite() {
                return Err(Error::InvalidData("s0 must be non-negative and u0 finite"));
            }
        }
        for j in grid.support_index()..len {
            if n0[j] != bg.nbar || s0[j] != bg.sbar || u0[j] != 0.0 {
                return Err(Error::InvalidData("data must equal the background outside the support"));
            }
        }
        let eos = bg.eos;
        let p0 = n0.iter().zip(&s0).map(|(n, s)| eos.pressure_raw(*n, *s)).collect();
        let quad = grid.quadrature();
        Ok(RadialFluidData { grid, quad, n0, s0, u0, p0 })
    }

    pub fn grid(&self) -> &NodeGrid {
        &self.grid
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    pub fn support(&self) -> f64 {
        self.grid.support()
    }

    pub fn snapshot(&self) -> FluidSnapshot<'_> {
        FluidSnapshot { quad: &self.quad, n: &self.n0, u: &self.u0, p: &self.p0 }
    }

    /// The same profiles viewed on a grid rescaled by `1/support`, so the
    /// support radius becomes 1.
    pub fn normalized(&self, bg: &QuietBackground) -> Result<Self> {
        let r0 = self.support();
        let grid = NodeGrid::with_support(self.grid.intervals(), self.grid.r_max() / r0, 1.0)?;
        Self::new(grid, self.n0.clone(), self.s0.clone(), self.u0.clone(), bg)
    }
}

/// Tabulate a member of the family on `grid` (support radius 1).
pub fn make_initial_data<P: RadialShape, S: RadialShape>(
    family: &DataFamily<P, S>,
    grid: &NodeGrid,
    eos: PolytropicEos,
) -> Result<RadialFluidData> {
    let bg = QuietBackground::new(eos, family.nbar, family.sbar)?;
    if grid.support() != 1.0 {
        return Err(Error::InvalidData("the data family is normalized to support radius 1"));
    }
    let radii = grid.radii();
    let phi: Vec<f64> = radii.iter().map(|r| family.phi.eval(*r)).collect();
    let psi: Vec<f64> = radii.iter().map(|r| family.psi.eval(*r)).collect();
    if phi[0] != 0.0 {
        return Err(Error::InvalidData("phi(0) must vanish"));
    }
    let unit = grid.support_index();
    for j in 0..radii.len() {
        if !(phi[j] >= 0.0) || !phi[j].is_finite() {
            return Err(Error::InvalidData("phi must be finite and non-negative"));
        }
        if !(psi[j] > 0.0) || !psi[j].is_finite() {
            return Err(Error::InvalidData("psi must be finite and positive"));
        }
        if j >= unit && (phi[j] != 0.0 || psi[j] != 1.0) {
            return Err(Error::InvalidData("phi = 0 and psi = 1 are required for r >= 1"));
        }
    }
    let moment_samples: Vec<f64> = (0..=unit).map(|j| (psi[j] - 1.0) * radii[j] * radii[j]).collect();
    let moment = quad_profile(&moment_samples, grid.spacing())?;
    if moment.abs() > 1e-8 {
        return Err(Error::InvalidData("density shape violates the zero-moment condition"));
    }
    let n0 = psi.iter().map(|v| family.nbar * v).collect();
    let s0 = phi.iter().map(|v| family.sbar + v).collect();
    RadialFluidData::new(grid.clone(), n0, s0, phi, &bg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (DataFamily<MomentumBump, BalancedDensity>, NodeGrid, PolytropicEos) {
        let fam = DataFamily {
            phi: MomentumBump { amplitude: 2.0 },
            psi: BalancedDensity { amplitude: 0.5 },
            nbar: 0.1,
            sbar: 0.2,
        };
        (fam, NodeGrid::new(512, 2.0).unwrap(), PolytropicEos::new(5.0 / 3.0, 1.0).unwrap())
    }

    #[test]
    fn background_outside_support() {
        let (fam, grid, eos) = setup();
        let d = make_initial_data(&fam, &grid, eos).unwrap();
        for j in grid.support_index()..grid.len() {
            assert_eq!((d.n0[j], d.s0[j], d.u0[j]), (0.1, 0.2, 0.0));
        }
        for j in 0..grid.len() {
            assert_eq!(d.s0[j] - 0.2, d.u0[j]);
        }
    }

    #[test]
    fn default_density_moment_vanishes() {
        // Brute-force midpoint sum, independent of the Simpson weights.
        let psi = BalancedDensity { amplitude: 0.9 };
        let n = 2_000_000;
        let h = 1.0 / n as f64;
        let m: f64 = (0..n)
            .map(|i| {
                let r = (i as f64 + 0.5) * h;
                (psi.eval(r) - 1.0) * r * r
            })
            .sum::<f64>()
            * h;
        assert!(m.abs() < 1e-12, "{m}");
    }

    #[test]
    fn unbalanced_density_rejected() {
        let (_, grid, eos) = setup();
        let fam = DataFamily {
            phi: MomentumBump { amplitude: 1.0 },
            psi: |r: f64| if r < 1.0 { 1.0 + 0.1 * (1.0 - r) } else { 1.0 },
            nbar: 0.1,
            sbar: 0.0,
        };
        assert!(matches!(make_initial_data(&fam, &grid, eos), Err(Error::InvalidData(_))));
    }

    #[test]
    fn nonvanishing_phi_at_origin_rejected() {
        let (_, grid, eos) = setup();
        let fam = DataFamily {
            phi: |r: f64| if r < 1.0 { 1.0 - r } else { 0.0 },
            psi: BalancedDensity { amplitude: 0.1 },
            nbar: 0.1,
            sbar: 0.0,
        };
        assert!(make_initial_data(&fam, &grid, eos).is_err());
    }

    #[test]
    fn normalization_rescales_support() {
        let eos = PolytropicEos::new(1.4, 1.0).unwrap();
        let bg = QuietBackground::new(eos, 0.3, 0.0).unwrap();
        let grid = NodeGrid::with_support(400, 4.0, 2.0).unwrap();
        let r = grid.radii();
        let u0: Vec<f64> = r.iter().map(|&x| if x < 2.0 { x * (2.0 - x) * (2.0 - x) } else { 0.0 }).collect();
        let d = RadialFluidData::new(grid, alloc::vec![0.3; r.len()], alloc::vec![0.0; r.len()], u0, &bg).unwrap();
        let n = d.normalized(&bg).unwrap();
        assert_eq!(n.support(), 1.0);
        assert_eq!(n.grid().r_max(), 2.0);
    }
}
