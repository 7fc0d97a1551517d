use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eos::PolytropicEos;
use crate::error::{ensure, Result};
use crate::math::sqrt;

/// Ion density `n̄`, background entropy and the physical constants.
///
/// Pressure enters the momentum balance as `p/m`, so the background sound
/// speed is `η̄ = √(γ A(s̄) n̄^{γ−1} / m)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlasmaBackground {
    pub nbar: f64,
    pub sbar: f64,
    pub e: f64,
    pub m: f64,
    /// Speed of light; only enters through the check `η̄ < c`.
    pub c: f64,
    pub eos: PolytropicEos,
    pub pbar: f64,
    pub etabar: f64,
    pub omega: f64,
}

impl PlasmaBackground {
    pub fn new(eos: PolytropicEos, nbar: f64, sbar: f64, e: f64, m: f64, c: f64) -> Result<Self> {
        ensure(nbar > 0.0 && nbar.is_finite(), "nbar (must be positive)", nbar)?;
        ensure(sbar >= 0.0 && sbar.is_finite(), "sbar (must be non-negative)", sbar)?;
        ensure(e > 0.0 && e.is_finite(), "e (must be positive)", e)?;
        ensure(m > 0.0 && m.is_finite(), "m (must be positive)", m)?;
        ensure(c > 0.0 && c.is_finite(), "c (must be positive)", c)?;
        let g = eos.gamma();
        let pbar = eos.pressure(nbar, sbar)?;
        let etabar = sqrt(g * pbar / (nbar * m));
        ensure(etabar < c, "sound speed (must stay below c)", etabar)?;
        let omega = sqrt(4.0 * PI * e * e * nbar / m);
        Ok(PlasmaBackground { nbar, sbar, e, m, c, eos, pbar, etabar, omega })
    }

    /// `R(t) = 1 + η̄ t`.
    pub fn influence_radius(&self, t: f64) -> f64 {
        1.0 + self.etabar * t
    }
}

/// `ω = √(4π e² n̄ / m)`.
pub fn plasma_frequency(bg: &PlasmaBackground) -> f64 {
    bg.omega
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eos() -> PolytropicEos {
        PolytropicEos::new(5.0 / 3.0, 1.0).unwrap()
    }

    #[test]
    fn unit_constants() {
        let bg = PlasmaBackground::new(eos(), 1.0, 0.0, 1.0, 1.0, 1e3).unwrap();
        assert!((plasma_frequency(&bg) - sqrt(4.0 * PI)).abs() < 1e-15);
        let bg4 = PlasmaBackground::new(eos(), 4.0, 0.0, 1.0, 1.0, 1e3).unwrap();
        assert!((bg4.omega - 2.0 * bg.omega).abs() < 1e-14);
    }

    #[test]
    fn cgs_electron_plasma() {
        // ω² = 4π (4.8e−10)² 1e10 / 9.1e−28 = 3.1811e19 s⁻².
        let bg = PlasmaBackground::new(eos(), 1e10, 0.0, 4.8e-10, 9.1e-28, 1e20).unwrap();
        let by_hand = sqrt(4.0 * 3.141592653589793 * 2.304e-19 * 1e10 / 9.1e-28);
        assert!((bg.omega / by_hand - 1.0).abs() < 1e-12);
        assert!((bg.omega / 5.64e9 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn sound_speed_with_unit_mass() {
        let bg = PlasmaBackground::new(eos(), 0.01, 0.5, 1.0, 1.0, 1.0).unwrap();
        let a = 1.25;
        let want = sqrt(5.0 / 3.0 * a * crate::math::powf(0.01, 2.0 / 3.0));
        assert!((bg.etabar - want).abs() < 1e-14);
    }
}
