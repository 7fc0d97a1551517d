use serde::{Deserialize, Serialize};

use crate::eos::PolytropicEos;
use crate::error::{ensure, Result};

/// Constant state `(n̄, s̄, u = 0)` filling space outside the perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuietBackground {
    pub nbar: f64,
    pub sbar: f64,
    pub pbar: f64,
    pub rhobar: f64,
    /// Background sound speed `η̄`.
    pub etabar: f64,
    /// `ζ̄ = (ρ̄ + p̄) η̄`.
    pub zetabar: f64,
    pub eos: PolytropicEos,
}

impl QuietBackground {
    pub fn new(eos: PolytropicEos, nbar: f64, sbar: f64) -> Result<Self> {
        ensure(eos.gamma() < 2.0, "gamma (relativistic fluid needs gamma < 2)", eos.gamma())?;
        ensure(nbar > 0.0 && nbar.is_finite(), "nbar (must be positive)", nbar)?;
        ensure(sbar >= 0.0 && sbar.is_finite(), "sbar (must be non-negative)", sbar)?;
        let pbar = eos.pressure(nbar, sbar)?;
        let rhobar = eos.energy_density(nbar, sbar)?;
        let etabar = eos.sound_speed(nbar, sbar)?;
        Ok(QuietBackground {
            nbar,
            sbar,
            pbar,
            rhobar,
            etabar,
            zetabar: (rhobar + pbar) * etabar,
            eos,
        })
    }

    /// Radius of the range of influence, `R(t) = R₀ + η̄ t`.
    pub fn influence_radius(&self, support: f64, t: f64) -> f64 {
        support + self.etabar * t
    }
}
