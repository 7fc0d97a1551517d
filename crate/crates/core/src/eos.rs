//! Polytropic equation of state `ρ = n + A(s) n^γ/(γ−1)`, `p = A(s) n^γ`,
//! with entropy coefficient `A(s) = a0·(1 + s²)`, and a finite-difference
//! audit of the structural assumptions the blowup arguments rely on.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::math::{powf, sqrt};
use crate::numerics::central_diff4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolytropicEos {
    gamma: f64,
    a0: f64,
}

impl PolytropicEos {
    /// Any `γ > 1` is accepted; see [`PolytropicEos::relativistic`].
    pub fn new(gamma: f64, a0: f64) -> Result<Self> {
        ensure(gamma > 1.0 && gamma.is_finite(), "gamma (must exceed 1)", gamma)?;
        ensure(a0 > 0.0 && a0.is_finite(), "a0 (must be positive)", a0)?;
        Ok(PolytropicEos { gamma, a0 })
    }

    /// Relativistic fluids additionally need `γ < 2` so that the sound
    /// speed stays below `√(γ−1) < 1`.
    pub fn relativistic(gamma: f64, a0: f64) -> Result<Self> {
        ensure(gamma < 2.0, "gamma (relativistic fluid needs gamma < 2)", gamma)?;
        Self::new(gamma, a0)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// `A(s)`; positive, even in `s`, strictly increasing on `s ≥ 0` with
    /// `A'(0) = 0`.
    #[inline]
    pub fn entropy_coefficient(&self, s: f64) -> f64 {
        self.a0 * (1.0 + s * s)
    }

    /// Inverse of `A` on `s ≥ 0`; coefficients below `a0` map to `s = 0`.
    pub fn entropy_from_coefficient(&self, a: f64) -> f64 {
        let x = a / self.a0 - 1.0;
        if x > 0.0 {
            sqrt(x)
        } else {
            0.0
        }
    }

    /// Upper bound `√(γ−1)` of the sound speed.
    pub fn sound_speed_limit(&self) -> f64 {
        sqrt(self.gamma - 1.0)
    }

    pub fn pressure(&self, n: f64, s: f64) -> Result<f64> {
        check_ns(n, s)?;
        Ok(self.pressure_raw(n, s))
    }

    pub fn energy_density(&self, n: f64, s: f64) -> Result<f64> {
        check_ns(n, s)?;
        Ok(self.energy_density_raw(n, s))
    }

    pub fn sound_speed(&self, n: f64, s: f64) -> Result<f64> {
        check_ns(n, s)?;
        Ok(self.sound_speed_raw(n, s))
    }

    /// `n = (p/A(s))^{1/γ}`.
    pub fn density_from_pressure(&self, p: f64, s: f64) -> Result<f64> {
        check_ps(p, s)?;
        Ok(powf(p / self.entropy_coefficient(s), 1.0 / self.gamma))
    }

    /// `ρ(p,s) = p/(γ−1) + A^{−1/γ}(s) p^{1/γ}`.
    pub fn energy_from_pressure(&self, p: f64, s: f64) -> Result<f64> {
        check_ps(p, s)?;
        let g = self.gamma;
        Ok(p / (g - 1.0) + powf(self.entropy_coefficient(s), -1.0 / g) * powf(p, 1.0 / g))
    }

    /// `η²(p,s) = γ(γ−1)A^{1/γ}p^{(γ−1)/γ} / (γ−1 + γA^{1/γ}p^{(γ−1)/γ})`.
    pub fn sound_speed_from_pressure(&self, p: f64, s: f64) -> Result<f64> {
        check_ps(p, s)?;
        let g = self.gamma;
        let x = powf(self.entropy_coefficient(s), 1.0 / g) * powf(p, (g - 1.0) / g);
        Ok(sqrt(g * (g - 1.0) * x / (g - 1.0 + g * x)))
    }

    #[inline]
    pub(crate) fn pressure_raw(&self, n: f64, s: f64) -> f64 {
        self.entropy_coefficient(s) * powf(n, self.gamma)
    }

    #[inline]
    pub(crate) fn energy_density_raw(&self, n: f64, s: f64) -> f64 {
        n + self.pressure_raw(n, s) / (self.gamma - 1.0)
    }

    #[inline]
    pub(crate) fn sound_speed_raw(&self, n: f64, s: f64) -> f64 {
        if n <= 0.0 {
            return 0.0;
        }
        let g = self.gamma;
        let x = self.entropy_coefficient(s) * powf(n, g - 1.0);
        sqrt(g * (g - 1.0) * x / (g - 1.0 + g * x))
    }

    /// `ρ` in terms of `(n, p)`: for this family `ρ = n + p/(γ−1)`
    /// independently of `s`.
    #[inline]
    pub fn energy_density_np(&self, n: f64, p: f64) -> f64 {
        n + p / (self.gamma - 1.0)
    }

    /// `η² = γp/(ρ+p)` in terms of `(n, p)`.
    #[inline]
    pub fn sound_speed_np(&self, n: f64, p: f64) -> f64 {
        let g = self.gamma;
        let h = n + g * p / (g - 1.0);
        if h > 0.0 && p > 0.0 {
            sqrt(g * p / h)
        } else {
            0.0
        }
    }

    /// Entropy implied by `(n, p)` through `A(s) = p/n^γ`.
    pub fn entropy_np(&self, n: f64, p: f64) -> f64 {
        self.entropy_from_coefficient(p / powf(n, self.gamma))
    }
}

fn check_ns(n: f64, s: f64) -> Result<()> {
    ensure(n >= 0.0 && n.is_finite(), "number density", n)?;
    ensure(s >= 0.0 && s.is_finite(), "entropy", s)
}

fn check_ps(p: f64, s: f64) -> Result<()> {
    ensure(p >= 0.0 && p.is_finite(), "pressure", p)?;
    ensure(s >= 0.0 && s.is_finite(), "entropy", s)
}

/// A validated `(n, s)` pair with its derived thermodynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThermoState {
    pub n: f64,
    pub s: f64,
    pub p: f64,
    pub rho: f64,
    pub eta: f64,
}

impl ThermoState {
    pub fn new(eos: &PolytropicEos, n: f64, s: f64) -> Result<Self> {
        check_ns(n, s)?;
        Ok(ThermoState {
            n,
            s,
            p: eos.pressure_raw(n, s),
            rho: eos.energy_density_raw(n, s),
            eta: eos.sound_speed_raw(n, s),
        })
    }
}

/// An energy-density law `ρ(n, s)`; everything else the audit needs is
/// derived from it by finite differences. Evaluation may be asked for
/// slightly negative `s` by the central stencils.
pub trait EnergyLaw {
    fn energy_density_at(&self, n: f64, s: f64) -> f64;

    /// `p = n ∂ρ/∂n − ρ` unless the law knows better.
    fn pressure_at(&self, n: f64, s: f64) -> f64 {
        n * central_diff4(|x| self.energy_density_at(x, s), n, fd_step(n)) - self.energy_density_at(n, s)
    }

    /// Optional a priori bound on the sound speed.
    fn sound_speed_bound(&self) -> Option<f64> {
        None
    }
}

impl EnergyLaw for PolytropicEos {
    fn energy_density_at(&self, n: f64, s: f64) -> f64 {
        self.energy_density_raw(n, s)
    }

    fn pressure_at(&self, n: f64, s: f64) -> f64 {
        self.pressure_raw(n, s)
    }

    fn sound_speed_bound(&self) -> Option<f64> {
        Some(self.sound_speed_limit())
    }
}

#[inline]
fn fd_step(x: f64) -> f64 {
    (1e-5 * x.abs()).max(1e-5)
}

/// Outcome of [`verify_assumptions`]; one flag per structural property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    /// `∂ρ/∂n > 0` everywhere.
    pub drho_dn_positive: bool,
    /// `∂p/∂n > 0` everywhere.
    pub dp_dn_positive: bool,
    /// `∂ρ/∂s ≥ 0`, vanishing exactly on `s = 0`.
    pub drho_ds_signature: bool,
    /// `ρ(p, s)` non-increasing in `s` at fixed `p`.
    pub a1_energy_nonincreasing_in_entropy: bool,
    /// `η(p, s)` non-decreasing in `p` at fixed `s`.
    pub a2_sound_speed_nondecreasing_in_pressure: bool,
    /// `p ≤ ρ`.
    pub positivity: bool,
    pub positivity_margin_min: f64,
    /// `0 < η` and, when the law supplies one, `η` below its bound.
    pub sound_speed_bounded: bool,
    /// `η` strictly increasing in `n` at fixed `s`.
    pub sound_speed_increasing: bool,
    /// `|p − (n ∂ρ/∂n − ρ)|` relative to `max(1, ρ)`, worst case.
    pub consistency_residual_max: f64,
    pub consistency: bool,
    pub pass: bool,
}

/// Audit an energy law on the tensor grid `n_grid × s_grid`.
pub fn verify_assumptions<L: EnergyLaw + ?Sized>(
    law: &L,
    n_grid: &[f64],
    s_grid: &[f64],
) -> Result<AssumptionReport> {
    if n_grid.len() < 3 || s_grid.len() < 3 {
        return Err(Error::InvalidData("assumption grids need at least 3 points per axis"));
    }
    if n_grid.iter().any(|&n| !(n > 0.0 && n.is_finite())) {
        return Err(Error::InvalidData("density grid must be finite and positive"));
    }
    if s_grid.iter().any(|&s| !(s >= 0.0 && s.is_finite())) {
        return Err(Error::InvalidData("entropy grid must be finite and non-negative"));
    }
    let mut ns: Vec<f64> = n_grid.to_vec();
    ns.sort_by(f64::total_cmp);

    let rho = |n: f64, s: f64| law.energy_density_at(n, s);
    let p = |n: f64, s: f64| law.pressure_at(n, s);

    let mut r = AssumptionReport {
        drho_dn_positive: true,
        dp_dn_positive: true,
        drho_ds_signature: true,
        a1_energy_nonincreasing_in_entropy: true,
        a2_sound_speed_nondecreasing_in_pressure: true,
        positivity: true,
        positivity_margin_min: f64::INFINITY,
        sound_speed_bounded: true,
        sound_speed_increasing: true,
        consistency_residual_max: 0.0,
        consistency: true,
        pass: false,
    };

    for &s in s_grid {
        let mut prev: Option<(f64, f64)> = None;
        for &n in &ns {
            let hn = fd_step(n);
            let hs = 1e-5;
            let rho_v = rho(n, s);
            let p_v = p(n, s);
            let rho_n = central_diff4(|x| rho(x, s), n, hn);
            let p_n = central_diff4(|x| p(x, s), n, hn);
            let rho_s = central_diff4(|y| rho(n, y), s, hs);
            let p_s = central_diff4(|y| p(n, y), s, hs);
            let scale = rho_v.abs().max(1.0);
            let zero_tol = 1e-9 * scale;

            r.drho_dn_positive &= rho_n > 0.0;
            r.dp_dn_positive &= p_n > 0.0;
            r.drho_ds_signature &= if s == 0.0 { rho_s.abs() <= zero_tol } else { rho_s > zero_tol };

            // (∂ρ/∂s)_p = ρ_s − ρ_n p_s / p_n
            let rho_s_at_p = rho_s - rho_n * p_s / p_n;
            r.a1_energy_nonincreasing_in_entropy &= rho_s_at_p <= zero_tol;

            let margin = rho_v - p_v;
            r.positivity &= margin >= 0.0;
            r.positivity_margin_min = r.positivity_margin_min.min(margin);

            let eta2 = p_n / rho_n;
            let eta = if eta2 >= 0.0 { sqrt(eta2) } else { f64::NAN };
            let bounded = eta > 0.0 && law.sound_speed_bound().map_or(true, |b| eta < b);
            r.sound_speed_bounded &= bounded;

            if let Some((p_prev, eta_prev)) = prev {
                // p increases along the n-grid when ∂p/∂n > 0, so the sampled
                // A2 test is monotonicity of η along the same sweep.
                r.a2_sound_speed_nondecreasing_in_pressure &= p_v > p_prev && eta >= eta_prev;
                r.sound_speed_increasing &= eta > eta_prev;
            }
            prev = Some((p_v, eta));

            let resid = (p_v - (n * rho_n - rho_v)).abs() / scale;
            r.consistency_residual_max = r.consistency_residual_max.max(resid);
        }
    }
    r.consistency = r.consistency_residual_max < 1e-6;
    r.pass = r.drho_dn_positive
        && r.dp_dn_positive
        && r.drho_ds_signature
        && r.a1_energy_nonincreasing_in_entropy
        && r.a2_sound_speed_nondecreasing_in_pressure
        && r.positivity
        && r.sound_speed_bounded
        && r.sound_speed_increasing
        && r.consistency;
    Ok(r)
}

/// Log-spaced `n ∈ [0.01, 10]` (41 points) and uniform `s ∈ [0, 2]`
/// (21 points).
pub fn default_assumption_grids() -> (Vec<f64>, Vec<f64>) {
    let n: Vec<f64> = (0..41).map(|i| 0.01 * powf(1000.0, i as f64 / 40.0)).collect();
    let s: Vec<f64> = (0..21).map(|i| 0.1 * i as f64).collect();
    (n, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eos(g: f64) -> PolytropicEos {
        PolytropicEos::new(g, 1.0).unwrap()
    }

    #[test]
    fn pressure_examples() {
        assert_eq!(eos(5.0 / 3.0).pressure(0.0, 0.0).unwrap(), 0.0);
        assert_eq!(eos(2.0).pressure(1.0, 0.0).unwrap(), 1.0);
        let p = eos(5.0 / 3.0).pressure(2.0, 0.0).unwrap();
        assert!((p - 2f64.powf(5.0 / 3.0)).abs() < 1e-14);
        assert!(eos(2.0).pressure(-1.0, 0.0).is_err());
        assert!(eos(2.0).pressure(1.0, -0.1).is_err());
    }

    #[test]
    fn energy_density_examples() {
        assert_eq!(eos(1.4).energy_density(0.0, 0.7).unwrap(), 0.0);
        assert_eq!(eos(2.0).energy_density(1.0, 0.0).unwrap(), 2.0);
    }

    #[test]
    fn pressure_is_thermodynamically_consistent() {
        let e = eos(5.0 / 3.0);
        let (n, s) = (0.7, 0.3);
        let h = 1e-4;
        // second-order centered difference, independent of central_diff4
        let drho = (e.energy_density(n + h, s).unwrap() - e.energy_density(n - h, s).unwrap()) / (2.0 * h);
        let p_fd = n * drho - e.energy_density(n, s).unwrap();
        assert!((e.pressure(n, s).unwrap() - p_fd).abs() < 1e-8);
    }

    #[test]
    fn sound_speed_examples() {
        assert_eq!(eos(5.0 / 3.0).sound_speed(0.0, 0.0).unwrap(), 0.0);
        let eta = eos(2.0).sound_speed(1.0, 0.0).unwrap();
        assert!((eta * eta - 2.0 / 3.0).abs() < 1e-15);
        let e = eos(5.0 / 3.0);
        let mut prev = 0.0;
        for i in 1..=100 {
            let n = 0.1 * i as f64;
            let eta = e.sound_speed(n, 0.0).unwrap();
            assert!(eta > prev && eta < (2.0f64 / 3.0).sqrt());
            prev = eta;
        }
    }

    #[test]
    fn pressure_inversions() {
        assert_eq!(eos(2.0).density_from_pressure(0.0, 0.0).unwrap(), 0.0);
        assert!((eos(2.0).density_from_pressure(4.0, 0.0).unwrap() - 2.0).abs() < 1e-15);
        let e = eos(1.4);
        let n = e.density_from_pressure(0.37, 0.5).unwrap();
        assert!((e.pressure(n, 0.5).unwrap() / 0.37 - 1.0).abs() < 1e-12);
        assert_eq!(eos(2.0).energy_from_pressure(0.0, 0.0).unwrap(), 0.0);
        assert!((eos(2.0).energy_from_pressure(1.0, 0.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(eos(1.5).sound_speed_from_pressure(0.0, 0.2).unwrap(), 0.0);
    }

    #[test]
    fn pressure_routes_match_density_routes() {
        // deterministic pseudo-random (p, s) pairs
        let e = eos(1.4);
        let mut x: u64 = 0x9e37_79b9_7f4a_7c15;
        for _ in 0..20 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let p = 1e-3 + 50.0 * ((x >> 11) as f64 / (1u64 << 53) as f64);
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let s = 2.0 * ((x >> 11) as f64 / (1u64 << 53) as f64);
            let n = e.density_from_pressure(p, s).unwrap();
            let rho = e.energy_density(n, s).unwrap();
            assert!((e.energy_from_pressure(p, s).unwrap() / rho - 1.0).abs() < 1e-12);
            let eta = e.sound_speed(n, s).unwrap();
            assert!((e.sound_speed_from_pressure(p, s).unwrap() / eta - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sound_speed_nondecreasing_in_pressure() {
        let e = eos(5.0 / 3.0);
        let mut prev = 0.0;
        for i in 0..60 {
            let p = 1e-6 * 10f64.powf(i as f64 / 6.0);
            let eta = e.sound_speed_from_pressure(p, 0.4).unwrap();
            assert!(eta >= prev);
            prev = eta;
        }
    }

    #[test]
    fn entropy_coefficient_inverse() {
        let e = eos(1.4);
        for &s in &[0.0, 0.1, 1.0, 3.0] {
            assert!((e.entropy_from_coefficient(e.entropy_coefficient(s)) - s).abs() < 1e-12);
        }
    }

    #[test]
    fn polytropic_passes_audit() {
        let (n, s) = default_assumption_grids();
        let r = verify_assumptions(&eos(5.0 / 3.0), &n, &s).unwrap();
        assert!(r.pass, "{r:?}");
    }

    struct Corrupted(f64);
    impl EnergyLaw for Corrupted {
        fn energy_density_at(&self, n: f64, _s: f64) -> f64 {
            n - n.powf(self.0)
        }
    }

    #[test]
    fn corrupted_law_fails_dp_dn() {
        let (n, s) = default_assumption_grids();
        let r = verify_assumptions(&Corrupted(5.0 / 3.0), &n, &s).unwrap();
        assert!(!r.dp_dn_positive);
        assert!(!r.pass);
    }

    #[test]
    fn positivity_margin_example() {
        let r = verify_assumptions(&eos(1.5), &[1.0, 1.1, 1.2], &[0.0, 0.1, 0.2]).unwrap();
        // p = 1, ρ = 1 + 1/0.5 = 3 at (n=1, s=0) gives the smallest margin
        assert!((r.positivity_margin_min - 2.0).abs() < 1e-12);
        assert!(r.positivity);
    }

    #[test]
    fn degenerate_grid_rejected() {
        assert!(verify_assumptions(&eos(1.5), &[1.0, 2.0], &[0.0, 1.0, 2.0]).is_err());
    }
}
