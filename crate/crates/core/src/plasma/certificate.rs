use serde::{Deserialize, Serialize};

use super::{energy_script, momentum_q, PlasmaBackground, PlasmaSnapshot, RadialPlasmaData};
use crate::error::{Error, Result};
use crate::math::{powf, sqrt};

/// `α = min{1, 3(γ−1)}`, `β = max{2, 3(γ−1)}`.
pub fn alpha_beta(gamma: f64) -> Result<(f64, f64)> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::Domain { what: "gamma (must exceed 1)", value: gamma });
    }
    let k = 3.0 * (gamma - 1.0);
    Ok((k.min(1.0), k.max(2.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    NotCertified,
}

/// Outcome of the explicit-constant breakdown argument for one velocity
/// amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupCertificate {
    #[serde(rename = "Q0")]
    pub q0: f64,
    /// `𝓔(0)`.
    pub energy: f64,
    /// `∫₀¹ ν₀ r⁴ dr`.
    pub moment4: f64,
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
    /// Length of the window on which `Q′ ≥ (α/8)𝓔` is guaranteed.
    #[serde(rename = "T0")]
    pub t0: f64,
    /// `(3α/(64 n̄ η̄)) [1 − (1 + η̄T₀)⁻⁴]`; breakdown is certified when
    /// `1/Q(0)` falls below it.
    pub rhs: f64,
    pub verdict: Verdict,
    pub lambda: f64,
}

impl BlowupCertificate {
    pub fn certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }
}

/// Run the chain for `u₀` scaled by `lambda`.
///
/// With `𝓔 ≥ 1`, `s ≥ s̄` and `M = 0`:
/// `∫ n u² r² ≤ 2𝓔`, so `Q² ≤ (2/3) n̄ R⁵ 𝓔` and `|Q(0)| ≤ √(2n̄/3) 𝓔`;
/// `ω²|∫ν₀r⁴| ≤ (α/2)𝓔` keeps `(α/2)𝓔 ≤ G ≤ 2β𝓔` (with room to spare:
/// only half that moment enters `G`), hence
/// `Q′ ≥ (α/2)𝓔 − ω|Q(0)| − 2βω𝓔t`. Requiring `ω√(2n̄/3) ≤ α/8` and
/// `t ≤ T₀ = α/(16βω)` leaves `Q′ ≥ (α/8)𝓔 ≥ 3αQ²/(16 n̄ R⁵)`, which
/// integrates to the right-hand side stored in the certificate.
pub fn certify_blowup(data: &RadialPlasmaData, bg: &PlasmaBackground, lambda: f64) -> Result<BlowupCertificate> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain { what: "lambda (must be non-negative)", value: lambda });
    }
    let scaled = data.with_velocity_scale(lambda);
    let eos = bg.eos;
    let len = scaled.nu0.len();
    let n: alloc::vec::Vec<f64> = scaled.nu0.iter().map(|v| bg.nbar + v).collect();
    let p: alloc::vec::Vec<f64> = (0..len).map(|j| eos.pressure_raw(n[j], bg.sbar + scaled.sigma0[j])).collect();
    let snap = PlasmaSnapshot { quad: scaled.quadrature(), n: &n, u: &scaled.u0, p: &p, e_field: &scaled.e0 };
    let q0 = momentum_q(&snap)?;
    let energy = energy_script(&snap, bg)?;
    let moment4 = scaled.moment4();
    let (alpha, beta) = alpha_beta(eos.gamma())?;
    let omega = bg.omega;
    let t0 = alpha / (16.0 * beta * omega);
    let eta = bg.etabar;
    let rhs = 3.0 * alpha / (64.0 * bg.nbar * eta) * (1.0 - powf(1.0 + eta * t0, -4.0));
    let ok = energy >= 1.0
        && omega * omega * moment4.abs() <= 0.5 * alpha * energy
        && omega * sqrt(2.0 * bg.nbar / 3.0) <= alpha / 8.0
        && q0 > 0.0
        && 1.0 / q0 < rhs;
    Ok(BlowupCertificate {
        q0,
        energy,
        moment4,
        alpha,
        beta,
        omega,
        t0,
        rhs,
        verdict: if ok { Verdict::Certified } else { Verdict::NotCertified },
        lambda,
    })
}

/// First certified amplitude of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaScan {
    pub lambda: f64,
    pub index: usize,
    pub certificate: BlowupCertificate,
}

/// `λ = 2^k`, `k = 0, …, 40`.
pub fn lambda_candidates() -> impl Iterator<Item = f64> + Clone {
    (0..=40).map(|k| libm::ldexp(1.0, k))
}

/// Smallest power of two for which [`certify_blowup`] issues a certificate.
pub fn scan_lambda(data: &RadialPlasmaData, bg: &PlasmaBackground) -> Result<LambdaScan> {
    for (index, lambda) in lambda_candidates().enumerate() {
        let certificate = certify_blowup(data, bg, lambda)?;
        if certificate.certified() {
            return Ok(LambdaScan { lambda, index, certificate });
        }
    }
    Err(Error::ScanExhausted("no velocity amplitude on the scan grid is certified"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::PolytropicEos;
    use crate::grid::NodeGrid;
    use crate::plasma::{make_plasma_data, EntropyBump, NeutralDensity, PlasmaFamily};
    use crate::relfluid::MomentumBump;

    fn setup() -> (RadialPlasmaData, PlasmaBackground) {
        let bg = PlasmaBackground::new(PolytropicEos::new(5.0 / 3.0, 1.0).unwrap(), 0.01, 0.0, 1.0, 1.0, 1.0).unwrap();
        let fam = PlasmaFamily {
            nu0: NeutralDensity { amplitude: 0.1 },
            sigma0: EntropyBump { amplitude: 0.5 },
            u0: MomentumBump { amplitude: 1.0 },
        };
        let grid = NodeGrid::new(2048, 2.0).unwrap();
        (make_plasma_data(&fam, 1.0, &grid, &bg).unwrap(), bg)
    }

    #[test]
    fn alpha_beta_values() {
        let close = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14;
        assert!(close(alpha_beta(5.0 / 3.0).unwrap(), (1.0, 2.0)));
        assert!(close(alpha_beta(1.2).unwrap(), (0.6, 2.0)));
        assert!(close(alpha_beta(2.0).unwrap(), (1.0, 3.0)));
        assert!(alpha_beta(1.0).is_err());
    }

    #[test]
    fn zero_velocity_not_certified() {
        let (d, bg) = setup();
        let c = certify_blowup(&d, &bg, 0.0).unwrap();
        assert_eq!(c.q0, 0.0);
        assert_eq!(c.verdict, Verdict::NotCertified);
    }

    #[test]
    fn scan_finds_threshold_and_is_monotone() {
        let (d, bg) = setup();
        let s = scan_lambda(&d, &bg).unwrap();
        assert!(s.index > 0);
        let below = certify_blowup(&d, &bg, s.lambda / 2.0).unwrap();
        assert!(!below.certified());
        for k in 0..6 {
            let c = certify_blowup(&d, &bg, s.lambda * (1 << k) as f64 * 1.3).unwrap();
            assert!(c.certified());
        }
        assert!(s.certificate.alpha <= s.certificate.beta && s.certificate.t0 > 0.0);
    }

    #[test]
    fn momentum_is_linear_in_lambda() {
        let (d, bg) = setup();
        let a = certify_blowup(&d, &bg, 3.0).unwrap();
        let b = certify_blowup(&d, &bg, 6.0).unwrap();
        assert!((b.q0 - 2.0 * a.q0).abs() < 1e-14 * b.q0.abs().max(1.0));
    }

    #[test]
    fn serialized_names() {
        let (d, bg) = setup();
        let v = serde_json::to_value(certify_blowup(&d, &bg, 1.0).unwrap()).unwrap();
        for key in ["Q0", "energy", "moment4", "alpha", "beta", "omega", "T0", "rhs", "verdict", "lambda"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["verdict"], "not-certified");
    }
}
