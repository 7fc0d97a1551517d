use core::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{make_initial_data, radial_momentum, total_energy, DataFamily, QuietBackground, RadialFluidData, RadialShape};
use crate::eos::PolytropicEos;
use crate::error::{Error, Result};
use crate::grid::NodeGrid;
use crate::numerics::{quad_adaptive, quad_improper, root_bracketed, QuadratureSpec};

/// Outcome of the largeness conditions on a data set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(rename = "Q0")]
    pub q0: f64,
    pub etabar: f64,
    /// `η̄ < 1/3`.
    pub d1: bool,
    /// `E > 0`.
    pub d2: bool,
    /// `s₀ ≥ s̄` on the initial support.
    pub d3: bool,
    /// `Q(0)` above [`Self::d4_threshold`].
    pub d4: bool,
    /// `None` when `E ≤ 0` or `η̄ ≥ 1/√3`, where the threshold is undefined.
    pub d4_threshold: Option<f64>,
    pub qe_threshold: Option<f64>,
    #[serde(skip, default = "unit_support")]
    pub support: f64,
}

fn unit_support() -> f64 {
    1.0
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.d1 && self.d2 && self.d3 && self.d4
    }

    /// The cruder sufficient condition obtained from `f(y) < 16y/7 + 4`.
    pub fn qe_pass(&self) -> bool {
        self.qe_threshold.is_some_and(|t| self.q0 > t)
    }
}

/// Life-span bound derived from a [`ConditionReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BreakdownBound {
    /// A `C¹` solution cannot exist past this time.
    Finite(f64),
    NoCertificate,
}

impl BreakdownBound {
    pub fn time(&self) -> Option<f64> {
        match self {
            BreakdownBound::Finite(t) => Some(*t),
            BreakdownBound::NoCertificate => None,
        }
    }
}

/// Condition report plus the resulting bound, as written to disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidCertificate {
    #[serde(flatten)]
    pub report: ConditionReport,
    #[serde(rename = "T_star")]
    pub t_star: Option<f64>,
}

fn spec_for(scale: f64) -> QuadratureSpec {
    QuadratureSpec { abs_tol: (1e-13 * scale).min(1e-11), ..QuadratureSpec::default() }
}

fn check_coefficients(energy: f64, rhobar: f64) -> Result<f64> {
    if !(energy >= 0.0) || !energy.is_finite() {
        return Err(Error::Domain { what: "E (must be non-negative)", value: energy });
    }
    if !(rhobar >= 0.0) || !rhobar.is_finite() {
        return Err(Error::Domain { what: "rhobar (must be non-negative)", value: rhobar });
    }
    if energy == 0.0 && rhobar == 0.0 {
        return Err(Error::Domain { what: "E and rhobar (both zero, divergent integral)", value: 0.0 });
    }
    Ok(4.0 * PI / 3.0 * rhobar)
}

/// `∫_{r_lo}^{r_hi} dr / (E r² + (4π/3) ρ̄ r⁵)`; `r_hi` may be infinite.
pub fn bound_integral_between(energy: f64, rhobar: f64, r_lo: f64, r_hi: f64) -> Result<f64> {
    let b = check_coefficients(energy, rhobar)?;
    if !(r_lo > 0.0) || !r_lo.is_finite() {
        return Err(Error::Domain { what: "lower radius", value: r_lo });
    }
    if !(r_hi >= r_lo) {
        return Err(Error::Domain { what: "upper radius (must be at least the lower one)", value: r_hi });
    }
    if r_hi == r_lo {
        return Ok(0.0);
    }
    // Substituting r = r_lo·x maps the integral onto [1, r_hi/r_lo] with
    // coefficients (E, b r_lo³) and an overall 1/r_lo.
    let bs = b * r_lo * r_lo * r_lo;
    let scale = 1.0 / (energy + bs);
    let spec = spec_for(scale);
    let v = if r_hi.is_infinite() {
        quad_improper(energy, bs, &spec)?
    } else {
        let x_hi = r_hi / r_lo;
        quad_adaptive(|x| 1.0 / (energy * x * x + bs * x * x * x * x * x), 1.0, x_hi, &spec)?
    };
    Ok(v / r_lo)
}

/// `I(R) = ∫₁^R dr / (E r² + (4π/3) ρ̄ r⁵)` for `R ∈ [1, ∞]`.
pub fn bound_integral(energy: f64, rhobar: f64, r_upper: f64) -> Result<f64> {
    bound_integral_between(energy, rhobar, 1.0, r_upper)
}

/// `f(y) = (∫₁^∞ dr / (r²(r³ + y)))⁻¹`.
pub fn f_bound(y: f64) -> Result<f64> {
    if !(y >= 0.0) || !y.is_finite() {
        return Err(Error::Domain { what: "y (must be non-negative)", value: y });
    }
    let spec = QuadratureSpec { abs_tol: 1e-14, ..QuadratureSpec::default() };
    Ok(1.0 / quad_improper(y, 1.0, &spec)?)
}

/// Evaluate the four largeness conditions, the exact threshold for the
/// last one and the cruder closed-form threshold.
pub fn check_conditions(data: &RadialFluidData, bg: &QuietBackground) -> Result<ConditionReport> {
    let snap = data.snapshot();
    let energy = total_energy(&snap, bg)?;
    let q0 = radial_momentum(&snap, bg)?;
    let eta = bg.etabar;
    let r0 = data.support();
    let d1 = eta < 1.0 / 3.0;
    let d2 = energy > 0.0;
    let d3 = (0..=data.grid().support_index()).all(|j| data.s0[j] >= bg.sbar);
    let gap = 1.0 - 3.0 * eta * eta;
    let (d4_threshold, qe_threshold) = if d2 && gap > 0.0 {
        let i_inf = bound_integral_between(energy, bg.rhobar, r0, f64::INFINITY)?;
        let d4 = 2.0 * eta / (gap * i_inf);
        let qe = 32.0 * eta * r0 / (7.0 * gap) * (energy + 7.0 * PI / 3.0 * bg.rhobar * r0 * r0 * r0);
        (Some(d4), Some(qe))
    } else {
        (None, None)
    };
    let d4 = d4_threshold.is_some_and(|t| q0 > t);
    Ok(ConditionReport {
        energy,
        q0,
        etabar: eta,
        d1,
        d2,
        d3,
        d4,
        d4_threshold,
        qe_threshold,
        support: r0,
    })
}

/// Smallest `T` with `1/Q(0) ≤ ((1−3η̄²)/(2η̄)) ∫_{R₀}^{R₀+η̄T} dr/(E r² + (4π/3)ρ̄ r⁵)`.
pub fn breakdown_time_bound(report: &ConditionReport, bg: &QuietBackground) -> Result<BreakdownBound> {
    if !report.all_pass() {
        return Ok(BreakdownBound::NoCertificate);
    }
    let eta = report.etabar;
    let r0 = report.support;
    let k = (1.0 - 3.0 * eta * eta) / (2.0 * eta);
    let target = 1.0 / report.q0;
    let g = |t: f64| -> f64 {
        match bound_integral_between(report.energy, bg.rhobar, r0, r0 + eta * t) {
            Ok(i) => k * i - target,
            Err(_) => f64::NAN,
        }
    };
    // k·I(∞) > target by (D4); double until the bracket closes.
    let mut t_hi = r0 / eta;
    let mut tries = 0;
    while g(t_hi) < 0.0 {
        t_hi *= 2.0;
        tries += 1;
        if tries > 200 || !t_hi.is_finite() {
            return Ok(BreakdownBound::NoCertificate);
        }
    }
    if g(t_hi).is_nan() {
        return Err(Error::NonFinite("breakdown_time_bound"));
    }
    // Shrink too, so the bracket is within a factor two of the root and the
    // tolerance below is relative.
    while t_hi > f64::MIN_POSITIVE && g(0.5 * t_hi) >= 0.0 {
        t_hi *= 0.5;
    }
    let t = root_bracketed(g, 0.0, t_hi, 1e-11 * t_hi)?;
    Ok(BreakdownBound::Finite(t))
}

/// Certificate for a data set: conditions plus the life-span bound.
pub fn certify_fluid(data: &RadialFluidData, bg: &QuietBackground) -> Result<FluidCertificate> {
    let report = check_conditions(data, bg)?;
    let t_star = breakdown_time_bound(&report, bg)?.time();
    Ok(FluidCertificate { report, t_star })
}

/// First success of the background-density scan.
#[derive(Debug, Clone, PartialEq)]
pub struct NbarScan {
    pub nbar: f64,
    /// Position in [`nbar_candidates`].
    pub index: usize,
    pub report: ConditionReport,
}

/// `n̄ = 2^{-k}`, `k = 0, …, 39`: from 1 down to about 1.8e−12.
pub fn nbar_candidates() -> impl Iterator<Item = f64> + Clone {
    (0..40).map(|k| libm::ldexp(1.0, -k))
}

/// Conditions for the family member with background density `nbar`.
pub fn evaluate_nbar<P: RadialShape + Clone, S: RadialShape + Clone>(
    phi: &P,
    psi: &S,
    sbar: f64,
    eos: PolytropicEos,
    grid: &NodeGrid,
    nbar: f64,
) -> Result<ConditionReport> {
    let family = DataFamily { phi: phi.clone(), psi: psi.clone(), nbar, sbar };
    let data = make_initial_data(&family, grid, eos)?;
    let bg = QuietBackground::new(eos, nbar, sbar)?;
    check_conditions(&data, &bg)
}

/// Largest `n̄` on the scan grid for which the family satisfies every
/// condition.
pub fn find_blowup_nbar<P: RadialShape + Clone, S: RadialShape + Clone>(
    phi: &P,
    psi: &S,
    sbar: f64,
    eos: PolytropicEos,
    grid: &NodeGrid,
) -> Result<NbarScan> {
    for (index, nbar) in nbar_candidates().enumerate() {
        let report = evaluate_nbar(phi, psi, sbar, eos, grid, nbar)?;
        if report.all_pass() {
            return Ok(NbarScan { nbar, index, report });
        }
    }
    Err(Error::ScanExhausted("no background density on the scan grid satisfies all conditions"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::second_divided_differences;
    use alloc::vec::Vec;

    fn brute_tail(e: f64, b: f64) -> f64 {
        // r = 1/x turns ∫₁^∞ dr/(E r² + b r⁵) into ∫₀¹ x³/(E x³ + b) dx.
        let n = 1_000_000;
        let h = 1.0 / n as f64;
        (0..n)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                x * x * x / (e * x * x * x + b)
            })
            .sum::<f64>()
            * h
    }

    #[test]
    fn bound_integral_closed_forms() {
        let rho_unit = 3.0 / (4.0 * PI);
        assert!((bound_integral(0.0, rho_unit, f64::INFINITY).unwrap() - 0.25).abs() < 1e-12);
        assert!((bound_integral(1.0, 0.0, f64::INFINITY).unwrap() - 1.0).abs() < 1e-12);
        assert!((bound_integral(2.0, 0.0, 5.0).unwrap() - 0.4).abs() < 1e-12);
        let both = bound_integral(1.0, rho_unit, f64::INFINITY).unwrap();
        assert!((both - brute_tail(1.0, 1.0)).abs() < 1e-10);
        assert!((both - 1.0 / f_bound(1.0).unwrap()).abs() < 1e-12);
        assert_eq!(bound_integral(1.0, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn bound_integral_rejects_divergence() {
        assert!(bound_integral(0.0, 0.0, 2.0).is_err());
        assert!(bound_integral(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn shifted_lower_limit() {
        let (e, rho) = (0.7, 0.05);
        let b = 4.0 * PI / 3.0 * rho;
        let direct = {
            let spec = QuadratureSpec { abs_tol: 1e-14, ..QuadratureSpec::default() };
            let finite = quad_adaptive(|r| 1.0 / (e * r * r + b * r.powi(5)), 2.5, 400.0, &spec).unwrap();
            finite + 1.0 / (4.0 * b * 400f64.powi(4))
        };
        let got = bound_integral_between(e, rho, 2.5, f64::INFINITY).unwrap();
        assert!((got - direct).abs() < 1e-11, "{got} {direct}");
    }

    #[test]
    fn f_bound_shape() {
        assert!((f_bound(0.0).unwrap() - 4.0).abs() < 1e-8);
        let h = 1e-4;
        let slope = (f_bound(h).unwrap() - f_bound(0.0).unwrap()) / h;
        assert!((slope - 16.0 / 7.0).abs() < 1e-4, "{slope}");
        for y in [0.1, 1.0, 10.0, 100.0] {
            assert!(f_bound(y).unwrap() < 16.0 * y / 7.0 + 4.0);
        }
        let ys: Vec<f64> = (0..60).map(|i| 0.25 * i as f64).collect();
        let fs: Vec<f64> = ys.iter().map(|y| f_bound(*y).unwrap()).collect();
        assert!(fs.windows(2).all(|w| w[1] > w[0]));
        assert!(second_divided_differences(&ys, &fs).iter().all(|d| *d <= 1e-9));
    }

    fn synthetic(q0: f64) -> (ConditionReport, QuietBackground) {
        let bg = QuietBackground::new(PolytropicEos::new(5.0 / 3.0, 1.0).unwrap(), 0.01, 0.0).unwrap();
        let energy = 0.5;
        let eta = bg.etabar;
        let thr = 2.0 * eta / ((1.0 - 3.0 * eta * eta) * bound_integral(energy, bg.rhobar, f64::INFINITY).unwrap());
        let report = ConditionReport {
            energy,
            q0,
            etabar: eta,
            d1: true,
            d2: true,
            d3: true,
            d4: q0 > thr,
            d4_threshold: Some(thr),
            qe_threshold: None,
            support: 1.0,
        };
        (report, bg)
    }

    #[test]
    fn threshold_momentum_has_no_certificate() {
        let (r, bg) = synthetic(1.0);
        let thr = r.d4_threshold.unwrap();
        let (at, _) = synthetic(thr);
        assert_eq!(breakdown_time_bound(&at, &bg).unwrap(), BreakdownBound::NoCertificate);
    }

    #[test]
    fn breakdown_time_decreases_with_momentum() {
        let (r, bg) = synthetic(1.0);
        let thr = r.d4_threshold.unwrap();
        let mut last = f64::INFINITY;
        for k in 1..30 {
            let q0 = thr * (1.0 + 0.01 * (1u64 << k) as f64);
            let (rep, _) = synthetic(q0);
            let t = breakdown_time_bound(&rep, &bg).unwrap().time().unwrap();
            assert!(t < last && t > 0.0);
            // The defining equality holds at the root.
            let eta = rep.etabar;
            let lhs = (1.0 - 3.0 * eta * eta) / (2.0 * eta)
                * bound_integral(rep.energy, bg.rhobar, 1.0 + eta * t).unwrap();
            assert!((lhs * q0 - 1.0).abs() < 1e-8);
            last = t;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn serialized_names() {
        let (r, _) = synthetic(1.0);
        let c = FluidCertificate { report: r, t_star: None };
        let v = serde_json::to_value(c).unwrap();
        for key in ["E", "Q0", "etabar", "d1", "d2", "d3", "d4", "d4_threshold", "qe_threshold", "T_star"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["T_star"].is_null() && v["qe_threshold"].is_null());
    }
}
