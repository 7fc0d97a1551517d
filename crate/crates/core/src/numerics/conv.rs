use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{cos, sin};

/// Running trapezoidal integral `∫₀^{t_k} g` of a uniformly sampled series.
pub fn cumulative_trapezoid(g: &[f64], dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(g.len());
    let mut acc = 0.0;
    for (k, v) in g.iter().enumerate() {
        if k > 0 {
            acc += 0.5 * dt * (g[k - 1] + v);
        }
        out.push(acc);
    }
    out
}

/// `C(t_k) = ∫₀^{t_k} sin ω(t_k − τ) G(τ) dτ` on a uniform grid `t_k = kΔt`.
///
/// Uses `sin ω(t−τ) = sin ωt cos ωτ − cos ωt sin ωτ`, so the trapezoidal
/// rule for the convolution reduces to two running trapezoidal sums and the
/// whole series costs O(N).
pub fn convolve_sin(g: &[f64], omega: f64, dt: f64) -> Result<Vec<f64>> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain { what: "convolution time step", value: dt });
    }
    let gc: Vec<f64> = g.iter().enumerate().map(|(k, v)| v * cos(omega * k as f64 * dt)).collect();
    let gs: Vec<f64> = g.iter().enumerate().map(|(k, v)| v * sin(omega * k as f64 * dt)).collect();
    let ic = cumulative_trapezoid(&gc, dt);
    let is = cumulative_trapezoid(&gs, dt);
    Ok((0..g.len())
        .map(|k| {
            let wt = omega * k as f64 * dt;
            sin(wt) * ic[k] - cos(wt) * is[k]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_forcing() {
        let c = convolve_sin(&[0.0; 50], 2.0, 0.1).unwrap();
        assert!(c.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn constant_forcing_closed_form() {
        let (omega, dt, n) = (1.3, 1e-3, 5001);
        let c = convolve_sin(&alloc::vec![1.0; n], omega, dt).unwrap();
        for (k, v) in c.iter().enumerate() {
            let t = k as f64 * dt;
            let exact = (1.0 - cos(omega * t)) / omega;
            assert!((v - exact).abs() < 1e-6, "k={k}");
        }
    }

    #[test]
    fn second_order_refinement() {
        let omega = 2.0;
        let t_end = 3.0;
        let g = |t: f64| libm::exp(-t) * (1.0 + t);
        // Exact value by a much finer run of the same rule.
        let err_at = |n: usize| {
            let dt = t_end / n as f64;
            let s: Vec<f64> = (0..=n).map(|k| g(k as f64 * dt)).collect();
            convolve_sin(&s, omega, dt).unwrap()[n]
        };
        let fine = err_at(1 << 16);
        let e1 = (err_at(200) - fine).abs();
        let e2 = (err_at(400) - fine).abs();
        let ratio = e1 / e2;
        assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
    }
}
