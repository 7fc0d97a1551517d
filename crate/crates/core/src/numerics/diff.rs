use alloc::vec::Vec;

/// Fourth-order central difference `f'(x)` with step `h`.
pub fn central_diff4<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h)
}

/// Second divided differences of samples `(x_i, y_i)` with strictly
/// increasing `x`; the discrete concavity test is `all ≤ 0`.
pub fn second_divided_differences(x: &[f64], y: &[f64]) -> Vec<f64> {
    (1..x.len().saturating_sub(1))
        .map(|i| {
            let d1 = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
            let d2 = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
            2.0 * (d2 - d1) / (x[i + 1] - x[i - 1])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_exactness() {
        let d = central_diff4(|x| x * x * x * x, 1.5, 1e-2);
        assert!((d - 4.0 * 1.5f64.powi(3)).abs() < 1e-10);
    }

    #[test]
    fn concave_samples() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| -v * v).collect();
        assert!(second_divided_differences(&x, &y).iter().all(|&d| (d + 2.0).abs() < 1e-12));
    }
}
