//! Radial sample grids and the quadratures that turn them into
//! `∫₀^∞ f(r) r² dr` estimates.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform node grid `r_j = jΔr`, `j = 0..=N` on `[0, r_max]`.
///
/// `N` is even and the support radius (normally `r = 1`) is an even node,
/// so Simpson panels never straddle the edge of the perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeGrid {
    intervals: usize,
    spacing: f64,
    support: f64,
}

impl NodeGrid {
    pub fn new(intervals: usize, r_max: f64) -> Result<Self> {
        Self::with_support(intervals, r_max, 1.0)
    }

    pub fn with_support(intervals: usize, r_max: f64, support: f64) -> Result<Self> {
        if intervals < 2 || intervals % 2 != 0 {
            return Err(Error::InvalidData("node grid needs an even number of intervals"));
        }
        if !(support > 0.0) || !support.is_finite() {
            return Err(Error::Domain { what: "support radius", value: support });
        }
        if !(r_max >= support) || !r_max.is_finite() {
            return Err(Error::Domain { what: "r_max (must cover the support radius)", value: r_max });
        }
        let spacing = r_max / intervals as f64;
        let per_support = support / spacing;
        let k = libm::round(per_support);
        if (k - per_support).abs() > 1e-9 * per_support || (k as u64) % 2 != 0 {
            return Err(Error::InvalidData("the support radius must fall on an even grid node"));
        }
        Ok(NodeGrid { intervals, spacing, support })
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn r_max(&self) -> f64 {
        self.spacing * self.intervals as f64
    }

    #[inline]
    pub fn radius(&self, j: usize) -> f64 {
        self.spacing * j as f64
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.radius(j)).collect()
    }

    /// Index of the node at the support radius.
    pub fn support_index(&self) -> usize {
        libm::round(self.support / self.spacing) as usize
    }

    /// Composite Simpson weights for `∫ f r² dr`.
    pub fn quadrature(&self) -> Quadrature {
        let n = self.len();
        let h = self.spacing;
        let radii = self.radii();
        let weights = radii
            .iter()
            .enumerate()
            .map(|(j, r)| {
                let c = if j == 0 || j == n - 1 {
                    1.0
                } else if j % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                c * h / 3.0 * r * r
            })
            .collect();
        Quadrature { radii, weights }
    }
}

/// A radial quadrature: `∫₀^∞ f(r) r² dr ≈ Σ wᵢ f(rᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature {
    pub radii: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    /// Finite-volume cells `[jΔr, (j+1)Δr]` sampled at centres, weighted by
    /// the exact shell volume `(r₊³ − r₋³)/3`.
    pub fn cells(cells: usize, spacing: f64) -> Self {
        let radii = (0..cells).map(|j| (j as f64 + 0.5) * spacing).collect();
        let weights = (0..cells)
            .map(|j| {
                let lo = j as f64 * spacing;
                let hi = lo + spacing;
                (hi * hi * hi - lo * lo * lo) / 3.0
            })
            .collect();
        Quadrature { radii, weights }
    }

    /// Cell faces `r = (j+1)Δr`, `j = 0..cells`, with trapezoidal weights
    /// (the `r = 0` face carries zero weight and is omitted).
    pub fn faces(cells: usize, spacing: f64) -> Self {
        let radii: Vec<f64> = (0..cells).map(|j| (j + 1) as f64 * spacing).collect();
        let weights = radii
            .iter()
            .enumerate()
            .map(|(j, r)| if j + 1 == cells { 0.5 } else { 1.0 } * spacing * r * r)
            .collect();
        Quadrature { radii, weights }
    }

    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    /// `Σ wᵢ vᵢ`.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// `Σ wᵢ f(i, rᵢ)`.
    pub fn integrate_with<F: FnMut(usize, f64) -> f64>(&self, mut f: F) -> f64 {
        self.weights
            .iter()
            .zip(&self.radii)
            .enumerate()
            .map(|(i, (w, r))| w * f(i, *r))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_radius_on_even_node() {
        let g = NodeGrid::new(2048, 2.0).unwrap();
        assert_eq!(g.support_index(), 1024);
        assert_eq!(g.radius(1024), 1.0);
        assert!(NodeGrid::new(2048, 1.5).is_err());
        assert!(NodeGrid::new(7, 1.0).is_err());
    }

    #[test]
    fn simpson_weights_carry_r_squared() {
        let q = NodeGrid::new(64, 2.0).unwrap().quadrature();
        // ∫₀² r · r² dr = 4, exact for Simpson
        assert!((q.integrate_with(|_, r| r) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cell_volumes_sum_to_ball() {
        let q = Quadrature::cells(100, 0.02);
        let total: f64 = q.weights.iter().sum();
        assert!((total - 8.0 / 3.0).abs() < 1e-12);
    }
}
