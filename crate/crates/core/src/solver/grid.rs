use crate::error::{Error, Result};
use crate::grid::Quadrature;

/// `N` uniform cells on `[0, r_max]`, cell `j` spanning `[jΔr, (j+1)Δr]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    cells: usize,
    dr: f64,
}

/// Nodes and weights of 3-point Gauss–Legendre on `[−1, 1]`.
const GL3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

impl RadialGrid {
    pub fn new(cells: usize, r_max: f64) -> Result<Self> {
        if cells < 4 {
            return Err(Error::InvalidData("the radial grid needs at least 4 cells"));
        }
        if !(r_max > 0.0) || !r_max.is_finite() {
            return Err(Error::Domain { what: "r_max", value: r_max });
        }
        Ok(RadialGrid { cells, dr: r_max / cells as f64 })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn spacing(&self) -> f64 {
        self.dr
    }

    pub fn r_max(&self) -> f64 {
        self.cells as f64 * self.dr
    }

    pub fn center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dr
    }

    /// Radius of face `k` (the lower face of cell `k`).
    pub fn face(&self, k: usize) -> f64 {
        k as f64 * self.dr
    }

    /// `r²` at face `k`.
    pub fn area(&self, k: usize) -> f64 {
        let r = self.face(k);
        r * r
    }

    /// `(r₊³ − r₋³)/3`.
    pub fn volume(&self, j: usize) -> f64 {
        let lo = self.face(j);
        let hi = self.face(j + 1);
        (hi * hi * hi - lo * lo * lo) / 3.0
    }

    pub fn quadrature(&self) -> Quadrature {
        Quadrature::cells(self.cells, self.dr)
    }

    /// `r²`-weighted average of `f` over cell `j` by 3-point Gauss–Legendre
    /// (exact for polynomials of degree 3 in `f`).
    pub fn cell_average<F: Fn(f64) -> f64>(&self, j: usize, f: F) -> f64 {
        let c = self.center(j);
        let h = 0.5 * self.dr;
        let mut acc = 0.0;
        for (x, w) in GL3 {
            let r = c + h * x;
            acc += w * h * f(r) * r * r;
        }
        acc / self.volume(j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes_and_averages() {
        let g = RadialGrid::new(100, 2.0).unwrap();
        let v: f64 = (0..100).map(|j| g.volume(j)).sum();
        assert!((v - 8.0 / 3.0).abs() < 1e-13);
        for j in [0, 7, 99] {
            assert!((g.cell_average(j, |_| 1.0) - 1.0).abs() < 1e-13);
            // ∫ r·r² over the cell divided by the volume.
            let (lo, hi) = (g.face(j), g.face(j + 1));
            let want = (hi.powi(4) - lo.powi(4)) / 4.0 / g.volume(j);
            assert!((g.cell_average(j, |r| r) - want).abs() < 1e-13);
        }
    }
}
