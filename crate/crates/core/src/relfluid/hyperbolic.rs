use alloc::vec::Vec;

use super::QuietBackground;
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::numerics::{sym_eigen, SymMatrix};

/// Coefficients of the fluid equations linearized at the background, in
/// the unknowns `U = (p, u⁰, u¹, u², u³, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperbolicMatrices {
    pub a0: SymMatrix,
    pub ai: [SymMatrix; 3],
}

pub fn background_hyperbolic_matrices(bg: &QuietBackground) -> HyperbolicMatrices {
    let z = bg.zetabar;
    let a0 = SymMatrix::from_diagonal(&[1.0 / z, z, z, z, z, 1.0]);
    let ai = core::array::from_fn(|i| {
        let mut m = SymMatrix::zeros(6);
        m.set(0, 2 + i, bg.etabar);
        m.set(2 + i, 0, bg.etabar);
        m
    });
    HyperbolicMatrices { a0, ai }
}

impl HyperbolicMatrices {
    /// Eigenvalues of `(A⁰)⁻¹ ξᵢAⁱ`, ascending.
    ///
    /// `A⁰` is diagonal, so the symmetric similarity
    /// `(A⁰)^{-1/2} ξᵢAⁱ (A⁰)^{-1/2}` has the same spectrum.
    pub fn characteristic_speeds(&self, xi: [f64; 3]) -> Result<Vec<f64>> {
        let n = self.a0.dim();
        let mut scale = Vec::with_capacity(n);
        for k in 0..n {
            let d = self.a0.get(k, k);
            if !(d > 0.0) {
                return Err(Error::InvalidData("A0 must be positive definite"));
            }
            scale.push(1.0 / sqrt(d));
        }
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = (0..3).map(|k| xi[k] * self.ai[k].get(i, j)).sum();
                m.set(i, j, scale[i] * v * scale[j]);
                m.set(j, i, scale[i] * v * scale[j]);
            }
        }
        sym_eigen(&m)
    }
}
