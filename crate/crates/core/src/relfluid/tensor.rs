use crate::error::{Error, Result};
use crate::math::sqrt;

/// `T^{μν}` with contravariant indices, `μ = 0..3`.
pub type StressEnergy = [[f64; 4]; 4];

/// `T^{μν} = (ρ+p) u^μ u^ν + p g^{μν}` for spatial four-velocity `u`,
/// with `u⁰ = √(1+|u|²)` and `g = diag(−1, 1, 1, 1)`.
pub fn stress_energy(u: [f64; 3], rho: f64, p: f64) -> Result<StressEnergy> {
    if !(p >= 0.0) {
        return Err(Error::Domain { what: "pressure", value: p });
    }
    if p > rho {
        return Err(Error::Domain { what: "pressure exceeding energy density", value: p - rho });
    }
    let u0 = sqrt(1.0 + u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    let four = [u0, u[0], u[1], u[2]];
    let g = [-1.0, 1.0, 1.0, 1.0];
    let h = rho + p;
    let mut t = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            t[mu][nu] = h * four[mu] * four[nu] + if mu == nu { p * g[mu] } else { 0.0 };
        }
    }
    Ok(t)
}
