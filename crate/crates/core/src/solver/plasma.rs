use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::grid::RadialGrid;
use super::recon::{extend, face_states, GHOSTS};
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::plasma::PlasmaBackground;

/// Pointwise fluxes and sources of the radial plasma equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlasmaFluxSource {
    /// `n u`.
    pub mass_flux: f64,
    /// `n u² + p/m − E²/(8πm)`.
    pub momentum_flux: f64,
    /// `(e n̄/m) E + 2(p/m + E²/(8πm))/r`, the second part being the hoop
    /// stress of the spherical divergence.
    pub momentum_source: f64,
    /// `∂_t E = −4π e n u`.
    pub field_rate: f64,
}

pub fn plasma_flux_and_sources(n: f64, u: f64, p: f64, e_field: f64, r: f64, bg: &PlasmaBackground) -> PlasmaFluxSource {
    let em = e_field * e_field / (8.0 * PI * bg.m);
    let hoop = if r > 0.0 { 2.0 * (p / bg.m + em) / r } else { 0.0 };
    PlasmaFluxSource {
        mass_flux: n * u,
        momentum_flux: n * u * u + p / bg.m - em,
        momentum_source: bg.e * bg.nbar / bg.m * e_field + hoop,
        field_rate: -4.0 * PI * bg.e * n * u,
    }
}

/// Evolved plasma state: densities, momenta and entropy in cells, the
/// radial field on faces (`ef[k]` at `r = kΔr`, `ef[0] = 0`).
#[derive(Debug, Clone)]
pub struct PlasmaSolver {
    pub grid: RadialGrid,
    pub bg: PlasmaBackground,
    pub t: f64,
    pub n: Vec<f64>,
    pub mom: Vec<f64>,
    pub ent: Vec<f64>,
    pub ef: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    /// `∫₀¹ ν₀ r⁴ dr` of the initial data.
    pub moment4: f64,
    work: Work,
}

#[derive(Debug, Clone)]
struct Work {
    en: Vec<f64>,
    eu: Vec<f64>,
    ep: Vec<f64>,
    es: Vec<f64>,
    mass: Vec<f64>,
    adv: Vec<f64>,
    pstar: Vec<f64>,
    sface: Vec<(f64, f64)>,
}

type Rates = (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>);

impl PlasmaSolver {
    /// Cell averages of `n = n̄ + ν₀`, `n u₀` and `s̄ + σ₀`; the face field
    /// then follows from the discrete Poisson relation
    /// `r₊²E₊ − r₋²E₋ = 4πe (n_j − n̄) V_j`.
    pub fn new<F: Fn(f64) -> (f64, f64, f64)>(grid: RadialGrid, bg: PlasmaBackground, profile: F) -> Result<Self> {
        let cells = grid.cells();
        let mut n = vec![0.0; cells];
        let mut mom = vec![0.0; cells];
        let mut ent = vec![0.0; cells];
        for j in 0..cells {
            if grid.face(j) >= 1.0 {
                n[j] = bg.nbar;
                ent[j] = bg.sbar;
                continue;
            }
            n[j] = bg.nbar + grid.cell_average(j, |r| profile(r).0);
            mom[j] = grid.cell_average(j, |r| {
                let (nu, _, u) = profile(r);
                (bg.nbar + nu) * u
            });
            ent[j] = bg.sbar + grid.cell_average(j, |r| profile(r).1);
            if !(n[j] > 0.0) || !(ent[j] >= bg.sbar) {
                return Err(Error::InvalidData("initial plasma density must stay positive and entropy above background"));
            }
        }
        let mut ef = vec![0.0; cells + 1];
        let mut acc = 0.0;
        for j in 0..cells {
            acc += 4.0 * PI * bg.e * (n[j] - bg.nbar) * grid.volume(j);
            ef[j + 1] = acc / grid.area(j + 1);
        }
        let moment4 = {
            let spec = crate::numerics::QuadratureSpec { abs_tol: 1e-15, ..Default::default() };
            crate::numerics::quad_adaptive(|r| profile(r).0 * r * r * r * r, 0.0, 1.0, &spec)?
        };
        let e = cells + 2 * GHOSTS;
        let mut st = PlasmaSolver {
            grid,
            bg,
            t: 0.0,
            n,
            mom,
            ent,
            ef,
            u: vec![0.0; cells],
            p: vec![0.0; cells],
            moment4,
            work: Work {
                en: vec![0.0; e],
                eu: vec![0.0; e],
                ep: vec![0.0; e],
                es: vec![0.0; e],
                mass: vec![0.0; cells + 1],
                adv: vec![0.0; cells + 1],
                pstar: vec![0.0; cells + 1],
                sface: vec![(0.0, 0.0); cells + 1],
            },
        };
        st.recover()?;
        Ok(st)
    }

    fn recover(&mut self) -> Result<()> {
        let eos = self.bg.eos;
        for j in 0..self.n.len() {
            let n = self.n[j];
            if !(n > 0.0) || !n.is_finite() || !self.mom[j].is_finite() {
                return Err(Error::Recovery { cell: j });
            }
            self.u[j] = self.mom[j] / n;
            self.p[j] = if n == self.bg.nbar && self.ent[j] == self.bg.sbar {
                self.bg.pbar
            } else {
                eos.pressure_raw(n, self.ent[j])
            };
        }
        Ok(())
    }

    /// Sound speed `√(γp/(m n))` in cell `j`.
    pub fn sound_speed(&self, j: usize) -> f64 {
        sqrt(self.bg.eos.gamma() * self.p[j] / (self.bg.m * self.n[j]))
    }

    /// Cell-centred field `(E₋ + E₊)/2`.
    pub fn cell_field(&self) -> Vec<f64> {
        (0..self.n.len()).map(|j| 0.5 * (self.ef[j] + self.ef[j + 1])).collect()
    }

    pub fn max_speed(&self) -> f64 {
        (0..self.n.len()).map(|j| self.u[j].abs() + self.sound_speed(j)).fold(0.0, f64::max)
    }

    /// Largest `|r₊²E₊ − r₋²E₋ − 4πe(n_j − n̄)V_j| / (4πe n̄ V_j)`.
    pub fn poisson_residual(&self) -> f64 {
        let g = &self.grid;
        let scale = 4.0 * PI * self.bg.e;
        (0..self.n.len())
            .map(|j| {
                let div = g.area(j + 1) * self.ef[j + 1] - g.area(j) * self.ef[j];
                (div - scale * (self.n[j] - self.bg.nbar) * g.volume(j)).abs() / (scale * self.bg.nbar * g.volume(j))
            })
            .fold(0.0, f64::max)
    }

    fn rates(&mut self) -> Rates {
        let grid = self.grid;
        let cells = grid.cells();
        let bg = self.bg;
        let g = bg.eos.gamma();
        let w = &mut self.work;
        extend(&self.n, 1.0, bg.nbar, &mut w.en);
        extend(&self.u, -1.0, 0.0, &mut w.eu);
        extend(&self.p, 1.0, bg.pbar, &mut w.ep);
        extend(&self.ent, 1.0, bg.sbar, &mut w.es);
        for k in 0..=cells {
            w.sface[k] = face_states(&w.es, k);
        }
        for k in 1..=cells {
            let (nl, nr) = face_states(&w.en, k);
            let (ul, ur) = face_states(&w.eu, k);
            let (pl, pr) = face_states(&w.ep, k);
            let cl = sqrt(g * pl / (bg.m * nl));
            let cr = sqrt(g * pr / (bg.m * nr));
            let a = (ul.abs() + cl).max(ur.abs() + cr);
            w.mass[k] = 0.5 * (nl * ul + nr * ur) - 0.5 * a * (nr - nl);
            w.adv[k] = 0.5 * (nl * ul * ul + nr * ur * ur) - 0.5 * a * (nr * ur - nl * ul);
            w.pstar[k] = 0.5 * (pl + pr);
        }
        w.mass[0] = 0.0;
        w.adv[0] = 0.0;
        let dr = grid.spacing();
        let mut dn = vec![0.0; cells];
        let mut dm = vec![0.0; cells];
        let mut ds = vec![0.0; cells];
        let mut de = vec![0.0; cells + 1];
        let k_em = 1.0 / (8.0 * PI * bg.m);
        for j in 0..cells {
            let (am, ap) = (grid.area(j), grid.area(j + 1));
            let vol = grid.volume(j);
            let pm = if j == 0 { self.p[j] } else { w.pstar[j] };
            let pp = w.pstar[j + 1];
            let (em, ep) = (self.ef[j], self.ef[j + 1]);
            dn[j] = -(ap * w.mass[j + 1] - am * w.mass[j]) / vol;
            // Field stress −E²/(8πm) at faces with the hoop term weighted by
            // E₋E₊: together exactly (e/m)(n_j − n̄)(E₋+E₊)/2 under the
            // discrete Poisson relation.
            let field = k_em * (ap * ep * ep - am * em * em + (ap - am) * em * ep) / vol;
            dm[j] = -(ap * w.adv[j + 1] - am * w.adv[j]) / vol
                - (ap * (pp - self.p[j]) - am * (pm - self.p[j])) / (bg.m * vol)
                + field
                + bg.e * bg.nbar / bg.m * 0.5 * (em + ep);
            let v = self.u[j];
            let (inner, outer) = (w.sface[j], w.sface[j + 1]);
            ds[j] = if v > 0.0 { -v * (outer.0 - inner.0) / dr } else { -v * (outer.1 - inner.1) / dr };
        }
        for k in 1..=cells {
            de[k] = -4.0 * PI * bg.e * w.mass[k];
        }
        (dn, dm, ds, de)
    }

    /// One Heun (SSP-RK2) step of length `dt`.
    pub fn step(&mut self, dt: f64) -> Result<()> {
        let (n0, m0, s0, e0) = (self.n.clone(), self.mom.clone(), self.ent.clone(), self.ef.clone());
        let (dn, dm, ds, de) = self.rates();
        for j in 0..self.n.len() {
            self.n[j] += dt * dn[j];
            self.mom[j] += dt * dm[j];
            self.ent[j] += dt * ds[j];
        }
        for k in 0..self.ef.len() {
            self.ef[k] += dt * de[k];
        }
        self.recover()?;
        let (dn, dm, ds, de) = self.rates();
        for j in 0..self.n.len() {
            self.n[j] = 0.5 * n0[j] + 0.5 * (self.n[j] + dt * dn[j]);
            self.mom[j] = 0.5 * m0[j] + 0.5 * (self.mom[j] + dt * dm[j]);
            self.ent[j] = 0.5 * s0[j] + 0.5 * (self.ent[j] + dt * ds[j]);
        }
        for k in 0..self.ef.len() {
            self.ef[k] = 0.5 * e0[k] + 0.5 * (self.ef[k] + dt * de[k]);
        }
        self.recover()?;
        self.t += dt;
        Ok(())
    }
}
