//! Radial finite-volume integrator for the relativistic fluid and the
//! electron plasma: second-order minmod reconstruction of the primitives,
//! local Lax–Friedrichs fluxes, Heun (SSP-RK2) time stepping, parity ghost
//! cells at the origin and a fixed background at the outer edge.
//!
//! The pressure part of the momentum flux is split off and balanced
//! against the geometric source, so the quiet background is an exact
//! fixed point. In the plasma the field lives on cell faces and is driven
//! by the numerical mass flux, which keeps the discrete Poisson
//! constraint exactly.

mod fluid;
mod grid;
mod plasma;
mod recon;
mod run;

pub use fluid::{
    conserved_from_primitives, fluid_flux, primitives_from_conserved, primitives_from_entropy, signal_speeds, FluidConserved,
    FluidPrimitive, FluidSolver, RecoveryFloors,
};
pub use grid::RadialGrid;
pub use plasma::{plasma_flux_and_sources, PlasmaFluxSource, PlasmaSolver};
pub use recon::minmod;
pub use run::{
    breakdown_detector, cfl_dt, dod_check, run, BreakdownCriterion, BreakdownEvent, BreakdownThresholds, DiagnosticsSeries,
    RadialSystem, RunConfig, Sample,
};
