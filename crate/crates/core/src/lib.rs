//! Finite-time breakdown certificates for classical solutions of the 3-D
//! relativistic Euler equations (quiet background, compactly supported
//! perturbation) and of the spherically symmetric Euler–Maxwell electron
//! fluid over a constant ion background.
//!
//! The crate has two halves:
//!
//! * certification: averaged functionals (total perturbation energy, radial
//!   momentum), the largeness conditions on the initial data and the
//!   resulting upper bounds on the life-span of a `C¹` solution;
//! * a radial finite-volume witness that integrates both systems, records
//!   the same functionals along the run and detects gradient catastrophe.
//!
//! Everything here is `no_std` (with `alloc`). File formats, configuration
//! and the command line live in the `blowup` companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod eos;
pub mod grid;
pub(crate) mod math;
pub mod numerics;
pub mod plasma;
pub mod relfluid;
pub mod solver;

pub use eos::{AssumptionReport, PolytropicEos, ThermoState};
pub use error::{Error, Result};
pub use grid::{NodeGrid, Quadrature};
