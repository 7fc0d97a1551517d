//! Relativistic perfect fluid on a quiet background: the energy tensor,
//! the perturbation energy `E` and radial momentum `Q`, the largeness
//! conditions on radial initial data, the resulting bound on the
//! life-span of a `C¹` solution, and a constructive small-background
//! family of data satisfying every condition.

mod background;
mod conditions;
mod data;
mod functionals;
mod hyperbolic;
mod tensor;

pub use background::QuietBackground;
pub use conditions::{
    bound_integral, bound_integral_between, breakdown_time_bound, certify_fluid, check_conditions,
    evaluate_nbar, f_bound, find_blowup_nbar, nbar_candidates, BreakdownBound, ConditionReport, FluidCertificate, NbarScan,
};
pub use data::{make_initial_data, BalancedDensity, DataFamily, MomentumBump, RadialFluidData, RadialShape};
pub use functionals::{kinetic_integral, q_prime_integrand, radial_momentum, total_energy, FluidSnapshot};
pub use hyperbolic::{background_hyperbolic_matrices, HyperbolicMatrices};
pub use tensor::{stress_energy, StressEnergy};
