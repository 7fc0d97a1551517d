//! Spherically symmetric electron fluid over a static, neutralizing ion
//! background: the initial electric field, the conserved energy and mass,
//! the radial momentum and its forced-oscillator identity, and an
//! explicit-constant certificate that large enough initial velocity forces
//! breakdown.

mod background;
mod certificate;
mod data;
mod functionals;

pub use background::{plasma_frequency, PlasmaBackground};
pub use certificate::{
    alpha_beta, certify_blowup, lambda_candidates, scan_lambda, BlowupCertificate, LambdaScan, Verdict,
};
pub use data::{
    check_neutrality, initial_field, make_plasma_data, EntropyBump, NeutralDensity, PlasmaFamily, RadialPlasmaData,
};
pub use functionals::{
    energy_script, field_moment, g_function, kinetic_moment, mass_m, momentum_q, ode_response, PlasmaSnapshot,
};
