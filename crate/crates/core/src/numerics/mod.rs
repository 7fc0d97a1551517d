//! Shared numerical kernels: quadrature, bracketed roots, the sine
//! convolution of the forced oscillator, finite differences and a small
//! symmetric eigensolver.

mod conv;
mod diff;
mod eigen;
mod quad;
mod root;

pub use conv::{convolve_sin, cumulative_trapezoid};
pub use diff::{central_diff4, second_divided_differences};
pub use eigen::{sym_eigen, SymMatrix};
pub use quad::{
    gauss_kronrod, quad_adaptive, quad_improper, quad_profile, QuadratureSpec, TailPolicy,
};
pub use root::root_bracketed;
