//! Special functions and quadrature shared by the lattice and continuum solvers.

pub mod bessel;
pub mod kernel;
pub mod quadrature;

pub use bessel::{bessel_j, bessel_row, bessel_uniform_asymptotic, BesselRow};
pub use kernel::{discrete_bessel_kernel, DiscreteBesselKernel};
pub use quadrature::{gauss_legendre, integrate_adaptive, AdaptiveOptions, QuadratureRule};
