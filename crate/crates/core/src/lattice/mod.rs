//! Exact solution of the lattice bipartitioning quench.

pub mod dicke;
pub mod evolve;
pub mod hydro;
pub mod quench;

pub use dicke::{dicke_correlations, DickeCell};
pub use evolve::{
    evolve_density, evolve_domain_wall, evolve_full, evolve_full_dense, fitted_slope,
    least_squares_slope, particle_number_right, propagator, slope_fit_times,
    transferred_particles, DensityProfile,
};
pub use hydro::{hydro_density, hydro_slope};
pub use quench::{
    correlated_domain_wall, domain_wall_matrix, BandCoefficients, CorrelationMatrix,
    LatticeQuench,
};
