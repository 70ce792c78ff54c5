//! Independent numerical checks of the closed forms.

mod fd;
mod integrals;
mod quadrature;
mod report;
mod residual;
mod tridiagonal;

pub use fd::{
    build_matrix, extrapolated_levels, fd_bound_count, fd_eigenvalues, ground_state_vector, hyperboloid_grid,
    hyperboloid_levels, hyperboloid_rho_max, pt_effective_potential, richardson_extrapolate, sphere_grid,
    sphere_levels, ExtrapolatedLevels, FdGrid, GridMapping, CONTINUUM_EDGE, HYPERBOLOID_REFINEMENTS, HYPERBOLOID_STRETCH, MIN_POINTS,
    SPHERE_REFINEMENTS,
};
pub use integrals::{
    coordinate_extent, flat_normalization_integral, flat_r_max, locate_nodes, node_count, normalization_integral,
    overlap, sign_changes, QUADRATURE_TOL,
};
pub use quadrature::{gauss_legendre, geometric_breaks, integrate, integrate_pieces, MAX_PANELS};
pub use report::{
    fd_tolerance, ground_state_cosine, verify_state, Check, OracleReport, VerifyOptions, EIGENVECTOR_COSINE_GAP, FD_TOL_REGULAR,
    FD_TOL_SINGULAR, HYPERBOLOID_FD_POINTS, NORM_TOL, ORTHO_TOL, RESIDUAL_MARGIN, RESIDUAL_TOL, SPHERE_FD_POINTS, TRUNCATION_SHIFT_TOL,
};
pub use residual::{
    ode_residual, ode_residual_extrapolated, ode_residual_extrapolated_with_energy, ode_residual_with_energy,
};
pub use tridiagonal::SymTridiagonal;
