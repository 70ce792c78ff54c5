//! One-state verification run bundling every oracle.

use serde::Serialize;
use std::collections::BTreeMap;

use super::fd::{ground_state_vector, hyperboloid_levels, sphere_levels, FdGrid};
use super::integrals::{coordinate_extent, node_count, normalization_integral, overlap};
use super::residual::{ode_residual, ode_residual_extrapolated};
use crate::specfun::LogValue;
use crate::wavefunctions::{ln_sinh, log_radial};
use crate::model::{self, Geometry, ModelParams, QuantumState};
use crate::{Error, Result};

/// FD tolerance for regular endpoints (`L + (D−1)/2 ≥ 3/2`).
pub const FD_TOL_REGULAR: f64 = 1e-6;
/// FD tolerance for the remaining endpoint exponents.
pub const FD_TOL_SINGULAR: f64 = 1e-4;
pub const NORM_TOL: f64 = 1e-9;
pub const ORTHO_TOL: f64 = 1e-9;
pub const RESIDUAL_TOL: f64 = 1e-5;
/// Allowed `1 − cos` between the FD and analytic ground states.
pub const EIGENVECTOR_COSINE_GAP: f64 = 1e-6;
/// Distance kept from the coordinate endpoints by the residual window.
pub const RESIDUAL_MARGIN: f64 = 0.2;
/// Allowed shift of a hyperboloid level when `ρ_max` grows by 25%.
pub const TRUNCATION_SHIFT_TOL: f64 = 1e-8;

/// FD tolerance for the `L` channel given its endpoint exponent `L + (D−1)/2`.
pub fn fd_tolerance(params: &ModelParams, l: u32) -> f64 {
    if f64::from(l) + (f64::from(params.dim()) - 1.0) / 2.0 >= 1.5 {
        FD_TOL_REGULAR
    } else {
        FD_TOL_SINGULAR
    }
}

/// Default coarse cell counts of the FD run.
pub const SPHERE_FD_POINTS: usize = 2000;
pub const HYPERBOLOID_FD_POINTS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyOptions {
    /// Coarse FD cell count; `None` picks the geometry default.
    pub fd_points: Option<usize>,
    pub residual_step: f64,
    pub node_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { fd_points: None, residual_step: 1e-3, node_points: 4000 }
    }
}

impl VerifyOptions {
    pub fn fd_points_for(&self, geometry: Geometry) -> usize {
        self.fd_points.unwrap_or(match geometry {
            Geometry::Sphere => SPHERE_FD_POINTS,
            Geometry::Hyperboloid => HYPERBOLOID_FD_POINTS,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn relative(label: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        let error = (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE);
        Check { label: label.into(), value, reference, error, tolerance, pass: error <= tolerance }
    }

    fn absolute(label: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        let error = (value - reference).abs();
        Check { label: label.into(), value, reference, error, tolerance, pass: error <= tolerance }
    }

    fn below(label: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check { label: label.into(), value, reference: 0.0, error: value, tolerance, pass: value < tolerance }
    }
}

/// Everything the oracles measured for one state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub params: ModelParams,
    pub state: QuantumState,
    /// FD ε estimates of the channel on the refined grid, ascending.
    pub eigenvalues: Vec<f64>,
    pub extrapolated: Vec<f64>,
    pub quadratures: BTreeMap<String, f64>,
    pub residuals: BTreeMap<String, f64>,
    pub grid_meta: Vec<FdGrid>,
    pub checks: Vec<Check>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Residual grid with spacing `step` on a smooth interior window.
fn residual_grid(params: &ModelParams, state: QuantumState, step: f64) -> Result<FdGrid> {
    let (a, b) = match params.geometry() {
        Geometry::Sphere => (RESIDUAL_MARGIN, std::f64::consts::PI - RESIDUAL_MARGIN),
        Geometry::Hyperboloid => (RESIDUAL_MARGIN, coordinate_extent(params, state)?.min(12.0)),
    };
    let points = ((b - a) / step).round().max(16.0) as usize;
    FdGrid::uniform(a, a + points as f64 * step, points)
}

/// Cosine between the FD ground state of channel `L` and the analytic `Z`
/// in the discrete `L²` inner product of the grid cells.
pub fn ground_state_cosine(params: &ModelParams, l: u32, grid: &FdGrid) -> Result<f64> {
    let (centres, z_fd) = ground_state_vector(params, l, grid)?;
    let faces = grid.faces();
    let half_d1 = (f64::from(params.dim()) - 1.0) / 2.0;
    let ground = QuantumState::new(0, l);
    let (mut dot, mut nn_fd, mut nn_an) = (0.0, 0.0, 0.0);
    for ((&x, &zf), w) in centres.iter().zip(&z_fd).zip(faces.windows(2)) {
        let coordinate = 2.0 * x;
        let ln_jacobian = match params.geometry() {
            Geometry::Sphere => coordinate.sin().ln(),
            Geometry::Hyperboloid => ln_sinh(coordinate),
        };
        let za = (log_radial(params, ground, coordinate)? * LogValue::from_ln(half_d1 * ln_jacobian)).value();
        let width = w[1] - w[0];
        dot += width * zf * za;
        nn_fd += width * zf * zf;
        nn_an += width * za * za;
    }
    Ok(dot.abs() / (nn_fd * nn_an).sqrt())
}

/// Runs the FD, quadrature, residual and node-count oracles on one state.
pub fn verify_state(params: &ModelParams, state: QuantumState, options: &VerifyOptions) -> Result<OracleReport> {
    let analytic = model::energy(params, state)?;
    let mut checks = Vec::new();
    let mut quadratures = BTreeMap::new();
    let mut residuals = BTreeMap::new();
    let mut grid_meta = Vec::new();

    let points = options.fd_points_for(params.geometry());
    let levels = match params.geometry() {
        Geometry::Sphere => sphere_levels(params, state.l, state.n_r as usize + 1, points)?,
        Geometry::Hyperboloid => hyperboloid_levels(params, state.l, points, TRUNCATION_SHIFT_TOL)?
            .ok_or(Error::NotBound { n_r: state.n_r, l: state.l, nu: analytic.nu })?,
    };
    let mut g = levels.grid;
    for _ in &levels.sequence {
        grid_meta.push(g);
        g = g.refined();
    }
    let fd_value = levels.extrapolated.get(state.n_r as usize).copied().unwrap_or(f64::NAN);
    checks.push(Check::relative("fd_epsilon", fd_value, analytic.epsilon, fd_tolerance(params, state.l)));

    if params.geometry() == Geometry::Hyperboloid {
        let expected = model::bound_state_max(params, state.l)?.map_or(0, |m| m as usize + 1);
        checks.push(Check::absolute("fd_bound_count", levels.finest().len() as f64, expected as f64, 0.0));
    }

    let norm = normalization_integral(params, state)?;
    quadratures.insert("normalization".to_string(), norm);
    checks.push(Check::absolute("normalization", norm, 1.0, NORM_TOL));

    let neighbours = [state.n_r.checked_sub(1), Some(state.n_r + 1)];
    for other in neighbours.into_iter().flatten().map(|n| QuantumState::new(n, state.l)) {
        if !model::is_bound(params, other) {
            continue;
        }
        let label = format!("overlap_nr{}", other.n_r);
        let value = overlap(params, state, other)?;
        quadratures.insert(label.clone(), value);
        checks.push(Check::below(label, value.abs(), ORTHO_TOL));
    }

    let grid = residual_grid(params, state, options.residual_step)?;
    residuals.insert("ode".to_string(), ode_residual(params, state, &grid)?);
    let residual = ode_residual_extrapolated(params, state, &grid)?;
    residuals.insert("ode_extrapolated".to_string(), residual);
    checks.push(Check::below("ode_residual", residual, RESIDUAL_TOL));

    let cosine = ground_state_cosine(params, state.l, &levels.grid.refined())?;
    checks.push(Check::absolute("eigenvector_cosine", cosine, 1.0, EIGENVECTOR_COSINE_GAP));

    let nodes = node_count(params, state, options.node_points)?;
    checks.push(Check::absolute("node_count", nodes as f64, f64::from(state.n_r), 0.0));

    Ok(OracleReport {
        params: *params,
        state,
        eigenvalues: levels.finest().to_vec(),
        extrapolated: levels.extrapolated,
        quadratures,
        residuals,
        grid_meta,
        checks,
    })
}
