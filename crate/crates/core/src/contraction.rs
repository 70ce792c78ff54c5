//! The flat-space limit `r₀ → ∞` at fixed `ω`.
//!
//! Energies are compared with `ω(N + D/2)`, and wavefunctions with the flat
//! oscillator through `χ = r/r₀` (or `τ = r/r₀`) in the flat measure
//! `r^(D−1) dr`.

use serde::Serialize;

use crate::model::{self, Geometry, ModelParams, QuantumState};
use crate::oracle::{flat_r_max, gauss_legendre};
use crate::par::Execution;
use crate::wavefunctions::{radial, radial_flat};
use crate::{Error, Result};

/// Default number of quadrature nodes for the `L²` distance.
pub const DEFAULT_GRID_POINTS: usize = 4096;
/// Gauss-Legendre order of each panel of the distance quadrature.
const PANEL_ORDER: usize = 16;
/// Largest flat density at `r_max`, relative to its peak, accepted as "no tail".
pub const TAIL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionStudy {
    pub geometry: Geometry,
    pub dim: u32,
    pub omega: f64,
    pub state: QuantumState,
    pub radii: Vec<f64>,
    /// `E(r₀)` along the radii.
    pub energies: Vec<f64>,
    /// `|E(r₀) − ω(N + D/2)|`.
    pub energy_errors: Vec<f64>,
    /// `L²` distances to the flat function; empty for an energy-only study.
    pub l2_errors: Vec<f64>,
    /// Largest bound `n_r` in the state's channel; filled on the hyperboloid.
    pub bound_state_max: Vec<Option<u32>>,
}

impl ContractionStudy {
    /// `ω(N + D/2)`.
    pub fn flat_energy(&self) -> f64 {
        flat_energy(self.dim, self.omega, self.state)
    }

    /// Least-squares slope of `ln(energy error)` against `ln r₀`. `None` when
    /// an error is exactly zero, as for the D=2 ground state.
    pub fn energy_slope(&self) -> Option<f64> {
        loglog_slope(&self.radii, &self.energy_errors)
    }

    pub fn l2_slope(&self) -> Option<f64> {
        loglog_slope(&self.radii, &self.l2_errors)
    }
}

pub fn flat_energy(dim: u32, omega: f64, state: QuantumState) -> f64 {
    omega * (f64::from(state.principal()) + f64::from(dim) / 2.0)
}

/// Least-squares slope of `ln y` on `ln x`; needs two points and `y > 0`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 || y.iter().chain(x).any(|&v| !(v > 0.0 && v.is_finite())) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    Some(sxy / sxx)
}

/// `|ν/(4ωr₀²) − 1|` and its first-order bound `1.1·λ²/(32ω²r₀⁴)`.
pub fn nu_asymptotic_gap(params: &ModelParams, l: u32) -> (f64, f64) {
    let r0 = params.radius();
    let w = params.omega();
    let lam = params.centrifugal_index(l);
    let gap = (model::nu(params, l) / (4.0 * w * r0 * r0) - 1.0).abs();
    (gap, 1.1 * lam * lam / (2.0 * 16.0 * w * w * r0.powi(4)))
}

fn validate(dim: u32, omega: f64, radii: &[f64]) -> Result<()> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("contraction needs finite omega > 0, got {omega}")));
    }
    if radii.is_empty() {
        return Err(Error::domain("no radii given"));
    }
    if let Some(w) = radii.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::domain(format!("radii must increase strictly ({} then {})", w[0], w[1])));
    }
    // The model constructor checks each radius and the dimension.
    ModelParams::sphere(dim, radii[0], omega).map(|_| ())
}

/// Energies and bound-state bookkeeping along `radii`.
pub fn energy_contraction(
    geometry: Geometry,
    dim: u32,
    omega: f64,
    state: QuantumState,
    radii: &[f64],
    exec: Execution,
) -> Result<ContractionStudy> {
    validate(dim, omega, radii)?;
    let limit = flat_energy(dim, omega, state);
    let rows = exec.try_map(radii, |&r0| -> Result<(f64, Option<u32>)> {
        let params = ModelParams::new(geometry, dim, r0, omega)?;
        let e = model::energy(&params, state)?.energy;
        let max = match geometry {
            Geometry::Sphere => None,
            Geometry::Hyperboloid => model::bound_state_max(&params, state.l)?,
        };
        Ok((e, max))
    })?;
    let energies: Vec<f64> = rows.iter().map(|r| r.0).collect();
    Ok(ContractionStudy {
        geometry,
        dim,
        omega,
        state,
        radii: radii.to_vec(),
        energy_errors: energies.iter().map(|e| (e - limit).abs()).collect(),
        energies,
        l2_errors: Vec::new(),
        bound_state_max: match geometry {
            Geometry::Sphere => Vec::new(),
            Geometry::Hyperboloid => rows.iter().map(|r| r.1).collect(),
        },
    })
}

/// `√(∫₀^r_max (R_curved(r/r₀) − R_flat(r))² r^(D−1) dr)`, by composite
/// Gauss-Legendre with about `grid_points` nodes.
pub fn l2_distance(params: &ModelParams, state: QuantumState, r_max: f64, grid_points: usize) -> Result<f64> {
    let r0 = params.radius();
    if params.geometry() == Geometry::Sphere && r_max / r0 > std::f64::consts::PI {
        return Err(Error::domain(format!("r_max = {r_max} runs past the antipode at pi r0 = {}", std::f64::consts::PI * r0)));
    }
    let (dim, omega) = (params.dim(), params.omega());
    check_tail(dim, omega, state, r_max)?;
    let d1 = f64::from(dim) - 1.0;
    let integrand = |r: f64| match (radial(params, state, r / r0), radial_flat(dim, omega, state, r)) {
        (Ok(c), Ok(f)) => (c - f).powi(2) * r.powf(d1),
        _ => f64::NAN,
    };
    let panels = grid_points.div_ceil(PANEL_ORDER).max(1);
    let squared = gauss_legendre(integrand, 0.0, r_max, panels, PANEL_ORDER)
        .map_err(|e| Error::Accuracy(format!("curved wavefunction not finite on [0, {r_max}] at r0 = {r0}: {e}")))?;
    Ok(squared.max(0.0).sqrt())
}

/// The flat density at `r_max` must be below [`TAIL_TOL`] of its peak.
fn check_tail(dim: u32, omega: f64, state: QuantumState, r_max: f64) -> Result<()> {
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::domain(format!("r_max must be finite and > 0, got {r_max}")));
    }
    let d1 = f64::from(dim) - 1.0;
    let density = |r: f64| radial_flat(dim, omega, state, r).map(|v| v * v * r.powf(d1));
    let samples = 512;
    let mut peak = 0.0f64;
    for i in 1..=samples {
        peak = peak.max(density(r_max * i as f64 / samples as f64)?);
    }
    let tail = density(r_max)?;
    if !(tail <= TAIL_TOL * peak) {
        return Err(Error::domain(format!("flat density at r_max = {r_max} is {:e} of its peak", tail / peak)));
    }
    Ok(())
}

/// Energy study plus the `L²` distances. `r_max = None` uses the flat
/// function's own support radius.
#[allow(clippy::too_many_arguments)]
pub fn wavefunction_contraction(
    geometry: Geometry,
    dim: u32,
    omega: f64,
    state: QuantumState,
    radii: &[f64],
    r_max: Option<f64>,
    grid_points: usize,
    exec: Execution,
) -> Result<ContractionStudy> {
    let mut study = energy_contraction(geometry, dim, omega, state, radii, exec)?;
    let r_max = r_max.unwrap_or_else(|| flat_r_max(dim, omega, state));
    study.l2_errors = exec.try_map(radii, |&r0| {
        let params = ModelParams::new(geometry, dim, r0, omega)?;
        l2_distance(&params, state, r_max, grid_points)
    })?;
    Ok(study)
}
