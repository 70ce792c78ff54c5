//! Residual of the quasiradial ODE for the analytic eigenfunctions.

use super::fd::{FdGrid, GridMapping};
use crate::model::{self, Geometry, ModelParams, QuantumState};
use crate::wavefunctions::radial;
use crate::{Error, Result};

/// Max over the centres of `grid` of the central-difference residual of
/// `R'' + (D−1) cot χ R' + [2r₀²E − L(L+D−2)/sin²χ − 4ω²r₀⁴ tan²(χ/2)] R`
/// (hyperbolic functions on the hyperboloid), divided by `max |R|` on the grid.
pub fn ode_residual(params: &ModelParams, state: QuantumState, grid: &FdGrid) -> Result<f64> {
    let energy = model::energy(params, state)?.energy;
    ode_residual_with_energy(params, state, energy, grid)
}

/// [`ode_residual`] with an arbitrary trial energy.
pub fn ode_residual_with_energy(params: &ModelParams, state: QuantumState, energy: f64, grid: &FdGrid) -> Result<f64> {
    let h = check_grid(params, grid)?;
    max_scaled(params, state, grid, |x| pointwise(params, state, energy, x, h))
}

/// Richardson combination `(4 r_{h/2} − r_h)/3` of the pointwise residuals
/// before taking the max. The O(h²) truncation cancels; an energy error does not.
pub fn ode_residual_extrapolated(params: &ModelParams, state: QuantumState, grid: &FdGrid) -> Result<f64> {
    let energy = model::energy(params, state)?.energy;
    ode_residual_extrapolated_with_energy(params, state, energy, grid)
}

pub fn ode_residual_extrapolated_with_energy(
    params: &ModelParams,
    state: QuantumState,
    energy: f64,
    grid: &FdGrid,
) -> Result<f64> {
    let h = check_grid(params, grid)?;
    max_scaled(params, state, grid, |x| {
        let coarse = pointwise(params, state, energy, x, h)?;
        let fine = pointwise(params, state, energy, x, h / 2.0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    })
}

fn check_grid(params: &ModelParams, grid: &FdGrid) -> Result<f64> {
    if grid.mapping != GridMapping::Uniform {
        return Err(Error::domain("ODE residual needs a uniform grid"));
    }
    let h = grid.spacing();
    let (a, b) = grid.interval;
    let upper = match params.geometry() {
        Geometry::Sphere => std::f64::consts::PI,
        Geometry::Hyperboloid => f64::INFINITY,
    };
    if a - h <= 0.0 || b + h >= upper {
        return Err(Error::domain(format!("residual stencil leaves the open domain on [{a}, {b}]")));
    }
    Ok(h)
}

fn max_scaled<F: Fn(f64) -> Result<f64>>(params: &ModelParams, state: QuantumState, grid: &FdGrid, res: F) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut peak = 0.0f64;
    for x in grid.centres() {
        worst = worst.max(res(x)?.abs());
        peak = peak.max(radial(params, state, x)?.abs());
    }
    if !(peak > 0.0) {
        return Err(Error::Numerical("wavefunction vanishes on the residual grid".into()));
    }
    Ok(worst / peak)
}

/// Central-difference residual at `x` with step `h`.
fn pointwise(params: &ModelParams, state: QuantumState, energy: f64, x: f64, h: f64) -> Result<f64> {
    let d1 = f64::from(params.dim()) - 1.0;
    let l = f64::from(state.l);
    let centrifugal = l * (l + d1 - 1.0);
    let r0 = params.radius();
    let two_r0_sq_e = 2.0 * r0 * r0 * energy;
    let well = 4.0 * params.omega() * params.omega() * r0.powi(4);
    let (rm, r, rp) = (radial(params, state, x - h)?, radial(params, state, x)?, radial(params, state, x + h)?);
    let (coth, inv_s2, pot) = match params.geometry() {
        Geometry::Sphere => {
            let t = (x / 2.0).tan();
            (1.0 / x.tan(), 1.0 / x.sin().powi(2), t * t)
        }
        Geometry::Hyperboloid => {
            let t = (x / 2.0).tanh();
            (1.0 / x.tanh(), 1.0 / x.sinh().powi(2), t * t)
        }
    };
    let second = (rp - 2.0 * r + rm) / (h * h);
    let first = (rp - rm) / (2.0 * h);
    Ok(second + d1 * coth * first + (two_r0_sq_e - centrifugal * inv_s2 - well * pot) * r)
}
