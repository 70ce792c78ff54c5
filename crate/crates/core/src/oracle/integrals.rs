//! Normalization integrals, overlaps and node counting for the analytic
//! eigenfunctions.

use std::f64::consts::{FRAC_PI_2, PI};

use super::fd::FdGrid;
use super::quadrature::{geometric_breaks, integrate_pieces};
use crate::model::{self, Geometry, ModelParams, QuantumState};
use crate::specfun::LogValue;
use crate::wavefunctions::{log_measure_weight, log_radial, radial, radial_flat, RadialKind};
use crate::{Error, Result};

/// Relative change allowed when panels (or the truncation point) are doubled.
pub const QUADRATURE_TOL: f64 = 1e-12;

/// Integration range that holds the whole state: `π` on the sphere, and on
/// the hyperboloid a `τ_max` past which the `e^(−κτ)` density is below
/// `e^(−40)`, with `κ = ν − N − D/2`.
pub fn coordinate_extent(params: &ModelParams, state: QuantumState) -> Result<f64> {
    match params.geometry() {
        Geometry::Sphere => Ok(PI),
        Geometry::Hyperboloid => {
            let kappa = model::binding_margin(params, state);
            if !(kappa > 0.0) {
                return Err(Error::NotBound { n_r: state.n_r, l: state.l, nu: model::nu(params, state.l) });
            }
            Ok((40.0 / kappa).max(20.0))
        }
    }
}

fn curved_breaks(params: &ModelParams, extent: f64) -> Vec<f64> {
    match params.geometry() {
        Geometry::Sphere => vec![0.0, FRAC_PI_2, PI],
        Geometry::Hyperboloid => geometric_breaks(extent),
    }
}

/// Integral of `f · weight`, with the product formed in log space so that
/// overflowing `sinh^(D−1)` meets underflowing `R²` safely.
fn curved_integral<F: Fn(f64) -> Result<LogValue>>(params: &ModelParams, extent: f64, f: F) -> Result<f64> {
    let kind = RadialKind::for_geometry(params.geometry());
    let integrand = |x: f64| f(x).map(|v| (v * log_measure_weight(params, kind, x)).value()).unwrap_or(f64::NAN);
    let value = integrate_pieces(integrand, &curved_breaks(params, extent), QUADRATURE_TOL, 1.0)?;
    if params.geometry() == Geometry::Hyperboloid {
        let longer = integrate_pieces(integrand, &curved_breaks(params, 2.0 * extent), QUADRATURE_TOL, 1.0)?;
        if (longer - value).abs() > QUADRATURE_TOL * value.abs().max(1.0) {
            return Err(Error::Accuracy(format!(
                "doubling tau_max from {extent} moved the integral {value} -> {longer}"
            )));
        }
    }
    Ok(value)
}

/// `r₀ᴰ ∫ |R|² (sin χ or sinh τ)^(D−1)` by quadrature.
pub fn normalization_integral(params: &ModelParams, state: QuantumState) -> Result<f64> {
    let extent = coordinate_extent(params, state)?;
    curved_integral(params, extent, |x| log_radial(params, state, x).map(|r| r * r))
}

/// `⟨R₁, R₂⟩` under the normalization measure.
pub fn overlap(params: &ModelParams, first: QuantumState, second: QuantumState) -> Result<f64> {
    let extent = coordinate_extent(params, first)?.max(coordinate_extent(params, second)?);
    curved_integral(params, extent, |x| Ok(log_radial(params, first, x)? * log_radial(params, second, x)?))
}

/// Radius past which the flat density `r^(2L+D−1) e^(−ωr²) poly²` is negligible.
pub fn flat_r_max(dim: u32, omega: f64, state: QuantumState) -> f64 {
    ((50.0 + 4.0 * f64::from(state.principal() + dim)) / omega).sqrt()
}

/// `∫ R² r^(D−1) dr` for the flat oscillator function.
pub fn flat_normalization_integral(dim: u32, omega: f64, state: QuantumState) -> Result<f64> {
    // Surface parameter errors before they turn into NaN samples.
    radial_flat(dim, omega, state, 0.0)?;
    let r_max = flat_r_max(dim, omega, state);
    let d1 = f64::from(dim) - 1.0;
    let integrand = |r: f64| radial_flat(dim, omega, state, r).map_or(f64::NAN, |v| v * v * r.powf(d1));
    let breaks: Vec<f64> = [0.0, 0.125, 0.25, 0.5, 1.0].iter().map(|t| t * r_max).collect();
    integrate_pieces(integrand, &breaks, QUADRATURE_TOL, 1.0)
}

/// Sign changes along a sequence, skipping exact zeros.
pub fn sign_changes(values: &[f64]) -> usize {
    let mut last = 0.0f64;
    let mut changes = 0;
    for &v in values {
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// Roots of `f` bracketed by sign changes on `grid`, refined by bisection.
pub fn locate_nodes<F: Fn(f64) -> Result<f64>>(f: F, grid: &[f64]) -> Result<Vec<f64>> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect::<Result<_>>()?;
    let mut nodes = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (&x, &v) in grid.iter().zip(&values) {
        if v == 0.0 {
            continue;
        }
        if let Some((px, pv)) = prev {
            if (pv > 0.0) != (v > 0.0) {
                let (mut lo, mut hi, lo_positive) = (px, x, pv > 0.0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    let fm = f(mid)?;
                    if fm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if (fm > 0.0) == lo_positive {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                nodes.push(0.5 * (lo + hi));
            }
        }
        prev = Some((x, v));
    }
    Ok(nodes)
}

/// Interior nodes of the analytic eigenfunction on a dense grid of the open
/// interval (`points` cells; stretched towards the origin on the hyperboloid).
pub fn node_count(params: &ModelParams, state: QuantumState, points: usize) -> Result<usize> {
    let extent = coordinate_extent(params, state)?;
    let grid = match params.geometry() {
        Geometry::Sphere => FdGrid::uniform(0.0, extent, points)?,
        Geometry::Hyperboloid => FdGrid::stretched(0.0, extent, points, 1.0)?,
    };
    Ok(locate_nodes(|x| radial(params, state, x), &grid.centres())?.len())
}
