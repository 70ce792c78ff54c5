//! Finite-volume eigensolver for the Pöschl-Teller forms of the quasiradial
//! equation.
//!
//! With `λ = L + (D−2)/2` the operator is
//! `−Z'' + [(ν²−¼)/cos²ξ + (λ²−¼)/sin²ξ] Z = ε Z` on `ξ ∈ (0, π/2)` for the
//! sphere and `−Z'' + [−(ν²−¼)/cosh²ρ + (λ²−¼)/sinh²ρ] Z = ε Z` on
//! `ρ ∈ (0, ∞)` for the hyperboloid. Near the origin `Z ~ x^(λ+½)`, which is
//! too singular for plain three-point differences when `λ + ½ < 3/2`. The
//! solver therefore writes `Z = g u` with `g = sin^a ξ` (sphere) or
//! `g = tanh^a ρ` (hyperboloid), `a = λ + ½`, which turns the operator into
//! `−g⁻²(g² u')' + W u` with a regular `W`, and discretizes the flux form
//! with cell-centred finite volumes. The symmetrized matrix is tridiagonal
//! and its eigenvector is `Z` itself at the cell centres.

use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

use super::tridiagonal::SymTridiagonal;
use crate::model::{self, Geometry, ModelParams};
use crate::{Error, Result};

/// Smallest admissible cell count.
pub const MIN_POINTS: usize = 16;

/// Continuum edge of the hyperboloid problem in ε units.
pub const CONTINUUM_EDGE: f64 = 0.0;

/// Relative amplitude below which the wavefunction is treated as zero when
/// placing the inner cut and the outer truncation.
const NEGLIGIBLE: f64 = 1e-12;

/// Safety factor applied to the outer truncation radius.
const TRUNCATION_SAFETY: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum GridMapping {
    Uniform,
    /// `x = a + scale · sinh(s)`: fine near `a`, geometric far out.
    SinhStretch { scale: f64 },
}

/// Cell-centred grid on `[a, b]`: zero-flux face at `a`, Dirichlet face at `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FdGrid {
    pub interval: (f64, f64),
    pub points: usize,
    pub mapping: GridMapping,
}

impl FdGrid {
    pub fn uniform(a: f64, b: f64, points: usize) -> Result<Self> {
        Self::new(a, b, points, GridMapping::Uniform)
    }

    pub fn stretched(a: f64, b: f64, points: usize, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(format!("stretch scale must be > 0, got {scale}")));
        }
        Self::new(a, b, points, GridMapping::SinhStretch { scale })
    }

    fn new(a: f64, b: f64, points: usize, mapping: GridMapping) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::domain(format!("grid interval must satisfy a < b, got [{a}, {b}]")));
        }
        if points < MIN_POINTS {
            return Err(Error::domain(format!("grid needs at least {MIN_POINTS} points, got {points}")));
        }
        Ok(FdGrid { interval: (a, b), points, mapping })
    }

    fn span(&self) -> f64 {
        let (a, b) = self.interval;
        match self.mapping {
            GridMapping::Uniform => b - a,
            GridMapping::SinhStretch { scale } => ((b - a) / scale).asinh(),
        }
    }

    /// Cell width in the computational coordinate.
    pub fn spacing(&self) -> f64 {
        self.span() / self.points as f64
    }

    /// Physical coordinate of computational coordinate `s`.
    pub fn map(&self, s: f64) -> f64 {
        let a = self.interval.0;
        match self.mapping {
            GridMapping::Uniform => a + s,
            GridMapping::SinhStretch { scale } => a + scale * s.sinh(),
        }
    }

    /// Cell centres.
    pub fn centres(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|i| self.map((i as f64 + 0.5) * h)).collect()
    }

    /// Cell faces, `points + 1` of them, from `a` to `b`.
    pub fn faces(&self) -> Vec<f64> {
        let h = self.spacing();
        let mut faces: Vec<f64> = (0..=self.points).map(|i| self.map(i as f64 * h)).collect();
        faces[self.points] = self.interval.1;
        faces
    }

    /// Same interval with twice the cells (half the spacing).
    pub fn refined(&self) -> Self {
        FdGrid { points: self.points * 2, ..*self }
    }

    /// Pushes the outer end out by at least `factor` while keeping the
    /// computational spacing, so the existing cells are reproduced exactly.
    pub fn extended(&self, factor: f64) -> Self {
        let (a, b) = self.interval;
        let h = self.spacing();
        let target = a + factor * (b - a);
        let span = match self.mapping {
            GridMapping::Uniform => target - a,
            GridMapping::SinhStretch { scale } => ((target - a) / scale).asinh(),
        };
        let points = (span / h).ceil() as usize;
        let end = self.map(points as f64 * h);
        FdGrid { interval: (a, end), points, mapping: self.mapping }
    }
}

/// The Pöschl-Teller potential of the `L` channel at an interior point.
pub fn pt_effective_potential(params: &ModelParams, l: u32, x: f64) -> Result<f64> {
    let nu = model::nu(params, l);
    let lam = params.centrifugal_index(l);
    let outer = nu * nu - 0.25;
    let inner = lam * lam - 0.25;
    match params.geometry() {
        Geometry::Sphere => {
            if !(x > 0.0 && x < FRAC_PI_2) {
                return Err(Error::domain(format!("xi must lie in (0, pi/2), got {x}")));
            }
            let (s, c) = x.sin_cos();
            Ok(outer / (c * c) + inner / (s * s))
        }
        Geometry::Hyperboloid => {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::domain(format!("rho must lie in (0, inf), got {x}")));
            }
            let c = x.cosh();
            let s = x.sinh();
            Ok(-outer / (c * c) + inner / (s * s))
        }
    }
}

/// `ln g(x)` and the regular potential `W(x)` of the factored operator.
fn factored(params: &ModelParams, l: u32) -> impl Fn(f64) -> (f64, f64) {
    let nu = model::nu(params, l);
    let a = params.centrifugal_index(l) + 0.5;
    let outer = nu * nu - 0.25;
    let geometry = params.geometry();
    move |x: f64| match geometry {
        Geometry::Sphere => {
            let c = x.cos();
            (a * x.sin().ln(), a * a + outer / (c * c))
        }
        Geometry::Hyperboloid => {
            let c = x.cosh();
            (a * x.tanh().ln(), (a * (a + 1.0) - outer) / (c * c))
        }
    }
}

/// Symmetric tridiagonal matrix of the factored flux form on `grid`.
pub fn build_matrix(params: &ModelParams, l: u32, grid: &FdGrid) -> Result<SymTridiagonal> {
    let op = factored(params, l);
    let centres = grid.centres();
    let faces = grid.faces();
    let n = grid.points;
    let b = grid.interval.1;

    let ln_p: Vec<f64> = centres.iter().map(|&x| 2.0 * op(x).0).collect();
    let ln_p_face = |x: f64| if x <= 0.0 { f64::NEG_INFINITY } else { 2.0 * op(x).0 };
    let widths: Vec<f64> = faces.windows(2).map(|w| w[1] - w[0]).collect();

    // Flux coefficient through face i+1/2 between centres i and i+1, and
    // through the Dirichlet face at b for the last cell.
    let mut flux = Vec::with_capacity(n);
    for i in 0..n {
        let (dist, face) = if i + 1 < n { (centres[i + 1] - centres[i], faces[i + 1]) } else { (b - centres[i], b) };
        flux.push((ln_p_face(face), dist));
    }

    let mut diagonal = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for i in 0..n {
        let mass = widths[i];
        let ratio = |ln_face: f64, dist: f64| (ln_face - ln_p[i]).exp() / (dist * mass);
        let right = ratio(flux[i].0, flux[i].1);
        // Zero-flux face at the inner end.
        let left = if i == 0 { 0.0 } else { ratio(flux[i - 1].0, flux[i - 1].1) };
        diagonal.push(left + right + op(centres[i]).1);
        if i + 1 < n {
            let (ln_face, dist) = flux[i];
            let val = (ln_face - 0.5 * (ln_p[i] + ln_p[i + 1])).exp() / (dist * (widths[i] * widths[i + 1]).sqrt());
            off.push(-val);
        }
    }
    SymTridiagonal::new(diagonal, off)
}

/// Lowest `count` FD eigenvalues (ε estimates) of the `L` channel.
///
/// On the hyperboloid only eigenvalues below the continuum edge are returned,
/// so the result is shorter than `count` when fewer bound levels exist.
pub fn fd_eigenvalues(params: &ModelParams, l: u32, grid: &FdGrid, count: usize) -> Result<Vec<f64>> {
    let matrix = build_matrix(params, l, grid)?;
    Ok(match params.geometry() {
        Geometry::Sphere => matrix.lowest_eigenvalues(count),
        Geometry::Hyperboloid => matrix.eigenvalues_below(CONTINUUM_EDGE, count),
    })
}

/// Number of FD eigenvalues below the continuum edge.
pub fn fd_bound_count(params: &ModelParams, l: u32, grid: &FdGrid) -> Result<usize> {
    Ok(build_matrix(params, l, grid)?.sturm_count(CONTINUUM_EDGE))
}

/// Eliminates the leading `h^order` error term from values on grids `h` and `h/2`.
pub fn richardson_extrapolate(value_h: f64, value_h2: f64, order: u32) -> f64 {
    let factor = 2f64.powi(order as i32);
    (factor * value_h2 - value_h) / (factor - 1.0)
}

/// Inner cut below which `Z ~ x^a` is negligible: `x_t · NEGLIGIBLE^(3/a)`
/// where `x_t` lower-bounds the classical turning point.
fn inner_cut(params: &ModelParams, l: u32, eps_scale: f64) -> f64 {
    let lam = params.centrifugal_index(l);
    let a = lam + 0.5;
    let nu = model::nu(params, l);
    let barrier = (lam * lam - 0.25).max(0.0);
    if barrier == 0.0 {
        return 0.0;
    }
    let turning = (barrier / (nu * nu + eps_scale.abs())).sqrt();
    turning * NEGLIGIBLE.powf(3.0 / a)
}

/// Grid for the sphere channel: uniform on `[cut, π/2]`.
pub fn sphere_grid(params: &ModelParams, l: u32, count: usize, points: usize) -> Result<FdGrid> {
    let top = model::nu(params, l) + f64::from(l) + params.half_dim() + 2.0 * count as f64;
    FdGrid::uniform(inner_cut(params, l, top * top), FRAC_PI_2, points)
}

/// Outer truncation for a hyperboloid level `ε_target < 0`: both the
/// `1/cosh²` well and the `e^(−√|ε| ρ)` tail must drop below
/// [`NEGLIGIBLE`], then a safety factor is applied.
pub fn hyperboloid_rho_max(params: &ModelParams, l: u32, eps_target: f64) -> f64 {
    let nu = model::nu(params, l);
    let depth = (nu * nu - 0.25).abs().max(1.0);
    let eps = eps_target.abs().max(f64::MIN_POSITIVE);
    let well = 0.5 * (4.0 * depth / (NEGLIGIBLE * eps)).ln();
    let tail = -NEGLIGIBLE.ln() / eps.sqrt();
    TRUNCATION_SAFETY * well.max(tail).max(1.0)
}

/// Stretch scale of the hyperboloid grid.
pub const HYPERBOLOID_STRETCH: f64 = 4.0;

/// Grid for the hyperboloid channel, sized for its shallowest target level.
pub fn hyperboloid_grid(params: &ModelParams, l: u32, eps_shallowest: f64, eps_deepest: f64, points: usize) -> Result<FdGrid> {
    let cut = inner_cut(params, l, eps_deepest);
    let end = cut + hyperboloid_rho_max(params, l, eps_shallowest);
    FdGrid::stretched(cut, end, points, HYPERBOLOID_STRETCH)
}

/// Halvings of the spacing used for the sphere levels (one Richardson step).
pub const SPHERE_REFINEMENTS: u32 = 1;
/// Halvings used on the hyperboloid, where shallow levels sit far below
/// the well depth and need the extra Romberg column.
pub const HYPERBOLOID_REFINEMENTS: u32 = 2;

/// FD levels on a grid and its successive refinements, with the Romberg
/// combination of all of them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtrapolatedLevels {
    pub grid: FdGrid,
    /// Levels on `grid`, then on each halving of its spacing.
    pub sequence: Vec<Vec<f64>>,
    pub extrapolated: Vec<f64>,
}

impl ExtrapolatedLevels {
    pub fn coarse(&self) -> &[f64] {
        &self.sequence[0]
    }

    pub fn finest(&self) -> &[f64] {
        &self.sequence[self.sequence.len() - 1]
    }
}

/// Levels on `grid` and `refinements` halvings, eliminating `h², h⁴, …` in turn.
pub fn extrapolated_levels(
    params: &ModelParams,
    l: u32,
    grid: &FdGrid,
    count: usize,
    refinements: u32,
) -> Result<ExtrapolatedLevels> {
    let mut sequence = Vec::with_capacity(refinements as usize + 1);
    let mut current = *grid;
    for _ in 0..=refinements {
        sequence.push(fd_eigenvalues(params, l, &current, count)?);
        current = current.refined();
    }
    let mut column = sequence.clone();
    for order in 1..=refinements {
        column = column
            .windows(2)
            .map(|w| w[0].iter().zip(&w[1]).map(|(&c, &f)| richardson_extrapolate(c, f, 2 * order)).collect())
            .collect();
    }
    Ok(ExtrapolatedLevels { grid: *grid, sequence, extrapolated: column.swap_remove(0) })
}

/// The `count` lowest sphere levels of channel `L`, extrapolated from
/// `points` and `2·points` cells.
pub fn sphere_levels(params: &ModelParams, l: u32, count: usize, points: usize) -> Result<ExtrapolatedLevels> {
    if params.geometry() != Geometry::Sphere {
        return Err(Error::Usage("sphere_levels needs sphere params".into()));
    }
    extrapolated_levels(params, l, &sphere_grid(params, l, count, points)?, count, SPHERE_REFINEMENTS)
}

/// Hyperboloid bound levels of channel `L` with the truncation self-check:
/// extending the outer end by 25% must move every level by less than
/// `shift_tol`.
pub fn hyperboloid_levels(params: &ModelParams, l: u32, points: usize, shift_tol: f64) -> Result<Option<ExtrapolatedLevels>> {
    let Some(max_nr) = model::bound_state_max(params, l)? else {
        return Ok(None);
    };
    let nu = model::nu(params, l);
    let hd = params.half_dim();
    let level = |n: u32| {
        let k = nu - f64::from(2 * n + l) - hd;
        -k * k
    };
    let grid = hyperboloid_grid(params, l, level(max_nr), level(0), points)?;
    let count = max_nr as usize + 1;
    let levels = extrapolated_levels(params, l, &grid, count + 1, HYPERBOLOID_REFINEMENTS)?;
    let longer = fd_eigenvalues(params, l, &grid.extended(1.25), count + 1)?;
    if longer.len() != levels.coarse().len() {
        return Err(Error::Accuracy(format!(
            "bound level count changed from {} to {} when extending rho_max",
            levels.coarse().len(),
            longer.len()
        )));
    }
    if let Some((a, b)) = levels.coarse().iter().zip(&longer).find(|(a, b)| (*a - *b).abs() >= shift_tol) {
        return Err(Error::Accuracy(format!("truncation shift {a} -> {b} exceeds {shift_tol:e}")));
    }
    Ok(Some(levels))
}

/// FD ground-state `Z` on the cell centres of `grid`, unit-normalized in the
/// discrete `L²` sense with cell widths.
pub fn ground_state_vector(params: &ModelParams, l: u32, grid: &FdGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    let matrix = build_matrix(params, l, grid)?;
    let lowest = matrix
        .lowest_eigenvalues(1)
        .first()
        .copied()
        .ok_or_else(|| Error::Numerical("empty matrix".into()))?;
    let v = matrix.eigenvector(lowest)?;
    let faces = grid.faces();
    let z = v.iter().zip(faces.windows(2)).map(|(vi, w)| vi / (w[1] - w[0]).sqrt()).collect();
    Ok((grid.centres(), z))
}
