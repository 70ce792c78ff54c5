//! Model configuration, quantum numbers, potentials and exact spectra.
//!
//! On the sphere the rescaled eigenvalue of the Pöschl-Teller form is
//! `ε = 8r₀²E + (D−1)² + 16ω²r₀⁴ = (2n_r + L + ν + D/2)²`; on the
//! hyperboloid the bound states have
//! `ε = 8r₀²E − (D−1)² − 16ω²r₀⁴ = −(2n_r + L − ν + D/2)²`, with
//! `ν = √((L + (D−2)/2)² + 16ω²r₀⁴)` in both cases.

use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;

use crate::{Error, Result};

/// Relative tolerance of the internal ε ↔ E consistency check.
pub const CONSISTENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Sphere,
    Hyperboloid,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Sphere => "sphere",
            Geometry::Hyperboloid => "hyperboloid",
        })
    }
}

/// Physical configuration: geometry, dimension `D ≥ 2`, radius `r₀ > 0`
/// and frequency `ω ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    geometry: Geometry,
    dim: u32,
    radius: f64,
    omega: f64,
}

impl ModelParams {
    pub fn new(geometry: Geometry, dim: u32, radius: f64, omega: f64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain(format!("dimension must be >= 2, got {dim}")));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::domain(format!("radius must be finite and > 0, got {radius}")));
        }
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::domain(format!("omega must be finite and >= 0, got {omega}")));
        }
        Ok(ModelParams { geometry, dim, radius, omega })
    }

    pub fn sphere(dim: u32, radius: f64, omega: f64) -> Result<Self> {
        Self::new(Geometry::Sphere, dim, radius, omega)
    }

    pub fn hyperboloid(dim: u32, radius: f64, omega: f64) -> Result<Self> {
        Self::new(Geometry::Hyperboloid, dim, radius, omega)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }
    pub fn dim(&self) -> u32 {
        self.dim
    }
    pub fn radius(&self) -> f64 {
        self.radius
    }
    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Same physical parameters on the other geometry.
    pub fn with_geometry(self, geometry: Geometry) -> Self {
        ModelParams { geometry, ..self }
    }

    pub fn with_radius(self, radius: f64) -> Result<Self> {
        Self::new(self.geometry, self.dim, radius, self.omega)
    }

    pub(crate) fn half_dim(&self) -> f64 {
        f64::from(self.dim) / 2.0
    }

    /// `16ω²r₀⁴`, the constant the potential contributes to ε.
    pub fn well_strength(&self) -> f64 {
        let s = 4.0 * self.omega * self.radius * self.radius;
        s * s
    }

    /// `L + (D−2)/2`, the centrifugal index of the Pöschl-Teller form.
    pub fn centrifugal_index(&self, l: u32) -> f64 {
        f64::from(l) + (f64::from(self.dim) - 2.0) / 2.0
    }

    /// Limiting height `2ω²r₀²` of the hyperboloid well.
    pub fn potential_ceiling(&self) -> f64 {
        2.0 * self.omega * self.omega * self.radius * self.radius
    }
}

/// Quasiradial number `n_r` and angular momentum `L`; `N = 2n_r + L` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QuantumState {
    pub n_r: u32,
    pub l: u32,
}

impl QuantumState {
    pub fn new(n_r: u32, l: u32) -> Self {
        QuantumState { n_r, l }
    }

    /// Principal quantum number `N = 2n_r + L`.
    pub fn principal(&self) -> u32 {
        2 * self.n_r + self.l
    }

    /// State with principal number `big_n` and momentum `l`, if `N − L` is even and non-negative.
    pub fn from_principal(big_n: u32, l: u32) -> Option<Self> {
        (big_n >= l && (big_n - l).is_multiple_of(2)).then(|| QuantumState::new((big_n - l) / 2, l))
    }
}

impl fmt::Display for QuantumState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n_r={}, L={})", self.n_r, self.l)
    }
}

/// ν, ε and E for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralData {
    pub nu: f64,
    pub epsilon: f64,
    pub energy: f64,
}

pub fn nu(params: &ModelParams, l: u32) -> f64 {
    params.centrifugal_index(l).hypot(4.0 * params.omega * params.radius * params.radius)
}

/// Potential in geodesic polar form: `2ω²r₀² tan²(χ/2)` on the sphere
/// (`χ ∈ [0, π)`), `2ω²r₀² tanh²(τ/2)` on the hyperboloid (`τ ≥ 0`, `∞` allowed).
pub fn potential(params: &ModelParams, coordinate: f64) -> Result<f64> {
    let scale = params.potential_ceiling();
    match params.geometry {
        Geometry::Sphere => {
            if coordinate == PI {
                return Err(Error::InfinitePotential(format!("chi = pi (radius {})", params.radius)));
            }
            if !(0.0..PI).contains(&coordinate) {
                return Err(Error::domain(format!("chi must lie in [0, pi), got {coordinate}")));
            }
            let t = (coordinate / 2.0).tan();
            Ok(scale * t * t)
        }
        Geometry::Hyperboloid => {
            if !(coordinate >= 0.0) {
                return Err(Error::domain(format!("tau must be >= 0, got {coordinate}")));
            }
            let t = (coordinate / 2.0).tanh();
            Ok(scale * t * t)
        }
    }
}

/// Potential in ambient coordinates as a function of `x₀`.
pub fn potential_ambient(params: &ModelParams, x0: f64) -> Result<f64> {
    let r0 = params.radius;
    let scale = params.potential_ceiling();
    match params.geometry {
        Geometry::Sphere => {
            if x0 == -r0 {
                return Err(Error::InfinitePotential(format!("x0 = -r0 = {x0}")));
            }
            if !(x0.abs() <= r0) {
                return Err(Error::domain(format!("sphere requires |x0| <= r0, got {x0}")));
            }
            Ok(scale * (r0 - x0) / (r0 + x0))
        }
        Geometry::Hyperboloid => {
            if !(x0 >= r0) {
                return Err(Error::domain(format!("hyperboloid requires x0 >= r0, got {x0}")));
            }
            if x0.is_infinite() {
                return Ok(scale);
            }
            Ok(scale * (x0 - r0) / (x0 + r0))
        }
    }
}

/// `ε` from an energy via the defining shift of the geometry.
pub fn epsilon_from_energy(params: &ModelParams, energy: f64) -> f64 {
    let d1 = f64::from(params.dim) - 1.0;
    let scaled = 8.0 * params.radius * params.radius * energy;
    match params.geometry {
        Geometry::Sphere => scaled + d1 * d1 + params.well_strength(),
        Geometry::Hyperboloid => scaled - d1 * d1 - params.well_strength(),
    }
}

/// `term_scale` is `Σ|terms|` of the energy bracket: at large `L` the
/// bracket cancels terms of order `L²` and its rounding error scales with them.
fn check_consistency(params: &ModelParams, state: QuantumState, data: &SpectralData, term_scale: f64) -> Result<()> {
    let from_energy = epsilon_from_energy(params, data.energy);
    let scale = data.epsilon.abs().max(params.well_strength()).max(term_scale).max(1.0);
    if (from_energy - data.epsilon).abs() > CONSISTENCY_TOL * scale {
        return Err(Error::Numerical(format!(
            "epsilon {} and energy-derived {} disagree for {state}",
            data.epsilon, from_energy
        )));
    }
    Ok(())
}

fn require(params: &ModelParams, geometry: Geometry) -> Result<()> {
    if params.geometry != geometry {
        return Err(Error::Usage(format!("operation needs {geometry}, params are {}", params.geometry)));
    }
    Ok(())
}

/// Exact sphere spectrum for one state.
pub fn energy_sphere(params: &ModelParams, state: QuantumState) -> Result<SpectralData> {
    require(params, Geometry::Sphere)?;
    let nu = nu(params, state.l);
    let d = f64::from(params.dim);
    let hd = params.half_dim();
    let big_n = f64::from(state.principal());
    let l = f64::from(state.l);
    let root = big_n + nu + hd;
    let terms = [
        (big_n + 1.0) * (big_n + d),
        (2.0 * nu - 1.0) * (big_n + hd),
        l * (l + d - 2.0),
        -hd * (d - 1.0),
    ];
    let bracket: f64 = terms.iter().sum();
    let data = SpectralData {
        nu,
        epsilon: root * root,
        energy: bracket / (8.0 * params.radius * params.radius),
    };
    check_consistency(params, state, &data, terms.iter().map(|t| t.abs()).sum())?;
    Ok(data)
}

/// `ν − N − D/2`: positive exactly for hyperboloid bound states.
pub fn binding_margin(params: &ModelParams, state: QuantumState) -> f64 {
    nu(params, state.l) - f64::from(state.principal()) - params.half_dim()
}

/// Whether the state is an admissible eigenstate of the geometry.
pub fn is_bound(params: &ModelParams, state: QuantumState) -> bool {
    match params.geometry {
        Geometry::Sphere => true,
        Geometry::Hyperboloid => binding_margin(params, state) > 0.0,
    }
}

/// Exact hyperboloid spectrum for a bound state.
pub fn energy_hyperboloid(params: &ModelParams, state: QuantumState) -> Result<SpectralData> {
    require(params, Geometry::Hyperboloid)?;
    let nu = nu(params, state.l);
    let margin = binding_margin(params, state);
    if !(margin > 0.0) {
        return Err(Error::NotBound { n_r: state.n_r, l: state.l, nu });
    }
    let d = f64::from(params.dim);
    let hd = params.half_dim();
    let big_n = f64::from(state.principal());
    let l = f64::from(state.l);
    let terms = [
        (2.0 * nu - 1.0) * (big_n + hd),
        -big_n * (big_n + d - 1.0),
        -l * (l + d - 2.0),
        hd * (d - 1.0),
    ];
    let bracket: f64 = terms.iter().sum();
    let data = SpectralData {
        nu,
        epsilon: -margin * margin,
        energy: bracket / (8.0 * params.radius * params.radius),
    };
    check_consistency(params, state, &data, terms.iter().map(|t| t.abs()).sum())?;
    Ok(data)
}

/// Spectrum of either geometry.
pub fn energy(params: &ModelParams, state: QuantumState) -> Result<SpectralData> {
    match params.geometry {
        Geometry::Sphere => energy_sphere(params, state),
        Geometry::Hyperboloid => energy_hyperboloid(params, state),
    }
}

/// Largest bound `n_r` in the `L` channel of the hyperboloid, or `None`.
///
/// The bracket in `N ≤ [ν − D/2]` is read as a floor, and an edge state with
/// `ν − N − D/2 = 0` is excluded because its normalization vanishes.
pub fn bound_state_max(params: &ModelParams, l: u32) -> Result<Option<u32>> {
    require(params, Geometry::Hyperboloid)?;
    let room = nu(params, l) - f64::from(l) - params.half_dim();
    if !(room > 0.0) {
        return Ok(None);
    }
    let mut max = (room / 2.0).floor();
    if room - 2.0 * max <= 0.0 {
        max -= 1.0;
    }
    Ok(Some(max as u32))
}

/// Largest number of channels [`bound_channels`] will enumerate.
pub const MAX_BOUND_CHANNELS: f64 = 1e7;

/// Channels with at least one bound state, as `(L, max n_r)`, in increasing `L`.
///
/// `ν − L` decreases with `L`, so the scan stops at the first empty channel.
/// Channel `L` is bound iff `16ω²r₀⁴ > 2L + D − 1`, so there are about
/// `8ω²r₀⁴` of them; more than [`MAX_BOUND_CHANNELS`] is a domain error.
pub fn bound_channels(params: &ModelParams) -> Result<Vec<(u32, u32)>> {
    require(params, Geometry::Hyperboloid)?;
    let estimate = (params.well_strength() + 1.0) / 2.0 - params.half_dim();
    if estimate > MAX_BOUND_CHANNELS {
        return Err(Error::domain(format!(
            "about {estimate:.3e} bound channels exceeds the limit of {MAX_BOUND_CHANNELS:e}"
        )));
    }
    let mut out = Vec::new();
    for l in 0.. {
        match bound_state_max(params, l)? {
            Some(m) => out.push((l, m)),
            None => break,
        }
    }
    Ok(out)
}

/// Total number of bound `(n_r, L)` states on the hyperboloid.
pub fn bound_state_count(params: &ModelParams) -> Result<u64> {
    Ok(bound_channels(params)?.iter().map(|&(_, m)| u64::from(m) + 1).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub state: QuantumState,
    pub spectral: SpectralData,
}

/// All states with `N ≤ n_max` (bound ones only on the hyperboloid), sorted
/// by energy with ties broken by `(L, n_r)`.
pub fn spectrum_table(params: &ModelParams, n_max: u32) -> Result<Vec<SpectrumEntry>> {
    let mut rows = Vec::new();
    for l in 0..=n_max {
        for n_r in 0..=(n_max - l) / 2 {
            let state = QuantumState::new(n_r, l);
            if !is_bound(params, state) {
                continue;
            }
            rows.push(SpectrumEntry { state, spectral: energy(params, state)? });
        }
    }
    rows.sort_by(|a, b| {
        a.spectral
            .energy
            .total_cmp(&b.spectral.energy)
            .then_with(|| (a.state.l, a.state.n_r).cmp(&(b.state.l, b.state.n_r)))
    });
    Ok(rows)
}
