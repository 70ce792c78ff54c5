//! Normalized quasiradial eigenfunctions.
//!
//! Sphere, with `s = sin(χ/2)`, `c = cos(χ/2)`:
//! `R(χ) = C sᴸ c^(ν−D/2+1) ₂F₁(−n_r, n_r+L+ν+D/2; L+D/2; s²)`.
//!
//! Hyperboloid bound states, with `s = sinh(τ/2)`, `c = cosh(τ/2)`:
//! `R(τ) = K sᴸ c^(2n_r−ν−D/2+1) ₂F₁(−n_r, ν−n_r; L+D/2; tanh²(τ/2))`.
//!
//! Both are normalized by `r₀ᴰ ∫ |R|² (sin χ or sinh τ)^(D−1) = 1`. The flat
//! limit is the D-dimensional isotropic oscillator, normalized by
//! `∫ |R|² r^(D−1) dr = 1`. Every power and gamma factor is combined in log
//! space because `ν ≈ 4ωr₀²` gets large.

use serde::Serialize;
use std::f64::consts::{LN_2, PI};

use crate::model::{self, Geometry, ModelParams, QuantumState};
use crate::par::Execution;
use crate::specfun::{hyp1f1_terminating, hyp2f1_terminating, ln_factorial, log_gamma, LogValue};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadialKind {
    SphereChi,
    HyperboloidTau,
    FlatR,
}

impl RadialKind {
    pub fn for_geometry(geometry: Geometry) -> Self {
        match geometry {
            Geometry::Sphere => RadialKind::SphereChi,
            Geometry::Hyperboloid => RadialKind::HyperboloidTau,
        }
    }

    /// Upper end of the coordinate domain (inclusive for the sphere).
    pub fn upper_limit(self) -> f64 {
        match self {
            RadialKind::SphereChi => PI,
            RadialKind::HyperboloidTau | RadialKind::FlatR => f64::INFINITY,
        }
    }
}

/// Wavefunction values on a grid, with the configuration that produced them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSample {
    pub params: ModelParams,
    pub state: QuantumState,
    pub kind: RadialKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

fn ln_cosh(y: f64) -> f64 {
    let y = y.abs();
    y + (-2.0 * y).exp().ln_1p() - LN_2
}

pub(crate) fn ln_sinh(y: f64) -> f64 {
    if y < 1.0 {
        y.sinh().ln()
    } else {
        y + (-(-2.0 * y).exp()).ln_1p() - LN_2
    }
}

/// `base^p` as a [`LogValue`] from `ln base`, with `0⁰ = 1`.
fn log_power(ln_base: f64, p: f64) -> LogValue {
    if p == 0.0 {
        LogValue::ONE
    } else if ln_base == f64::NEG_INFINITY {
        LogValue::ZERO
    } else {
        LogValue::from_ln(p * ln_base)
    }
}

/// `₂F₁(−n, b; c; x)` given both `x` and `1 − x`. Past `x = ½` the series is
/// re-expanded about 1, where the alternating terms of the direct sum cancel.
/// Needs `b − c − n + 1 > 0`, which holds for every bound state.
fn jacobi_poly(n: u32, b: f64, c: f64, x: f64, one_minus_x: f64) -> Result<f64> {
    if x <= 0.5 {
        return hyp2f1_terminating(n, b, c, x);
    }
    let prefactor: f64 = (0..n).map(|j| (c - b + f64::from(j)) / (c + f64::from(j))).product();
    Ok(prefactor * hyp2f1_terminating(n, b, b - c - f64::from(n) + 1.0, one_minus_x)?)
}

/// `ln C` for the sphere constant.
pub fn log_normalization_sphere(params: &ModelParams, state: QuantumState) -> Result<f64> {
    if params.geometry() != Geometry::Sphere {
        return Err(Error::Usage("sphere normalization needs sphere params".into()));
    }
    let nu = model::nu(params, state.l);
    let hd = f64::from(params.dim()) / 2.0;
    let (n, l) = (f64::from(state.n_r), f64::from(state.l));
    let ln_c2 = (2.0 * n + l + nu + hd).ln() + log_gamma(n + l + nu + hd)? + log_gamma(n + l + hd)?
        - (f64::from(params.dim()) - 1.0) * LN_2
        - f64::from(params.dim()) * params.radius().ln()
        - ln_factorial(state.n_r)
        - log_gamma(n + nu + 1.0)?
        - 2.0 * log_gamma(l + hd)?;
    Ok(0.5 * ln_c2)
}

/// The sphere normalization constant `C > 0`.
pub fn normalization_sphere(params: &ModelParams, state: QuantumState) -> Result<f64> {
    Ok(log_normalization_sphere(params, state)?.exp())
}

/// Quasiradial function on the sphere, `χ ∈ [0, π]`.
pub fn radial_sphere(params: &ModelParams, state: QuantumState, chi: f64) -> Result<f64> {
    Ok(log_radial_sphere(params, state, chi)?.value())
}

/// [`radial_sphere`] as a sign and log-magnitude.
pub fn log_radial_sphere(params: &ModelParams, state: QuantumState, chi: f64) -> Result<LogValue> {
    if !(0.0..=PI).contains(&chi) {
        return Err(Error::domain(format!("chi must lie in [0, pi], got {chi}")));
    }
    let ln_norm = log_normalization_sphere(params, state)?;
    let nu = model::nu(params, state.l);
    let hd = f64::from(params.dim()) / 2.0;
    let l = f64::from(state.l);
    let half = chi / 2.0;
    let (sin_h, cos_h) = if chi == PI { (1.0, 0.0) } else { half.sin_cos() };
    let poly = jacobi_poly(
        state.n_r,
        f64::from(state.n_r) + l + nu + hd,
        l + hd,
        (sin_h * sin_h).min(1.0),
        cos_h * cos_h,
    )?;
    Ok(LogValue::from_ln(ln_norm)
        * log_power(sin_h.ln(), l)
        * log_power(cos_h.ln(), nu - hd + 1.0)
        * LogValue::from_f64(poly))
}

/// `ln K` for the hyperboloid prefactor of a bound state.
pub fn log_normalization_hyperboloid(params: &ModelParams, state: QuantumState) -> Result<f64> {
    if params.geometry() != Geometry::Hyperboloid {
        return Err(Error::Usage("hyperboloid normalization needs hyperboloid params".into()));
    }
    let nu = model::nu(params, state.l);
    let margin = model::binding_margin(params, state);
    if !(margin > 0.0) {
        return Err(Error::NotBound { n_r: state.n_r, l: state.l, nu });
    }
    let hd = f64::from(params.dim()) / 2.0;
    let (n, l) = (f64::from(state.n_r), f64::from(state.l));
    let radicand = margin.ln() + log_gamma(nu - n)? + log_gamma(n + l + hd)?
        - (f64::from(params.dim()) - 1.0) * LN_2
        - f64::from(params.dim()) * params.radius().ln()
        - ln_factorial(state.n_r)
        - log_gamma(margin + n + 1.0)?;
    Ok(0.5 * radicand - log_gamma(l + hd)?)
}

/// Quasiradial bound-state function on the hyperboloid, `τ ≥ 0`.
pub fn radial_hyperboloid(params: &ModelParams, state: QuantumState, tau: f64) -> Result<f64> {
    Ok(log_radial_hyperboloid(params, state, tau)?.value())
}

/// [`radial_hyperboloid`] as a sign and log-magnitude.
pub fn log_radial_hyperboloid(params: &ModelParams, state: QuantumState, tau: f64) -> Result<LogValue> {
    if !(tau >= 0.0) {
        return Err(Error::domain(format!("tau must be >= 0, got {tau}")));
    }
    let ln_norm = log_normalization_hyperboloid(params, state)?;
    if tau.is_infinite() {
        return Ok(LogValue::ZERO);
    }
    let nu = model::nu(params, state.l);
    let hd = f64::from(params.dim()) / 2.0;
    let (n, l) = (f64::from(state.n_r), f64::from(state.l));
    let half = tau / 2.0;
    let th = half.tanh();
    let sech = 1.0 / half.cosh();
    let poly = jacobi_poly(state.n_r, nu - n, l + hd, th * th, sech * sech)?;
    let ln_sinh_h = if half == 0.0 { f64::NEG_INFINITY } else { ln_sinh(half) };
    Ok(LogValue::from_ln(ln_norm)
        * log_power(ln_sinh_h, l)
        * log_power(ln_cosh(half), 2.0 * n - nu - hd + 1.0)
        * LogValue::from_f64(poly))
}

/// Quasiradial function of the curved geometry in `params`.
pub fn radial(params: &ModelParams, state: QuantumState, coordinate: f64) -> Result<f64> {
    match params.geometry() {
        Geometry::Sphere => radial_sphere(params, state, coordinate),
        Geometry::Hyperboloid => radial_hyperboloid(params, state, coordinate),
    }
}

/// [`radial`] as a sign and log-magnitude; stays finite where the measure
/// weight overflows.
pub fn log_radial(params: &ModelParams, state: QuantumState, coordinate: f64) -> Result<LogValue> {
    match params.geometry() {
        Geometry::Sphere => log_radial_sphere(params, state, coordinate),
        Geometry::Hyperboloid => log_radial_hyperboloid(params, state, coordinate),
    }
}

/// `ln` of the flat-limit prefactor `ω^(L/2+D/4) / Γ(L+D/2) · √(2Γ(n_r+L+D/2)/n_r!)`.
pub fn log_normalization_flat(dim: u32, omega: f64, state: QuantumState) -> Result<f64> {
    if dim < 2 {
        return Err(Error::domain(format!("dimension must be >= 2, got {dim}")));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::domain(format!("flat limit needs finite omega > 0, got {omega}")));
    }
    let hd = f64::from(dim) / 2.0;
    let (n, l) = (f64::from(state.n_r), f64::from(state.l));
    Ok((l / 2.0 + hd / 2.0) * omega.ln() - log_gamma(l + hd)?
        + 0.5 * (LN_2 + log_gamma(n + l + hd)? - ln_factorial(state.n_r)))
}

/// Flat D-dimensional oscillator radial function, with `(N − L)/2 = n_r`.
pub fn radial_flat(dim: u32, omega: f64, state: QuantumState, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!("r must be >= 0, got {r}")));
    }
    let ln_norm = log_normalization_flat(dim, omega, state)?;
    if r.is_infinite() {
        return Ok(0.0);
    }
    let l = f64::from(state.l);
    let x = omega * r * r;
    let poly = hyp1f1_terminating(state.n_r, l + f64::from(dim) / 2.0, x)?;
    let value = LogValue::from_ln(ln_norm - x / 2.0) * log_power(r.ln(), l) * LogValue::from_f64(poly);
    Ok(value.value())
}

/// Evaluates one kind of radial function at a single coordinate.
pub fn evaluate(params: &ModelParams, state: QuantumState, kind: RadialKind, x: f64) -> Result<f64> {
    match kind {
        RadialKind::FlatR => radial_flat(params.dim(), params.omega(), state, x),
        _ if kind != RadialKind::for_geometry(params.geometry()) => Err(Error::Usage(format!(
            "{kind:?} does not match {} params",
            params.geometry()
        ))),
        _ => radial(params, state, x),
    }
}

/// Evaluates `kind` on every point of a strictly increasing grid.
pub fn sample(
    params: &ModelParams,
    state: QuantumState,
    kind: RadialKind,
    grid: &[f64],
    exec: Execution,
) -> Result<RadialSample> {
    if let Some(w) = grid.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::domain(format!("grid must be strictly increasing ({} then {})", w[0], w[1])));
    }
    if let (Some(&lo), Some(&hi)) = (grid.first(), grid.last()) {
        if !(lo >= 0.0) || hi > kind.upper_limit() || !hi.is_finite() {
            return Err(Error::domain(format!("grid [{lo}, {hi}] outside the domain of {kind:?}")));
        }
    }
    let values = exec.try_map(grid, |&x| evaluate(params, state, kind, x))?;
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("non-finite wavefunction value at {}", grid[i])));
    }
    Ok(RadialSample { params: *params, state, kind, grid: grid.to_vec(), values })
}

/// Integration weight of the normalization condition at a coordinate:
/// `r₀ᴰ sin^(D−1) χ`, `r₀ᴰ sinh^(D−1) τ`, or `r^(D−1)`.
pub fn measure_weight(params: &ModelParams, kind: RadialKind, x: f64) -> f64 {
    log_measure_weight(params, kind, x).value()
}

/// [`measure_weight`] in log form.
pub fn log_measure_weight(params: &ModelParams, kind: RadialKind, x: f64) -> LogValue {
    let d1 = f64::from(params.dim()) - 1.0;
    let ln_rd = f64::from(params.dim()) * params.radius().ln();
    match kind {
        RadialKind::SphereChi => LogValue::from_ln(ln_rd) * log_power(x.sin().abs().ln(), d1),
        RadialKind::HyperboloidTau => {
            let ln_s = if x == 0.0 { f64::NEG_INFINITY } else { ln_sinh(x) };
            LogValue::from_ln(ln_rd) * log_power(ln_s, d1)
        }
        RadialKind::FlatR => log_power(x.ln(), d1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_ground_state_constant() {
        let p = ModelParams::sphere(2, 1.0, 0.5).unwrap();
        let s = QuantumState::new(0, 0);
        let c = normalization_sphere(&p, s).unwrap();
        assert!((c - 1.5f64.sqrt()).abs() < 1e-14);
        assert!((radial_sphere(&p, s, 0.0).unwrap() - c).abs() < 1e-14);
        assert_eq!(radial_sphere(&p, s, PI).unwrap(), 0.0);
        assert!(radial_sphere(&p, s, PI + 1e-9).is_err());
        assert!(radial_sphere(&p, s, -1e-9).is_err());
    }

    #[test]
    fn sphere_first_excited_node() {
        let p = ModelParams::sphere(2, 1.0, 0.5).unwrap();
        let s = QuantumState::new(1, 0);
        let chi = 2.0 * (0.25f64).sqrt().asin();
        let at = radial_sphere(&p, s, chi).unwrap();
        let scale = radial_sphere(&p, s, 0.0).unwrap().abs();
        assert!(at.abs() < 1e-14 * scale);
        assert!(radial_sphere(&p, s, chi - 1e-3).unwrap() * radial_sphere(&p, s, chi + 1e-3).unwrap() < 0.0);
    }

    #[test]
    fn vanishes_at_origin_with_angular_momentum() {
        let p = ModelParams::sphere(3, 1.0, 1.0).unwrap();
        assert_eq!(radial_sphere(&p, QuantumState::new(1, 2), 0.0).unwrap(), 0.0);
        let h = ModelParams::hyperboloid(2, 1.0, 1.0).unwrap();
        assert_eq!(radial_hyperboloid(&h, QuantumState::new(0, 1), 0.0).unwrap(), 0.0);
        assert_eq!(radial_flat(3, 1.0, QuantumState::new(0, 2), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn hyperboloid_ground_state_constant() {
        let h = ModelParams::hyperboloid(2, 1.0, 1.0).unwrap();
        let v = radial_hyperboloid(&h, QuantumState::new(0, 0), 0.0).unwrap();
        assert!((v - 1.5f64.sqrt()).abs() < 1e-14);
        assert!(matches!(
            radial_hyperboloid(&h, QuantumState::new(2, 0), 0.3),
            Err(Error::NotBound { .. })
        ));
        assert!(radial_hyperboloid(&h, QuantumState::new(0, 0), -0.1).is_err());
        assert_eq!(radial_hyperboloid(&h, QuantumState::new(0, 0), f64::INFINITY).unwrap(), 0.0);
        assert!(radial_hyperboloid(&h, QuantumState::new(0, 0), 800.0).unwrap().abs() < 1e-300);
    }

    #[test]
    fn flat_prefactor_example() {
        let v = radial_flat(3, 1.0, QuantumState::new(0, 0), 0.0).unwrap();
        let expected = (4.0 / PI.sqrt()).sqrt();
        assert!((v - expected).abs() < 1e-14, "{v} vs {expected}");
        assert!(radial_flat(3, 0.0, QuantumState::new(0, 0), 1.0).is_err());
    }

    #[test]
    fn large_nu_does_not_overflow() {
        let p = ModelParams::sphere(3, 100.0, 1.0).unwrap();
        let s = QuantumState::new(2, 1);
        for chi in [0.0, 1e-3, 0.01, 0.5, 3.0, PI] {
            assert!(radial_sphere(&p, s, chi).unwrap().is_finite());
        }
        let h = p.with_geometry(Geometry::Hyperboloid);
        for tau in [0.0, 1e-3, 0.01, 0.5, 30.0] {
            assert!(radial_hyperboloid(&h, s, tau).unwrap().is_finite());
        }
    }

    #[test]
    fn sampling_edges() {
        let p = ModelParams::sphere(2, 1.0, 0.5).unwrap();
        let s = QuantumState::new(0, 0);
        let empty = sample(&p, s, RadialKind::SphereChi, &[], Execution::Sequential).unwrap();
        assert!(empty.values.is_empty());
        let grid = [0.0, PI / 2.0, PI * (1.0 - 1e-12)];
        let r = sample(&p, s, RadialKind::SphereChi, &grid, Execution::Parallel).unwrap();
        assert!(r.values.iter().all(|v| v.is_finite()));
        assert!(sample(&p, s, RadialKind::SphereChi, &[0.0, 0.0], Execution::Sequential).is_err());
        assert!(sample(&p, s, RadialKind::SphereChi, &[0.0, 4.0], Execution::Sequential).is_err());
        assert!(matches!(
            sample(&p, s, RadialKind::HyperboloidTau, &[0.0], Execution::Sequential),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn parallel_sampling_is_bitwise_sequential() {
        let p = ModelParams::hyperboloid(3, 1.3, 1.1).unwrap();
        let s = QuantumState::new(1, 1);
        let grid: Vec<f64> = (0..1001).map(|i| i as f64 * 0.02).collect();
        let a = sample(&p, s, RadialKind::HyperboloidTau, &grid, Execution::Sequential).unwrap();
        let b = sample(&p, s, RadialKind::HyperboloidTau, &grid, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
