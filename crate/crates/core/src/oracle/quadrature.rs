//! Composite Gauss-Legendre quadrature.

use std::sync::OnceLock;

use crate::{Error, Result};

/// Panel counts are doubled up to this many before giving up.
pub const MAX_PANELS: usize = 1 << 16;

#[derive(Debug, Clone)]
struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Nodes and weights on `[-1, 1]` by Newton iteration on `P_m`.
fn build_rule(m: usize) -> Rule {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = mf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    Rule { nodes, weights }
}

fn rule(order: usize) -> Result<std::borrow::Cow<'static, Rule>> {
    static CACHE: OnceLock<[Rule; 3]> = OnceLock::new();
    let cache = CACHE.get_or_init(|| [build_rule(8), build_rule(16), build_rule(32)]);
    match order {
        8 => Ok(std::borrow::Cow::Borrowed(&cache[0])),
        16 => Ok(std::borrow::Cow::Borrowed(&cache[1])),
        32 => Ok(std::borrow::Cow::Borrowed(&cache[2])),
        2..=64 => Ok(std::borrow::Cow::Owned(build_rule(order))),
        _ => Err(Error::domain(format!("Gauss-Legendre order must be in 2..=64, got {order}"))),
    }
}

/// Composite `order`-point Gauss-Legendre rule over `panels` equal panels of `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> Result<f64> {
    if panels == 0 || !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("quadrature needs a finite interval and at least one panel"));
    }
    let rule = rule(order)?;
    let width = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + width * p as f64;
        let mid = lo + 0.5 * width;
        let mut panel = 0.0;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let v = f(mid + 0.5 * width * x);
            if !v.is_finite() {
                return Err(Error::Numerical(format!("non-finite integrand at {}", mid + 0.5 * width * x)));
            }
            panel += w * v;
        }
        total += 0.5 * width * panel;
    }
    Ok(total)
}

/// Integrates with 32-point panels, doubling the panel count until two
/// successive values agree to `rel_tol` (relative to `max(|I|, abs_floor)`).
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_floor: f64) -> Result<f64> {
    let mut panels = 2;
    let mut prev = gauss_legendre(&f, a, b, panels, 32)?;
    while panels < MAX_PANELS {
        panels *= 2;
        let next = gauss_legendre(&f, a, b, panels, 32)?;
        if (next - prev).abs() <= rel_tol * next.abs().max(abs_floor) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::Accuracy(format!(
        "quadrature on [{a}, {b}] did not settle to {rel_tol:e} within {MAX_PANELS} panels"
    )))
}

/// [`integrate`] over consecutive sub-intervals given by `breaks`.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, breaks: &[f64], rel_tol: f64, abs_floor: f64) -> Result<f64> {
    breaks.windows(2).try_fold(0.0, |acc, w| Ok(acc + integrate(&f, w[0], w[1], rel_tol, abs_floor)?))
}

/// `[0, 1, 2, 4, …, end]`: unit pieces near the origin, doubling outwards.
pub fn geometric_breaks(end: f64) -> Vec<f64> {
    let mut breaks = vec![0.0];
    let mut x = 1.0;
    while x < end {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(end);
    breaks
}
