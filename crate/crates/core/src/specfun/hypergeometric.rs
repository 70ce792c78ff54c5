use crate::{Error, Result};

/// Rising factorial `(a)_n = a (a+1) … (a+n−1)`.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (a + f64::from(k)))
}

/// The `n + 1` terms of a terminating series with upper parameter `−n`.
///
/// Terms follow the ratio recurrence
/// `t_{k+1} = t_k · (k − n)(b + k) x / ((c + k)(k + 1))`, where the `(b + k)`
/// factor is absent for `₁F₁`. The iterator is exhausted after exactly
/// `n + 1` items; no tolerance-based truncation happens.
#[derive(Debug, Clone)]
pub struct TerminatingSeries {
    n: u32,
    b: Option<f64>,
    c: f64,
    x: f64,
    k: u32,
    term: f64,
}

impl TerminatingSeries {
    fn new(n: u32, b: Option<f64>, c: f64, x: f64) -> Result<Self> {
        if !c.is_finite() || b.is_some_and(|b| !b.is_finite()) {
            return Err(Error::domain("hypergeometric parameters must be finite"));
        }
        // (c)_k appears in the denominator for k = 1..=n.
        if let Some(k) = (0..n).find(|&k| c + f64::from(k) == 0.0) {
            return Err(Error::domain(format!(
                "lower parameter c={c} makes (c)_{} vanish before termination",
                k + 1
            )));
        }
        Ok(TerminatingSeries { n, b, c, x, k: 0, term: 1.0 })
    }
}

impl Iterator for TerminatingSeries {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if self.k > self.n {
            return None;
        }
        let current = self.term;
        let k = f64::from(self.k);
        let mut ratio = (k - f64::from(self.n)) * self.x / ((self.c + k) * (k + 1.0));
        if let Some(b) = self.b {
            ratio *= b + k;
        }
        self.term *= ratio;
        self.k += 1;
        Some(current)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.n + 1).saturating_sub(self.k) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for TerminatingSeries {}

/// Terms of `₂F₁(−n, b; c; x)` for `x ∈ [0, 1]`.
pub fn hyp2f1_terms(n: u32, b: f64, c: f64, x: f64) -> Result<TerminatingSeries> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("2F1 argument must lie in [0, 1], got {x}")));
    }
    TerminatingSeries::new(n, Some(b), c, x)
}

/// Terms of `₁F₁(−n; c; x)` for finite `x ≥ 0`.
pub fn hyp1f1_terms(n: u32, c: f64, x: f64) -> Result<TerminatingSeries> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("1F1 argument must be finite and >= 0, got {x}")));
    }
    TerminatingSeries::new(n, None, c, x)
}

/// The degree-`n` polynomial `₂F₁(−n, b; c; x)`.
///
/// The terms alternate in sign, so when they grow much larger than the sum
/// the relative accuracy degrades by roughly `Σ|t_k| / |Σ t_k|`.
pub fn hyp2f1_terminating(n: u32, b: f64, c: f64, x: f64) -> Result<f64> {
    Ok(hyp2f1_terms(n, b, c, x)?.sum())
}

/// The confluent polynomial `₁F₁(−n; c; x)` (a scaled generalized Laguerre polynomial).
pub fn hyp1f1_terminating(n: u32, c: f64, x: f64) -> Result<f64> {
    Ok(hyp1f1_terms(n, c, x)?.sum())
}
