//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diagonal: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diagonal: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diagonal.is_empty() || off.len() + 1 != diagonal.len() {
            return Err(Error::domain(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diagonal.len(),
                off.len()
            )));
        }
        if diagonal.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite matrix entry".into()));
        }
        Ok(SymTridiagonal { diagonal, off })
    }

    pub fn len(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagonal.is_empty()
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diagonal.iter().enumerate() {
            let coupling = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] / q };
            q = d - lambda - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + lambda.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected inside `[lo, hi]`.
    fn kth(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.gershgorin();
        let span = (hi - lo).max(1.0);
        let (lo, hi) = (lo - 1e-3 * span, hi + 1e-3 * span);
        let mut out: Vec<f64> = Vec::with_capacity(count);
        for k in 0..count.min(self.len()) {
            let start = out.last().map_or(lo, |&prev| prev.min(hi) - f64::EPSILON * prev.abs());
            out.push(self.kth(k, start.max(lo), hi));
        }
        out
    }

    /// Eigenvalues strictly below `edge`, at most `max` of them.
    pub fn eigenvalues_below(&self, edge: f64, max: usize) -> Vec<f64> {
        let available = self.sturm_count(edge).min(max);
        let (lo, _) = self.gershgorin();
        let lo = lo - 1e-3 * (edge - lo).abs().max(1.0);
        let mut out: Vec<f64> = Vec::with_capacity(available);
        for k in 0..available {
            let start = out.last().map_or(lo, |&prev| prev - f64::EPSILON * prev.abs());
            out.push(self.kth(k, start.max(lo), edge));
        }
        out
    }

    /// Unit eigenvector for an (approximate) eigenvalue by inverse iteration.
    pub fn eigenvector(&self, eigenvalue: f64) -> Result<Vec<f64>> {
        let n = self.len();
        let shift = eigenvalue + 1e-12 * eigenvalue.abs().max(1.0);
        let mut x = vec![1.0; n];
        for _ in 0..4 {
            x = self.solve_shifted(shift, &x)?;
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 0.0) {
                return Err(Error::Numerical("inverse iteration diverged".into()));
            }
            x.iter_mut().for_each(|v| *v /= norm);
        }
        // Fix the sign so the first significant component is positive.
        let peak = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-3 * peak) {
            if *first < 0.0 {
                x.iter_mut().for_each(|v| *v = -*v);
            }
        }
        Ok(x)
    }

    /// Solves `(A − σI) y = rhs` with the Thomas algorithm.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        let tiny = f64::EPSILON * self.gershgorin().1.abs().max(1.0);
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut denom = self.diagonal[0] - sigma;
        for i in 0..n {
            if i > 0 {
                denom = self.diagonal[i] - sigma - self.off[i - 1] * c[i - 1];
            }
            if denom.abs() < tiny {
                denom = tiny;
            }
            c[i] = if i + 1 < n { self.off[i] / denom } else { 0.0 };
            let prev = if i > 0 { self.off[i - 1] * d[i - 1] } else { 0.0 };
            d[i] = (rhs[i] - prev) / denom;
        }
        let mut y = vec![0.0; n];
        y[n - 1] = d[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = d[i] - c[i] * y[i + 1];
        }
        Ok(y)
    }
}
