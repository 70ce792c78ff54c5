use std::ops::{Div, Mul};

/// A real number stored as `sign · exp(log_magnitude)`.
///
/// Products of gamma functions with arguments of order `4ωr₀²` overflow
/// `f64` long before their ratios do; keeping them as logarithms defers the
/// exponentiation to the very end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub log_magnitude: f64,
    /// `-1`, `0` or `+1`. When zero, `log_magnitude` is ignored.
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { log_magnitude: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogValue = LogValue { log_magnitude: 0.0, sign: 1 };

    pub fn new(log_magnitude: f64, sign: i8) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            LogValue { log_magnitude, sign: sign.signum() }
        }
    }

    /// Positive value with the given logarithm.
    pub fn from_ln(log_magnitude: f64) -> Self {
        LogValue { log_magnitude, sign: 1 }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue { log_magnitude: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    /// `|x|^p` for a non-negative base; `0^0 = 1`.
    pub fn powf(self, p: f64) -> Self {
        if p == 0.0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return if p > 0.0 { Self::ZERO } else { Self::from_ln(f64::INFINITY) };
        }
        LogValue { log_magnitude: self.log_magnitude * p, sign: 1 }
    }

    /// Square root of a non-negative value, `None` for negative input.
    pub fn sqrt(self) -> Option<Self> {
        match self.sign {
            0 => Some(Self::ZERO),
            1 => Some(LogValue { log_magnitude: 0.5 * self.log_magnitude, sign: 1 }),
            _ => None,
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        LogValue {
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
            sign: self.sign * rhs.sign,
        }
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return Self::ZERO;
        }
        LogValue {
            log_magnitude: self.log_magnitude - rhs.log_magnitude,
            sign: self.sign * rhs.sign,
        }
    }
}
