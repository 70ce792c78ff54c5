#![allow(clippy::excessive_precision)]

use super::LogValue;
use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_741_8;

/// Taylor coefficients of `ln Γ(2 + t)` beyond the linear term:
/// `(−1)^k (ζ(k) − 1) / k` for `k = 2, 3, …`.
const LN_GAMMA_AT_2: [f64; 38] = [
    0.322_467_033_424_113_218_24,
    -0.067_352_301_053_198_095_133,
    0.020_580_808_427_784_547_879,
    -0.007_385_551_028_673_985_266_3,
    0.002_890_510_330_741_523_285_8,
    -0.001_192_753_911_703_260_977_1,
    0.000_509_669_524_743_042_422_34,
    -0.000_223_154_758_453_579_379_76,
    0.000_099_457_512_781_808_533_715,
    -0.000_044_926_236_738_133_141_7,
    0.000_020_507_212_775_670_691_553,
    -9.439_488_275_268_395_904e-6,
    4.374_866_789_907_487_804_2e-6,
    -2.039_215_753_801_366_236_8e-6,
    9.551_412_130_407_419_832_9e-7,
    -4.492_469_198_764_566_043_3e-7,
    2.120_718_480_555_466_586_9e-7,
    -1.004_322_482_396_809_960_9e-7,
    4.769_810_169_363_980_565_8e-8,
    -2.271_109_460_894_316_491e-8,
    1.083_865_921_489_695_409_1e-8,
    -5.183_475_041_970_046_655_1e-9,
    2.483_674_543_802_478_317_2e-9,
    -1.192_140_140_586_091_207_4e-9,
    5.731_367_241_678_862_013_3e-10,
    -2.759_522_885_124_233_145_2e-10,
    1.330_476_437_424_448_948_1e-10,
    -6.422_964_563_838_100_022_1e-11,
    3.104_424_774_732_227_276_2e-11,
    -1.502_138_408_075_414_217_1e-11,
    7.275_974_480_239_079_662_5e-12,
    -3.527_742_476_575_915_083_6e-12,
    1.711_991_790_559_617_908_6e-12,
    -8.315_385_841_420_284_819_8e-13,
    4.042_200_525_289_440_065_5e-13,
    -1.966_475_631_096_616_490_4e-13,
    9.573_630_387_838_555_763_8e-14,
    -4.664_076_026_428_374_224_6e-14,
];

/// `B₂ₖ / (2k(2k−1))` for the Stirling tail, k = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const STIRLING_MIN: f64 = 10.0;

/// `ln Γ(2 + t)` for `|t| ≤ 1/2`.
fn ln_gamma_near_two(t: f64) -> f64 {
    let tail = LN_GAMMA_AT_2.iter().rev().fold(0.0, |acc, &c| acc * t + c);
    t * ((1.0 - EULER_GAMMA) + t * tail)
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = STIRLING.iter().rev().fold(0.0, |acc, &c| acc * inv2 + c) * inv;
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Near the zeros of `ln Γ` at 1 and 2 the value comes from the Taylor
/// series about 2, so the result stays accurate in a relative sense there.
/// Small arguments are shifted up by the recurrence, moderate ones shifted
/// down, and `x ≥ 10` uses Stirling's series with eight Bernoulli terms.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("log_gamma requires finite x > 0, got {x}")));
    }
    Ok(ln_gamma_positive(x))
}

fn ln_gamma_positive(x: f64) -> f64 {
    if x >= STIRLING_MIN {
        return ln_gamma_stirling(x);
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x, with x + 1 in [1, 1.5).
        return ln_gamma_positive(x + 1.0) - x.ln();
    }
    if x < 1.5 {
        // Γ(x) = Γ(x + 1) / x; ln x via ln_1p keeps digits near x = 1.
        return ln_gamma_near_two(x - 1.0) - (x - 1.0).ln_1p();
    }
    if x <= 2.5 {
        return ln_gamma_near_two(x - 2.0);
    }
    // Shift down into [1.5, 2.5]: Γ(x) = (x−1)(x−2)…(x−k) Γ(x−k).
    let mut y = x;
    let mut product = 1.0;
    while y > 2.5 {
        y -= 1.0;
        product *= y;
    }
    ln_gamma_near_two(y - 2.0) + product.ln()
}

/// `ln n!`.
pub fn ln_factorial(n: u32) -> f64 {
    ln_gamma_positive(f64::from(n) + 1.0)
}

/// `Π Γ(numerator) / Π Γ(denominator)` in log space.
pub fn log_ratio_product(numerator: &[f64], denominator: &[f64]) -> Result<LogValue> {
    let mut log = 0.0;
    for &a in numerator {
        log += log_gamma(a)?;
    }
    for &b in denominator {
        log -= log_gamma(b)?;
    }
    Ok(LogValue::from_ln(log))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert!((log_gamma(3.0).unwrap() - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!((log_gamma(0.5).unwrap() - 0.572_364_942_924_700_1).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_positive() {
        for x in [0.0, -1.0, -0.5, f64::NAN, f64::INFINITY] {
            assert!(matches!(log_gamma(x), Err(Error::Domain(_))), "{x}");
        }
    }

    #[test]
    fn branches_meet_continuously() {
        for edge in [0.5, 1.5, 2.5, STIRLING_MIN] {
            let lo = log_gamma(edge - 1e-9).unwrap();
            let hi = log_gamma(edge + 1e-9).unwrap();
            assert!((lo - hi).abs() < 1e-8, "jump at {edge}: {lo} vs {hi}");
        }
    }

    #[test]
    fn ratio_products() {
        let r = log_ratio_product(&[3.0], &[3.0]).unwrap();
        assert_eq!((r.log_magnitude, r.sign), (0.0, 1));
        let r = log_ratio_product(&[3.0, 1.0], &[2.0, 2.0]).unwrap();
        assert!((r.log_magnitude - std::f64::consts::LN_2).abs() < 1e-15);
        let r = log_ratio_product(&[100.5], &[99.5]).unwrap();
        assert!((r.log_magnitude - 99.5f64.ln()).abs() < 1e-12);
        assert!(log_ratio_product(&[1.0], &[0.0]).is_err());
        assert!(log_ratio_product(&[1e6], &[1e6 - 0.5]).unwrap().value().is_finite());
    }
}
