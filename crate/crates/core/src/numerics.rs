//! Log-domain gamma kernel.
//!
//! Everything in this crate works with natural logarithms. Conversion to
//! base 2 happens only when a value is reported (see [`LogBase`]).

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Natural logarithm of a positive quantity.
pub type LogReal = f64;

/// Above this many factors `log_gamma_ratio` switches from the product form
/// to a difference of two `log_gamma` evaluations.
pub const DEFAULT_RATIO_THRESHOLD: u64 = 1_000_000;

// Below this the argument is shifted upward before the asymptotic series.
const SERIES_SHIFT: f64 = 15.0;

// B_{2k} / (2k (2k - 1)) for k = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const MAX_FACTORIAL_ARG: usize = 171;

/// Logarithm base used at reporting boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LogBase {
    #[serde(rename = "2")]
    Two,
    #[default]
    #[serde(rename = "e")]
    E,
}

impl LogBase {
    /// Converts a natural-log quantity into this base.
    pub fn from_nat(self, value: f64) -> f64 {
        match self {
            LogBase::Two => value / LN_2,
            LogBase::E => value,
        }
    }

    pub fn to_nat(self, value: f64) -> f64 {
        match self {
            LogBase::Two => value * LN_2,
            LogBase::E => value,
        }
    }

    pub fn log(self, x: f64) -> f64 {
        self.from_nat(x.ln())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LogBase::Two => "2",
            LogBase::E => "e",
        }
    }
}

impl std::str::FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2" => Ok(LogBase::Two),
            "e" | "E" => Ok(LogBase::E),
            other => Err(Error::InvalidArgument(format!(
                "log base must be `2` or `e`, got `{other}`"
            ))),
        }
    }
}

fn ln_factorials() -> &'static [f64; MAX_FACTORIAL_ARG] {
    static TABLE: OnceLock<[f64; MAX_FACTORIAL_ARG]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = [0.0; MAX_FACTORIAL_ARG];
        let mut factorial = 1.0f64;
        for (k, slot) in table.iter_mut().enumerate().skip(1) {
            factorial *= k as f64;
            *slot = factorial.ln();
        }
        table
    })
}

fn asymptotic_series(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv_sq = inv * inv;
    let mut power = inv;
    let mut tail = 0.0;
    for c in STIRLING_COEFFS {
        tail += c * power;
        power *= inv_sq;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + tail
}

/// `ln Γ(z)` without the domain check. Callers guarantee `z > 0`.
pub(crate) fn ln_gamma(z: f64) -> f64 {
    debug_assert!(z > 0.0);
    if z.fract() == 0.0 && z <= MAX_FACTORIAL_ARG as f64 {
        return ln_factorials()[z as usize - 1];
    }
    if z >= SERIES_SHIFT {
        return asymptotic_series(z);
    }
    let mut x = z;
    let mut product = 1.0;
    while x < SERIES_SHIFT {
        product *= x;
        x += 1.0;
    }
    asymptotic_series(x) - product.ln()
}

/// Natural logarithm of the gamma function for positive real arguments.
pub fn log_gamma(z: f64) -> Result<LogReal> {
    if z <= 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires z > 0, got {z}")));
    }
    Ok(ln_gamma(z))
}

/// `ln[Γ(n + b) / Γ(b)]`, evaluated as `Σ_{k<n} ln(k + b)`.
pub fn log_gamma_ratio(n: u64, b: f64) -> Result<LogReal> {
    log_gamma_ratio_with_threshold(n, b, DEFAULT_RATIO_THRESHOLD)
}

/// Same as [`log_gamma_ratio`] with an explicit switch-over point.
pub fn log_gamma_ratio_with_threshold(n: u64, b: f64, threshold: u64) -> Result<LogReal> {
    if b <= 0.0 || !b.is_finite() {
        return Err(Error::Domain(format!(
            "log_gamma_ratio requires b > 0, got {b}"
        )));
    }
    Ok(ln_gamma_ratio(n, b, threshold))
}

pub(crate) fn ln_gamma_ratio(n: u64, b: f64, threshold: u64) -> f64 {
    if n > threshold {
        return ln_gamma(n as f64 + b) - ln_gamma(b);
    }
    // Neumaier-compensated sum; each step adds exactly ln(k + b).
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for k in 0..n {
        let term = (k as f64 + b).ln();
        let t = sum + term;
        if sum.abs() >= term.abs() {
            carry += (sum - t) + term;
        } else {
            carry += (term - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Leading-order Stirling approximation to `ln Γ(z)` together with an
/// envelope on its error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingApprox {
    pub approximation: LogReal,
    pub error_bound: f64,
}

impl StirlingApprox {
    /// Whether `exact` falls within the envelope around the approximation.
    pub fn contains(&self, exact: f64) -> bool {
        (exact - self.approximation).abs() <= self.error_bound
    }
}

/// `z ln z - z + ½ ln(2π/z)` and the bound `max(1/(12z), 1/(12z+1))`.
pub fn stirling_log_gamma(z: f64) -> Result<StirlingApprox> {
    if z <= 0.0 || !z.is_finite() {
        return Err(Error::Domain(format!(
            "stirling_log_gamma requires z > 0, got {z}"
        )));
    }
    let approximation = z * z.ln() - z + 0.5 * (2.0 * PI / z).ln();
    let error_bound = (1.0 / (12.0 * z)).max(1.0 / (12.0 * z + 1.0));
    Ok(StirlingApprox {
        approximation,
        error_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_gamma_trivial_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert_eq!(log_gamma(2.0).unwrap(), 0.0);
        assert!((log_gamma(6.0).unwrap() - 120f64.ln()).abs() < 1e-15);
        assert!((log_gamma(6.0).unwrap() - 4.787_491_742_782_046).abs() < 1e-12);
    }

    #[test]
    fn log_gamma_half() {
        let expected = 0.5 * PI.ln();
        assert!((log_gamma(0.5).unwrap() - expected).abs() < 1e-14);
        assert!((log_gamma(0.5).unwrap() - 0.572_364_942_9).abs() < 1e-10);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(-1.5), Err(Error::Domain(_))));
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_recurrence() {
        for &z in &[1e-3, 0.1, 0.7, 3.3, 14.5, 15.5, 99.25, 1e4 + 0.5] {
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0), "z = {z}");
        }
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(log_gamma_ratio(0, 0.3).unwrap(), 0.0);
        assert_eq!(log_gamma_ratio(0, 7.0).unwrap(), 0.0);
        let got = log_gamma_ratio(3, 0.125).unwrap();
        assert!((got - (153.0f64 / 512.0).ln()).abs() < 1e-14);
        let got = log_gamma_ratio(5, 0.5).unwrap();
        assert!((got - (945.0f64 / 32.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn ratio_rejects_nonpositive_b() {
        assert!(log_gamma_ratio(3, 0.0).is_err());
        assert!(log_gamma_ratio(3, -1.0).is_err());
    }

    #[test]
    fn ratio_threshold_switch_agrees() {
        for &b in &[0.0625, 0.5, 3.0] {
            let summed = log_gamma_ratio_with_threshold(5000, b, u64::MAX).unwrap();
            let diffed = log_gamma_ratio_with_threshold(5000, b, 0).unwrap();
            assert!((summed - diffed).abs() < 1e-9 * summed.abs(), "b = {b}");
        }
    }

    #[test]
    fn stirling_examples() {
        let s = stirling_log_gamma(10.0).unwrap();
        assert!((s.approximation - log_gamma(10.0).unwrap()).abs() <= 1.0 / 120.0);
        let s = stirling_log_gamma(1.0).unwrap();
        assert!(s.approximation.abs() <= 1.0 / 12.0);
        let s = stirling_log_gamma(1000.0).unwrap();
        assert!(s.error_bound <= 1e-4);
        assert!(s.contains(log_gamma(1000.0).unwrap()));
        assert!(stirling_log_gamma(0.0).is_err());
    }

    #[test]
    fn log_base_conversion() {
        assert!((LogBase::Two.log(8.0) - 3.0).abs() < 1e-15);
        assert_eq!(LogBase::E.from_nat(1.25), 1.25);
        assert!((LogBase::Two.to_nat(LogBase::Two.from_nat(0.3)) - 0.3).abs() < 1e-16);
        assert_eq!("2".parse::<LogBase>().unwrap(), LogBase::Two);
        assert!("10".parse::<LogBase>().is_err());
    }
}
