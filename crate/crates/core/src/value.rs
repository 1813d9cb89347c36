//! Scalar types shared by every carrier: distance values, extended reals and
//! the finite-horizon reading of "tends to zero".

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational carrier arithmetic.
pub type Rational = BigRational;

/// Default absolute tolerance for floating-point carriers.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// A number type usable as a distance or objective value.
///
/// Implemented for `f64` (approximate) and [`Rational`] (exact). Exact types
/// compare with `==`, approximate ones go through a tolerance.
pub trait Value:
    Clone + PartialOrd + Num + Signed + ToPrimitive + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Whether arithmetic on this type is exact.
    const EXACT: bool;

    /// Lossy view used for trend analysis and reporting.
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `self <= tol`, where a zero tolerance on an exact type means `self == 0`.
    fn within(&self, tol: f64) -> bool {
        if Self::EXACT && tol == 0.0 {
            self.is_zero()
        } else {
            self.as_f64() <= tol
        }
    }

    fn half(&self) -> Self {
        self.clone() / (Self::one() + Self::one())
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Value for f64 {
    const EXACT: bool = false;
}

impl Value for BigRational {
    const EXACT: bool = true;

    fn as_f64(&self) -> f64 {
        // to_f64 on huge numerators/denominators can give NaN or flush early;
        // rescale to a 64-bit quotient first.
        match self.to_f64() {
            Some(v) if v.is_finite() && v != 0.0 => v,
            _ if self.is_zero() => 0.0,
            _ => {
                let n = self.numer().bits() as i64;
                let d = self.denom().bits() as i64;
                let s = 64 - (n - d);
                let num = if s >= 0 {
                    self.numer() << (s as usize)
                } else {
                    self.numer() >> ((-s) as usize)
                };
                let q = (num / self.denom()).to_f64().unwrap_or(0.0);
                q * 2f64.powi((-s).clamp(-1100, 1100) as i32)
            }
        }
    }
}

/// Exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact `2^-k`.
pub fn dyadic(k: u32) -> Rational {
    Rational::new(BigInt::from(1), BigInt::from(1) << k)
}

/// A value of `R ∪ {+∞}`.
#[derive(Debug, Clone, PartialEq, PartialOrd, Serialize, Deserialize)]
pub enum Extended<V> {
    Finite(V),
    Infinity,
}

impl<V: Value> Extended<V> {
    pub fn finite(&self) -> Option<&V> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Extended::Finite(v) => v.as_f64(),
            Extended::Infinity => f64::INFINITY,
        }
    }
}

impl<V: Display> Display for Extended<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinity => write!(f, "+inf"),
        }
    }
}

/// Three-valued outcome of a semi-decision on a finite prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Supported,
    Refuted,
    Inconclusive,
}

impl Verdict {
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Refuted, _) | (_, Verdict::Refuted) => Verdict::Refuted,
            (Verdict::Supported, Verdict::Supported) => Verdict::Supported,
            _ => Verdict::Inconclusive,
        }
    }
}

/// Parameters of the finite-horizon "→ 0" test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendConfig {
    /// The last window's maximum must be at or below this.
    pub tolerance: f64,
    /// Number of trailing windows compared.
    pub windows: usize,
    /// Series shorter than this are inconclusive.
    pub min_len: usize,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            windows: 4,
            min_len: 4,
        }
    }
}

impl TrendConfig {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }
}

fn window_bounds(len: usize, windows: usize) -> Vec<(usize, usize)> {
    let windows = windows.clamp(1, len.max(1));
    let size = len / windows;
    let start = len - size * windows;
    (0..windows)
        .map(|w| (start + w * size, start + (w + 1) * size))
        .collect()
}

fn fold_window(values: &[f64], pick: fn(f64, f64) -> f64) -> f64 {
    values.iter().copied().reduce(pick).unwrap_or(f64::NAN)
}

/// Finite-horizon reading of `a_n → 0` for a nonnegative series.
///
/// Supported: the last window's maximum is within tolerance and the window
/// maxima are nonincreasing. Refuted: the last window's minimum is above
/// tolerance and no smaller than the first window's minimum (no progress at
/// all). Anything else is inconclusive.
pub fn tends_to_zero(values: &[f64], cfg: &TrendConfig) -> Verdict {
    if values.len() < cfg.min_len.max(1) || values.iter().any(|v| v.is_nan()) {
        return Verdict::Inconclusive;
    }
    let bounds = window_bounds(values.len(), cfg.windows);
    let maxima: Vec<f64> = bounds
        .iter()
        .map(|&(a, b)| fold_window(&values[a..b], f64::max))
        .collect();
    let minima: Vec<f64> = bounds
        .iter()
        .map(|&(a, b)| fold_window(&values[a..b], f64::min))
        .collect();
    let last_max = *maxima.last().unwrap();
    let last_min = *minima.last().unwrap();
    let nonincreasing = maxima
        .windows(2)
        .all(|w| w[1].partial_cmp(&w[0]) != Some(Ordering::Greater));
    if last_max <= cfg.tolerance && nonincreasing {
        Verdict::Supported
    } else if last_min > cfg.tolerance && last_min >= minima[0] {
        Verdict::Refuted
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series_tends_to_zero() {
        let v: Vec<f64> = (0..64).map(|k| 0.5f64.powi(k)).collect();
        assert_eq!(tends_to_zero(&v, &TrendConfig::default()), Verdict::Supported);
    }

    #[test]
    fn constant_series_is_refuted() {
        let v = vec![0.5; 32];
        assert_eq!(tends_to_zero(&v, &TrendConfig::default()), Verdict::Refuted);
    }

    #[test]
    fn zero_series_is_supported() {
        let v = vec![0.0; 8];
        assert_eq!(tends_to_zero(&v, &TrendConfig::default()), Verdict::Supported);
    }

    #[test]
    fn slow_decay_is_inconclusive() {
        let v: Vec<f64> = (1..40).map(|k| 1.0 / k as f64).collect();
        assert_eq!(tends_to_zero(&v, &TrendConfig::default()), Verdict::Inconclusive);
    }

    #[test]
    fn short_series_is_inconclusive() {
        assert_eq!(tends_to_zero(&[0.0, 0.0], &TrendConfig::default()), Verdict::Inconclusive);
    }

    #[test]
    fn rational_view_of_tiny_dyadic() {
        let v = dyadic(2000);
        assert!(v.as_f64() >= 0.0 && v.as_f64() < 1e-300);
        assert!(!v.within(0.0));
        assert!(Rational::zero().within(0.0));
    }

    #[test]
    fn extended_ordering_puts_infinity_last() {
        assert!(Extended::Finite(1e300) < Extended::<f64>::Infinity);
        assert!(Extended::Finite(ratio(1, 2)) < Extended::Finite(ratio(2, 3)));
    }
}
