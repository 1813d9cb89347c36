use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::premetric::{ConvergenceOracle, NeighborhoodBase, PSpace, Premetric};
use crate::value::{dyadic, Rational};

/// A nonzero rational; the origin of the line is replaced by two points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NonZero(Rational);

impl NonZero {
    pub fn new(r: Rational) -> Option<Self> {
        (!r.is_zero()).then_some(Self(r))
    }

    pub fn get(&self) -> &Rational {
        &self.0
    }
}

/// A point of the line with two origins.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwoOriginPoint {
    Real(NonZero),
    OriginA,
    OriginB,
}

impl TwoOriginPoint {
    /// `None` for zero, which the carrier does not contain.
    pub fn real(r: Rational) -> Option<Self> {
        NonZero::new(r).map(TwoOriginPoint::Real)
    }

    pub fn is_origin(&self) -> bool {
        !matches!(self, TwoOriginPoint::Real(_))
    }

    fn value(&self) -> Option<&Rational> {
        match self {
            TwoOriginPoint::Real(r) => Some(r.get()),
            _ => None,
        }
    }
}

impl fmt::Display for TwoOriginPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwoOriginPoint::Real(r) => write!(f, "{}", r.get()),
            TwoOriginPoint::OriginA => f.write_str("A"),
            TwoOriginPoint::OriginB => f.write_str("B"),
        }
    }
}

/// `p = |x - y|` off the origins, `|x|` against an origin, `1` between them.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoOriginPremetric;

impl Premetric<TwoOriginPoint> for TwoOriginPremetric {
    type Value = Rational;

    fn eval(&self, x: &TwoOriginPoint, y: &TwoOriginPoint) -> Rational {
        match (x.value(), y.value()) {
            (Some(a), Some(b)) => (a - b).abs(),
            (Some(a), None) | (None, Some(a)) => a.abs(),
            (None, None) if x == y => Rational::zero(),
            (None, None) => Rational::one(),
        }
    }
}

/// Radii of the nested base sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusSchedule {
    /// `1/n`
    Harmonic,
    /// `2^-n`
    Dyadic,
}

impl RadiusSchedule {
    pub fn radius(self, level: usize) -> Rational {
        match self {
            RadiusSchedule::Harmonic => Rational::new(1.into(), level.into()),
            RadiusSchedule::Dyadic => dyadic(level as u32),
        }
    }

    /// Largest level whose radius exceeds `d > 0`, capped.
    fn deepest_below(self, d: &Rational, cap: usize) -> usize {
        match self {
            RadiusSchedule::Harmonic => {
                // largest n < 1/d
                let n = d.recip().ceil().to_integer() - 1;
                usize::try_from(n).unwrap_or(usize::MAX).min(cap)
            }
            RadiusSchedule::Dyadic => {
                let mut n = 0;
                while n < cap && *d < dyadic(n as u32 + 1) {
                    n += 1;
                }
                n
            }
        }
    }
}

/// The base `(r - ρ, r + ρ)` at reals with `ρ = min(radius, |r|)`, and
/// `(-ρ, 0) ∪ {o} ∪ (0, ρ)` at an origin `o`.
#[derive(Debug, Clone, Copy)]
pub struct TwoOriginBase {
    pub schedule: RadiusSchedule,
}

impl TwoOriginBase {
    fn rho(&self, center: &TwoOriginPoint, level: usize) -> Rational {
        let r = self.schedule.radius(level);
        match center.value() {
            Some(c) if c.abs() < r => c.abs(),
            _ => r,
        }
    }
}

impl NeighborhoodBase<TwoOriginPoint> for TwoOriginBase {
    fn contains(&self, center: &TwoOriginPoint, level: usize, q: &TwoOriginPoint) -> bool {
        if center == q {
            return true;
        }
        let rho = self.rho(center, level);
        match (center.value(), q.value()) {
            (Some(c), Some(s)) => (c - s).abs() < rho,
            (None, Some(s)) => s.abs() < rho,
            _ => false,
        }
    }

    fn certified_disjoint(&self, a: &TwoOriginPoint, b: &TwoOriginPoint, level: usize) -> Option<bool> {
        let (ra, rb) = (self.rho(a, level), self.rho(b, level));
        Some(match (a.value(), b.value()) {
            (Some(x), Some(y)) => (x - y).abs() >= ra + rb,
            (Some(x), None) | (None, Some(x)) => {
                let (r_real, r_origin) = if a.is_origin() { (rb, ra) } else { (ra, rb) };
                x.abs() - r_real >= r_origin
            }
            // punctured intervals around 0 always meet
            (None, None) => false,
        })
    }

    fn depth(&self, center: &TwoOriginPoint, q: &TwoOriginPoint, cap: usize) -> usize {
        if center == q {
            return cap;
        }
        match (center.value(), q.value()) {
            (None, Some(s)) => self.schedule.deepest_below(&s.abs(), cap),
            (Some(c), Some(s)) => {
                let d = (c - s).abs();
                if d >= c.abs() {
                    0
                } else {
                    self.schedule.deepest_below(&d, cap)
                }
            }
            _ => 0,
        }
    }
}

/// The line with two origins as a premetric space.
pub fn two_origins_premetric(schedule: RadiusSchedule) -> PSpace<TwoOriginPoint, Rational> {
    PSpace {
        name: format!("two-origins ({schedule:?} radii)"),
        premetric: Arc::new(TwoOriginPremetric),
        base: Arc::new(TwoOriginBase { schedule }),
        oracle: ConvergenceOracle::default(),
        sampler: Arc::new(|k, rng| {
            (0..k)
                .map(|_| match rng.gen_range(0..10) {
                    0 => TwoOriginPoint::OriginA,
                    1 => TwoOriginPoint::OriginB,
                    _ => loop {
                        let num: i64 = rng.gen_range(-64..=64);
                        if let Some(p) = TwoOriginPoint::real(Rational::new(num.into(), 16.into())) {
                            break p;
                        }
                    },
                })
                .collect()
        }),
        limit_pool: vec![TwoOriginPoint::OriginA, TwoOriginPoint::OriginB],
    }
}
