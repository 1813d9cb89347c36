use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::orbit_engine::ClosureMap;
use crate::premetric::{ConvergenceOracle, NeighborhoodBase, PSpace, Premetric};
use crate::value::{ratio, Rational};

/// A point of the closed upper half-plane.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoorePoint {
    x: Rational,
    y: Rational,
}

impl MoorePoint {
    /// `None` below the axis.
    pub fn new(x: Rational, y: Rational) -> Option<Self> {
        (!y.is_negative()).then_some(Self { x, y })
    }

    pub fn origin() -> Self {
        Self {
            x: Rational::zero(),
            y: Rational::zero(),
        }
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn on_axis(&self) -> bool {
        self.y.is_zero()
    }
}

impl fmt::Display for MoorePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Largest `n ≥ 0` with `n < q` for `q > 0`.
fn floor_below(q: &Rational) -> BigInt {
    q.ceil().to_integer() - 1
}

/// Deepest base level `n` with `v ∈ L_n(u)`; `None` when `v = u` (all levels).
///
/// Interior `u`: the disc of radius `1/n`, so `n² d² < 1`. Axis `u`: `u` plus
/// the disc of radius `1/n` tangent at `u`, so `n (dx² + z²) < 2z`.
pub fn moore_level(u: &MoorePoint, v: &MoorePoint) -> Option<BigInt> {
    if u == v {
        return None;
    }
    let dx = &v.x - &u.x;
    Some(if u.on_axis() {
        if v.y.is_zero() {
            BigInt::zero()
        } else {
            let q = (&v.y * ratio(2, 1)) / (&dx * &dx + &v.y * &v.y);
            floor_below(&q)
        }
    } else {
        let dy = &v.y - &u.y;
        let q = (&dx * &dx + &dy * &dy).recip();
        // n² < q  ⟺  n² ≤ ⌈q⌉ - 1
        floor_below(&q).sqrt()
    })
}

/// `p(u, v) = inf{1/n : v ∈ L_n(u)}`, capped at 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct MoorePremetric;

impl Premetric<MoorePoint> for MoorePremetric {
    type Value = Rational;

    fn eval(&self, u: &MoorePoint, v: &MoorePoint) -> Rational {
        match moore_level(u, v) {
            None => Rational::zero(),
            Some(n) if n.is_zero() => Rational::one(),
            Some(n) => Rational::new(BigInt::one(), n),
        }
    }
}

/// The tangent-disc base `L_n`.
#[derive(Debug, Clone, Copy, Default)]
pub struct MooreBase;

impl NeighborhoodBase<MoorePoint> for MooreBase {
    fn contains(&self, center: &MoorePoint, level: usize, q: &MoorePoint) -> bool {
        moore_level(center, q).is_none_or(|n| n >= BigInt::from(level))
    }

    fn depth(&self, center: &MoorePoint, q: &MoorePoint, cap: usize) -> usize {
        moore_level(center, q).map_or(cap, |n| n.to_usize().unwrap_or(usize::MAX).min(cap))
    }
}

/// `S(x, 0) = (x/2, x/2)`, `S(x, y) = (x, 0)` for `y ≠ 0`.
pub fn moore_map() -> ClosureMap<MoorePoint> {
    ClosureMap::finite(|p: &MoorePoint| {
        let next = if p.on_axis() {
            let h = &p.x / ratio(2, 1);
            MoorePoint { x: h.clone(), y: h }
        } else {
            MoorePoint {
                x: p.x.clone(),
                y: Rational::zero(),
            }
        };
        vec![next]
    })
}

/// The Moore plane with the base-index premetric and its map.
pub fn moore_plane_scenario() -> (PSpace<MoorePoint, Rational>, ClosureMap<MoorePoint>) {
    let space = PSpace {
        name: "moore-plane".into(),
        premetric: Arc::new(MoorePremetric),
        base: Arc::new(MooreBase),
        oracle: ConvergenceOracle::default(),
        sampler: Arc::new(|k, rng| {
            use rand::Rng;
            (0..k)
                .map(|_| {
                    let x = ratio(rng.gen_range(-32..=32), 16);
                    let y = if rng.gen_bool(0.3) {
                        Rational::zero()
                    } else {
                        ratio(rng.gen_range(1..=32), 16)
                    };
                    MoorePoint { x, y }
                })
                .collect()
        }),
        limit_pool: vec![MoorePoint::origin()],
    };
    (space, moore_map())
}
