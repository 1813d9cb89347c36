use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::orbit_engine::ClosureMap;
use crate::premetric::{ConvergenceOracle, NeighborhoodBase, PSpace};
use crate::value::{ratio, Rational};

/// `ℚ` with `p = |x - y|` and `S(x) = {y : 0 ≤ y ≤ |x|/2}`.
///
/// `S(x)` is sampled at both endpoints and on a uniform grid between them;
/// the predicate is exact and `S(0) = {0}` is known exactly.
pub fn rationals_halving_scenario() -> (PSpace<Rational, Rational>, ClosureMap<Rational>) {
    let space = PSpace::metric_line(
        "rationals",
        Arc::new(|k, _| {
            let k = k as i64;
            (0..k).map(|j| ratio(j - k / 2, 16)).collect()
        }),
        vec![Rational::zero()],
    );
    let map = ClosureMap::from_sampler(|x: &Rational, budget, _| {
        let top = x.abs() / ratio(2, 1);
        if top.is_zero() {
            return vec![top];
        }
        let k = budget.max(2) as i64 - 1;
        (0..=k).map(|j| &top * ratio(k - j, k)).collect()
    })
    .with_predicate(|x, y| !y.is_negative() && y * ratio(2, 1) <= x.abs())
    .with_emptiness(|_| Some(false))
    .with_partial_image(|x| x.is_zero().then(|| vec![Rational::zero()]));
    (space, map)
}

/// The ordinal `ω·k + m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrdinalPoint {
    pub k: u32,
    pub m: u64,
}

impl OrdinalPoint {
    pub const OMEGA: OrdinalPoint = OrdinalPoint { k: 1, m: 0 };

    pub fn natural(m: u64) -> Self {
        Self { k: 0, m }
    }

    pub fn is_limit(&self) -> bool {
        self.k > 0 && self.m == 0
    }

    /// Member of `M ∪ {ω}` with `M = {1, 2, 3, …}`.
    pub fn in_m_or_omega(&self) -> bool {
        (self.k == 0 && self.m >= 1) || *self == Self::OMEGA
    }
}

impl fmt::Display for OrdinalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.m) {
            (0, m) => write!(f, "{m}"),
            (1, 0) => f.write_str("ω"),
            (1, m) => write!(f, "ω+{m}"),
            (k, 0) => write!(f, "ω·{k}"),
            (k, m) => write!(f, "ω·{k}+{m}"),
        }
    }
}

/// Order-topology base: successors and `0` are isolated; at a limit `ω·k`
/// the level-`n` set is `(ω·(k-1) + n, ω·k]`.
#[derive(Debug, Clone, Copy)]
pub struct OrdinalBase;

impl NeighborhoodBase<OrdinalPoint> for OrdinalBase {
    fn contains(&self, center: &OrdinalPoint, level: usize, q: &OrdinalPoint) -> bool {
        center == q || (center.is_limit() && q.k + 1 == center.k && q.m > level as u64)
    }

    fn depth(&self, center: &OrdinalPoint, q: &OrdinalPoint, cap: usize) -> usize {
        if center == q {
            cap
        } else if center.is_limit() && q.k + 1 == center.k {
            (q.m.saturating_sub(1) as usize).min(cap)
        } else {
            0
        }
    }
}

/// The open ordinal space truncated below `ω·(K+1)`, with `S` and `T`.
#[derive(Debug, Clone)]
pub struct OrdinalScenario {
    pub truncation: u32,
    pub base: OrdinalBase,
    pub oracle: ConvergenceOracle,
    pub s: ClosureMap<OrdinalPoint>,
    pub t: ClosureMap<OrdinalPoint>,
}

impl OrdinalScenario {
    pub fn contains_point(&self, p: &OrdinalPoint) -> bool {
        p.k <= self.truncation
    }

    pub fn converges(&self, seq: &[OrdinalPoint], limit: &OrdinalPoint) -> bool {
        self.oracle.converges(&self.base, seq, limit)
    }
}

fn s_sample(x: &OrdinalPoint, budget: usize) -> Vec<OrdinalPoint> {
    let budget = budget.max(1) as u64;
    if !x.in_m_or_omega() {
        return (1..=budget).map(OrdinalPoint::natural).collect();
    }
    if *x == OrdinalPoint::OMEGA {
        return Vec::new();
    }
    let mut out: Vec<OrdinalPoint> = (x.m + 1..x.m + budget).map(OrdinalPoint::natural).collect();
    out.push(OrdinalPoint::OMEGA);
    out
}

fn s_contains(x: &OrdinalPoint, y: &OrdinalPoint) -> bool {
    if x.in_m_or_omega() {
        y.in_m_or_omega() && y > x
    } else {
        y.k == 0 && y.m >= 1
    }
}

/// `S(x) = M` off `M ∪ {ω}`, else `{y ∈ M ∪ {ω} : y > x}`; `T(x) = {x}` where
/// `S(x) = ∅` and `S(x)` otherwise.
pub fn ordinal_scenario(truncation: u32) -> OrdinalScenario {
    let truncation = truncation.max(1);
    let s = ClosureMap::from_sampler(|x: &OrdinalPoint, budget, _| s_sample(x, budget))
        .with_predicate(s_contains)
        .with_emptiness(|x| Some(*x == OrdinalPoint::OMEGA))
        .with_partial_image(|x| (*x == OrdinalPoint::OMEGA).then(Vec::new));
    let t = ClosureMap::from_sampler(|x: &OrdinalPoint, budget, _| {
        if *x == OrdinalPoint::OMEGA {
            vec![*x]
        } else {
            s_sample(x, budget)
        }
    })
    .with_predicate(|x, y| if *x == OrdinalPoint::OMEGA { y == x } else { s_contains(x, y) })
    .with_emptiness(|_| Some(false))
    .with_partial_image(|x| (*x == OrdinalPoint::OMEGA).then(|| vec![*x]));
    OrdinalScenario {
        truncation,
        base: OrdinalBase,
        oracle: ConvergenceOracle::default(),
        s,
        t,
    }
}
