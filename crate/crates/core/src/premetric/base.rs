use serde::{Deserialize, Serialize};

use crate::value::Value;

/// A nested countable local base `L_1(x) ⊇ L_2(x) ⊇ ...` at every point.
pub trait NeighborhoodBase<P>: Send + Sync {
    /// `q ∈ L_level(center)`, `level ≥ 1`.
    fn contains(&self, center: &P, level: usize, q: &P) -> bool;

    /// `Some(true)` certifies `L_level(a) ∩ L_level(b) = ∅`, `Some(false)`
    /// certifies a common point.
    fn certified_disjoint(&self, _a: &P, _b: &P, _level: usize) -> Option<bool> {
        None
    }

    /// Largest `level ≤ cap` with `q ∈ L_level(center)`, 0 if `q ∉ L_1(center)`.
    ///
    /// Exponential then binary search, so deep levels are only evaluated for
    /// points that are actually close.
    fn depth(&self, center: &P, q: &P, cap: usize) -> usize {
        if cap == 0 || !self.contains(center, 1, q) {
            return 0;
        }
        let mut lo = 1;
        loop {
            let next = (lo * 2).min(cap);
            if next == lo {
                return lo;
            }
            if !self.contains(center, next, q) {
                let mut hi = next;
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if self.contains(center, mid, q) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return lo;
            }
            lo = next;
        }
    }
}

/// Finite-horizon convergence test driven by a neighbourhood base.
///
/// The depth of each term is the deepest base level around the candidate
/// limit that contains it. A sequence is accepted when its final window sits
/// at depth at least `min_depth` and is strictly deeper than the preceding
/// window (or already at `cap`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceOracle {
    pub cap: usize,
    pub min_depth: usize,
    /// Final window length is `len / window_divisor` (at least 1).
    pub window_divisor: usize,
}

impl Default for ConvergenceOracle {
    fn default() -> Self {
        Self {
            cap: 1 << 24,
            min_depth: 8,
            window_divisor: 4,
        }
    }
}

impl ConvergenceOracle {
    pub fn converges<P, B: NeighborhoodBase<P> + ?Sized>(&self, base: &B, seq: &[P], limit: &P) -> bool {
        if seq.is_empty() {
            return false;
        }
        let w = (seq.len() / self.window_divisor.max(1)).max(1);
        let depth_min = |chunk: &[P]| {
            chunk
                .iter()
                .map(|q| base.depth(limit, q, self.cap))
                .min()
                .unwrap_or(0)
        };
        let last = depth_min(&seq[seq.len() - w..]);
        if last < self.min_depth {
            return false;
        }
        if last == self.cap || seq.len() < 2 * w {
            return true;
        }
        last > depth_min(&seq[seq.len() - 2 * w..seq.len() - w])
    }
}

/// Open balls `{q : d(center, q) < radius(level)}` of a metric-like distance.
pub struct BallBase<F, R> {
    pub dist: F,
    pub radius: R,
}

impl<P, F, R> NeighborhoodBase<P> for BallBase<F, R>
where
    F: Fn(&P, &P) -> f64 + Send + Sync,
    R: Fn(usize) -> f64 + Send + Sync,
{
    fn contains(&self, center: &P, level: usize, q: &P) -> bool {
        (self.dist)(center, q) < (self.radius)(level)
    }

    fn certified_disjoint(&self, a: &P, b: &P, level: usize) -> Option<bool> {
        // valid when dist is a metric
        (2.0 * (self.radius)(level) <= (self.dist)(a, b)).then_some(true)
    }
}

/// Intervals `(x - 1/n, x + 1/n)` of a scalar carrier, compared exactly.
#[derive(Debug, Clone, Copy, Default)]
pub struct LineBase;

impl<V: Value> NeighborhoodBase<V> for LineBase {
    fn contains(&self, center: &V, level: usize, q: &V) -> bool {
        let n = V::from_usize(level).expect("level fits the carrier");
        (center.clone() - q.clone()).abs() * n < V::one()
    }

    fn certified_disjoint(&self, a: &V, b: &V, level: usize) -> Option<bool> {
        let n = V::from_usize(level).expect("level fits the carrier");
        Some((a.clone() - b.clone()).abs() * n >= V::from_u8(2).unwrap())
    }

    fn depth(&self, center: &V, q: &V, cap: usize) -> usize {
        if center == q {
            return cap;
        }
        // largest n with n·d < 1, refined exactly around the float estimate
        let d = (center.clone() - q.clone()).abs();
        let guess = (1.0 / d.as_f64()).ceil();
        if !guess.is_finite() || guess > cap as f64 + 2.0 {
            return DefaultDepth(self).depth(center, q, cap);
        }
        let mut n = (guess as usize).saturating_sub(1).min(cap);
        while n > 0 && !self.contains(center, n, q) {
            n -= 1;
        }
        while n < cap && self.contains(center, n + 1, q) {
            n += 1;
        }
        n
    }
}

/// Forwards `contains` only, so `depth` falls back to the generic search.
struct DefaultDepth<'a, B>(&'a B);

impl<P, B: NeighborhoodBase<P>> NeighborhoodBase<P> for DefaultDepth<'_, B> {
    fn contains(&self, center: &P, level: usize, q: &P) -> bool {
        self.0.contains(center, level, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{dyadic, ratio, Rational};

    #[test]
    fn line_depth_is_exact() {
        let zero = Rational::from_integer(0.into());
        // |1/3| < 1/n iff n < 3
        assert_eq!(LineBase.depth(&zero, &ratio(1, 3), 100), 2);
        assert_eq!(LineBase.depth(&zero, &ratio(2, 7), 100), 3);
        assert_eq!(LineBase.depth(&zero, &dyadic(40), 1 << 24), 1 << 24);
        assert_eq!(LineBase.depth(&zero, &dyadic(10), 1 << 24), 1023);
        assert_eq!(LineBase.depth(&zero, &zero, 77), 77);
        assert_eq!(LineBase.depth(&zero, &ratio(3, 1), 77), 0);
        assert_eq!(DefaultDepth(&LineBase).depth(&zero, &ratio(2, 7), 100), 3);
    }

    #[test]
    fn oracle_reads_convergence() {
        let oracle = ConvergenceOracle::default();
        let harmonic: Vec<Rational> = (1..200).map(|n| ratio(1, n)).collect();
        let zero = Rational::from_integer(0.into());
        assert!(oracle.converges(&LineBase, &harmonic, &zero));
        assert!(!oracle.converges(&LineBase, &harmonic, &ratio(1, 100)));
        let alternating: Vec<Rational> = (0..200).map(|n| ratio(n % 2, 1)).collect();
        assert!(!oracle.converges(&LineBase, &alternating, &zero));
    }
}
