//! Premetric spaces: a distance `p` with `p(x, y) = 0 ⟺ x = y`, no symmetry
//! and no triangle inequality, tied to a topology through a convergence
//! oracle.

mod audit;
mod base;

use std::fmt::Debug;
use std::sync::Arc;

use num_traits::Zero;
use rand::rngs::StdRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::value::{tends_to_zero, TrendConfig, Value, Verdict};

pub use audit::{audit_axioms, AxiomReport, AxiomStatus, Probe, Witness};
pub use base::{BallBase, ConvergenceOracle, LineBase, NeighborhoodBase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PremetricError {
    #[error("probe `{0}`: the convergence oracle rejects its declared limit")]
    RejectedFixture(String),
}

/// Bound shared by every carrier point type.
pub trait Point: Clone + PartialEq + Debug + Send + Sync + 'static {}

impl<T: Clone + PartialEq + Debug + Send + Sync + 'static> Point for T {}

/// Generalized distance `p(x, y) ≥ 0`.
pub trait Premetric<P: ?Sized>: Send + Sync {
    type Value: Value;

    fn eval(&self, x: &P, y: &P) -> Self::Value;
}

impl<P: ?Sized, D: Premetric<P> + ?Sized> Premetric<P> for Arc<D> {
    type Value = D::Value;

    fn eval(&self, x: &P, y: &P) -> Self::Value {
        (**self).eval(x, y)
    }
}

impl<P: ?Sized, D: Premetric<P> + ?Sized> Premetric<P> for &D {
    type Value = D::Value;

    fn eval(&self, x: &P, y: &P) -> Self::Value {
        (**self).eval(x, y)
    }
}

/// `|x - y|` on a scalar carrier.
#[derive(Debug, Clone, Copy, Default)]
pub struct AbsDiff;

impl<V: Value> Premetric<V> for AbsDiff {
    type Value = V;

    fn eval(&self, x: &V, y: &V) -> V {
        (x.clone() - y.clone()).abs()
    }
}

/// A premetric backed by a closure.
pub struct FnPremetric<F>(pub F);

impl<P, V, F> Premetric<P> for FnPremetric<F>
where
    V: Value,
    F: Fn(&P, &P) -> V + Send + Sync,
{
    type Value = V;

    fn eval(&self, x: &P, y: &P) -> V {
        (self.0)(x, y)
    }
}

pub type Sampler<P> = Arc<dyn Fn(usize, &mut StdRng) -> Vec<P> + Send + Sync>;

/// A premetric space `(X, τ, p)`: carrier sampler, premetric and the
/// neighbourhood base that defines convergence.
#[derive(Clone)]
pub struct PSpace<P, V> {
    pub name: String,
    pub premetric: Arc<dyn Premetric<P, Value = V>>,
    pub base: Arc<dyn NeighborhoodBase<P>>,
    pub oracle: ConvergenceOracle,
    pub sampler: Sampler<P>,
    /// Points the carrier declares as candidate limits (used by accumulation
    /// detection for limits that orbits approach but never visit).
    pub limit_pool: Vec<P>,
}

impl<P, V: Value> PSpace<P, V> {
    pub fn p(&self, x: &P, y: &P) -> V {
        self.premetric.eval(x, y)
    }

    pub fn converges(&self, seq: &[P], limit: &P) -> bool {
        self.oracle.converges(&*self.base, seq, limit)
    }
}

impl<V: Value> PSpace<V, V> {
    /// A scalar carrier with `p = |x - y|` and interval neighbourhoods.
    pub fn metric_line(name: impl Into<String>, sampler: Sampler<V>, limit_pool: Vec<V>) -> Self {
        Self {
            name: name.into(),
            premetric: Arc::new(AbsDiff),
            base: Arc::new(LineBase),
            oracle: ConvergenceOracle::default(),
            sampler,
            limit_pool,
        }
    }
}

impl<P, V> Debug for PSpace<P, V> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PSpace").field("name", &self.name).finish_non_exhaustive()
    }
}

/// Lower estimate of `p_C(x) = sup_{y ∈ C} p(y, x)` from at most `budget`
/// points of `C`; `0` for an empty sample.
pub fn p_sup<P, D, I>(p: &D, set: I, x: &P, budget: usize) -> D::Value
where
    D: Premetric<P> + ?Sized,
    I: IntoIterator<Item = P>,
{
    set.into_iter()
        .take(budget)
        .map(|y| p.eval(&y, x))
        .fold(D::Value::zero(), D::Value::max_of)
}

/// `Σ p(x_{i+1}, x_i)` over consecutive pairs; zero for fewer than two points.
pub fn sigma_p_length<P, D: Premetric<P> + ?Sized>(p: &D, prefix: &[P]) -> D::Value {
    prefix
        .windows(2)
        .map(|w| p.eval(&w[1], &w[0]))
        .fold(D::Value::zero(), |acc, v| acc + v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyConfig {
    /// Sum of the final quarter of the steps must fall below this.
    pub tail_tolerance: f64,
    /// Partial length above this refutes.
    pub divergence_bound: f64,
    pub min_len: usize,
}

impl Default for CauchyConfig {
    fn default() -> Self {
        Self {
            tail_tolerance: 1e-6,
            divergence_bound: 1e3,
            min_len: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport<V> {
    pub verdict: Verdict,
    pub partial_length: V,
}

/// Semi-decides whether an orbit has finite Σ_p-length from a finite prefix.
pub fn is_sigma_p_cauchy<P, D: Premetric<P> + ?Sized>(
    p: &D,
    prefix: &[P],
    cfg: &CauchyConfig,
) -> CauchyReport<D::Value> {
    let steps: Vec<D::Value> = prefix.windows(2).map(|w| p.eval(&w[1], &w[0])).collect();
    let partial_length = steps.iter().cloned().fold(D::Value::zero(), |a, v| a + v);
    let verdict = if partial_length.as_f64() > cfg.divergence_bound {
        Verdict::Refuted
    } else if prefix.len() < cfg.min_len {
        Verdict::Inconclusive
    } else {
        let tail = &steps[steps.len() - (steps.len() / 4).max(1)..];
        let tail_mass: f64 = tail.iter().map(Value::as_f64).sum();
        if tail_mass <= cfg.tail_tolerance {
            Verdict::Supported
        } else {
            Verdict::Inconclusive
        }
    };
    CauchyReport {
        verdict,
        partial_length,
    }
}

/// `p(target, x_n) → 0` along `seq`, read with [`tends_to_zero`].
pub fn distance_trend<P, D: Premetric<P> + ?Sized>(p: &D, target: &P, seq: &[P], cfg: &TrendConfig) -> Verdict {
    let d: Vec<f64> = seq.iter().map(|x| p.eval(target, x).as_f64()).collect();
    tends_to_zero(&d, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{dyadic, ratio, Rational};

    #[test]
    fn p_sup_examples() {
        let x = ratio(1, 1);
        assert_eq!(p_sup(&AbsDiff, [x.clone()], &x, 10), Rational::zero());
        let c: Vec<Rational> = [0, 2, 5].iter().map(|&v| ratio(v, 1)).collect();
        assert_eq!(p_sup(&AbsDiff, c, &x, 10), ratio(4, 1));
        assert_eq!(p_sup(&AbsDiff, Vec::<Rational>::new(), &x, 10), Rational::zero());
    }

    #[test]
    fn p_sup_over_dense_interval_approaches_analytic_supremum() {
        // sup_{y ∈ [0, 1/2]} |y - 1| = 1, attained at y = 0
        let grid = |k: i64| (0..=k).map(move |j| ratio(j, 2 * k));
        let coarse = p_sup(&AbsDiff, grid(4).skip(1), &ratio(1, 1), 100);
        let fine = p_sup(&AbsDiff, grid(1024).skip(1), &ratio(1, 1), 2000);
        let exact = p_sup(&AbsDiff, grid(1024), &ratio(1, 1), 2000);
        assert!(coarse <= fine && fine < exact);
        assert_eq!(exact, ratio(1, 1));
        assert!((1.0 - fine.as_f64()) < 1e-3);
    }

    #[test]
    fn sigma_length_examples() {
        let constant = vec![ratio(3, 1); 3];
        assert_eq!(sigma_p_length(&AbsDiff, &constant), Rational::zero());
        let halving: Vec<Rational> = (0..=10).map(dyadic).collect();
        // geometric series Σ_{k=1}^{10} 2^-k
        let oracle = (1..=10).map(dyadic).fold(Rational::zero(), |a, v| a + v);
        assert_eq!(sigma_p_length(&AbsDiff, &halving), oracle);
        assert_eq!(oracle, ratio(1, 1) - dyadic(10));
    }

    #[test]
    fn cauchy_examples() {
        let cfg = CauchyConfig::default();
        let geometric: Vec<f64> = (0..64).map(|k| 0.5f64.powi(k)).collect();
        let r = is_sigma_p_cauchy(&AbsDiff, &geometric, &cfg);
        assert_eq!(r.verdict, Verdict::Supported);
        assert!((r.partial_length - 1.0).abs() < 1e-12);

        let harmonic: Vec<f64> = (1..5000)
            .scan(0.0, |s, i| {
                *s += 1.0 / i as f64;
                Some(*s)
            })
            .collect();
        let cfg = CauchyConfig {
            divergence_bound: 5.0,
            ..cfg
        };
        assert_eq!(is_sigma_p_cauchy(&AbsDiff, &harmonic, &cfg).verdict, Verdict::Refuted);
        assert_eq!(
            is_sigma_p_cauchy(&AbsDiff, &harmonic[..40], &cfg).verdict,
            Verdict::Inconclusive
        );
        assert_eq!(
            is_sigma_p_cauchy(&AbsDiff, &[0.0, 0.5, 0.75], &CauchyConfig::default()).verdict,
            Verdict::Inconclusive
        );
    }
}
