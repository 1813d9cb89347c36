//! Variational solvers: strong-minimum descent along sublevel orbits, the
//! Ekeland-type descent with its length bound, a Caristi premise check and
//! the nested-set (Cantor) intersection orbit.

mod cantor;
mod ekeland;
mod strong_min;

use std::fmt::{self, Display};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use rand::rngs::StdRng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::premetric::Point;
use crate::value::{Extended, Value};

pub use cantor::{cantor_intersect, CantorConfig, CantorOutcome, CantorReport, NestedFamily};
pub use ekeland::{caristi_check, ekeland_descent, CaristiReport};
pub use strong_min::{strong_min_descent, sublevel_map};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DescentError {
    #[error("objective `{0}` is improper: no sampled point has a finite value")]
    Improper(String),
    #[error("start point is outside dom f")]
    NotInDomain,
    #[error("values fell to {value} below the floor {floor} at step {step}; f looks unbounded below")]
    UnboundedBelow { step: usize, value: f64, floor: f64 },
}

type ObjectiveFn<P, V> = Arc<dyn Fn(&P) -> Extended<V> + Send + Sync>;

/// An extended-real objective on a finite sampled domain.
#[derive(Clone)]
pub struct ObjectiveFunction<P, V> {
    pub name: String,
    f: ObjectiveFn<P, V>,
    domain: Arc<Vec<P>>,
    /// An analytic lower bound, when one is known.
    pub lower_bound: Option<V>,
    evaluations: Arc<AtomicUsize>,
}

impl<P: Point, V: Value> ObjectiveFunction<P, V> {
    /// Rejects objectives that are `+∞` on the whole domain.
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&P) -> Extended<V> + Send + Sync + 'static,
        domain: Vec<P>,
    ) -> Result<Self, DescentError> {
        let name = name.into();
        if !domain.iter().any(|x| f(x).is_finite()) {
            return Err(DescentError::Improper(name));
        }
        Ok(Self {
            name,
            f: Arc::new(f),
            domain: Arc::new(domain),
            lower_bound: None,
            evaluations: Arc::new(AtomicUsize::new(0)),
        })
    }

    pub fn with_lower_bound(mut self, bound: V) -> Self {
        self.lower_bound = Some(bound);
        self
    }

    pub fn eval(&self, x: &P) -> Extended<V> {
        self.evaluations.fetch_add(1, Ordering::Relaxed);
        (self.f)(x)
    }

    pub fn domain(&self) -> &[P] {
        &self.domain
    }

    /// The whole domain when `budget` covers it, else a random subset.
    pub fn sample(&self, budget: usize, rng: &mut StdRng) -> Vec<P> {
        if budget >= self.domain.len() {
            return self.domain.to_vec();
        }
        rand::seq::index::sample(rng, self.domain.len(), budget)
            .into_iter()
            .map(|i| self.domain[i].clone())
            .collect()
    }

    /// Calls to `f` so far, across every clone.
    pub fn evaluations(&self) -> usize {
        self.evaluations.load(Ordering::Relaxed)
    }

    /// The declared lower bound, else the minimum over the domain.
    pub(crate) fn floor_estimate(&self) -> Option<V> {
        self.lower_bound.clone().or_else(|| {
            self.domain
                .iter()
                .filter_map(|x| (self.f)(x).finite().cloned())
                .reduce(|a, b| if b < a { b } else { a })
        })
    }
}

impl<P, V> fmt::Debug for ObjectiveFunction<P, V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObjectiveFunction")
            .field("name", &self.name)
            .field("domain", &self.domain.len())
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DescentConfig {
    /// Slack `ε_i = eps0 · 2^{-i}` against the sampled minimum.
    pub eps0: f64,
    /// Residual and trend tolerance.
    pub tolerance: f64,
    /// Domain samples per step.
    pub budget: usize,
    pub max_steps: usize,
    pub seed: u64,
    /// Random minimizing probes on top of the deterministic ones.
    pub probes: usize,
    /// Values below this abort as unbounded below.
    pub floor: Option<f64>,
}

impl DescentConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            eps0: 0.0,
            tolerance: 1e-6,
            budget: 1 << 16,
            max_steps: 256,
            seed,
            probes: 4,
            floor: None,
        }
    }
}

/// Outcome of the strong-minimum probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrongMinimum {
    Certified,
    NotCertified,
    Inconclusive,
    NotRun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizationCertificate<P, V> {
    pub solver: String,
    pub point: P,
    pub value: Extended<V>,
    pub steps: usize,
    /// `Σ p(x_{i+1}, x_i)` along the orbit.
    pub sigma_length: V,
    /// Largest sampled violation of the stopping test (0 when none).
    pub residual: f64,
    pub strong_minimum: StrongMinimum,
    /// Classification of `x̄` against its own image, when run.
    pub fixed_point: Option<String>,
    pub orbit: Vec<P>,
    /// The orbit stopped at an empty value.
    pub ended: bool,
    pub evaluations: usize,
    /// Prefix bound `Σ ≤ f(x₁) - f(x_n)` at every step; `None` when not applicable.
    pub length_bound_held: Option<bool>,
    /// `f` strictly decreased at every step.
    pub monotone: bool,
    pub notes: Vec<String>,
}

impl<P, V> MinimizationCertificate<P, V> {
    /// Every invariant that was checked held.
    pub fn invariants_held(&self) -> bool {
        self.monotone && self.length_bound_held != Some(false)
    }
}

/// Flat, string-valued view of a certificate for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub solver: String,
    pub point: String,
    pub value: String,
    pub value_f64: f64,
    pub steps: usize,
    pub sigma_length: String,
    pub residual: f64,
    pub strong_minimum: StrongMinimum,
    pub fixed_point: Option<String>,
    pub ended: bool,
    pub evaluations: usize,
    pub length_bound_held: Option<bool>,
    pub monotone: bool,
    pub orbit_head: Vec<String>,
    pub notes: Vec<String>,
}

impl<P: Display, V: Value> MinimizationCertificate<P, V> {
    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            solver: self.solver.clone(),
            point: self.point.to_string(),
            value: self.value.to_string(),
            value_f64: self.value.as_f64(),
            steps: self.steps,
            sigma_length: self.sigma_length.to_string(),
            residual: self.residual,
            strong_minimum: self.strong_minimum,
            fixed_point: self.fixed_point.clone(),
            ended: self.ended,
            evaluations: self.evaluations,
            length_bound_held: self.length_bound_held,
            monotone: self.monotone,
            orbit_head: self.orbit.iter().take(16).map(ToString::to_string).collect(),
            notes: self.notes.clone(),
        }
    }
}

#[cfg(test)]
mod tests;
