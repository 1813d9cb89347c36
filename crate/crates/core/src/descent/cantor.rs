use std::fmt;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use crate::orbit_engine::{find_accumulation_point, AccumulationConfig};
use crate::premetric::{is_sigma_p_cauchy, CauchyConfig, PSpace, Point};
use crate::value::{Value, Verdict};

type Membership<P> = Arc<dyn Fn(usize, &P) -> bool + Send + Sync>;
type SetSampler<P> = Arc<dyn Fn(usize, usize, &mut StdRng) -> Vec<P> + Send + Sync>;

/// Nested sets `C_1 ⊇ C_2 ⊇ …` given by membership predicates and per-set
/// samplers; indices start at 1.
#[derive(Clone)]
pub struct NestedFamily<P> {
    pub name: String,
    contains: Membership<P>,
    sampler: SetSampler<P>,
}

impl<P: Point> NestedFamily<P> {
    pub fn new(
        name: impl Into<String>,
        contains: impl Fn(usize, &P) -> bool + Send + Sync + 'static,
        sampler: impl Fn(usize, usize, &mut StdRng) -> Vec<P> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            contains: Arc::new(contains),
            sampler: Arc::new(sampler),
        }
    }

    pub fn contains(&self, index: usize, x: &P) -> bool {
        (self.contains)(index, x)
    }

    pub fn sample(&self, index: usize, budget: usize, rng: &mut StdRng) -> Vec<P> {
        (self.sampler)(index, budget, rng)
    }

    /// `sup{m ≤ cap : x ∈ C_1 ∩ … ∩ C_m}` by linear search.
    pub fn depth(&self, x: &P, cap: usize) -> usize {
        self.depth_from(x, 0, cap)
    }

    /// As [`depth`](Self::depth), taking membership in `C_1, …, C_known` as given.
    pub fn depth_from(&self, x: &P, known: usize, cap: usize) -> usize {
        known.min(cap) + (known.min(cap) + 1..=cap).take_while(|&m| self.contains(m, x)).count()
    }
}

impl<P> fmt::Debug for NestedFamily<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NestedFamily").field("name", &self.name).finish_non_exhaustive()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorConfig {
    /// Linear-search cap for `k_i`; reaching it is read as `k_i = ∞`.
    pub depth_cap: usize,
    pub max_steps: usize,
    pub budget: usize,
    pub seed: u64,
    pub accumulation: AccumulationConfig,
}

impl CantorConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            depth_cap: 4096,
            max_steps: 48,
            budget: 16,
            seed,
            accumulation: AccumulationConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CantorOutcome<P> {
    /// `x̄` lies in every probed `C_k`, `k ≤ checked_depth`.
    Limit { point: P, checked_depth: usize },
    NoAccumulation { reason: String },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorReport<P> {
    pub outcome: CantorOutcome<P>,
    pub orbit: Vec<P>,
    /// `k_i` for each orbit point.
    pub depths: Vec<usize>,
    /// Samples of `C_{i+1}` that failed the `C_i` predicate.
    pub nested_violations: usize,
    pub cauchy: Verdict,
}

/// Runs the nested-set orbit: `x_{i+1}` is the deepest sample of `C_{k_i+1}`
/// where `k_i` is the depth of `x_i`; an accumulation point is then sought
/// among `pool`, the carrier's limit pool and recurring orbit points, and
/// accepted only if it passes every `C_k` up to the cap.
pub fn cantor_intersect<P: Point, V: Value>(
    family: &NestedFamily<P>,
    space: &PSpace<P, V>,
    pool: &[P],
    cfg: &CantorConfig,
) -> CantorReport<P> {
    let cap = cfg.depth_cap;
    let mut orbit: Vec<P> = Vec::new();
    let mut depths: Vec<usize> = Vec::new();
    let mut nested_violations = 0;
    let mut capped = None;

    for step in 0..=cfg.max_steps {
        let index = depths.last().map_or(1, |k| k + 1);
        let mut rng = StdRng::seed_from_u64(cfg.seed ^ (step as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let sample = family.sample(index, cfg.budget, &mut rng);
        if index > 1 {
            nested_violations += sample.iter().filter(|x| !family.contains(index - 1, x)).count();
        }
        let Some((x, k)) = sample
            .into_iter()
            .filter(|x| family.contains(index, x))
            .map(|x| {
                // nestedness is spot-checked above, so scanning resumes past `index`
                let k = family.depth_from(&x, index, cap);
                (x, k)
            })
            .reduce(|a, b| if b.1 > a.1 { b } else { a })
        else {
            return CantorReport {
                outcome: CantorOutcome::Inconclusive {
                    reason: format!("cannot witness C_{index} nonempty"),
                },
                cauchy: Verdict::Inconclusive,
                orbit,
                depths,
                nested_violations,
            };
        };
        orbit.push(x.clone());
        depths.push(k);
        if k == cap {
            capped = Some(x);
            break;
        }
    }

    let cauchy = is_sigma_p_cauchy(&*space.premetric, &orbit, &CauchyConfig::default()).verdict;
    let outcome = match capped {
        Some(point) => CantorOutcome::Limit {
            point,
            checked_depth: cap,
        },
        None => {
            let found = find_accumulation_point(space, &orbit, pool, &cfg.accumulation);
            match found.into_iter().find(|a| family.depth(&a.limit, cap) == cap) {
                Some(a) => CantorOutcome::Limit {
                    point: a.limit,
                    checked_depth: cap,
                },
                None => CantorOutcome::NoAccumulation {
                    reason: format!(
                        "no candidate in every C_k up to k = {cap} after {} steps (Σ-Cauchy: {cauchy:?})",
                        orbit.len()
                    ),
                },
            }
        }
    };
    CantorReport {
        outcome,
        orbit,
        depths,
        nested_violations,
        cauchy,
    }
}
