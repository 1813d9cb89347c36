use std::fmt::{Display, Write as _};
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::map::SetValuedMap;
use crate::premetric::{Point, Premetric};
use crate::value::{Extended, Value};

/// An objective over the carrier, `+∞` off its domain.
pub type Objective<P, V> = Arc<dyn Fn(&P) -> Extended<V> + Send + Sync>;

/// How `x_{i+1}` is picked from the sampled `S(x_i)`.
#[derive(Clone)]
pub enum Policy<P, V> {
    /// The first sampled point.
    FirstSample,
    /// A sample whose objective is within `ε_i = eps0 · 2^{-i}` of the sampled
    /// minimum; the earliest such sample wins.
    GreedyMinObjective {
        objective: Objective<P, V>,
        eps0: f64,
    },
    /// The sample maximizing `p(y, x_i)`.
    GreedyMaxStep { premetric: Arc<dyn Premetric<P, Value = V>> },
    /// The sample minimizing `p(y, x_i)`, excluding `x_i` itself.
    GreedyMinStep { premetric: Arc<dyn Premetric<P, Value = V>> },
}

impl<P, V> Policy<P, V> {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::FirstSample => "first-sample",
            Policy::GreedyMinObjective { .. } => "greedy-min-f",
            Policy::GreedyMaxStep { .. } => "greedy-max-step",
            Policy::GreedyMinStep { .. } => "greedy-min-step",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitConfig {
    pub max_steps: usize,
    /// Samples drawn from each `S(x_i)`.
    pub budget: usize,
    pub seed: u64,
    /// Candidates kept per step in the choice log.
    pub log_candidates: usize,
}

impl OrbitConfig {
    pub fn new(max_steps: usize, seed: u64) -> Self {
        Self {
            max_steps,
            budget: 64,
            seed,
            log_candidates: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiceRecord<P> {
    pub sampled: usize,
    /// Leading part of the sampled candidate set.
    pub candidates: Vec<P>,
    pub chosen: P,
    pub rationale: String,
}

/// A realized prefix `x_1, x_2, …` of an S-orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit<P> {
    pub points: Vec<P>,
    /// Entry `i` explains the step `x_i → x_{i+1}`.
    pub choice_log: Vec<ChoiceRecord<P>>,
    /// The last point's image sampled empty: the orbit is finite and ends there.
    pub ended: bool,
    /// The map certified the emptiness behind `ended`.
    pub end_certified: bool,
}

impl<P> Orbit<P> {
    /// An orbit given explicitly, with no choice log.
    pub fn from_points(points: Vec<P>) -> Self {
        Self {
            points,
            choice_log: Vec::new(),
            ended: false,
            end_certified: false,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> Option<&P> {
        self.points.last()
    }
}

pub(crate) fn step_rng(seed: u64, step: usize) -> StdRng {
    StdRng::seed_from_u64(seed ^ (step as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn choose<P: Point, V: Value>(policy: &Policy<P, V>, x: &P, candidates: &[P], step: usize) -> Option<(usize, String)> {
    match policy {
        Policy::FirstSample => Some((0, "first sample".into())),
        Policy::GreedyMinObjective { objective, eps0 } => {
            let values: Vec<Extended<V>> = candidates.iter().map(|y| objective(y)).collect();
            let best = values
                .iter()
                .cloned()
                .reduce(|a, b| if b < a { b } else { a })?;
            let slack = eps0 * 0.5f64.powi(step.min(1000) as i32 + 1);
            let threshold = match &best {
                Extended::Finite(v) => Extended::Finite(v.clone() + V::from_f64(slack).unwrap_or_else(V::zero)),
                Extended::Infinity => Extended::Infinity,
            };
            let idx = values.iter().position(|v| *v <= threshold)?;
            Some((idx, format!("f = {} within {slack:e} of sampled minimum {best}", values[idx])))
        }
        Policy::GreedyMaxStep { premetric } => {
            let (idx, d) = candidates
                .iter()
                .map(|y| premetric.eval(y, x))
                .enumerate()
                .reduce(|a, b| if b.1 > a.1 { b } else { a })?;
            Some((idx, format!("max step p = {d}")))
        }
        Policy::GreedyMinStep { premetric } => {
            let (idx, d) = candidates
                .iter()
                .enumerate()
                .filter(|(_, y)| *y != x)
                .map(|(i, y)| (i, premetric.eval(y, x)))
                .reduce(|a, b| if b.1 < a.1 { b } else { a })
                .or_else(|| Some((0, V::zero())))?;
            Some((idx, format!("min step p = {d}")))
        }
    }
}

/// Generates an S-orbit from `x1`.
///
/// Stops after `max_steps` steps or when `S(x_i)` samples empty; in the latter
/// case the orbit is finite and `ended` is set. Deterministic given the seed.
pub fn generate_orbit<P, V, M>(map: &M, x1: P, policy: &Policy<P, V>, cfg: &OrbitConfig) -> Orbit<P>
where
    P: Point,
    V: Value,
    M: SetValuedMap<P> + ?Sized,
{
    let mut orbit = Orbit::from_points(vec![x1]);
    for step in 0..cfg.max_steps {
        let x = orbit.points.last().unwrap().clone();
        let mut rng = step_rng(cfg.seed, step);
        let candidates = if map.known_empty(&x) == Some(true) {
            Vec::new()
        } else {
            map.sample(&x, cfg.budget, &mut rng)
        };
        let Some((idx, rationale)) = (!candidates.is_empty())
            .then(|| choose(policy, &x, &candidates, step))
            .flatten()
        else {
            orbit.ended = true;
            orbit.end_certified = map.known_empty(&x) == Some(true);
            break;
        };
        let chosen = candidates[idx].clone();
        orbit.choice_log.push(ChoiceRecord {
            sampled: candidates.len(),
            candidates: candidates.into_iter().take(cfg.log_candidates).collect(),
            chosen: chosen.clone(),
            rationale,
        });
        orbit.points.push(chosen);
    }
    orbit
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReplay {
    pub checked: usize,
    pub passed: usize,
    /// Steps whose membership the map cannot decide.
    pub undecidable: usize,
}

impl MembershipReplay {
    pub fn all_passed(&self) -> bool {
        self.passed == self.checked
    }
}

/// Replays `x_{i+1} ∈ S(x_i)` on every consecutive pair via the map's
/// predicate or exact image.
pub fn replay_membership<P: Point, M: SetValuedMap<P> + ?Sized>(map: &M, orbit: &Orbit<P>) -> MembershipReplay {
    let mut replay = MembershipReplay {
        checked: 0,
        passed: 0,
        undecidable: 0,
    };
    for w in orbit.points.windows(2) {
        match map.decides(&w[0], &w[1]) {
            Some(ok) => {
                replay.checked += 1;
                replay.passed += ok as usize;
            }
            None => replay.undecidable += 1,
        }
    }
    replay
}

/// Line-oriented dump: `step<TAB>point<TAB>f<TAB>p_sup`, `-` for missing fields.
pub fn orbit_dump<P: Display, V: Display>(orbit: &Orbit<P>, f: Option<&[Extended<V>]>, p_sup: &[f64]) -> String {
    let mut out = String::new();
    for (i, x) in orbit.points.iter().enumerate() {
        let fv = f.and_then(|v| v.get(i)).map_or("-".to_string(), |v| v.to_string());
        let ps = p_sup.get(i).map_or("-".to_string(), |v| format!("{v:e}"));
        let _ = writeln!(out, "{}\t{x}\t{fv}\t{ps}", i + 1);
    }
    out
}
