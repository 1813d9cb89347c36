use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{step_rng, Orbit};
use super::map::SetValuedMap;
use super::OrbitError;
use crate::premetric::{p_sup, PSpace, Point};
use crate::value::{tends_to_zero, TrendConfig, Value, Verdict};

const MONITOR_SALT: u64 = 0x5EED_0F5C;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AccumulationConfig {
    pub tolerance: f64,
    /// Shorter orbits yield no candidates.
    pub min_len: usize,
}

impl Default for AccumulationConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-6,
            min_len: 8,
        }
    }
}

/// A limit candidate `x̄` with the subsequence `i_k` approaching it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Accumulation<P> {
    pub limit: P,
    /// Zero-based orbit indices, increasing.
    pub indices: Vec<usize>,
    /// `p(x̄, x_{i_k})` along `indices`.
    pub distances: Vec<f64>,
}

fn recurring_in<P: PartialEq>(points: &[P], z: &P) -> Vec<usize> {
    let half = points.len() / 2;
    (half..points.len()).filter(|&i| points[i] == *z).collect()
}

fn candidate_subsequence<P: Point, V: Value>(
    space: &PSpace<P, V>,
    points: &[P],
    z: &P,
    tolerance: f64,
) -> Option<Accumulation<P>> {
    let half = points.len() / 2;
    let hits = recurring_in(points, z);
    if hits.len() >= 2 {
        return Some(Accumulation {
            limit: z.clone(),
            distances: vec![0.0; hits.len()],
            indices: hits,
        });
    }
    // running-minimum records of p(z, x_i) over the points other than z
    let mut indices = Vec::new();
    let mut distances: Vec<f64> = Vec::new();
    for (i, x) in points.iter().enumerate() {
        if x == z {
            continue;
        }
        let d = space.p(z, x).as_f64();
        if distances.last().is_none_or(|&last| d < last) {
            indices.push(i);
            distances.push(d);
        }
    }
    let (&last_i, &last_d) = (indices.last()?, distances.last()?);
    (last_d <= tolerance && last_i >= half).then(|| Accumulation {
        limit: z.clone(),
        indices,
        distances,
    })
}

/// Limit candidates of the orbit prefix.
///
/// Candidates are `pool`, the space's limit pool and the orbit points that
/// recur in the final half. A candidate is kept when `p(x̄, ·)` has a
/// decreasing subsequence reaching `tolerance` in the final half (or when it
/// recurs there). Several candidates signal a non-Hausdorff limit.
pub fn find_accumulation_point<P: Point, V: Value>(
    space: &PSpace<P, V>,
    points: &[P],
    pool: &[P],
    cfg: &AccumulationConfig,
) -> Vec<Accumulation<P>> {
    if points.len() < cfg.min_len.max(2) {
        return Vec::new();
    }
    let mut candidates: Vec<P> = Vec::new();
    let half = points.len() / 2;
    let tail_recurring = points[half..]
        .iter()
        .filter(|z| recurring_in(points, z).len() >= 2);
    for z in pool.iter().chain(&space.limit_pool).chain(tail_recurring) {
        if !candidates.contains(z) {
            candidates.push(z.clone());
        }
    }
    candidates
        .par_iter()
        .filter_map(|z| candidate_subsequence(space, points, z, cfg.tolerance))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonitorConfig {
    /// Samples per image when the map has no exact image.
    pub budget: usize,
    pub seed: u64,
    pub trend: TrendConfig,
    pub accumulation: AccumulationConfig,
}

impl MonitorConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            budget: 64,
            seed,
            trend: TrendConfig::with_tolerance(1e-6),
            accumulation: AccumulationConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractivityReport<P> {
    /// `p_{S(x_i)}(x_i)` estimate per orbit point.
    pub p_sup: Vec<f64>,
    pub candidates: Vec<Accumulation<P>>,
    /// The candidate supporting the verdict, if any.
    pub limit: Option<P>,
    /// Subsequence `i_k` of `limit`.
    pub indices: Vec<usize>,
    pub verdict: Verdict,
    pub reason: String,
}

/// `p_{S(x_i)}(x_i)` for every point, from exact images or seeded samples.
pub fn p_sup_series<P, V, M>(space: &PSpace<P, V>, map: &M, points: &[P], budget: usize, seed: u64) -> Vec<f64>
where
    P: Point,
    V: Value,
    M: SetValuedMap<P> + ?Sized,
{
    points
        .par_iter()
        .enumerate()
        .map(|(i, x)| {
            let mut rng = step_rng(seed ^ MONITOR_SALT, i);
            let image = map.image_or_sample(x, budget, &mut rng);
            let n = image.len();
            p_sup(&*space.premetric, image, x, n).as_f64()
        })
        .collect()
}

/// Three-valued p-contractivity monitor.
///
/// Supported needs a candidate whose subsequence has both `p(x̄, x_{i_k}) → 0`
/// and `p_{S(x_{i_k})}(x_{i_k}) → 0`. Refuted when the sup-distance stays
/// bounded away from zero along the whole orbit tail, which no subsequence
/// can escape.
pub fn monitor_p_contractive<P, V, M>(
    space: &PSpace<P, V>,
    map: &M,
    orbit: &Orbit<P>,
    cfg: &MonitorConfig,
) -> Result<ContractivityReport<P>, OrbitError>
where
    P: Point,
    V: Value,
    M: SetValuedMap<P> + ?Sized,
{
    if orbit.ended {
        return Err(OrbitError::Ended { len: orbit.len() });
    }
    let p_sup = p_sup_series(space, map, &orbit.points, cfg.budget, cfg.seed);
    let candidates = find_accumulation_point(space, &orbit.points, &[], &cfg.accumulation);
    let supporting = candidates.iter().find(|c| {
        let sub: Vec<f64> = c.indices.iter().map(|&i| p_sup[i]).collect();
        tends_to_zero(&sub, &cfg.trend) == Verdict::Supported
            && tends_to_zero(&c.distances, &cfg.trend) == Verdict::Supported
    });
    let (verdict, reason) = match supporting {
        Some(c) => (
            Verdict::Supported,
            format!("p(x̄, x_ik) and p_S(x_ik)(x_ik) vanish on {} indices", c.indices.len()),
        ),
        None if tends_to_zero(&p_sup, &cfg.trend) == Verdict::Refuted => (
            Verdict::Refuted,
            "p_S(x_i)(x_i) stays bounded away from 0 on the orbit tail".to_string(),
        ),
        None if candidates.is_empty() => (Verdict::Inconclusive, "no accumulation candidate".to_string()),
        None => (
            Verdict::Inconclusive,
            "candidates found but the sup-distance trend is not settled".to_string(),
        ),
    };
    Ok(ContractivityReport {
        p_sup,
        limit: supporting.map(|c| c.limit.clone()),
        indices: supporting.map(|c| c.indices.clone()).unwrap_or_default(),
        candidates,
        verdict,
        reason,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StarVariant {
    /// `y_j ∈ S(x_{i_{k_j}})` with `y_j → y`.
    Approximate,
    /// `y ∈ S(x_{i_{k_j}})` for a subsequence.
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum StarOutcome<P> {
    /// Every probed `y ∈ S(x̄) \ {x̄}` persisted; `checked = 0` means vacuous.
    Supported { checked: usize },
    Refuted { y: P, reason: String },
    Inconclusive { reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarConfig {
    pub budget: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Persistence hits required in the late half of the subsequence.
    pub min_hits: usize,
}

impl StarConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            budget: 64,
            seed,
            tolerance: 1e-6,
            min_hits: 2,
        }
    }
}

fn probe_one<P, V, M>(
    space: &PSpace<P, V>,
    map: &M,
    points: &[P],
    indices: &[usize],
    y: &P,
    variant: StarVariant,
    cfg: &StarConfig,
) -> Verdict
where
    P: Point,
    V: Value,
    M: SetValuedMap<P> + ?Sized,
{
    let late = &indices[indices.len() / 2..];
    let membership = |i: usize| -> (Option<bool>, Vec<P>) {
        let x = &points[i];
        let mut rng = step_rng(cfg.seed ^ MONITOR_SALT, i);
        match map.decides(x, y) {
            Some(m) => (Some(m), Vec::new()),
            None => {
                let s = map.sample(x, cfg.budget, &mut rng);
                (s.contains(y).then_some(true), s)
            }
        }
    };
    match variant {
        StarVariant::Exact => {
            let mut hits = 0;
            let mut decided = true;
            for &i in late {
                match membership(i).0 {
                    Some(true) => hits += 1,
                    Some(false) => {}
                    None => decided = false,
                }
            }
            if hits >= cfg.min_hits {
                Verdict::Supported
            } else if decided {
                Verdict::Refuted
            } else {
                Verdict::Inconclusive
            }
        }
        StarVariant::Approximate => {
            let mut records: Vec<(usize, f64)> = Vec::new();
            let mut all_exact = true;
            let mut late_min = f64::INFINITY;
            for (k, &i) in indices.iter().enumerate() {
                let (m, samples) = membership(i);
                let d = if m == Some(true) {
                    0.0
                } else {
                    let image = map.exact_image(&points[i]);
                    all_exact &= image.is_some() || k < indices.len() / 2;
                    image
                        .unwrap_or(samples)
                        .iter()
                        .map(|z| space.p(y, z).as_f64())
                        .fold(f64::INFINITY, f64::min)
                };
                if k >= indices.len() / 2 {
                    late_min = late_min.min(d);
                }
                if records.last().is_none_or(|&(_, r)| d < r) || d == 0.0 {
                    records.push((k, d));
                }
            }
            let hits = records
                .iter()
                .filter(|&&(k, d)| k >= indices.len() / 2 && d <= cfg.tolerance)
                .count();
            if hits >= cfg.min_hits.min(late.len()).max(1) {
                Verdict::Supported
            } else if all_exact && late_min > cfg.tolerance {
                Verdict::Refuted
            } else {
                Verdict::Inconclusive
            }
        }
    }
}

/// Probes (⋆̄) or (⋆̄₁) for the given orbit and candidate.
///
/// Refutation happens only when the map decides non-membership (predicate or
/// exact images) along the whole late half of the subsequence.
pub fn probe_star_property<P, V, M>(
    space: &PSpace<P, V>,
    map: &M,
    orbit: &Orbit<P>,
    candidate: &Accumulation<P>,
    variant: StarVariant,
    cfg: &StarConfig,
) -> StarOutcome<P>
where
    P: Point,
    V: Value,
    M: SetValuedMap<P> + ?Sized,
{
    let xbar = &candidate.limit;
    let exact = map.exact_image(xbar);
    let certified = exact.is_some() || map.known_empty(xbar) == Some(true);
    let mut rng = step_rng(cfg.seed, usize::MAX);
    let ys: Vec<P> = exact
        .unwrap_or_else(|| map.sample(xbar, cfg.budget, &mut rng))
        .into_iter()
        .filter(|y| y != xbar)
        .collect();
    if ys.is_empty() {
        return if certified {
            StarOutcome::Supported { checked: 0 }
        } else {
            StarOutcome::Inconclusive {
                reason: "no y ≠ x̄ sampled from S(x̄)".into(),
            }
        };
    }
    let indices: Vec<usize> = candidate
        .indices
        .iter()
        .copied()
        .filter(|&i| i < orbit.len())
        .collect();
    if indices.len() < 2 {
        return StarOutcome::Inconclusive {
            reason: "subsequence too short".into(),
        };
    }
    let verdicts: Vec<Verdict> = ys
        .par_iter()
        .map(|y| probe_one(space, map, &orbit.points, &indices, y, variant, cfg))
        .collect();
    if let Some(k) = verdicts.iter().position(|v| *v == Verdict::Refuted) {
        return StarOutcome::Refuted {
            y: ys[k].clone(),
            reason: match variant {
                StarVariant::Exact => "y leaves S(x_i) along the late subsequence",
                StarVariant::Approximate => "S(x_i) stays away from y along the late subsequence",
            }
            .into(),
        };
    }
    if verdicts.iter().all(|v| *v == Verdict::Supported) {
        StarOutcome::Supported { checked: ys.len() }
    } else {
        StarOutcome::Inconclusive {
            reason: "persistence could not be decided for every sampled y".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum FixedPointClass<P> {
    /// `∅ ≠ S(x̄) ⊆ {x̄}` on every sample.
    StrictFixedPoint,
    /// `S(x̄) = ∅`, certified by the map.
    EmptyValue,
    /// Some `y ∈ S(x̄)` with `p(y, x̄) > tolerance`.
    Violation { witness: P, distance: f64 },
    Inconclusive { reason: String },
}

impl<P> FixedPointClass<P> {
    pub fn name(&self) -> &'static str {
        match self {
            FixedPointClass::StrictFixedPoint => "strict_fixed_point",
            FixedPointClass::EmptyValue => "empty_value",
            FixedPointClass::Violation { .. } => "violation",
            FixedPointClass::Inconclusive { .. } => "inconclusive",
        }
    }

    /// `S(x̄) ⊆ {x̄}`: either strict or empty.
    pub fn is_conforming(&self) -> bool {
        matches!(self, FixedPointClass::StrictFixedPoint | FixedPointClass::EmptyValue)
    }
}

pub fn classify_fixed_point<P, V, M>(
    space: &PSpace<P, V>,
    map: &M,
    xbar: &P,
    tolerance: f64,
    budget: usize,
    seed: u64,
) -> FixedPointClass<P>
where
    P: Point,
    V: Value,
    M: SetValuedMap<P> + ?Sized,
{
    if map.known_empty(xbar) == Some(true) {
        return FixedPointClass::EmptyValue;
    }
    let mut rng = step_rng(seed, usize::MAX);
    let image = map.image_or_sample(xbar, budget, &mut rng);
    if image.is_empty() {
        return if map.exact_image(xbar).is_some() {
            FixedPointClass::EmptyValue
        } else {
            FixedPointClass::Inconclusive {
                reason: "S(x̄) sampled empty without an emptiness certificate".into(),
            }
        };
    }
    for y in &image {
        let d = space.p(y, xbar).as_f64();
        if y != xbar && d > tolerance {
            return FixedPointClass::Violation {
                witness: y.clone(),
                distance: d,
            };
        }
    }
    FixedPointClass::StrictFixedPoint
}
