use serde::{Deserialize, Serialize};

use crate::orbit_engine::{
    find_accumulation_point, p_sup_series, probe_star_property, AccumulationConfig, Orbit, SetValuedMap, StarConfig,
    StarOutcome, StarVariant,
};
use crate::premetric::{is_sigma_p_cauchy, CauchyConfig, PSpace, Point};
use crate::value::{tends_to_zero, TrendConfig, Value, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoevConfig {
    pub budget: usize,
    pub seed: u64,
    pub trend: TrendConfig,
    pub cauchy: CauchyConfig,
    pub accumulation: AccumulationConfig,
    pub star: StarConfig,
}

impl LoevConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            budget: 64,
            seed,
            trend: TrendConfig::with_tolerance(1e-6),
            cauchy: CauchyConfig::default(),
            accumulation: AccumulationConfig::default(),
            star: StarConfig::new(seed),
        }
    }
}

/// Verdicts for (a) `x ∉ S(x)` with persistence of images at accumulation
/// points, (b) the Cauchy property and (c) `d_{S(x_i)}(x_i) → 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoevReport<P> {
    pub a: Verdict,
    pub b: Verdict,
    pub c: Verdict,
    pub candidates: Vec<P>,
    pub notes: Vec<String>,
}

pub fn loev_condition_check<P, V, M>(space: &PSpace<P, V>, map: &M, orbit: &Orbit<P>, cfg: &LoevConfig) -> LoevReport<P>
where
    P: Point,
    V: Value,
    M: SetValuedMap<P> + ?Sized,
{
    let mut notes = Vec::new();
    let points = &orbit.points;

    let self_member: Vec<Option<bool>> = points.iter().map(|x| map.decides(x, x)).collect();
    let found = find_accumulation_point(space, points, &[], &cfg.accumulation);
    let a = if let Some(i) = self_member.iter().position(|m| *m == Some(true)) {
        notes.push(format!("(a): x_{i} ∈ S(x_{i})"));
        Verdict::Refuted
    } else {
        let mut v = if self_member.contains(&None) {
            notes.push("(a): self-membership undecidable at some orbit point".into());
            Verdict::Inconclusive
        } else {
            Verdict::Supported
        };
        if found.is_empty() {
            notes.push("(a): no accumulation candidate, persistence is vacuous on this prefix".into());
        }
        for acc in &found {
            let outcome = probe_star_property(space, map, orbit, acc, StarVariant::Exact, &cfg.star);
            v = v.and(match outcome {
                StarOutcome::Supported { .. } => Verdict::Supported,
                StarOutcome::Refuted { .. } => Verdict::Refuted,
                StarOutcome::Inconclusive { reason } => {
                    notes.push(format!("(a): {reason}"));
                    Verdict::Inconclusive
                }
            });
        }
        v
    };

    let steps: Vec<f64> = points
        .windows(2)
        .map(|w| space.p(&w[1], &w[0]).as_f64())
        .collect();
    let b = match tends_to_zero(&steps, &cfg.trend) {
        Verdict::Refuted => Verdict::Refuted,
        _ => is_sigma_p_cauchy(&*space.premetric, points, &cfg.cauchy).verdict,
    };

    let c = tends_to_zero(&p_sup_series(space, map, points, cfg.budget, cfg.seed), &cfg.trend);

    LoevReport {
        a,
        b,
        c,
        candidates: found.into_iter().map(|acc| acc.limit).collect(),
        notes,
    }
}
