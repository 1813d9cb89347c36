//! Exhaustive sweeps over all spaces × all set-valued maps × short orbits.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    check_fixed_point_theorem, converges_to, cover_condition, is_closed_graph, is_tau_contractive,
    strong_accumulation_points,
};
use super::enumerate::{enumerate_topologies_with, EnumerationCap};
use super::oracle::{closed_graph_by_complement, cover_condition_exhaustive, tau_contractive_exhaustive};
use super::orbit::{FiniteSetMap, OrbitDescriptor};
use super::space::{members, FiniteSpace};
use super::FiniteError;

/// Above this point count only the per-space checks run; the map sweep
/// would visit `2^(n·n)` maps per topology.
pub const MAX_MAP_SWEEP_POINTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n: usize,
    pub max_tail: usize,
    pub max_cycle: usize,
    /// Compare every fast check against its brute-force oracle.
    pub with_oracle: bool,
    pub allow_five: bool,
}

impl SweepConfig {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            max_tail: 2,
            max_cycle: 3,
            with_oracle: true,
            allow_five: false,
        }
    }
}

/// Counters merged across workers; every `*_mismatches` / `*_violations`
/// field must be zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub topologies: usize,
    pub maps: usize,
    pub orbits: usize,
    pub tau_contractive: usize,
    pub theorem_premises_held: usize,
    pub separation_violations: usize,
    pub tau_mismatches: usize,
    pub cover_condition_mismatches: usize,
    pub closed_graph_mismatches: usize,
    pub theorem_violations: usize,
    pub strong_accumulation_violations: usize,
}

impl SweepSummary {
    pub fn inconsistencies(&self) -> usize {
        self.separation_violations
            + self.tau_mismatches
            + self.cover_condition_mismatches
            + self.closed_graph_mismatches
            + self.theorem_violations
            + self.strong_accumulation_violations
    }

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.topologies += other.topologies;
        self.maps += other.maps;
        self.orbits += other.orbits;
        self.tau_contractive += other.tau_contractive;
        self.theorem_premises_held += other.theorem_premises_held;
        self.separation_violations += other.separation_violations;
        self.tau_mismatches += other.tau_mismatches;
        self.cover_condition_mismatches += other.cover_condition_mismatches;
        self.closed_graph_mismatches += other.closed_graph_mismatches;
        self.theorem_violations += other.theorem_violations;
        self.strong_accumulation_violations += other.strong_accumulation_violations;
        self
    }
}

/// Finite T1 ⟺ discrete ⟺ Hausdorff.
pub fn separation_consistent(space: &FiniteSpace) -> bool {
    let class = space.separation_class();
    class.t1 == space.is_discrete() && class.hausdorff == space.is_discrete() && (!class.t1 || class.t0)
}

fn sweep_space(space: &FiniteSpace, cfg: &SweepConfig) -> Result<SweepSummary, FiniteError> {
    let mut s = SweepSummary {
        topologies: 1,
        ..Default::default()
    };
    if !separation_consistent(space) {
        s.separation_violations += 1;
    }
    let n = space.n();
    if n > MAX_MAP_SWEEP_POINTS {
        return Ok(s);
    }
    for index in 0..1u64 << (n * n) {
        let map = FiniteSetMap::from_index(n, index);
        s.maps += 1;
        let closed = is_closed_graph(space, &map);
        if cfg.with_oracle && closed != closed_graph_by_complement(space, &map) {
            s.closed_graph_mismatches += 1;
        }
        for orbit in map.orbits(cfg.max_tail, cfg.max_cycle) {
            s.orbits += 1;
            let tau = is_tau_contractive(space, &map, &orbit)?;
            if tau.contractive {
                s.tau_contractive += 1;
            }
            let record = check_fixed_point_theorem(space, &map, &orbit)?;
            if record.closed_graph && record.cover_condition {
                s.theorem_premises_held += 1;
            }
            if !record.consistent {
                s.theorem_violations += 1;
            }
            if !strong_accumulation_consistent(space, &map, &orbit)? {
                s.strong_accumulation_violations += 1;
            }
            if cfg.with_oracle {
                if tau.contractive != tau_contractive_exhaustive(space, &map, &orbit) {
                    s.tau_mismatches += 1;
                }
                if cover_condition(space, &map, &orbit)? != cover_condition_exhaustive(space, &map, &orbit) {
                    s.cover_condition_mismatches += 1;
                }
            }
        }
    }
    Ok(s)
}

/// Each strong accumulation point is the limit of a constant subsequence
/// drawn from the cycle.
fn strong_accumulation_consistent(
    space: &FiniteSpace,
    map: &FiniteSetMap,
    orbit: &OrbitDescriptor,
) -> Result<bool, FiniteError> {
    let strong = strong_accumulation_points(space, map, orbit)?;
    Ok(members(strong).all(|xb| {
        orbit
            .cycle()
            .iter()
            .any(|&c| converges_to(space, &OrbitDescriptor::stationary(c), xb))
    }))
}

/// Runs the sweep over every labelled topology on `cfg.n` points in parallel.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepSummary, FiniteError> {
    let cap = if cfg.allow_five {
        EnumerationCap::AllowFive
    } else {
        EnumerationCap::Default
    };
    let spaces = enumerate_topologies_with(cfg.n, cap)?;
    spaces
        .par_iter()
        .map(|space| sweep_space(space, cfg))
        .try_reduce(SweepSummary::default, |a, b| Ok(a.merge(b)))
}
