use corbit::finite_topology::{
    enumerate_topologies_with, oracle, sweep, EnumerationCap, SweepConfig, DEFAULT_MAX_POINTS, MAX_MAP_SWEEP_POINTS,
};
use serde_json::json;

use crate::config::ScenarioConfig;
use crate::report::Outcome;
use crate::CliError;

pub fn verify_finite(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let vf = &cfg.verify_finite;
    let sweep_cfg = SweepConfig {
        n: vf.n,
        max_tail: vf.max_tail,
        max_cycle: vf.max_cycle,
        with_oracle: vf.oracle,
        allow_five: vf.allow_five,
    };
    let summary = sweep(&sweep_cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let cap = if vf.allow_five {
        EnumerationCap::AllowFive
    } else {
        EnumerationCap::Default
    };
    let spaces = enumerate_topologies_with(vf.n, cap).map_err(|e| CliError::Config(e.to_string()))?;

    let mut out = Outcome::default();
    out.check("separation_classes_consistent", summary.separation_violations == 0);
    out.check("tau_reduction_matches_oracle", summary.tau_mismatches == 0);
    out.check("cover_condition_matches_oracle", summary.cover_condition_mismatches == 0);
    out.check("closed_graph_matches_oracle", summary.closed_graph_mismatches == 0);
    out.check("fixed_point_theorem_holds", summary.theorem_violations == 0);
    out.check("strong_accumulation_consistent", summary.strong_accumulation_violations == 0);
    if vf.oracle && vf.n <= DEFAULT_MAX_POINTS {
        let brute = oracle::count_topologies_brute_force(vf.n);
        out.check("count_matches_brute_force", brute == summary.topologies as u64);
        out.detail("brute_force_count", brute);
    }
    out.verdict("topologies", summary.topologies);
    out.verdict("inconsistencies", summary.inconsistencies());
    out.verdict(
        "map_sweep",
        if vf.n <= MAX_MAP_SWEEP_POINTS {
            "exhaustive"
        } else {
            "skipped above 3 points"
        },
    );

    let classes: Vec<_> = spaces.iter().map(|s| s.separation_class()).collect();
    out.detail(
        "separation",
        json!({
            "t0": classes.iter().filter(|c| c.t0).count(),
            "t1": classes.iter().filter(|c| c.t1).count(),
            "hausdorff": classes.iter().filter(|c| c.hausdorff).count(),
        }),
    );
    out.detail("summary", &summary);
    Ok(out)
}
