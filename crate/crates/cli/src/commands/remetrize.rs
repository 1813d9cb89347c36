use corbit::finite_topology::{FiniteSetMap, OrbitDescriptor};
use corbit::remetrize::{
    a1_a2_check, tau_p_equivalence_test, A1A2Config, FiniteMetric, HypothesisStatus, IterationSystem,
};
use corbit::value::Verdict;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::json;

use crate::config::{IterationMap, ScenarioConfig};
use crate::report::Outcome;
use crate::CliError;

fn grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let k = points - 1;
    (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect()
}

fn status_name<P>(s: &HypothesisStatus<P>) -> &'static str {
    match s {
        HypothesisStatus::Pass => "pass",
        HypothesisStatus::Fail { .. } => "fail",
        HypothesisStatus::Inconclusive { .. } => "inconclusive",
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Supported => "supported",
        Verdict::Refuted => "refuted",
        Verdict::Inconclusive => "inconclusive",
    }
}

/// A metric on `n` points with off-diagonal distances in `[1, 2]`, which
/// always satisfies the triangle inequality.
fn random_metric(n: usize, rng: &mut StdRng) -> FiniteMetric {
    let mut d = vec![vec![0.0; n]; n];
    for (i, j) in (0..n).flat_map(|i| (0..i).map(move |j| (i, j))) {
        let w = rng.gen_range(1.0..=2.0);
        d[i][j] = w;
        d[j][i] = w;
    }
    FiniteMetric::new(d).expect("distances in [1, 2] form a metric")
}

pub fn remetrize(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let r = &cfg.remetrize;
    if r.grid_points < 2 {
        return Err(CliError::Config("grid_points must be at least 2".into()));
    }
    let abs = |a: &f64, b: &f64| (a - b).abs();
    let (name, f, hi): (&str, fn(&f64) -> f64, f64) = match r.map {
        IterationMap::Half => ("x/2", |x| x / 2.0, 1.0),
        IterationMap::Identity => ("x", |x| *x, 1.0),
        IterationMap::Square => ("x^2", |x| x * x, 0.5),
    };
    let domain = grid(0.0, hi, r.grid_points);
    let sys = IterationSystem::new(name, f, abs, domain.clone(), domain).map_err(|e| CliError::Config(e.to_string()))?;
    let a1a2 = A1A2Config {
        horizon: r.horizon,
        tolerance: cfg.tol.unwrap_or(1e-9),
        ..A1A2Config::default()
    };
    let report = a1_a2_check(&sys, r.xbar, &a1a2);

    let mut out = Outcome::default();
    out.verdict("a1", status_name(&report.a1));
    out.verdict("a2", status_name(&report.a2));
    out.verdict("continuity", status_name(&report.continuity));
    out.verdict("t_contraction", verdict_name(report.t_contraction.verdict));
    out.verdict("uniform_cover", verdict_name(report.uniform_cover.verdict));
    out.verdict("conclusion", report.conclusion);
    // once the hypotheses hold, f contracts under an equivalent metric, so
    // no sampled pair may keep its distance
    out.check(
        "conclusion_consistent",
        !report.conclusion || report.t_contraction.verdict != Verdict::Refuted,
    );
    out.detail("report", &report);

    if r.equivalence_instances > 0 {
        let seed = cfg.require_seed("remetrize with equivalence_instances")?;
        let mut rng = StdRng::seed_from_u64(seed);
        let (mut orbits, mut disagreements) = (0usize, Vec::new());
        for instance in 0..r.equivalence_instances {
            let n = rng.gen_range(1..=4usize);
            let metric = random_metric(n, &mut rng);
            let map = FiniteSetMap::from_index(n, rng.gen_range(0..1u64 << (n * n)));
            for orbit in map.orbits(3, 3).into_iter().filter(OrbitDescriptor::is_infinite) {
                orbits += 1;
                let rec = tau_p_equivalence_test(&metric, &map, &orbit).map_err(|e| CliError::Config(e.to_string()))?;
                if !rec.agree() {
                    disagreements.push(json!({"instance": instance, "map": format!("{map:?}"), "orbit": format!("{orbit:?}")}));
                }
            }
        }
        out.check("tau_p_agree", disagreements.is_empty());
        out.detail(
            "equivalence",
            json!({"instances": r.equivalence_instances, "orbits": orbits, "disagreements": disagreements}),
        );
    }
    Ok(out)
}
