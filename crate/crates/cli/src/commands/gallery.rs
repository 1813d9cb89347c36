use std::sync::Arc;

use corbit::gallery::{
    hausdorff_counterexample_map, moore_plane_scenario, ordinal_scenario, rationals_halving_scenario,
    two_origins_double_limit, two_origins_premetric, CounterexampleVariant, MoorePoint, OrdinalPoint, RadiusSchedule,
    TwoOriginPoint,
};
use corbit::orbit_engine::{
    classify_fixed_point, find_accumulation_point, generate_orbit, monitor_p_contractive, FixedPointClass,
    MonitorConfig, OrbitConfig, Policy, SetValuedMap,
};
use corbit::premetric::{sigma_p_length, AbsDiff, PSpace, Point};
use corbit::remetrize::{loev_condition_check, LoevConfig};
use corbit::value::{dyadic, Rational, Value};
use num_traits::{One, Zero};
use serde_json::json;

use super::{head, ORBIT_HEAD};
use crate::config::{GalleryScenario, ScenarioConfig, Schedule};
use crate::report::Outcome;
use crate::CliError;

const CLASSIFY_BUDGET: usize = 16;

pub fn gallery(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let seed = cfg.require_seed("gallery")?;
    let tol = cfg.tol.unwrap_or(1e-6);
    let mut out = Outcome::default();
    match cfg.gallery.scenario {
        GalleryScenario::Rationals => rationals(cfg.max_steps.unwrap_or(40), seed, tol, &mut out),
        GalleryScenario::Moore => moore(cfg.max_steps.unwrap_or(60), seed, tol, &mut out),
        GalleryScenario::TwoOrigins => {
            let schedule = match cfg.gallery.schedule {
                Schedule::Harmonic => RadiusSchedule::Harmonic,
                Schedule::Dyadic => RadiusSchedule::Dyadic,
            };
            two_origins(schedule, cfg.gallery.length, seed, tol, &mut out)?
        }
        GalleryScenario::Ordinal => ordinal(cfg.gallery.truncation, cfg.max_steps.unwrap_or(200), &mut out),
    }
    Ok(out)
}

fn class_detail<P: Point + std::fmt::Display>(class: &FixedPointClass<P>) -> serde_json::Value {
    match class {
        FixedPointClass::Violation { witness, distance } => {
            json!({"class": class.name(), "witness": witness.to_string(), "distance": distance})
        }
        FixedPointClass::Inconclusive { reason } => json!({"class": class.name(), "reason": reason}),
        _ => json!({"class": class.name()}),
    }
}

/// Monitor the orbit and classify its limit. A supported p-contractive orbit
/// with a limit must land on a point with `S(x̄) ⊆ {x̄}`.
fn monitor_and_classify<P, V, M>(
    space: &PSpace<P, V>,
    map: &M,
    orbit: &corbit::orbit_engine::Orbit<P>,
    seed: u64,
    tol: f64,
    out: &mut Outcome,
) -> Option<(P, FixedPointClass<P>)>
where
    P: Point + std::fmt::Display,
    V: Value,
    M: SetValuedMap<P>,
{
    let report = match monitor_p_contractive(space, map, orbit, &MonitorConfig::new(seed)) {
        Ok(r) => r,
        Err(e) => {
            out.verdict("p_contractive", format!("error: {e}"));
            return None;
        }
    };
    out.verdict("p_contractive", json!(report.verdict).as_str().unwrap_or_default());
    out.detail("p_sup", &report.p_sup);
    out.detail("monitor_reason", &report.reason);
    let xbar = report.limit?;
    out.verdict("limit", &xbar);
    let class = classify_fixed_point(space, map, &xbar, tol, CLASSIFY_BUDGET, seed);
    out.verdict("classification", class.name());
    out.detail("classification", class_detail(&class));
    out.check("limit_is_fixed_point", class.is_conforming());
    Some((xbar, class))
}

fn rationals(steps: usize, seed: u64, tol: f64, out: &mut Outcome) {
    let (space, map) = rationals_halving_scenario();
    let policy = Policy::GreedyMinStep {
        premetric: Arc::new(AbsDiff),
    };
    let orbit = generate_orbit(&map, Rational::one(), &policy, &OrbitConfig::new(steps, seed));
    out.check(
        "iterates_halve",
        orbit.points.iter().enumerate().all(|(k, x)| *x == dyadic(k as u32)),
    );
    let limit = monitor_and_classify(&space, &map, &orbit, seed, tol, out);
    // a short horizon leaves the monitor inconclusive, which is not a violation
    if let Some((x, _)) = limit {
        out.check("limit_is_zero", x.is_zero());
    }
    out.verdict("sigma_length", sigma_p_length(&AbsDiff, &orbit.points));
    let loev = loev_condition_check(&space, &map, &orbit, &LoevConfig::new(seed));
    out.detail(
        "loev",
        json!({"a": loev.a, "b": loev.b, "c": loev.c, "candidates": head(&loev.candidates, 8), "notes": loev.notes}),
    );
    out.detail("orbit", head(&orbit.points, ORBIT_HEAD));
}

fn moore(steps: usize, seed: u64, tol: f64, out: &mut Outcome) {
    let (space, map) = moore_plane_scenario();
    let origin = MoorePoint::origin();
    let mut diagonal = Vec::new();
    let mut bracket = true;
    let mut axis = true;
    for k in 1..=24u32 {
        let t = dyadic(k);
        let on_diag = MoorePoint::new(t.clone(), t.clone()).expect("upper half plane");
        let p = space.p(&origin, &on_diag);
        // 2^-k < p ≤ 2^(1-k)
        bracket &= dyadic(k) < p && p <= dyadic(k - 1);
        let on_axis = MoorePoint::new(t, Rational::zero()).expect("upper half plane");
        axis &= space.p(&origin, &on_axis).is_one();
        diagonal.push(p.to_string());
    }
    out.check("diagonal_premetric_bracket", bracket);
    out.check("axis_premetric_is_one", axis);
    out.detail("diagonal_premetric", diagonal);

    let start = MoorePoint::new(Rational::one(), Rational::zero()).expect("upper half plane");
    let orbit = generate_orbit(&map, start, &Policy::<_, Rational>::FirstSample, &OrbitConfig::new(steps, seed));
    let limit = monitor_and_classify(&space, &map, &orbit, seed, tol, out);
    if let Some((x, _)) = limit {
        out.check("limit_is_origin", x == origin);
    }
    out.detail("orbit", head(&orbit.points, ORBIT_HEAD));
}

fn two_origins(
    schedule: RadiusSchedule,
    length: usize,
    seed: u64,
    tol: f64,
    out: &mut Outcome,
) -> Result<(), CliError> {
    if length < 16 {
        return Err(CliError::Config("two-origins needs length >= 16".into()));
    }
    let space = two_origins_premetric(schedule);
    let seq = two_origins_double_limit(schedule, length);
    let (a, b) = (TwoOriginPoint::OriginA, TwoOriginPoint::OriginB);
    let map = hausdorff_counterexample_map(seq.clone(), a.clone(), b.clone(), CounterexampleVariant::SuccessorWithLimits);
    let orbit = generate_orbit(
        &map,
        seq[0].clone(),
        &Policy::<_, Rational>::FirstSample,
        &OrbitConfig::new(length - 1, seed),
    );
    out.check("orbit_follows_sequence", orbit.points == seq);

    let found = find_accumulation_point(&space, &orbit.points, &[], &Default::default());
    let limits: Vec<&TwoOriginPoint> = found.iter().map(|f| &f.limit).collect();
    out.verdict("accumulation_candidates", head(&limits, 8).join(" "));
    let tail = &seq[seq.len() - 8..];
    let tail_close = |o: &TwoOriginPoint| tail.iter().map(|x| space.p(o, x).as_f64()).fold(0.0, f64::max);
    out.detail("tail_premetric", json!({"A": tail_close(&a), "B": tail_close(&b)}));

    // both origins are limits and each sees the other in its image: the
    // space is not Hausdorff, and the contrapositive predicts a violation
    let mut witnessed = limits.contains(&&a) && limits.contains(&&b);
    for (origin, other) in [(&a, &b), (&b, &a)] {
        let class = classify_fixed_point(&space, &map, origin, tol, CLASSIFY_BUDGET, seed);
        witnessed &= matches!(&class, FixedPointClass::Violation { witness, .. } if witness == other);
        out.detail(&format!("classification_{origin}"), class_detail(&class));
    }
    out.check("non_hausdorff_witness", witnessed);
    if witnessed {
        out.verdict("non_hausdorff_pair", "A B");
    }
    out.detail("orbit", head(&orbit.points, ORBIT_HEAD));
    Ok(())
}

fn ordinal(truncation: u32, steps: usize, out: &mut Outcome) {
    let sc = ordinal_scenario(truncation);
    let omega = OrdinalPoint::OMEGA;
    let orbit = generate_orbit(
        &sc.s,
        OrdinalPoint::natural(1),
        &Policy::<_, Rational>::FirstSample,
        &OrbitConfig::new(steps, 0),
    );
    out.check("orbit_converges_to_omega", sc.converges(&orbit.points, &omega));
    let empty = sc.s.known_empty(&omega) == Some(true);
    out.check("s_empty_at_omega", empty);
    out.check("t_fixes_omega", sc.t.exact_image(&omega) == Some(vec![omega]));
    out.verdict("limit", omega);
    out.verdict("classification", if empty { "empty_value" } else { "inconclusive" });
    out.detail("orbit", head(&orbit.points, ORBIT_HEAD));
}
