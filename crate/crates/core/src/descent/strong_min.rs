use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{DescentConfig, DescentError, MinimizationCertificate, ObjectiveFunction, StrongMinimum};
use crate::orbit_engine::{
    classify_fixed_point, generate_orbit, monitor_p_contractive, ClosureMap, MonitorConfig, OrbitConfig, Policy,
};
use crate::premetric::{distance_trend, sigma_p_length, PSpace, Point};
use crate::value::{Extended, TrendConfig, Value, Verdict};

/// Number of sublevel thresholds in a minimizing probe.
const PROBE_LEVELS: i32 = 16;

/// `S_f(x) = {y : f(y) < f(x)}` over the objective's domain.
///
/// Emptiness is decided exactly by a domain scan, so an orbit that stops has
/// reached a minimizer of `f` on the domain.
pub fn sublevel_map<P: Point, V: Value>(f: &ObjectiveFunction<P, V>) -> ClosureMap<P> {
    let (fs, fp, fe) = (f.clone(), f.clone(), f.clone());
    ClosureMap::from_sampler(move |x: &P, budget, rng| {
        let fx = fs.eval(x);
        fs.sample(budget, rng).into_iter().filter(|y| fs.eval(y) < fx).collect()
    })
    .with_predicate(move |x, y| fp.eval(y) < fp.eval(x))
    .with_emptiness(move |x| {
        let fx = fe.eval(x);
        Some(!fe.domain().iter().any(|y| fe.eval(y) < fx))
    })
}

/// Greedy-min-f descent along `S_f`, followed by the strong-minimum probe.
///
/// A strong minimum is read as "every minimizing sequence converges to x̄".
/// The probe builds sequences `z_j` with `f(z_j) ≤ t_j`, where the thresholds
/// `t_j = m + (f(x₁) - m) 2^{-j}` fall to the lower estimate `m`, picking the
/// nearest, farthest, alternating and random sublevel points. Certified iff
/// `p(x̄, z_j) → 0` is supported for every probe.
pub fn strong_min_descent<P: Point, V: Value>(
    f: &ObjectiveFunction<P, V>,
    space: &PSpace<P, V>,
    x1: P,
    cfg: &DescentConfig,
) -> Result<MinimizationCertificate<P, V>, DescentError> {
    let map = sublevel_map(f);
    let fo = f.clone();
    let policy = Policy::GreedyMinObjective {
        objective: Arc::new(move |x: &P| fo.eval(x)),
        eps0: cfg.eps0,
    };
    let orbit_cfg = OrbitConfig {
        max_steps: cfg.max_steps,
        budget: cfg.budget,
        seed: cfg.seed,
        log_candidates: 8,
    };
    let orbit = generate_orbit(&map, x1, &policy, &orbit_cfg);
    let values: Vec<Extended<V>> = orbit.points.iter().map(|x| f.eval(x)).collect();
    let monotone = values.windows(2).all(|w| w[1] < w[0]);
    let mut notes = vec!["p-side evidence only; cover contractivity is not checked".to_string()];

    let xbar = if orbit.ended {
        orbit.last().unwrap().clone()
    } else {
        let mon = MonitorConfig::new(cfg.seed);
        let report = monitor_p_contractive(space, &map, &orbit, &mon).expect("orbit did not end");
        notes.push(format!("monitor: {:?} ({})", report.verdict, report.reason));
        report.limit.unwrap_or_else(|| {
            notes.push("no accumulation point; reporting the last orbit point".into());
            orbit.last().unwrap().clone()
        })
    };
    let class = classify_fixed_point(space, &map, &xbar, cfg.tolerance, cfg.budget, cfg.seed);
    let strong_minimum = probe_strong_minimum(f, space, &xbar, &values[0], cfg, &mut notes);

    Ok(MinimizationCertificate {
        solver: "strong_min_descent".into(),
        value: f.eval(&xbar),
        point: xbar,
        steps: orbit.len() - 1,
        sigma_length: sigma_p_length(&*space.premetric, &orbit.points),
        residual: 0.0,
        strong_minimum,
        fixed_point: Some(class.name().to_string()),
        ended: orbit.ended,
        evaluations: f.evaluations(),
        length_bound_held: None,
        monotone,
        notes,
        orbit: orbit.points,
    })
}

fn probe_strong_minimum<P: Point, V: Value>(
    f: &ObjectiveFunction<P, V>,
    space: &PSpace<P, V>,
    xbar: &P,
    f1: &Extended<V>,
    cfg: &DescentConfig,
    notes: &mut Vec<String>,
) -> StrongMinimum {
    let finite: Vec<(P, f64)> = f
        .domain()
        .iter()
        .filter_map(|z| f.eval(z).finite().map(|v| (z.clone(), v.as_f64())))
        .collect();
    let Some(m) = f.floor_estimate().map(|v| v.as_f64()) else {
        return StrongMinimum::Inconclusive;
    };
    let top = match f1 {
        Extended::Finite(v) => v.as_f64(),
        Extended::Infinity => finite.iter().map(|z| z.1).fold(m, f64::max),
    };
    let dist = |z: &P| space.p(xbar, z).as_f64();
    let levels: Vec<Vec<&P>> = (1..=PROBE_LEVELS)
        .map(|j| {
            let t = m + (top - m) * 0.5f64.powi(j);
            finite.iter().filter(|z| z.1 <= t).map(|z| &z.0).collect()
        })
        .collect();
    if levels.iter().any(Vec::is_empty) {
        notes.push("a sublevel set below the declared bound is empty".into());
        return StrongMinimum::Inconclusive;
    }
    let pick = |level: &[&P], far: bool| -> P {
        let key = |z: &&&P| dist(z);
        let cmp = |a: &&&P, b: &&&P| key(a).total_cmp(&key(b));
        let z = if far { level.iter().max_by(cmp) } else { level.iter().min_by(cmp) };
        (*z.unwrap()).clone()
    };
    let mut probes: Vec<(String, Vec<P>)> = vec![
        ("nearest".into(), levels.iter().map(|l| pick(l, false)).collect()),
        ("farthest".into(), levels.iter().map(|l| pick(l, true)).collect()),
        (
            "alternating".into(),
            levels.iter().enumerate().map(|(j, l)| pick(l, j % 2 == 1)).collect(),
        ),
    ];
    let mut rng = StdRng::seed_from_u64(cfg.seed ^ 0x5EED);
    for r in 0..cfg.probes {
        let seq = levels
            .iter()
            .map(|l| l[rng.gen_range(0..l.len())].clone())
            .collect();
        probes.push((format!("random-{r}"), seq));
    }
    let trend = TrendConfig::with_tolerance(cfg.tolerance);
    let mut overall = Verdict::Supported;
    for (name, seq) in &probes {
        let v = distance_trend(&*space.premetric, xbar, seq, &trend);
        if v != Verdict::Supported {
            notes.push(format!("probe {name}: {v:?}"));
        }
        overall = overall.and(v);
    }
    match overall {
        Verdict::Supported => StrongMinimum::Certified,
        Verdict::Refuted => StrongMinimum::NotCertified,
        Verdict::Inconclusive => StrongMinimum::Inconclusive,
    }
}
