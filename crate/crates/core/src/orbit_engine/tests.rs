use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::*;
use crate::premetric::{AbsDiff, BallBase, ConvergenceOracle, PSpace};
use crate::value::{dyadic, ratio, Rational, Value, Verdict};

fn line(pool: Vec<Rational>) -> PSpace<Rational, Rational> {
    PSpace {
        name: "Q".into(),
        premetric: Arc::new(AbsDiff),
        base: Arc::new(BallBase {
            dist: |a: &Rational, b: &Rational| (a - b).abs().as_f64(),
            radius: |n: usize| 1.0 / n as f64,
        }),
        oracle: ConvergenceOracle::default(),
        sampler: Arc::new(|k, _| (0..k as i64).map(|j| ratio(j, 8)).collect()),
        limit_pool: pool,
    }
}

/// `S(x) = [0, |x|/2]` sampled at both endpoints and a uniform grid.
fn halving_map() -> ClosureMap<Rational> {
    ClosureMap::from_sampler(|x: &Rational, budget, _| {
        let top = x.abs() / ratio(2, 1);
        let k = budget.max(2) as i64 - 1;
        (0..=k).map(|j| &top * ratio(k - j, k)).collect()
    })
    .with_predicate(|x, y| !y.is_negative() && *y <= x.abs() / ratio(2, 1))
    .with_emptiness(|_| Some(false))
    .with_partial_image(|x| x.is_zero().then(|| vec![Rational::zero()]))
}

fn min_step() -> Policy<Rational, Rational> {
    Policy::GreedyMinStep {
        premetric: Arc::new(AbsDiff),
    }
}

#[test]
fn stationary_orbit_is_infinite() {
    let map = ClosureMap::finite(|x: &Rational| vec![x.clone()]);
    let orbit = generate_orbit(&map, ratio(3, 1), &Policy::<_, Rational>::FirstSample, &OrbitConfig::new(5, 0));
    assert_eq!(orbit.points, vec![ratio(3, 1); 6]);
    assert!(!orbit.ended);
}

#[test]
fn halving_under_min_step_and_max_step() {
    let orbit = generate_orbit(&halving_map(), ratio(1, 1), &min_step(), &OrbitConfig::new(10, 1));
    for (k, x) in orbit.points.iter().enumerate() {
        assert_eq!(*x, dyadic(k as u32));
    }
    assert!(replay_membership(&halving_map(), &orbit).all_passed());
    let max = Policy::GreedyMaxStep {
        premetric: Arc::new(AbsDiff),
    };
    let jump = generate_orbit(&halving_map(), ratio(1, 1), &max, &OrbitConfig::new(3, 1));
    // the farthest point of [0, 1/2] from 1 is 0
    assert_eq!(jump.points[1], Rational::zero());
}

#[test]
fn empty_first_image_ends_at_start() {
    let map = ClosureMap::finite(|_: &Rational| Vec::new());
    let orbit = generate_orbit(&map, ratio(1, 1), &Policy::<_, Rational>::FirstSample, &OrbitConfig::new(5, 0));
    assert_eq!(orbit.len(), 1);
    assert!(orbit.ended && orbit.end_certified);
    let err = monitor_p_contractive(&line(vec![]), &map, &orbit, &MonitorConfig::new(0)).unwrap_err();
    assert_eq!(err, OrbitError::Ended { len: 1 });
}

#[test]
fn accumulation_candidates() {
    let space = line(vec![Rational::zero()]);
    let halving: Vec<Rational> = (0..40).map(dyadic).collect();
    let found = find_accumulation_point(&space, &halving, &[], &AccumulationConfig::default());
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].limit, Rational::zero());
    let divergent: Vec<Rational> = (1..40).map(|k| ratio(k, 1)).collect();
    assert!(find_accumulation_point(&space, &divergent, &divergent[..3], &AccumulationConfig::default()).is_empty());
    let cycle: Vec<Rational> = (0..20).map(|k| ratio(k % 2, 1)).collect();
    let found = find_accumulation_point(&line(vec![]), &cycle, &[], &AccumulationConfig::default());
    assert_eq!(found.len(), 2);
}

#[test]
fn halving_orbit_is_p_contractive_with_exact_sup() {
    let space = line(vec![Rational::zero()]);
    let map = halving_map();
    let orbit = generate_orbit(&map, ratio(1, 1), &min_step(), &OrbitConfig::new(40, 3));
    let report = monitor_p_contractive(&space, &map, &orbit, &MonitorConfig::new(3)).unwrap();
    assert_eq!(report.verdict, Verdict::Supported, "{}", report.reason);
    assert_eq!(report.limit, Some(Rational::zero()));
    for (k, s) in report.p_sup.iter().enumerate() {
        // sup over [0, 2^-k-1] of |y - 2^-k| is attained at y = 0
        assert_eq!(*s, 0.5f64.powi(k as i32));
    }
    let dump = orbit_dump::<_, Rational>(&orbit, None, &report.p_sup);
    assert!(dump.starts_with("1\t1\t-\t1e0\n2\t1/2\t-\t5e-1\n"));
}

#[test]
fn whole_carrier_map_is_refuted() {
    let space = line(vec![]);
    let grid = |k: i64| (0..=k).map(move |j| ratio(j, k));
    let map = ClosureMap::from_sampler(move |_: &Rational, _, _| grid(16).collect());
    let policy = Policy::GreedyMaxStep {
        premetric: Arc::new(AbsDiff),
    };
    let orbit = generate_orbit(&map, ratio(1, 2), &policy, &OrbitConfig::new(30, 0));
    let report = monitor_p_contractive(&space, &map, &orbit, &MonitorConfig::new(0)).unwrap();
    assert!(report.p_sup.iter().all(|&s| s >= 0.5));
    assert_eq!(report.verdict, Verdict::Refuted);
}

#[test]
fn star_properties() {
    let space = line(vec![Rational::zero()]);
    // nested images S(x) = [0, |x|/2]
    let map = halving_map();
    let orbit = generate_orbit(&map, ratio(1, 1), &min_step(), &OrbitConfig::new(30, 0));
    let acc = &find_accumulation_point(&space, &orbit.points, &[], &AccumulationConfig::default())[0];
    // S(0) = {0}: vacuous
    assert_eq!(
        probe_star_property(&space, &map, &orbit, acc, StarVariant::Exact, &StarConfig::new(0)),
        StarOutcome::Supported { checked: 0 }
    );

    // x̄ = 1 with S(1) = {y : |y| < 1} and x_i = 1 + 2^-i decreasing in f = x²
    let sublevel = ClosureMap::from_sampler(|x: &Rational, _, _| {
        (-4..=4).map(|j| ratio(j, 4)).filter(|y| y * y < x * x).collect()
    })
    .with_predicate(|x, y| y * y < x * x);
    let pts: Vec<Rational> = (1..30).map(|i| ratio(1, 1) + dyadic(i)).collect();
    let orbit = Orbit::from_points(pts);
    let acc = &find_accumulation_point(&line(vec![ratio(1, 1)]), &orbit.points, &[], &AccumulationConfig::default())[0];
    for variant in [StarVariant::Exact, StarVariant::Approximate] {
        assert!(matches!(
            probe_star_property(&space, &sublevel, &orbit, acc, variant, &StarConfig::new(0)),
            StarOutcome::Supported { checked } if checked > 0
        ));
    }

    // S(1) = {5} but 5 ∉ S(x_i): refuted by the predicate
    let lonely = ClosureMap::finite(|x: &Rational| {
        if *x == ratio(1, 1) {
            vec![ratio(5, 1)]
        } else {
            vec![x / ratio(2, 1)]
        }
    });
    for variant in [StarVariant::Exact, StarVariant::Approximate] {
        assert!(matches!(
            probe_star_property(&space, &lonely, &orbit, acc, variant, &StarConfig::new(0)),
            StarOutcome::Refuted { y, .. } if y == ratio(5, 1)
        ));
    }
}

#[test]
fn fixed_point_classes() {
    let space = line(vec![]);
    let zero = Rational::zero();
    assert_eq!(
        classify_fixed_point(&space, &halving_map(), &zero, 0.0, 16, 0),
        FixedPointClass::StrictFixedPoint
    );
    let empty = ClosureMap::finite(|_: &Rational| Vec::new());
    assert_eq!(classify_fixed_point(&space, &empty, &zero, 0.0, 16, 0), FixedPointClass::EmptyValue);
    let swap = ClosureMap::finite(|x: &Rational| vec![ratio(1, 1) - x]);
    let class = classify_fixed_point(&space, &swap, &zero, 0.0, 16, 0);
    assert_eq!(
        class,
        FixedPointClass::Violation {
            witness: ratio(1, 1),
            distance: 1.0
        }
    );
    let unknown = ClosureMap::from_sampler(|_: &Rational, _, _| Vec::new());
    assert!(matches!(
        classify_fixed_point(&space, &unknown, &zero, 0.0, 16, 0),
        FixedPointClass::Inconclusive { .. }
    ));
}
