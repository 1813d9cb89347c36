use std::f64::consts::PI;
use std::sync::Arc;

use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::finite_topology::{
    enumerate_topologies, oracle, singleton, FiniteSetMap, FiniteSpace, OrbitDescriptor,
};
use crate::gallery::rationals_halving_scenario;
use crate::orbit_engine::{generate_orbit, ClosureMap, Orbit, OrbitConfig, Policy};
use crate::premetric::{AbsDiff, PSpace};
use crate::value::{ratio, Rational, Verdict};

fn uniform_metric(n: usize) -> FiniteMetric {
    FiniteMetric::new((0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect()).collect()).unwrap()
}

#[test]
fn finite_metric_validation() {
    assert!(FiniteMetric::new(vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
    assert!(FiniteMetric::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).is_err());
    let bad_triangle = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 1.0, 0.0]];
    assert!(FiniteMetric::new(bad_triangle).is_err());
}

#[test]
fn equivalence_examples() {
    let m = uniform_metric(3);
    // 2 → 1 → 0 → 0 …
    let halving = FiniteSetMap::new(3, vec![singleton(0), singleton(0), singleton(1)]).unwrap();
    let rec = tau_p_equivalence_test(&m, &halving, &OrbitDescriptor::new(vec![2, 1], vec![0])).unwrap();
    assert!(rec.tau_contractive && rec.p_contractive);

    let full = FiniteSetMap::new(3, vec![0b111; 3]).unwrap();
    let rec = tau_p_equivalence_test(&m, &full, &OrbitDescriptor::new(vec![], vec![0, 1])).unwrap();
    assert!(!rec.tau_contractive && !rec.p_contractive);

    let id = FiniteSetMap::new(3, vec![singleton(0), singleton(1), singleton(2)]).unwrap();
    let rec = tau_p_equivalence_test(&m, &id, &OrbitDescriptor::stationary(2)).unwrap();
    assert!(rec.tau_contractive && rec.p_contractive);
}

#[test]
fn exact_t_contraction_examples() {
    let d2 = FiniteSpace::discrete(2);
    assert!(t_contractive_exact(&d2, &[0, 0]).unwrap());
    assert!(!t_contractive_exact(&d2, &[0, 1]).unwrap());
    assert!(!t_contractive_exact(&d2, &[1, 0]).unwrap());
    assert!(t_contractive_exact(&FiniteSpace::indiscrete(2), &[0, 1]).unwrap());
    assert!(t_contractive_exact(&d2, &[0, 1, 2]).is_err());
}

#[test]
fn exact_t_contraction_matches_cover_enumeration() {
    for n in 1..=3usize {
        for space in enumerate_topologies(n).unwrap() {
            for code in 0..n.pow(n as u32) {
                let f: Vec<usize> = (0..n).map(|i| code / n.pow(i as u32) % n).collect();
                assert_eq!(
                    t_contractive_exact(&space, &f).unwrap(),
                    oracle::t_contractive_exhaustive(&space, &f),
                    "{space:?} {f:?}"
                );
            }
        }
    }
}

fn random_metric(n: usize, weights: &[u8]) -> FiniteMetric {
    // distances in [1, 2] always satisfy the triangle inequality
    let w = |i: usize, j: usize| {
        let (lo, hi) = (i.min(j), i.max(j));
        1.0 + f64::from(weights[(hi * (hi - 1) / 2 + lo) % weights.len()]) / 255.0
    };
    FiniteMetric::new((0..n).map(|i| (0..n).map(|j| if i == j { 0.0 } else { w(i, j) }).collect()).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tau_and_p_contractivity_agree(n in 1usize..=4, index in any::<u64>(), weights in prop::collection::vec(any::<u8>(), 6)) {
        let metric = random_metric(n, &weights);
        let map = FiniteSetMap::from_index(n, index % (1u64 << (n * n)));
        for orbit in map.orbits(3, 3).into_iter().filter(OrbitDescriptor::is_infinite) {
            let rec = tau_p_equivalence_test(&metric, &map, &orbit).unwrap();
            prop_assert!(rec.agree(), "{:?} {:?} {:?}", map, orbit, rec);
        }
    }
}

#[test]
fn loev_on_halving_orbit() {
    let (space, map) = rationals_halving_scenario();
    let policy = Policy::GreedyMinStep {
        premetric: Arc::new(AbsDiff),
    };
    let orbit = generate_orbit(&map, Rational::one(), &policy, &OrbitConfig::new(40, 0));
    let report = loev_condition_check(&space, &map, &orbit, &LoevConfig::new(0));
    assert_eq!((report.a, report.b, report.c), (Verdict::Supported, Verdict::Supported, Verdict::Supported), "{:?}", report.notes);
    assert_eq!(report.candidates, vec![Rational::zero()]);
}

fn int_line() -> PSpace<Rational, Rational> {
    PSpace::metric_line("Q", Arc::new(|k, _| (0..k as i64).map(|j| ratio(j, 1)).collect()), vec![])
}

#[test]
fn loev_refutations() {
    let space = int_line();
    let stay = ClosureMap::finite(|x: &Rational| vec![x.clone()]);
    let orbit = Orbit::from_points(vec![ratio(3, 1); 32]);
    assert_eq!(loev_condition_check(&space, &stay, &orbit, &LoevConfig::new(0)).a, Verdict::Refuted);

    let succ = ClosureMap::finite(|x: &Rational| vec![x + Rational::one()]);
    let orbit = Orbit::from_points((1..=64).map(|k| ratio(k, 1)).collect());
    assert_eq!(loev_condition_check(&space, &succ, &orbit, &LoevConfig::new(0)).b, Verdict::Refuted);
}

fn unit_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..=k).map(|i| lo + (hi - lo) * i as f64 / k as f64).collect()
}

fn abs(a: &f64, b: &f64) -> f64 {
    (a - b).abs()
}

#[test]
fn halving_map_satisfies_a1_a2() {
    let grid = unit_grid(0.0, 1.0, 1024);
    let sys = IterationSystem::new("x/2", |x: &f64| x / 2.0, abs, grid.clone(), grid).unwrap();
    let report = a1_a2_check(&sys, Some(0.0), &A1A2Config::default());
    assert!(report.a1.is_pass() && report.a2.is_pass() && report.continuity.is_pass());
    for (i, s) in report.sup_iterates.iter().enumerate() {
        assert!((s - 0.5f64.powi(i as i32)).abs() <= 1e-12);
    }
    assert!(report.conclusion);
    assert_eq!(report.t_contraction.verdict, Verdict::Supported);
    assert_eq!(report.uniform_cover.verdict, Verdict::Supported);
    // discovered candidate agrees
    assert!(a1_a2_check(&sys, None, &A1A2Config::default()).xbar.abs() < 1e-15);
}

#[test]
fn identity_fails_a1_with_witness() {
    let grid = unit_grid(0.0, 1.0, 64);
    let sys = IterationSystem::new("id", |x: &f64| *x, abs, grid.clone(), grid).unwrap();
    let report = a1_a2_check(&sys, Some(0.0), &A1A2Config::default());
    match &report.a1 {
        HypothesisStatus::Fail { witness, .. } => assert!(*witness > 0.0),
        other => panic!("{other:?}"),
    }
    assert!(!report.conclusion);
    assert_eq!(report.uniform_cover.verdict, Verdict::Refuted);
    assert_eq!(report.t_contraction.verdict, Verdict::Refuted);
}

#[test]
fn squaring_map_satisfies_a2_on_half_interval() {
    let sys = IterationSystem::new(
        "x^2",
        |x: &f64| x * x,
        abs,
        unit_grid(0.0, 0.5, 256),
        unit_grid(0.0, 0.5, 256),
    )
    .unwrap();
    let report = a1_a2_check(&sys, Some(0.0), &A1A2Config::default());
    assert!(report.a2.is_pass());
    for i in 0..5 {
        let expect = 0.5f64.powi(1 << i);
        assert!((report.sup_iterates[i] - expect).abs() <= 1e-15);
    }
    // uniform cover pass implies A2 pass at the same candidate
    assert_eq!(report.uniform_cover.verdict, Verdict::Supported);
    assert!(report.conclusion && report.t_contraction.verdict == Verdict::Supported);
}

#[test]
fn approximate_t_contraction_for_halving_pair() {
    let grid = unit_grid(0.0, 1.0, 8);
    let sys = IterationSystem::new("x/2", |x: &f64| x / 2.0, abs, grid.clone(), grid).unwrap();
    let t = t_contractive_approx(&sys, &[(1.0, 0.3)], 40, 1e-9);
    assert_eq!(t.verdict, Verdict::Supported);
    assert!((t.max_final - 0.7 * 0.5f64.powi(40)).abs() < 1e-24);
    let constant = IterationSystem::new("c", |_: &f64| 0.25, abs, unit_grid(0.0, 1.0, 8), vec![0.0]).unwrap();
    assert_eq!(t_contractive_approx(&constant, &[(0.0, 1.0)], 1, 0.0).verdict, Verdict::Supported);
}

#[test]
fn rotation_preserves_diameter() {
    let alpha = 2.0 * PI * (5f64.sqrt() - 1.0) / 2.0;
    let arc = |a: &f64, b: &f64| {
        let t = (a - b).rem_euclid(2.0 * PI);
        t.min(2.0 * PI - t)
    };
    let circle: Vec<f64> = (0..64).map(|k| 2.0 * PI * k as f64 / 64.0).collect();
    let sys = IterationSystem::new("rotation", move |x: &f64| (x + alpha).rem_euclid(2.0 * PI), arc, circle.clone(), circle)
        .unwrap();
    let u = uniform_cover_condition_check(&sys, 32, 1e-9);
    assert_eq!(u.verdict, Verdict::Refuted);
    assert!(u.diameters.iter().all(|d| (d - PI).abs() < 1e-9));
}

#[test]
fn iteration_system_rejects_non_metric() {
    let err = IterationSystem::new("bad", |x: &f64| *x, |a: &f64, b: &f64| a - b, vec![0.0, 1.0], vec![0.0]).unwrap_err();
    assert!(matches!(err, RemetrizeError::NotAMetric(_)));
    assert!(IterationSystem::new("empty", |x: &f64| *x, abs, vec![], vec![0.0]).is_err());
}
