use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;

use super::*;
use crate::orbit_engine::SetValuedMap;
use crate::premetric::{AbsDiff, PSpace};
use crate::value::{dyadic, ratio, Extended, Rational};

/// `j · 2^{-e}` for `lo·2^e ≤ j ≤ hi·2^e`.
fn grid(lo: i64, hi: i64, e: u32) -> Vec<Rational> {
    let s = 1i64 << e;
    (lo * s..=hi * s).map(|j| ratio(j, s)).collect()
}

fn line() -> PSpace<Rational, Rational> {
    PSpace::metric_line("Q", Arc::new(|k, _| grid(-2, 2, 4).into_iter().take(k).collect()), vec![Rational::zero()])
}

fn square(domain: Vec<Rational>) -> ObjectiveFunction<Rational, Rational> {
    ObjectiveFunction::new("x^2", |x: &Rational| Extended::Finite(x * x), domain).unwrap()
}

#[test]
fn improper_objective_is_rejected() {
    let err = ObjectiveFunction::<Rational, Rational>::new("inf", |_| Extended::Infinity, grid(0, 1, 2)).unwrap_err();
    assert_eq!(err, DescentError::Improper("inf".into()));
}

#[test]
fn sublevel_map_samples_and_emptiness() {
    let f = square(grid(-2, 2, 3));
    let map = sublevel_map(&f);
    let mut rng = <StdRng as rand::SeedableRng>::seed_from_u64(0);
    let ys = map.sample(&Rational::one(), 1000, &mut rng);
    assert!(!ys.is_empty());
    assert!(ys.iter().all(|y| y * y < Rational::one()));
    assert_eq!(map.known_empty(&Rational::zero()), Some(true));

    let c = ObjectiveFunction::new("c", |_: &Rational| Extended::Finite(ratio(3, 1)), grid(-1, 1, 2)).unwrap();
    let cmap = sublevel_map(&c);
    assert!(grid(-1, 1, 2).iter().all(|x| cmap.known_empty(x) == Some(true)));

    // +∞ at x, finite elsewhere: S_f(x) is nonempty
    let g = ObjectiveFunction::new(
        "bump",
        |x: &Rational| if x.is_zero() { Extended::Infinity } else { Extended::Finite(x.abs()) },
        grid(-1, 1, 2),
    )
    .unwrap();
    assert_eq!(sublevel_map(&g).known_empty(&Rational::zero()), Some(false));
}

#[test]
fn square_has_a_certified_strong_minimum() {
    let f = square(grid(-4, 4, 6));
    let cert = strong_min_descent(&f, &line(), Rational::one(), &DescentConfig::new(1)).unwrap();
    assert_eq!(cert.point, Rational::zero());
    assert!(cert.ended && cert.monotone);
    assert_eq!(cert.strong_minimum, StrongMinimum::Certified, "{:?}", cert.notes);
    assert_eq!(cert.fixed_point.as_deref(), Some("empty_value"));
}

#[test]
fn escaping_minimizers_block_certification() {
    // x² near 0, 1/x² far out: values near 0 also occur at the grid edge
    let mut domain = grid(-4, 4, 6);
    domain.extend((5..=512).flat_map(|k| [ratio(k, 1), ratio(-k, 1)]));
    let f = ObjectiveFunction::new(
        "escape",
        |x: &Rational| {
            let sq = x * x;
            Extended::Finite(if x.abs() <= Rational::one() { sq } else { sq.recip() })
        },
        domain,
    )
    .unwrap();
    let cert = strong_min_descent(&f, &line(), Rational::one(), &DescentConfig::new(2)).unwrap();
    assert_eq!(cert.point, Rational::zero());
    assert_eq!(cert.strong_minimum, StrongMinimum::NotCertified);
}

#[test]
fn constant_objective_stops_at_start() {
    let f = ObjectiveFunction::new("c", |_: &Rational| Extended::Finite(Rational::one()), grid(-1, 1, 3)).unwrap();
    let cert = strong_min_descent(&f, &line(), ratio(1, 2), &DescentConfig::new(0)).unwrap();
    assert_eq!(cert.steps, 0);
    assert_eq!(cert.point, ratio(1, 2));
    assert_eq!(cert.strong_minimum, StrongMinimum::NotCertified);
}

#[test]
fn ekeland_on_square_stops_in_the_critical_region() {
    let f = square(grid(-2, 2, 12));
    let cert = ekeland_descent(&f, &AbsDiff, Rational::one(), &DescentConfig::new(0)).unwrap();
    assert!(cert.ended);
    assert!(cert.point <= ratio(1, 2) + dyadic(10));
    assert_eq!(cert.length_bound_held, Some(true));
    assert!(cert.sigma_length <= Rational::one());
    assert!(cert.monotone);
    assert_eq!(cert.residual, 0.0);
    // for 0 < y < x membership reduces to x + y > 1, so from 1 the best step is 2^-12
    assert_eq!(cert.orbit, vec![Rational::one(), dyadic(12)]);
}

#[test]
fn lipschitz_objective_has_empty_values() {
    let f = ObjectiveFunction::new("abs", |x: &Rational| Extended::Finite(x.abs()), grid(-2, 2, 6)).unwrap();
    let cert = ekeland_descent(&f, &AbsDiff, ratio(3, 4), &DescentConfig::new(0)).unwrap();
    assert_eq!(cert.point, ratio(3, 4));
    assert_eq!(cert.steps, 0);
    assert_eq!(cert.residual, 0.0);
    assert_eq!(cert.sigma_length, Rational::zero());
}

#[test]
fn critical_start_gives_empty_orbit() {
    let f = square(grid(-1, 1, 8));
    let cert = ekeland_descent(&f, &AbsDiff, ratio(1, 4), &DescentConfig::new(0)).unwrap();
    assert_eq!((cert.steps, cert.residual), (0, 0.0));
}

#[test]
fn floor_detects_unbounded_descent() {
    let domain: Vec<Rational> = (-1000..=0).map(|k| ratio(k, 1)).collect();
    let f = ObjectiveFunction::new("2x", |x: &Rational| Extended::Finite(x * ratio(2, 1)), domain).unwrap();
    let cfg = DescentConfig {
        floor: Some(-100.0),
        ..DescentConfig::new(0)
    };
    let err = ekeland_descent(&f, &AbsDiff, Rational::zero(), &cfg).unwrap_err();
    assert!(matches!(err, DescentError::UnboundedBelow { step: 0, .. }));
    let err = ekeland_descent(&f, &AbsDiff, ratio(1, 3), &cfg).unwrap_err();
    assert!(matches!(err, DescentError::UnboundedBelow { .. }));
}

#[test]
fn caristi_examples() {
    let domain = grid(-2, 2, 6);
    let cfg = DescentConfig::new(0);
    let f = ObjectiveFunction::new("2|x|", |x: &Rational| Extended::Finite(x.abs() * ratio(2, 1)), domain.clone())
        .unwrap();
    let r = caristi_check(|x: &Rational| x / ratio(2, 1), &f, &AbsDiff, Rational::one(), &domain, &cfg).unwrap();
    assert!(r.premise_holds);
    assert_eq!(r.fixed_point, Some(Rational::zero()));
    assert_eq!(r.fixed_samples, 1);

    let bounded = ObjectiveFunction::new(
        "bump",
        |x: &Rational| Extended::Finite((Rational::one() + x * x).recip()),
        domain.clone(),
    )
    .unwrap();
    let r = caristi_check(|x: &Rational| x + Rational::one(), &bounded, &AbsDiff, Rational::one(), &domain, &cfg)
        .unwrap();
    assert!(!r.premise_holds);
    assert_eq!(r.witness, Some(domain[0].clone()));
    assert!(r.descent.is_none());

    let r = caristi_check(|x: &Rational| x.clone(), &bounded, &AbsDiff, Rational::one(), &domain, &cfg).unwrap();
    assert!(r.premise_holds);
    assert_eq!(r.fixed_samples, domain.len());
}

/// Closed intervals `[lo_i, hi_i]` sampled at both ends and on an interior grid.
fn interval_family(name: &str, bounds: impl Fn(usize) -> (Rational, Rational) + Send + Sync + 'static) -> NestedFamily<Rational> {
    let bounds = Arc::new(bounds);
    let b2 = bounds.clone();
    NestedFamily::new(
        name,
        move |i, x: &Rational| {
            let (lo, hi) = bounds(i);
            lo <= *x && *x <= hi
        },
        move |i, budget, _| {
            let (lo, hi) = b2(i);
            let k = budget.max(2) as i64 - 1;
            (0..=k).map(|j| &lo + (&hi - &lo) * ratio(j, k)).collect()
        },
    )
}

#[test]
fn cantor_on_shrinking_intervals() {
    let fam = interval_family("[0, 1/i]", |i| (Rational::zero(), ratio(1, i as i64)));
    let report = cantor_intersect(&fam, &line(), &[], &CantorConfig::new(0));
    assert_eq!(
        report.outcome,
        CantorOutcome::Limit {
            point: Rational::zero(),
            checked_depth: 4096
        }
    );
    assert_eq!(report.nested_violations, 0);

    let single = NestedFamily::new("{0}", |_, x: &Rational| x.is_zero(), |_, _, _| vec![Rational::zero()]);
    let report = cantor_intersect(&single, &line(), &[], &CantorConfig::new(0));
    assert_eq!(report.orbit, vec![Rational::zero()]);
    assert!(matches!(report.outcome, CantorOutcome::Limit { .. }));

    let empty = NestedFamily::new("∅ from 3", |i, _: &Rational| i < 3, |i, _, _| if i < 3 { vec![ratio(i as i64, 1)] } else { vec![] });
    let report = cantor_intersect(&empty, &line(), &[], &CantorConfig::new(0));
    assert!(matches!(report.outcome, CantorOutcome::Inconclusive { .. }), "{:?}", report.outcome);
}

/// `⌊√2 · 2^i⌋ / 2^i`.
fn sqrt2_floor(i: usize) -> Rational {
    let root = (num_bigint::BigInt::from(2) << (2 * i)).sqrt();
    Rational::new(root, num_bigint::BigInt::one() << i)
}

#[test]
fn sqrt_two_family_has_no_rational_limit() {
    let cache = std::sync::Mutex::new(std::collections::HashMap::new());
    let fam = interval_family("√2", move |i| {
        cache
            .lock()
            .unwrap()
            .entry(i)
            .or_insert_with(|| {
                let a = sqrt2_floor(i);
                let b = &a + dyadic(i as u32);
                (a, b)
            })
            .clone()
    });
    assert_eq!(sqrt2_floor(3), ratio(11, 8));
    let pool = [ratio(99, 70), ratio(141421, 100000)];
    let report = cantor_intersect(&fam, &line(), &pool, &CantorConfig::new(0));
    assert!(matches!(report.outcome, CantorOutcome::NoAccumulation { .. }), "{:?}", report.outcome);
    assert_eq!(report.nested_violations, 0);
    assert!(report.depths.windows(2).all(|w| w[1] > w[0]));
    // the orbit approaches √2 from within the nested intervals
    let last = report.orbit.last().unwrap();
    assert!((last * last - ratio(2, 1)).abs() < dyadic(100));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ekeland_prefix_bound_holds(a in 1i64..8, c in -8i64..8, start in -16i64..16, seed in 0u64..1000) {
        let center = ratio(c, 4);
        let f = ObjectiveFunction::new(
            "quad",
            move |x: &Rational| {
                let d = x - &center;
                Extended::Finite(&d * &d * ratio(a, 1))
            },
            grid(-4, 4, 5),
        )
        .unwrap();
        let cfg = DescentConfig { budget: 64, eps0: 0.5, ..DescentConfig::new(seed) };
        let cert = ekeland_descent(&f, &AbsDiff, ratio(start, 4), &cfg).unwrap();
        prop_assert_eq!(cert.length_bound_held, Some(true));
        prop_assert!(cert.monotone);
        let f1 = f.eval(&ratio(start, 4)).finite().unwrap().clone();
        prop_assert!(cert.sigma_length <= f1);
    }
}
