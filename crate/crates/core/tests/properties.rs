use std::sync::OnceLock;

use corbit::finite_topology::{
    enumerate_topologies, is_tau_contractive, oracle, FiniteInstance, FiniteSetMap, FiniteSpace, OrbitDescriptor,
};
use corbit::premetric::{p_sup, sigma_p_length, FnPremetric};
use corbit::value::{ratio, Rational};
use proptest::prelude::*;

fn spaces(n: usize) -> &'static [FiniteSpace] {
    static CACHE: OnceLock<Vec<Vec<FiniteSpace>>> = OnceLock::new();
    &CACHE.get_or_init(|| (1..=4).map(|n| enumerate_topologies(n).unwrap()).collect())[n - 1]
}

fn infinite_orbits(map: &FiniteSetMap) -> Vec<OrbitDescriptor> {
    map.orbits(3, 4).into_iter().filter(OrbitDescriptor::is_infinite).collect()
}

/// Asymmetric: moving up costs twice as much as moving down.
fn uphill(x: &Rational, y: &Rational) -> Rational {
    if x > y {
        (x - y) * ratio(2, 1)
    } else {
        y - x
    }
}

fn rationals() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-64i64..64, 1i64..16), 0..24)
        .prop_map(|v| v.into_iter().map(|(a, b)| ratio(a, b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reduction_matches_cover_enumeration(n in 1usize..=4, t in any::<usize>(), m in any::<u64>(), o in any::<usize>()) {
        let space = &spaces(n)[t % spaces(n).len()];
        let map = FiniteSetMap::from_index(n, m % (1u64 << (n * n)));
        let orbits = infinite_orbits(&map);
        prop_assume!(!orbits.is_empty());
        let orbit = &orbits[o % orbits.len()];
        prop_assert_eq!(
            is_tau_contractive(space, &map, orbit).unwrap().contractive,
            oracle::tau_contractive_exhaustive(space, &map, orbit)
        );
    }

    /// A finer topology has more covers, so contractivity can only be lost.
    #[test]
    fn refining_the_topology_never_creates_contractivity(n in 1usize..=3, t in any::<usize>(), m in any::<u64>()) {
        let coarse = &spaces(n)[t % spaces(n).len()];
        let map = FiniteSetMap::from_index(n, m % (1u64 << (n * n)));
        for orbit in infinite_orbits(&map) {
            let coarse_ok = is_tau_contractive(coarse, &map, &orbit).unwrap().contractive;
            for fine in spaces(n).iter().filter(|f| coarse.opens().iter().all(|u| f.opens().contains(u))) {
                if is_tau_contractive(fine, &map, &orbit).unwrap().contractive {
                    prop_assert!(coarse_ok, "{:?} -> {:?} on {:?}", coarse, fine, orbit);
                }
            }
        }
    }

    #[test]
    fn sigma_length_is_additive(points in rationals(), cut in any::<usize>()) {
        let p = FnPremetric(uphill);
        let k = if points.is_empty() { 0 } else { cut % points.len() };
        let whole = sigma_p_length(&p, &points);
        let (left, right) = (&points[..points.len().min(k + 1)], &points[k.min(points.len())..]);
        prop_assert_eq!(sigma_p_length(&p, left) + sigma_p_length(&p, right), whole);
    }

    #[test]
    fn p_sup_grows_with_budget(set in rationals(), x in -64i64..64, b1 in 0usize..32, extra in 0usize..32) {
        let p = FnPremetric(uphill);
        let x = ratio(x, 1);
        let small = p_sup(&p, set.iter().cloned(), &x, b1);
        let large = p_sup(&p, set.iter().cloned(), &x, b1 + extra);
        prop_assert!(small <= large);
        // the full budget reaches the exact maximum
        let exact = set.iter().map(|y| uphill(y, &x)).fold(Rational::from_integer(0.into()), |a, v| a.max(v));
        prop_assert_eq!(p_sup(&p, set.iter().cloned(), &x, set.len()), exact);
    }

    #[test]
    fn text_format_roundtrips(n in 1usize..=4, t in any::<usize>(), m in any::<u64>()) {
        let space = spaces(n)[t % spaces(n).len()].clone();
        let map = FiniteSetMap::from_index(n, m % (1u64 << (n * n)));
        let orbits: Vec<OrbitDescriptor> = map.orbits(2, 2).into_iter().take(4).collect();
        let inst = FiniteInstance { space, map: Some(map), orbits };
        let text = inst.to_string();
        prop_assert_eq!(FiniteInstance::parse(&text).unwrap(), inst, "{}", text);
    }
}
