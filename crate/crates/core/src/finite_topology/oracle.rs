//! Brute-force reference implementations.
//!
//! Nothing here shares code with the fast paths: topologies are found by
//! filtering every family of subsets, cover conditions by enumerating every
//! subfamily of the topology, closed graphs by rebuilding the interior of
//! the graph's complement from product rectangles.

use super::orbit::{FiniteSetMap, OrbitDescriptor};
use super::space::{FiniteSpace, PointSet};

/// Number of topologies on `n ≤ 4` labelled points, by filtering all
/// `2^(2^n)` families of subsets for the closure axioms.
pub fn count_topologies_brute_force(n: usize) -> u64 {
    assert!((1..=4).contains(&n), "brute force is limited to n <= 4");
    let subsets = 1usize << n;
    let full = subsets - 1;
    let families: u64 = 1 << subsets;
    let mut count = 0;
    for family in 0..families {
        let has = |s: usize| family >> s & 1 == 1;
        if !has(0) || !has(full) {
            continue;
        }
        let closed = (0..subsets).filter(|&a| has(a)).all(|a| {
            (0..subsets)
                .filter(|&b| has(b))
                .all(|b| has(a | b) && has(a & b))
        });
        if closed {
            count += 1;
        }
    }
    count
}

fn every_cover_has<F: Fn(PointSet) -> bool>(space: &FiniteSpace, witness: F) -> bool {
    let opens = space.opens();
    assert!(opens.len() <= 20, "exhaustive cover enumeration is limited to 20 opens");
    (0u64..1 << opens.len()).all(|family| {
        let members = || (0..opens.len()).filter(move |&i| family >> i & 1 == 1).map(|i| opens[i]);
        let union = members().fold(0, |acc, u| acc | u);
        union != space.full() || members().any(&witness)
    })
}

fn orbit_points(orbit: &OrbitDescriptor) -> Vec<usize> {
    (0..orbit.positions()).map(|i| orbit.at(i)).collect()
}

/// τ-contractivity by quantifying over every open cover.
pub fn tau_contractive_exhaustive(space: &FiniteSpace, map: &FiniteSetMap, orbit: &OrbitDescriptor) -> bool {
    let xs = orbit_points(orbit);
    every_cover_has(space, |u| {
        xs.iter()
            .any(|&x| u >> x & 1 == 1 && map.image(x) & !u == 0)
    })
}

/// Cover condition of the closed-graph theorem by enumerating every cover.
pub fn cover_condition_exhaustive(space: &FiniteSpace, map: &FiniteSetMap, orbit: &OrbitDescriptor) -> bool {
    let len = orbit.positions();
    // two full periods past the tail cover every (x_i, x_{i+2}) pair
    let horizon = len + 2 * orbit.cycle().len();
    every_cover_has(space, |u| {
        (0..horizon).any(|i| map.image(orbit.at(i)) & !u == 0 && u >> orbit.at(i + 2) & 1 == 1)
    })
}

/// Closed graph iff the complement of `Gr S` equals the union of all open
/// rectangles `U × V` it contains.
pub fn closed_graph_by_complement(space: &FiniteSpace, map: &FiniteSetMap) -> bool {
    let n = space.n();
    let cell = |a: usize, b: usize| a * n + b;
    let mut complement = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            complement[cell(a, b)] = !map.in_graph(a, b);
        }
    }
    let mut interior = vec![false; n * n];
    for &u in space.opens() {
        for &v in space.opens() {
            let rect: Vec<usize> = (0..n)
                .filter(|&a| u >> a & 1 == 1)
                .flat_map(|a| (0..n).filter(move |&b| v >> b & 1 == 1).map(move |b| cell(a, b)))
                .collect();
            if rect.iter().all(|&c| complement[c]) {
                for c in rect {
                    interior[c] = true;
                }
            }
        }
    }
    interior == complement
}

/// t-contraction of a single-valued map by enumerating every cover, for every
/// starting pair and every late iterate index.
pub fn t_contractive_exhaustive(space: &FiniteSpace, f: &[usize]) -> bool {
    let n = space.n();
    let iterate = |mut x: usize, k: usize| {
        for _ in 0..k {
            x = f[x];
        }
        x
    };
    // after n steps every pair orbit is periodic with period dividing lcm <= n!,
    // so n + n! iterates cover all recurring pairs for n <= 4
    let period: usize = (1..=n).product();
    (0..n).all(|a| {
        (0..n).all(|b| {
            (n..n + period).all(|k| {
                let (fa, fb) = (iterate(a, k), iterate(b, k));
                every_cover_has(space, |u| u >> fa & 1 == 1 && u >> fb & 1 == 1)
            })
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_topologies_brute_force(1), 1);
        assert_eq!(count_topologies_brute_force(2), 4);
    }
}
