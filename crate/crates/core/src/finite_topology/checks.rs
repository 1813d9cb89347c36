//! Exact cover-quantified checks on finite spaces.
//!
//! "For every open cover γ there is U ∈ γ with P(U)" is decided without
//! enumerating covers: a cover with no P-member exists iff the opens failing
//! P already cover X. The brute-force counterparts live in
//! [`super::oracle`].

use serde::{Deserialize, Serialize};

use super::orbit::{FiniteSetMap, OrbitDescriptor};
use super::space::{contains, is_subset, members, FiniteSpace, PointSet};
use super::FiniteError;

/// The union of the opens that do not witness `witness`, when it covers X.
pub fn failing_cover<F>(space: &FiniteSpace, witness: F) -> Option<Vec<PointSet>>
where
    F: Fn(PointSet) -> bool,
{
    let non_witness: Vec<PointSet> = space.opens().iter().copied().filter(|&u| !witness(u)).collect();
    let union = non_witness.iter().fold(0, |acc, &u| acc | u);
    (union == space.full()).then_some(non_witness)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauVerdict {
    pub contractive: bool,
    /// An open cover none of whose members contains some `x_i` together with
    /// `S(x_i)`; present iff `contractive` is false.
    pub failing_cover: Option<Vec<PointSet>>,
}

fn tau_witness(map: &FiniteSetMap, orbit: &OrbitDescriptor, u: PointSet) -> bool {
    members(orbit.visited()).any(|x| contains(u, x) && is_subset(map.image(x), u))
}

/// Whether `cover` has a member containing some orbit point and its image.
pub fn cover_has_witness(map: &FiniteSetMap, orbit: &OrbitDescriptor, cover: &[PointSet]) -> bool {
    cover.iter().any(|&u| tau_witness(map, orbit, u))
}

pub fn is_tau_contractive(
    space: &FiniteSpace,
    map: &FiniteSetMap,
    orbit: &OrbitDescriptor,
) -> Result<TauVerdict, FiniteError> {
    check_dims(space, map)?;
    orbit.require_infinite(map)?;
    let failing = failing_cover(space, |u| tau_witness(map, orbit, u));
    Ok(TauVerdict {
        contractive: failing.is_none(),
        failing_cover: failing,
    })
}

/// True iff the sequence is eventually inside `m(x)`.
pub fn converges_to(space: &FiniteSpace, orbit: &OrbitDescriptor, x: usize) -> bool {
    let m = space.minimal_base().of(x);
    if orbit.is_infinite() {
        is_subset(orbit.recurrent(), m)
    } else {
        // a finite list is read as eventually constant at its last entry
        orbit.tail().last().is_some_and(|&last| contains(m, last))
    }
}

/// Points `x̄` with `{x_i} ∪ S(x_i) ⊆ m(x̄)` for infinitely many `i`.
pub fn strong_accumulation_points(
    space: &FiniteSpace,
    map: &FiniteSetMap,
    orbit: &OrbitDescriptor,
) -> Result<PointSet, FiniteError> {
    check_dims(space, map)?;
    orbit.require_infinite(map)?;
    let base = space.minimal_base();
    let found = (0..space.n())
        .filter(|&xb| {
            let m = base.of(xb);
            orbit
                .cycle()
                .iter()
                .any(|&c| contains(m, c) && is_subset(map.image(c), m))
        })
        .fold(0, |acc, x| acc | 1 << x);
    Ok(found)
}

/// Graph of `S` is closed in `X × X`.
pub fn is_closed_graph(space: &FiniteSpace, map: &FiniteSetMap) -> bool {
    let base = space.minimal_base();
    let n = space.n();
    (0..n).all(|a| {
        (0..n).all(|b| {
            map.in_graph(a, b)
                || members(base.of(a)).all(|a2| base.of(b) & map.image(a2) == 0)
        })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremRecord {
    pub closed_graph: bool,
    pub cover_condition: bool,
    pub fixed_point: Option<usize>,
    /// False only for a counterexample: both premises hold and no `x ∈ S(x)`.
    pub consistent: bool,
}

fn shifted_witness(map: &FiniteSetMap, orbit: &OrbitDescriptor, u: PointSet) -> bool {
    (0..orbit.positions()).any(|i| is_subset(map.image(orbit.at(i)), u) && contains(u, orbit.at(i + 2)))
}

/// For every cover some `U` has `S(x_{i₀}) ⊆ U` and `x_{i₀+2} ∈ U`.
pub fn cover_condition(
    space: &FiniteSpace,
    map: &FiniteSetMap,
    orbit: &OrbitDescriptor,
) -> Result<bool, FiniteError> {
    check_dims(space, map)?;
    orbit.require_infinite(map)?;
    Ok(failing_cover(space, |u| shifted_witness(map, orbit, u)).is_none())
}

/// Evaluates both premises of the closed-graph fixed point theorem and its
/// conclusion on one orbit.
pub fn check_fixed_point_theorem(
    space: &FiniteSpace,
    map: &FiniteSetMap,
    orbit: &OrbitDescriptor,
) -> Result<TheoremRecord, FiniteError> {
    let cover = cover_condition(space, map, orbit)?;
    let closed = is_closed_graph(space, map);
    let fixed_point = map.fixed_points().first().copied();
    Ok(TheoremRecord {
        closed_graph: closed,
        cover_condition: cover,
        fixed_point,
        consistent: !(closed && cover && fixed_point.is_none()),
    })
}

/// Every open cover has, for each listed pair, a member containing both
/// points. Used for eventually periodic iterate pairs of a t-contraction.
pub fn pairs_colocated(space: &FiniteSpace, pairs: &[(usize, usize)]) -> bool {
    pairs.iter().all(|&(a, b)| {
        let both = (1 << a) | (1 << b);
        failing_cover(space, |u| is_subset(both, u)).is_none()
    })
}

pub(crate) fn check_dims(space: &FiniteSpace, map: &FiniteSetMap) -> Result<(), FiniteError> {
    if space.n() == map.n() {
        Ok(())
    } else {
        Err(FiniteError::ImageCount {
            expected: space.n(),
            found: map.n(),
        })
    }
}
