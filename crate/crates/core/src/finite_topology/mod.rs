//! Exact verification on finite topological spaces.
//!
//! Points are `0..n`, subsets are bitmasks ([`PointSet`]). Orbits are
//! eventually periodic and stored as tail + cycle, so "for infinitely many
//! `i`" is read on the cycle.

mod checks;
mod enumerate;
pub mod oracle;
mod orbit;
mod space;
mod sweep;
mod text;

use thiserror::Error;

pub use checks::{
    check_fixed_point_theorem, converges_to, cover_condition, cover_has_witness, failing_cover, is_closed_graph,
    is_tau_contractive, pairs_colocated, strong_accumulation_points, TauVerdict, TheoremRecord,
};
pub use enumerate::{
    enumerate_topologies, enumerate_topologies_with, EnumerationCap, DEFAULT_MAX_POINTS, EXTENDED_MAX_POINTS,
};
pub use orbit::{FiniteSetMap, OrbitDescriptor};
pub use space::{
    contains, from_points, full_set, is_subset, members, singleton, FiniteSpace, MinimalBase, PointSet,
    SeparationClass, MAX_POINTS,
};
pub use sweep::{separation_consistent, sweep, SweepConfig, SweepSummary, MAX_MAP_SWEEP_POINTS};
pub use text::FiniteInstance;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiniteError {
    #[error("point count {0} outside 1..={max}", max = MAX_POINTS)]
    PointCount(usize),
    #[error("enumeration supports 1 <= n <= {max}, got {n}")]
    EnumerationRange { n: usize, max: usize },
    #[error("set {0:#b} mentions points outside the space")]
    OpenOutOfRange(PointSet),
    #[error("point {0} outside the space")]
    PointOutOfRange(usize),
    #[error("open family lacks the empty set")]
    MissingEmptySet,
    #[error("open family lacks the whole space")]
    MissingFullSet,
    #[error("union of {0:#b} and {1:#b} is not open")]
    NotClosedUnderUnion(PointSet, PointSet),
    #[error("intersection of {0:#b} and {1:#b} is not open")]
    NotClosedUnderIntersection(PointSet, PointSet),
    #[error("map has {found} images, space has {expected} points")]
    ImageCount { expected: usize, found: usize },
    #[error("empty orbit")]
    EmptyOrbit,
    #[error("not an S-orbit: step {step} leaves the image")]
    NotAnOrbit { step: usize },
    #[error("orbit is finite; contractivity is defined for infinite orbits only")]
    FiniteOrbit,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
