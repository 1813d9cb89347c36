//! Executable versions of the worked examples: the line with two origins,
//! the rationals with a halving map, the Moore plane, a truncated ordinal
//! space, and the double-limit construction behind the Hausdorff
//! characterizations.

mod double_limit;
mod moore;
mod scenarios;
mod two_origins;

use thiserror::Error;

pub use double_limit::{
    construct_double_limit_sequence, hausdorff_counterexample_map, CounterexampleVariant, SEPARATION_DEPTH,
};
pub use moore::{moore_level, moore_map, moore_plane_scenario, MooreBase, MoorePoint, MoorePremetric};
pub use scenarios::{ordinal_scenario, rationals_halving_scenario, OrdinalBase, OrdinalPoint, OrdinalScenario};
pub use two_origins::{
    two_origins_premetric, NonZero, RadiusSchedule, TwoOriginBase, TwoOriginPoint, TwoOriginPremetric,
};

use crate::value::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GalleryError {
    #[error("Hausdorff pair: base sets at level {level} are disjoint")]
    HausdorffPair { level: usize },
    #[error("the two limits coincide")]
    SamePoint,
    #[error("no candidate point in the level-{level} intersection")]
    NoCandidate { level: usize },
}

/// Level-`n` proposals `±1/(2n)` (harmonic) or `±2^{-n-1}` (dyadic).
pub fn two_origin_candidates(schedule: RadiusSchedule) -> impl Fn(usize) -> Vec<TwoOriginPoint> {
    move |level| {
        let r: Rational = schedule.radius(level) / Rational::from_integer(2.into());
        [r.clone(), -r]
            .into_iter()
            .filter_map(TwoOriginPoint::real)
            .collect()
    }
}

/// The double-limit sequence of the line with two origins.
pub fn two_origins_double_limit(schedule: RadiusSchedule, length: usize) -> Vec<TwoOriginPoint> {
    construct_double_limit_sequence(
        &TwoOriginBase { schedule },
        &TwoOriginPoint::OriginA,
        &TwoOriginPoint::OriginB,
        two_origin_candidates(schedule),
        length,
    )
    .expect("the two origins cannot be separated")
}
