//! S-orbits of set-valued maps: generation under selection policies and the
//! monitors for p-contractivity, accumulation points, persistence of images
//! and fixed-point classification.

mod generate;
mod map;
mod monitor;

use thiserror::Error;

pub use generate::{
    generate_orbit, orbit_dump, replay_membership, ChoiceRecord, MembershipReplay, Orbit, OrbitConfig, Policy,
};
pub use map::{ClosureMap, SetValuedMap};
pub use monitor::{
    classify_fixed_point, find_accumulation_point, monitor_p_contractive, p_sup_series, probe_star_property,
    Accumulation, AccumulationConfig, ContractivityReport, FixedPointClass, MonitorConfig, StarConfig, StarOutcome,
    StarVariant,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("orbit ended after {len} points; contractivity needs an infinite orbit")]
    Ended { len: usize },
}

#[cfg(test)]
mod tests;
