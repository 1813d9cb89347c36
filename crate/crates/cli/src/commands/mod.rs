//! One driver per subcommand. Each returns the checks, verdicts and details
//! of its run; points on exact carriers are reported through `Display`.

mod audit;
mod descend;
mod gallery;
mod remetrize;
mod verify_finite;

use std::fmt::Display;

pub use audit::audit;
pub use descend::descend;
pub use gallery::gallery;
pub use remetrize::remetrize;
pub use verify_finite::verify_finite;

/// The first `limit` points as strings; reports keep long orbits readable.
fn head<P: Display>(points: &[P], limit: usize) -> Vec<String> {
    points.iter().take(limit).map(ToString::to_string).collect()
}

const ORBIT_HEAD: usize = 64;
