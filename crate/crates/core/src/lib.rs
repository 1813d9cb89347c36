//! Contractive orbits of set-valued maps.

pub mod descent;
pub mod finite_topology;
pub mod gallery;
pub mod orbit_engine;
pub mod premetric;
pub mod remetrize;
pub mod value;
