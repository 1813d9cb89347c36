//! Metric-side machinery: agreement of the cover and distance notions of
//! contractivity on finite metric carriers, the LOEV conditions, topological
//! contractions and the hypotheses of the Banach remetrization theorem.
//!
//! Nothing here constructs the new metric; reports state which hypotheses
//! were verified on samples.

mod finite;
mod loev;
mod metric;

use thiserror::Error;

pub use finite::{t_contractive_exact, tau_p_equivalence_test, EquivalenceRecord, FiniteMetric};
pub use loev::{loev_condition_check, LoevConfig, LoevReport};
pub use metric::{
    a1_a2_check, t_contractive_approx, uniform_cover_condition_check, A1A2Config, HypothesisStatus,
    IterationSystem, RemetrizationReport, TContraction, UniformCover,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RemetrizeError {
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error("empty sample")]
    EmptySample,
    #[error(transparent)]
    Finite(#[from] crate::finite_topology::FiniteError),
}

#[cfg(test)]
mod tests;
