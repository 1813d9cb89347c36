//! Run configuration read from a TOML file. Every table rejects unknown keys.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub max_steps: Option<usize>,
    pub tol: Option<f64>,
    #[serde(default)]
    pub verify_finite: VerifyFiniteConfig,
    #[serde(default)]
    pub descend: DescendConfig,
    #[serde(default)]
    pub gallery: GalleryConfig,
    #[serde(default)]
    pub audit: AuditConfig,
    #[serde(default)]
    pub remetrize: RemetrizeConfig,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// The seed, or a configuration error naming the command that needs one.
    pub fn require_seed(&self, command: &str) -> Result<u64, CliError> {
        self.seed
            .ok_or_else(|| CliError::Config(format!("`{command}` samples its inputs and needs --seed or `seed`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyFiniteConfig {
    pub n: usize,
    pub max_tail: usize,
    pub max_cycle: usize,
    pub oracle: bool,
    pub allow_five: bool,
}

impl Default for VerifyFiniteConfig {
    fn default() -> Self {
        Self {
            n: 3,
            max_tail: 2,
            max_cycle: 3,
            oracle: true,
            allow_five: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Ekeland,
    StrongMin,
    Cantor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveKind {
    /// `x²`
    Square,
    /// `|x|`
    Abs,
    /// `x²` on `[-1, 1]` and `1/x²` outside, with far-out grid points
    Escape,
    /// `+∞` everywhere; rejected as improper
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    /// `[0, 1/i]`
    Shrinking,
    /// `[⌊√2·2^i⌋/2^i, ⌊√2·2^i⌋/2^i + 2^-i]`
    Sqrt2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DescendConfig {
    pub solver: Solver,
    pub objective: ObjectiveKind,
    pub family: FamilyKind,
    /// Start point as an exact rational, e.g. `"3/4"`.
    pub start: String,
    pub grid_lo: i64,
    pub grid_hi: i64,
    /// The grid step is `2^-grid_exponent`.
    pub grid_exponent: u32,
    pub budget: usize,
    pub eps0: f64,
    pub depth_cap: usize,
}

impl Default for DescendConfig {
    fn default() -> Self {
        Self {
            solver: Solver::Ekeland,
            objective: ObjectiveKind::Square,
            family: FamilyKind::Shrinking,
            start: "1".into(),
            grid_lo: -2,
            grid_hi: 2,
            grid_exponent: 12,
            budget: 1 << 16,
            eps0: 0.0,
            depth_cap: 4096,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GalleryScenario {
    Rationals,
    Moore,
    TwoOrigins,
    Ordinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    Harmonic,
    Dyadic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GalleryConfig {
    pub scenario: GalleryScenario,
    pub schedule: Schedule,
    /// Length of the constructed double-limit sequence.
    pub length: usize,
    pub truncation: u32,
}

impl Default for GalleryConfig {
    fn default() -> Self {
        Self {
            scenario: GalleryScenario::Rationals,
            schedule: Schedule::Dyadic,
            length: 64,
            truncation: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AuditSpace {
    Rationals,
    TwoOrigins,
    /// `p ≡ 0` on the rationals
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditConfig {
    pub space: AuditSpace,
    pub pair_budget: usize,
    pub probe_length: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            space: AuditSpace::Rationals,
            pair_budget: 64,
            probe_length: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum IterationMap {
    /// `x/2` on `[0, 1]`
    Half,
    /// `x` on `[0, 1]`
    Identity,
    /// `x²` on `[0, 1/2]`
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RemetrizeConfig {
    pub map: IterationMap,
    pub grid_points: usize,
    pub xbar: Option<f64>,
    pub horizon: usize,
    /// Random finite-metric instances for the cover/distance agreement check.
    pub equivalence_instances: usize,
}

impl Default for RemetrizeConfig {
    fn default() -> Self {
        Self {
            map: IterationMap::Half,
            grid_points: 1024,
            xbar: None,
            horizon: 64,
            equivalence_instances: 0,
        }
    }
}
