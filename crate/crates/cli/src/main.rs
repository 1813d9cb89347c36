//! `corbit`: batch runs over the finite verifier, the descent solvers, the
//! gallery scenarios, the premetric audit and the remetrization checks.
//!
//! Exit codes: 0 when every check is consistent, 1 when a violation is found,
//! 2 on a configuration or usage error.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use config::{AuditSpace, FamilyKind, GalleryScenario, IterationMap, ObjectiveKind, ScenarioConfig, Solver};
use report::RunReport;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "corbit", version, about = "Contractive orbits of set-valued maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML run configuration
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for every sampled step; required by sampled runs
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exhaustive sweep over all topologies (and maps, for n <= 3) on n points
    VerifyFinite {
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run a descent solver and emit its certificate
    Descend {
        #[arg(long, value_enum)]
        solver: Option<Solver>,
        #[arg(long, value_enum)]
        objective: Option<ObjectiveKind>,
        #[arg(long, value_enum)]
        family: Option<FamilyKind>,
        /// Exact rational start point, e.g. 3/4
        #[arg(long)]
        start: Option<String>,
    },
    /// Run one of the gallery scenarios
    Gallery {
        #[arg(long, value_enum)]
        scenario: Option<GalleryScenario>,
    },
    /// Audit the premetric axioms of a carrier
    Audit {
        #[arg(long, value_enum)]
        space: Option<AuditSpace>,
    },
    /// Check the remetrization hypotheses for a self-map
    Remetrize {
        #[arg(long, value_enum)]
        map: Option<IterationMap>,
        /// Random finite-metric instances for the cover/distance agreement check
        #[arg(long)]
        equivalence_instances: Option<usize>,
    },
}

impl Cli {
    /// File settings overlaid with command-line flags.
    fn resolve(&self) -> Result<ScenarioConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ScenarioConfig::load(path)?,
            None => ScenarioConfig::default(),
        };
        cfg.seed = self.seed.or(cfg.seed);
        cfg.out = self.out.clone().or(cfg.out);
        cfg.max_steps = self.max_steps.or(cfg.max_steps);
        cfg.tol = self.tol.or(cfg.tol);
        if let Some(tol) = cfg.tol {
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(CliError::Config(format!("tolerance must be finite and nonnegative, got {tol}")));
            }
        }
        match &self.command {
            Command::VerifyFinite { n } => set(&mut cfg.verify_finite.n, n),
            Command::Descend {
                solver,
                objective,
                family,
                start,
            } => {
                set(&mut cfg.descend.solver, solver);
                set(&mut cfg.descend.objective, objective);
                set(&mut cfg.descend.family, family);
                set(&mut cfg.descend.start, start);
            }
            Command::Gallery { scenario } => set(&mut cfg.gallery.scenario, scenario),
            Command::Audit { space } => set(&mut cfg.audit.space, space),
            Command::Remetrize {
                map,
                equivalence_instances,
            } => {
                set(&mut cfg.remetrize.map, map);
                set(&mut cfg.remetrize.equivalence_instances, equivalence_instances);
            }
        }
        Ok(cfg)
    }

    fn name(&self) -> &'static str {
        match self.command {
            Command::VerifyFinite { .. } => "verify-finite",
            Command::Descend { .. } => "descend",
            Command::Gallery { .. } => "gallery",
            Command::Audit { .. } => "audit",
            Command::Remetrize { .. } => "remetrize",
        }
    }
}

fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
    if let Some(v) = value {
        *slot = v.clone();
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = cli.resolve()?;
    let started = Instant::now();
    let (section, outcome) = match cli.command {
        Command::VerifyFinite { .. } => (json!(cfg.verify_finite), commands::verify_finite(&cfg)?),
        Command::Descend { .. } => (json!(cfg.descend), commands::descend(&cfg)?),
        Command::Gallery { .. } => (json!(cfg.gallery), commands::gallery(&cfg)?),
        Command::Audit { .. } => (json!(cfg.audit), commands::audit(&cfg)?),
        Command::Remetrize { .. } => (json!(cfg.remetrize), commands::remetrize(&cfg)?),
    };
    let echo = json!({
        "seed": cfg.seed,
        "max_steps": cfg.max_steps,
        "tol": cfg.tol,
        "parameters": section,
    });
    let consistent = outcome.consistent();
    let report = RunReport::new(cli.name(), echo, outcome, started.elapsed().as_secs_f64());
    let text = report.to_json();
    match &cfg.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(consistent)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("corbit: {err}");
            ExitCode::from(2)
        }
    }
}
