use std::fmt::Display;
use std::sync::Arc;

use corbit::gallery::{rationals_halving_scenario, two_origins_double_limit, two_origins_premetric, RadiusSchedule, TwoOriginPoint};
use corbit::premetric::{audit_axioms, AxiomReport, AxiomStatus, FnPremetric, Probe, Witness};
use corbit::value::{ratio, Rational, TrendConfig};
use num_traits::{One, Zero};
use serde_json::{json, Value as Json};

use crate::config::{AuditSpace, ScenarioConfig};
use crate::report::Outcome;
use crate::CliError;

fn status_json<P: Display>(status: &AxiomStatus<P>) -> Json {
    match status {
        AxiomStatus::Pass { checks, inconclusive } => {
            json!({"status": "pass", "checks": checks, "inconclusive": inconclusive})
        }
        AxiomStatus::Fail { witness } => {
            let witness = match witness {
                Witness::Pair { x, y, distance } => {
                    json!({"kind": "pair", "x": x.to_string(), "y": y.to_string(), "distance": distance})
                }
                Witness::Sequence { probe, limit, detail } => {
                    json!({"kind": "sequence", "probe": probe, "limit": limit.to_string(), "detail": detail})
                }
            };
            json!({"status": "fail", "witness": witness})
        }
        AxiomStatus::Inconclusive { reason } => json!({"status": "inconclusive", "reason": reason}),
    }
}

fn record<P: Display>(report: &AxiomReport<P>, out: &mut Outcome) {
    for (label, status) in report.statuses() {
        out.check(&format!("axiom_{label}"), !status.is_fail());
        out.verdict(
            &format!("axiom_{label}"),
            match status {
                AxiomStatus::Pass { .. } => "pass",
                AxiomStatus::Fail { .. } => "fail",
                AxiomStatus::Inconclusive { .. } => "inconclusive",
            },
        );
        out.detail(&format!("axiom_{label}"), status_json(status));
    }
}

fn harmonic(len: usize, offset: Rational) -> Vec<Rational> {
    (1..=len as i64).map(|n| &offset + ratio(1, n)).collect()
}

pub fn audit(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let seed = cfg.require_seed("audit")?;
    let a = &cfg.audit;
    if a.probe_length < 8 {
        return Err(CliError::Config("probe_length must be at least 8".into()));
    }
    let trend = TrendConfig::with_tolerance(cfg.tol.unwrap_or(1e-2));
    let mut out = Outcome::default();
    let rejected = |e: corbit::premetric::PremetricError| CliError::Config(e.to_string());
    match a.space {
        AuditSpace::Rationals | AuditSpace::Zero => {
            let (mut space, _) = rationals_halving_scenario();
            if a.space == AuditSpace::Zero {
                space.name = "zero".into();
                space.premetric = Arc::new(FnPremetric(|_: &Rational, _: &Rational| Rational::zero()));
            }
            let probes = vec![
                Probe::new("1/n to 0", harmonic(a.probe_length, Rational::zero()), Rational::zero()),
                Probe::new("1 + 1/n to 1", harmonic(a.probe_length, Rational::one()), Rational::one()),
            ];
            let report = audit_axioms(&space, &probes, a.pair_budget, seed, &trend).map_err(rejected)?;
            record(&report, &mut out);
        }
        AuditSpace::TwoOrigins => {
            let space = two_origins_premetric(RadiusSchedule::Harmonic);
            let seq: Vec<TwoOriginPoint> = (1..=a.probe_length as i64)
                .map(|n| TwoOriginPoint::real(ratio(1, n)).expect("nonzero"))
                .collect();
            let probes = vec![
                Probe::new("1/n to A", seq.clone(), TwoOriginPoint::OriginA),
                Probe::new("1/n to B", seq, TwoOriginPoint::OriginB),
                Probe::new(
                    "double limit to A",
                    two_origins_double_limit(RadiusSchedule::Harmonic, 48),
                    TwoOriginPoint::OriginA,
                ),
            ];
            let report = audit_axioms(&space, &probes, a.pair_budget, seed, &trend).map_err(rejected)?;
            record(&report, &mut out);
        }
    }
    Ok(out)
}
