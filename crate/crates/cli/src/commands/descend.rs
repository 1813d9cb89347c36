use std::collections::HashMap;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use corbit::descent::{
    cantor_intersect, ekeland_descent, strong_min_descent, CantorConfig, CantorOutcome, DescentConfig, DescentError,
    NestedFamily, ObjectiveFunction,
};
use corbit::premetric::{AbsDiff, PSpace};
use corbit::value::{dyadic, ratio, Extended, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use super::{head, ORBIT_HEAD};
use crate::config::{DescendConfig, FamilyKind, ObjectiveKind, ScenarioConfig, Solver};
use crate::report::Outcome;
use crate::CliError;

const MAX_GRID: i64 = 1 << 22;

fn grid(d: &DescendConfig) -> Result<Vec<Rational>, CliError> {
    if d.grid_lo > d.grid_hi || d.grid_exponent > 30 {
        return Err(CliError::Config("grid needs grid_lo <= grid_hi and grid_exponent <= 30".into()));
    }
    let s = 1i64 << d.grid_exponent;
    let (lo, hi) = (d.grid_lo.saturating_mul(s), d.grid_hi.saturating_mul(s));
    if hi - lo >= MAX_GRID {
        return Err(CliError::Config(format!("grid has more than {MAX_GRID} points")));
    }
    Ok((lo..=hi).map(|j| ratio(j, s)).collect())
}

fn objective(d: &DescendConfig) -> Result<ObjectiveFunction<Rational, Rational>, CliError> {
    let mut domain = grid(d)?;
    let built = match d.objective {
        ObjectiveKind::Square => ObjectiveFunction::new("x^2", |x: &Rational| Extended::Finite(x * x), domain),
        ObjectiveKind::Abs => ObjectiveFunction::new("|x|", |x: &Rational| Extended::Finite(x.abs()), domain),
        ObjectiveKind::Escape => {
            // far-out points where 1/x² drops below every value near 0
            domain.extend((5..=512).flat_map(|k| [ratio(k, 1), ratio(-k, 1)]));
            ObjectiveFunction::new(
                "escape",
                |x: &Rational| {
                    let sq = x * x;
                    Extended::Finite(if x.abs() <= Rational::one() { sq } else { sq.recip() })
                },
                domain,
            )
        }
        ObjectiveKind::Infinite => ObjectiveFunction::new("+inf", |_: &Rational| Extended::Infinity, domain),
    };
    built.map_err(config_error)
}

fn config_error(e: DescentError) -> CliError {
    CliError::Config(e.to_string())
}

fn interval_family(kind: FamilyKind) -> NestedFamily<Rational> {
    let bounds: Arc<dyn Fn(usize) -> (Rational, Rational) + Send + Sync> = match kind {
        FamilyKind::Shrinking => Arc::new(|i| (Rational::zero(), ratio(1, i as i64))),
        FamilyKind::Sqrt2 => {
            let cache = Mutex::new(HashMap::new());
            Arc::new(move |i| {
                cache
                    .lock()
                    .expect("cache lock")
                    .entry(i)
                    .or_insert_with(|| {
                        let root = (BigInt::from(2) << (2 * i)).sqrt();
                        let lo = Rational::new(root, BigInt::one() << i);
                        let hi = &lo + dyadic(i as u32);
                        (lo, hi)
                    })
                    .clone()
            })
        }
    };
    let name = match kind {
        FamilyKind::Shrinking => "[0, 1/i]",
        FamilyKind::Sqrt2 => "sqrt2",
    };
    let b2 = bounds.clone();
    NestedFamily::new(
        name,
        move |i, x: &Rational| {
            let (lo, hi) = bounds(i);
            lo <= *x && *x <= hi
        },
        move |i, budget, _| {
            let (lo, hi) = b2(i);
            let k = budget.max(2) as i64 - 1;
            (0..=k).map(|j| &lo + (&hi - &lo) * ratio(j, k)).collect()
        },
    )
}

fn line(domain: &[Rational]) -> PSpace<Rational, Rational> {
    let domain: Vec<Rational> = domain.to_vec();
    PSpace::metric_line(
        "grid",
        Arc::new(move |k, _| {
            let stride = (domain.len() / k.max(1)).max(1);
            domain.iter().step_by(stride).take(k).cloned().collect()
        }),
        vec![Rational::zero()],
    )
}

pub fn descend(cfg: &ScenarioConfig) -> Result<Outcome, CliError> {
    let d = &cfg.descend;
    let seed = cfg.require_seed("descend")?;
    let mut out = Outcome::default();
    if d.solver == Solver::Cantor {
        let ccfg = CantorConfig {
            depth_cap: d.depth_cap,
            max_steps: cfg.max_steps.unwrap_or(48),
            ..CantorConfig::new(seed)
        };
        let pool: Vec<Rational> = match d.family {
            FamilyKind::Shrinking => vec![],
            // rational approximations of the target, none of which is a limit
            FamilyKind::Sqrt2 => vec![ratio(99, 70), ratio(141421, 100000)],
        };
        let family = interval_family(d.family);
        let space = line(&[]);
        let report = cantor_intersect(&family, &space, &pool, &ccfg);
        out.check("nested", report.nested_violations == 0);
        let outcome = match &report.outcome {
            CantorOutcome::Limit { point, checked_depth } => {
                out.verdict("limit", point);
                json!({"status": "limit", "point": point.to_string(), "checked_depth": checked_depth})
            }
            CantorOutcome::NoAccumulation { reason } => json!({"status": "no_accumulation", "reason": reason}),
            CantorOutcome::Inconclusive { reason } => json!({"status": "inconclusive", "reason": reason}),
        };
        out.verdict("outcome", outcome["status"].as_str().unwrap_or_default());
        out.verdict("cauchy", json!(report.cauchy).as_str().unwrap_or_default());
        out.detail("outcome", outcome);
        out.detail("orbit", head(&report.orbit, ORBIT_HEAD));
        out.detail("depths", &report.depths);
        return Ok(out);
    }

    let f = objective(d)?;
    let start = Rational::from_str(&d.start).map_err(|e| CliError::Config(format!("start `{}`: {e}", d.start)))?;
    let dcfg = DescentConfig {
        eps0: d.eps0,
        budget: d.budget,
        max_steps: cfg.max_steps.unwrap_or(256),
        tolerance: cfg.tol.unwrap_or(1e-6),
        ..DescentConfig::new(seed)
    };
    let cert = match d.solver {
        Solver::Ekeland => ekeland_descent(&f, &AbsDiff, start, &dcfg),
        Solver::StrongMin => strong_min_descent(&f, &line(f.domain()), start, &dcfg),
        Solver::Cantor => unreachable!("handled above"),
    };
    let cert = match cert {
        Ok(cert) => cert,
        Err(e @ DescentError::UnboundedBelow { .. }) => {
            out.check("bounded_below", false);
            out.verdict("error", e);
            return Ok(out);
        }
        Err(e) => return Err(config_error(e)),
    };
    out.check("invariants_held", cert.invariants_held());
    out.verdict("point", &cert.point);
    out.verdict("value", cert.record().value);
    out.verdict("sigma_length", &cert.sigma_length);
    out.verdict("strong_minimum", json!(cert.strong_minimum).as_str().unwrap_or_default());
    out.detail("certificate", cert.record());
    Ok(out)
}
