use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::{DescentConfig, DescentError, MinimizationCertificate, ObjectiveFunction, StrongMinimum};
use crate::premetric::{Point, Premetric};
use crate::value::{Extended, Value};

/// `y ∈ S(x)` iff `p(y, x) < f(x) - f(y)`; `+∞` values never qualify.
fn admissible<P, V: Value, D: Premetric<P, Value = V> + ?Sized>(p: &D, x: &P, fx: &V, y: &P, fy: &Extended<V>) -> bool {
    match fy {
        Extended::Finite(fy) => p.eval(y, x) < fx.clone() - fy.clone(),
        Extended::Infinity => false,
    }
}

/// Descent along `S(x) = {y : p(y, x) < f(x) - f(y)}`.
///
/// Each step samples the domain, keeps the admissible points and takes the
/// first whose value is within `ε_i` of their minimum. It stops when no
/// sampled point is admissible. The prefix bound `Σ p(x_{i+1}, x_i) ≤ f(x₁) -
/// f(x_n)` is checked in `V` at every step, so it is exact for rationals.
pub fn ekeland_descent<P, V, D>(
    f: &ObjectiveFunction<P, V>,
    p: &D,
    x1: P,
    cfg: &DescentConfig,
) -> Result<MinimizationCertificate<P, V>, DescentError>
where
    P: Point,
    V: Value,
    D: Premetric<P, Value = V> + ?Sized,
{
    let Extended::Finite(f1) = f.eval(&x1) else {
        return Err(DescentError::NotInDomain);
    };
    let mut orbit = vec![x1];
    let mut fx = f1.clone();
    let mut sigma = V::zero();
    let mut bound_held = true;
    let mut monotone = true;
    let mut ended = false;
    let mut last_sample = Vec::new();

    for step in 0..=cfg.max_steps {
        let x = orbit.last().unwrap().clone();
        let mut rng = StdRng::seed_from_u64(cfg.seed ^ (step as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let sample: Vec<(P, Extended<V>)> = f
            .sample(cfg.budget, &mut rng)
            .into_iter()
            .map(|y| {
                let fy = f.eval(&y);
                (y, fy)
            })
            .collect();
        let candidates: Vec<(P, V)> = sample
            .iter()
            .filter(|(y, fy)| admissible(p, &x, &fx, y, fy))
            .map(|(y, fy)| (y.clone(), fy.finite().unwrap().clone()))
            .collect();
        last_sample = sample;
        if candidates.is_empty() {
            ended = true;
            break;
        }
        if step == cfg.max_steps {
            break;
        }
        let best = candidates
            .iter()
            .map(|c| c.1.clone())
            .reduce(|a, b| if b < a { b } else { a })
            .unwrap();
        let slack = V::from_f64(cfg.eps0 * 0.5f64.powi(step.min(1000) as i32)).unwrap_or_else(V::zero);
        let (y, fy) = candidates
            .into_iter()
            .find(|c| c.1 <= best.clone() + slack.clone())
            .unwrap();
        if let Some(floor) = cfg.floor {
            if fy.as_f64() < floor {
                return Err(DescentError::UnboundedBelow {
                    step,
                    value: fy.as_f64(),
                    floor,
                });
            }
        }
        sigma = sigma + p.eval(&y, &x);
        monotone &= fy < fx;
        bound_held &= sigma <= f1.clone() - fy.clone();
        fx = fy;
        orbit.push(y);
    }

    let xbar = orbit.last().unwrap().clone();
    let residual = last_sample
        .iter()
        .filter_map(|(y, fy)| fy.finite().map(|fy| (fx.clone() - fy.clone() - p.eval(y, &xbar)).as_f64()))
        .fold(0.0, f64::max);
    let mut notes = Vec::new();
    if !ended {
        notes.push(format!("step budget {} exhausted before an empty value", cfg.max_steps));
    }
    Ok(MinimizationCertificate {
        solver: "ekeland_descent".into(),
        point: xbar,
        value: Extended::Finite(fx),
        steps: orbit.len() - 1,
        sigma_length: sigma,
        residual,
        strong_minimum: StrongMinimum::NotRun,
        fixed_point: None,
        orbit,
        ended,
        evaluations: f.evaluations(),
        length_bound_held: Some(bound_held),
        monotone,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaristiReport<P, V> {
    /// `f(Tx) + p(Tx, x) ≤ f(x)` on every sample.
    pub premise_holds: bool,
    pub witness: Option<P>,
    pub checked: usize,
    /// Samples with `p(Tx, x) ≤ tolerance`.
    pub fixed_samples: usize,
    pub descent: Option<MinimizationCertificate<P, V>>,
    /// `x̄` from the descent when `p(Tx̄, x̄) ≤ tolerance`.
    pub fixed_point: Option<P>,
}

/// Checks the Caristi premise on `samples`; when it holds, descends from
/// `x1` and tests whether the endpoint is fixed by `T`.
pub fn caristi_check<P, V, D>(
    t: impl Fn(&P) -> P,
    f: &ObjectiveFunction<P, V>,
    p: &D,
    x1: P,
    samples: &[P],
    cfg: &DescentConfig,
) -> Result<CaristiReport<P, V>, DescentError>
where
    P: Point,
    V: Value,
    D: Premetric<P, Value = V> + ?Sized,
{
    let mut fixed_samples = 0;
    for x in samples {
        let tx = t(x);
        let step = p.eval(&tx, x);
        if step.within(cfg.tolerance) {
            fixed_samples += 1;
        }
        let holds = match (f.eval(&tx), f.eval(x)) {
            (_, Extended::Infinity) => true,
            (Extended::Infinity, _) => false,
            (Extended::Finite(ftx), Extended::Finite(fx)) => ftx + step <= fx,
        };
        if !holds {
            return Ok(CaristiReport {
                premise_holds: false,
                witness: Some(x.clone()),
                checked: samples.len(),
                fixed_samples,
                descent: None,
                fixed_point: None,
            });
        }
    }
    let cert = ekeland_descent(f, p, x1, cfg)?;
    let xbar = &cert.point;
    let fixed_point = p.eval(&t(xbar), xbar).within(cfg.tolerance).then(|| xbar.clone());
    Ok(CaristiReport {
        premise_holds: true,
        witness: None,
        checked: samples.len(),
        fixed_samples,
        descent: Some(cert),
        fixed_point,
    })
}
