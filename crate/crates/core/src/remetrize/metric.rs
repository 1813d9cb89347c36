use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::RemetrizeError;
use crate::premetric::Point;
use crate::value::{tends_to_zero, TrendConfig, Verdict};

/// Points checked for symmetry and the triangle inequality.
const METRIC_SPOT_CHECK: usize = 16;
/// The uniform-cover diameter is taken over at most this many `O` points.
const DIAMETER_SAMPLE: usize = 128;

type Map<P> = Arc<dyn Fn(&P) -> P + Send + Sync>;
type Metric<P> = Arc<dyn Fn(&P, &P) -> f64 + Send + Sync>;

/// A self-map `f` of a metric carrier with a domain sample and a sample of
/// the neighbourhood `O`.
#[derive(Clone)]
pub struct IterationSystem<P> {
    pub name: String,
    f: Map<P>,
    d: Metric<P>,
    pub domain: Vec<P>,
    pub neighborhood: Vec<P>,
}

impl<P> fmt::Debug for IterationSystem<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IterationSystem")
            .field("name", &self.name)
            .field("domain", &self.domain.len())
            .field("neighborhood", &self.neighborhood.len())
            .finish_non_exhaustive()
    }
}

impl<P: Point> IterationSystem<P> {
    /// Spot-checks that `d` is a metric on the first domain points.
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&P) -> P + Send + Sync + 'static,
        d: impl Fn(&P, &P) -> f64 + Send + Sync + 'static,
        domain: Vec<P>,
        neighborhood: Vec<P>,
    ) -> Result<Self, RemetrizeError> {
        if domain.is_empty() || neighborhood.is_empty() {
            return Err(RemetrizeError::EmptySample);
        }
        let probe: Vec<&P> = domain.iter().chain(&neighborhood).take(METRIC_SPOT_CHECK).collect();
        for (i, x) in probe.iter().enumerate() {
            for (j, y) in probe.iter().enumerate() {
                let dxy = d(x, y);
                if (dxy - d(y, x)).abs() > 1e-12 * (1.0 + dxy) {
                    return Err(RemetrizeError::NotAMetric(format!("asymmetric at samples {i}, {j}")));
                }
                if probe.iter().any(|z| dxy > d(x, z) + d(z, y) + 1e-12 * (1.0 + dxy)) {
                    return Err(RemetrizeError::NotAMetric(format!("triangle fails at samples {i}, {j}")));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            f: Arc::new(f),
            d: Arc::new(d),
            domain,
            neighborhood,
        })
    }

    pub fn apply(&self, x: &P) -> P {
        (self.f)(x)
    }

    pub fn dist(&self, x: &P, y: &P) -> f64 {
        (self.d)(x, y)
    }

    /// `x, f(x), …, f^horizon(x)`.
    pub fn iterates(&self, x: &P, horizon: usize) -> Vec<P> {
        let mut out = Vec::with_capacity(horizon + 1);
        out.push(x.clone());
        for _ in 0..horizon {
            let next = self.apply(out.last().unwrap());
            out.push(next);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum HypothesisStatus<P> {
    Pass,
    Fail { witness: P, detail: String },
    Inconclusive { reason: String },
}

impl<P> HypothesisStatus<P> {
    pub fn is_pass(&self) -> bool {
        matches!(self, HypothesisStatus::Pass)
    }
}

/// Approximate t-contraction: `d(f^i a, f^i b)` at the horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TContraction {
    pub verdict: Verdict,
    /// Largest final distance over the tested pairs.
    pub max_final: f64,
    pub pairs: usize,
}

/// Passes iff every pair's iterates are within `tolerance` at the horizon.
pub fn t_contractive_approx<P: Point>(
    system: &IterationSystem<P>,
    pairs: &[(P, P)],
    horizon: usize,
    tolerance: f64,
) -> TContraction {
    let max_final = pairs
        .par_iter()
        .map(|(a, b)| {
            let (fa, fb) = (system.iterates(a, horizon), system.iterates(b, horizon));
            system.dist(&fa[horizon], &fb[horizon])
        })
        .reduce(|| 0.0, f64::max);
    TContraction {
        verdict: if max_final <= tolerance {
            Verdict::Supported
        } else {
            Verdict::Refuted
        },
        max_final,
        pairs: pairs.len(),
    }
}

/// Diameter of `f^i(O)` for `i = 0..=horizon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformCover {
    pub verdict: Verdict,
    pub diameters: Vec<f64>,
}

/// Ball-cover surrogate for the uniform cover condition: `diam f^i(O) → 0`.
pub fn uniform_cover_condition_check<P: Point>(
    system: &IterationSystem<P>,
    horizon: usize,
    tolerance: f64,
) -> UniformCover {
    let stride = system.neighborhood.len().div_ceil(DIAMETER_SAMPLE);
    let sample: Vec<Vec<P>> = system
        .neighborhood
        .iter()
        .step_by(stride)
        .map(|x| system.iterates(x, horizon))
        .collect();
    let diameters: Vec<f64> = (0..=horizon)
        .into_par_iter()
        .map(|i| {
            let mut diam = 0.0f64;
            for (j, a) in sample.iter().enumerate() {
                for b in &sample[j + 1..] {
                    diam = diam.max(system.dist(&a[i], &b[i]));
                }
            }
            diam
        })
        .collect();
    UniformCover {
        verdict: tends_to_zero(&diameters, &TrendConfig::with_tolerance(tolerance)),
        diameters,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct A1A2Config {
    pub horizon: usize,
    pub epsilons: Vec<f64>,
    /// Iterates farther than this from `x̄` count as divergent.
    pub divergence_bound: f64,
    /// Neighbours within this radius feed the continuity spot check.
    pub continuity_radius: f64,
    pub continuity_tolerance: f64,
    /// Domain points (besides `x̄`) where continuity is spot-checked.
    pub continuity_points: usize,
    /// Tolerance for the t-contraction and uniform-cover surrogates.
    pub tolerance: f64,
}

impl Default for A1A2Config {
    fn default() -> Self {
        Self {
            horizon: 64,
            epsilons: (1..=20).map(|k| 0.5f64.powi(k)).collect(),
            divergence_bound: 1e12,
            continuity_radius: 0.05,
            continuity_tolerance: 0.02,
            continuity_points: 8,
            tolerance: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemetrizationReport<P> {
    pub xbar: P,
    pub a1: HypothesisStatus<P>,
    pub a2: HypothesisStatus<P>,
    /// `(ε, n)`: from step `n` on, every `O` sample stays in `B̄(x̄, ε)`.
    pub a2_entry: Vec<(f64, usize)>,
    /// `sup_{x ∈ O} d(f^i x, x̄)`.
    pub sup_iterates: Vec<f64>,
    pub continuity: HypothesisStatus<P>,
    pub t_contraction: TContraction,
    pub uniform_cover: UniformCover,
    /// Continuity, A1 and A2 all pass: the hypotheses of the remetrization
    /// theorem hold on the samples. No new metric is constructed.
    pub conclusion: bool,
}

/// First `n ≤ horizon` with `dists[i] ≤ eps` for every `i ≥ n`.
fn entry_index(dists: &[f64], eps: f64) -> Option<usize> {
    let last_out = dists.iter().rposition(|&v| v > eps);
    match last_out {
        None => Some(0),
        Some(i) if i + 1 < dists.len() => Some(i + 1),
        Some(_) => None,
    }
}

fn continuity_at<P: Point>(system: &IterationSystem<P>, q: &P, cfg: &A1A2Config) -> Verdict {
    let fq = system.apply(q);
    let mut near: Vec<(f64, &P)> = system
        .domain
        .iter()
        .map(|x| (system.dist(x, q), x))
        .filter(|(r, _)| *r > 0.0 && *r <= cfg.continuity_radius)
        .collect();
    near.sort_by(|a, b| b.0.total_cmp(&a.0));
    let series: Vec<f64> = near.iter().map(|(_, x)| system.dist(&system.apply(x), &fq)).collect();
    tends_to_zero(&series, &TrendConfig::with_tolerance(cfg.continuity_tolerance))
}

/// Checks (A1) on the domain sample, (A2) on the `O` sample, continuity at
/// `x̄` and a few domain points, and the two surrogates. Without a candidate,
/// `x̄` is the horizon iterate of the first domain point.
pub fn a1_a2_check<P: Point>(
    system: &IterationSystem<P>,
    xbar: Option<P>,
    cfg: &A1A2Config,
) -> RemetrizationReport<P> {
    let h = cfg.horizon;
    let xbar = xbar.unwrap_or_else(|| system.iterates(&system.domain[0], h).pop().unwrap());
    let distances = |x: &P| -> Vec<f64> { system.iterates(x, h).iter().map(|y| system.dist(y, &xbar)).collect() };

    let a1 = system
        .domain
        .par_iter()
        .find_map_first(|x| {
            let d = distances(x);
            if d.iter().any(|&v| v.is_nan() || v > cfg.divergence_bound) {
                return Some(HypothesisStatus::Fail {
                    witness: x.clone(),
                    detail: format!("iterates leave the ball of radius {:e}", cfg.divergence_bound),
                });
            }
            cfg.epsilons
                .iter()
                .find(|&&eps| entry_index(&d, eps).is_none())
                .map(|eps| HypothesisStatus::Fail {
                    witness: x.clone(),
                    detail: format!("iterates not inside B(x̄, {eps:e}) by step {h}"),
                })
        })
        .unwrap_or(HypothesisStatus::Pass);

    let o_dists: Vec<Vec<f64>> = system.neighborhood.par_iter().map(&distances).collect();
    let sup_iterates: Vec<f64> = (0..=h)
        .map(|i| o_dists.iter().map(|d| d[i]).fold(0.0, f64::max))
        .collect();
    let mut a2_entry = Vec::new();
    let mut a2 = HypothesisStatus::Pass;
    for &eps in &cfg.epsilons {
        match entry_index(&sup_iterates, eps) {
            Some(n) => a2_entry.push((eps, n)),
            None => {
                let worst = (0..o_dists.len())
                    .max_by(|&i, &j| o_dists[i][h].total_cmp(&o_dists[j][h]))
                    .unwrap();
                a2 = HypothesisStatus::Fail {
                    witness: system.neighborhood[worst].clone(),
                    detail: format!("no uniform n for ε = {eps:e} by step {h}"),
                };
                break;
            }
        }
    }

    let points: Vec<&P> = std::iter::once(&xbar)
        .chain(system.domain.iter().take(cfg.continuity_points))
        .collect();
    let verdicts: Vec<Verdict> = points.par_iter().map(|q| continuity_at(system, q, cfg)).collect();
    let continuity = match verdicts.iter().position(|v| *v == Verdict::Refuted) {
        Some(i) => HypothesisStatus::Fail {
            witness: points[i].clone(),
            detail: "images of nearby samples stay away from f(q)".into(),
        },
        None if verdicts.iter().all(|v| *v == Verdict::Supported) => HypothesisStatus::Pass,
        None => HypothesisStatus::Inconclusive {
            reason: "too few neighbours within the continuity radius".into(),
        },
    };

    let pairs: Vec<(P, P)> = system
        .domain
        .windows(2)
        .map(|w| (w[0].clone(), w[1].clone()))
        .chain(std::iter::once((system.domain[0].clone(), system.domain.last().unwrap().clone())))
        .collect();
    let t_contraction = t_contractive_approx(system, &pairs, h, cfg.tolerance);
    let uniform_cover = uniform_cover_condition_check(system, h, cfg.tolerance);
    let conclusion = continuity.is_pass() && a1.is_pass() && a2.is_pass();

    RemetrizationReport {
        xbar,
        a1,
        a2,
        a2_entry,
        sup_iterates,
        continuity,
        t_contraction,
        uniform_cover,
        conclusion,
    }
}
