use std::fmt::Debug;

use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::{PSpace, PremetricError};
use crate::value::{tends_to_zero, TrendConfig, Value, Verdict, DEFAULT_TOLERANCE};

/// A convergent-sequence fixture: `sequence → limit` per the space's oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe<P> {
    pub name: String,
    pub sequence: Vec<P>,
    pub limit: P,
}

impl<P> Probe<P> {
    pub fn new(name: impl Into<String>, sequence: Vec<P>, limit: P) -> Self {
        Self {
            name: name.into(),
            sequence,
            limit,
        }
    }
}

/// Concrete counterexample carried by a failed axiom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Witness<P> {
    /// Pair `(x, y)` breaking `p(x, y) = 0 ⟺ x = y` or `p ≥ 0`.
    Pair { x: P, y: P, distance: f64 },
    /// A probe sequence with the limit the axiom was checked against.
    Sequence { probe: String, limit: P, detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AxiomStatus<P> {
    Pass { checks: usize, inconclusive: usize },
    Fail { witness: Witness<P> },
    Inconclusive { reason: String },
}

impl<P> AxiomStatus<P> {
    pub fn is_pass(&self) -> bool {
        matches!(self, AxiomStatus::Pass { .. })
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, AxiomStatus::Fail { .. })
    }
}

/// Axioms (i)–(iii) and the derived two-sided forms (ii'), (iii').
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport<P> {
    pub identity: AxiomStatus<P>,
    pub distance_to_convergence: AxiomStatus<P>,
    pub convergence_to_step: AxiomStatus<P>,
    pub convergence_to_distance: AxiomStatus<P>,
    pub convergence_to_reverse_step: AxiomStatus<P>,
}

impl<P> AxiomReport<P> {
    pub fn all_pass(&self) -> bool {
        self.statuses().iter().all(|(_, s)| s.is_pass())
    }

    pub fn any_fail(&self) -> bool {
        self.statuses().iter().any(|(_, s)| s.is_fail())
    }

    /// `(label, status)` in the order (i), (ii), (iii), (ii'), (iii').
    pub fn statuses(&self) -> [(&'static str, &AxiomStatus<P>); 5] {
        [
            ("i", &self.identity),
            ("ii", &self.distance_to_convergence),
            ("iii", &self.convergence_to_step),
            ("ii_prime", &self.convergence_to_distance),
            ("iii_prime", &self.convergence_to_reverse_step),
        ]
    }
}

struct Tally<P> {
    checks: usize,
    inconclusive: usize,
    failure: Option<Witness<P>>,
}

impl<P> Tally<P> {
    fn new() -> Self {
        Self {
            checks: 0,
            inconclusive: 0,
            failure: None,
        }
    }

    fn record(&mut self, verdict: Verdict, witness: impl FnOnce() -> Witness<P>) {
        match verdict {
            Verdict::Supported => self.checks += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Refuted => {
                if self.failure.is_none() {
                    self.failure = Some(witness());
                }
            }
        }
    }

    fn finish(self, empty_reason: &str) -> AxiomStatus<P> {
        match self.failure {
            Some(witness) => AxiomStatus::Fail { witness },
            None if self.checks > 0 => AxiomStatus::Pass {
                checks: self.checks,
                inconclusive: self.inconclusive,
            },
            None => AxiomStatus::Inconclusive {
                reason: if self.inconclusive > 0 {
                    format!("{} checks inconclusive", self.inconclusive)
                } else {
                    empty_reason.to_string()
                },
            },
        }
    }
}

/// Audits the p-space axioms.
///
/// Axiom (i) and nonnegativity are checked on `pair_budget` sampled pairs
/// plus the diagonal of each sample. The sequence axioms are checked on the
/// probes; for (ii) every probe is also tested against the other probes'
/// limits and the carrier's limit pool, so that a sequence `p`-close to a
/// second point must converge to it as well.
pub fn audit_axioms<P, V>(
    space: &PSpace<P, V>,
    probes: &[Probe<P>],
    pair_budget: usize,
    seed: u64,
    trend: &TrendConfig,
) -> Result<AxiomReport<P>, PremetricError>
where
    P: Clone + PartialEq + Debug,
    V: Value,
{
    for probe in probes {
        if !space.converges(&probe.sequence, &probe.limit) {
            return Err(PremetricError::RejectedFixture(probe.name.clone()));
        }
    }

    let mut rng = StdRng::seed_from_u64(seed);
    let points = (space.sampler)(2 * pair_budget, &mut rng);
    let mut identity = Tally::new();
    let mut pairs: Vec<(&P, &P)> = points.chunks_exact(2).map(|c| (&c[0], &c[1])).collect();
    pairs.extend(points.iter().take(pair_budget).map(|x| (x, x)));
    for (x, y) in pairs {
        let d = space.p(x, y);
        let ok = if d.is_negative() {
            false
        } else if x == y {
            d.is_zero()
        } else if V::EXACT {
            !d.is_zero()
        } else {
            d.as_f64() > DEFAULT_TOLERANCE
        };
        identity.record(if ok { Verdict::Supported } else { Verdict::Refuted }, || Witness::Pair {
            x: x.clone(),
            y: y.clone(),
            distance: d.as_f64(),
        });
    }

    let mut limits: Vec<P> = probes.iter().map(|p| p.limit.clone()).collect();
    for z in &space.limit_pool {
        if !limits.contains(z) {
            limits.push(z.clone());
        }
    }

    let mut ii = Tally::new();
    let mut iii = Tally::new();
    let mut ii_prime = Tally::new();
    let mut iii_prime = Tally::new();
    let series = |f: &dyn Fn(usize) -> V, len: usize| -> Vec<f64> { (0..len).map(|i| f(i).as_f64()).collect() };
    for probe in probes {
        let seq = &probe.sequence;
        let sequence_witness = |limit: &P, detail: &str| Witness::Sequence {
            probe: probe.name.clone(),
            limit: limit.clone(),
            detail: detail.to_string(),
        };
        for z in &limits {
            let to_z = series(&|i| space.p(z, &seq[i]), seq.len());
            let close = tends_to_zero(&to_z, trend) == Verdict::Supported;
            let converges = space.converges(seq, z);
            if close {
                let v = if converges { Verdict::Supported } else { Verdict::Refuted };
                ii.record(v, || sequence_witness(z, "p(x, x_n) -> 0 but x_n does not converge to x"));
            }
            if converges {
                ii_prime.record(tends_to_zero(&to_z, trend), || {
                    sequence_witness(z, "x_n -> x but p(x, x_n) does not tend to 0")
                });
            }
        }
        let steps = seq.len().saturating_sub(1);
        let forward = series(&|i| space.p(&seq[i + 1], &seq[i]), steps);
        let backward = series(&|i| space.p(&seq[i], &seq[i + 1]), steps);
        iii.record(tends_to_zero(&forward, trend), || {
            sequence_witness(&probe.limit, "x_n -> x but p(x_{n+1}, x_n) does not tend to 0")
        });
        iii_prime.record(tends_to_zero(&backward, trend), || {
            sequence_witness(&probe.limit, "x_n -> x but p(x_n, x_{n+1}) does not tend to 0")
        });
    }

    let no_probes = "no probe sequences";
    Ok(AxiomReport {
        identity: identity.finish("no sampled pairs"),
        distance_to_convergence: ii.finish("no probe is p-close to any candidate limit"),
        convergence_to_step: iii.finish(no_probes),
        convergence_to_distance: ii_prime.finish(no_probes),
        convergence_to_reverse_step: iii_prime.finish(no_probes),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use num_traits::{Signed, Zero};

    use super::*;
    use crate::premetric::{AbsDiff, BallBase, ConvergenceOracle, FnPremetric};
    use crate::value::{dyadic, ratio, Rational};

    fn rational_line(p: Arc<dyn crate::premetric::Premetric<Rational, Value = Rational>>) -> PSpace<Rational, Rational> {
        PSpace {
            name: "rational grid".into(),
            premetric: p,
            base: Arc::new(BallBase {
                dist: |a: &Rational, b: &Rational| (a - b).abs().as_f64(),
                radius: |n: usize| 1.0 / n as f64,
            }),
            oracle: ConvergenceOracle::default(),
            sampler: Arc::new(|k, _rng| (0..k as i64).map(|j| ratio(j - (k as i64) / 2, 64)).collect()),
            limit_pool: vec![],
        }
    }

    fn probes() -> Vec<Probe<Rational>> {
        vec![
            Probe::new("halving", (0..48).map(dyadic).collect(), Rational::zero()),
            Probe::new("1 + 1/n", (1..200).map(|n| ratio(n + 1, n)).collect(), ratio(1, 1)),
            Probe::new("constant", vec![ratio(3, 7); 16], ratio(3, 7)),
        ]
    }

    #[test]
    fn metric_passes_every_axiom() {
        let space = rational_line(Arc::new(AbsDiff));
        let report = audit_axioms(&space, &probes(), 64, 7, &TrendConfig::with_tolerance(1e-2)).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn zero_premetric_fails_identity_with_pair() {
        let space = PSpace {
            sampler: Arc::new(|k, _rng: &mut StdRng| (0..k).map(|j| ratio((j % 2) as i64, 1)).collect()),
            ..rational_line(Arc::new(FnPremetric(|_: &Rational, _: &Rational| Rational::zero())))
        };
        let report = audit_axioms(&space, &[], 4, 0, &TrendConfig::default()).unwrap();
        match &report.identity {
            AxiomStatus::Fail {
                witness: Witness::Pair { x, y, distance },
            } => {
                assert_ne!(x, y);
                assert_eq!(*distance, 0.0);
            }
            other => panic!("expected identity failure, got {other:?}"),
        }
        // never claims a pass without probes
        assert!(matches!(report.convergence_to_step, AxiomStatus::Inconclusive { .. }));
    }

    #[test]
    fn rejects_fixture_with_wrong_limit() {
        let space = rational_line(Arc::new(AbsDiff));
        let bad = Probe::new("wrong", (0..48).map(dyadic).collect(), ratio(1, 1));
        assert_eq!(
            audit_axioms(&space, &[bad], 4, 0, &TrendConfig::default()),
            Err(PremetricError::RejectedFixture("wrong".into()))
        );
    }
}
