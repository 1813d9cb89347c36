use serde::{Deserialize, Serialize};

use super::GalleryError;
use crate::orbit_engine::ClosureMap;
use crate::premetric::{NeighborhoodBase, Point};

/// Deepest level probed for separating base sets.
pub const SEPARATION_DEPTH: usize = 64;
const LEVEL_CAP: usize = usize::MAX;

/// Builds `x_1, x_2, …` converging to both `a` and `b`.
///
/// With `W_n` the base at `b`, `x_i ∈ L_{k_i}(a) ∩ W_{k_i}(b)` where `k_i` is
/// the first level whose intersection no longer holds `x_{i-1}`; hence
/// `x_i ≠ x_{i-1}` and the levels strictly grow. `candidates(n)` proposes
/// points for level `n`; the `i`-th step takes the `i`-th admissible one
/// cyclically, so symmetric proposals alternate sides.
pub fn construct_double_limit_sequence<P, B, C>(
    base: &B,
    a: &P,
    b: &P,
    candidates: C,
    length: usize,
) -> Result<Vec<P>, GalleryError>
where
    P: Point,
    B: NeighborhoodBase<P> + ?Sized,
    C: Fn(usize) -> Vec<P>,
{
    if a == b {
        return Err(GalleryError::SamePoint);
    }
    if let Some(level) = (1..=SEPARATION_DEPTH).find(|&n| base.certified_disjoint(a, b, n) == Some(true)) {
        return Err(GalleryError::HausdorffPair { level });
    }
    let mut seq: Vec<P> = Vec::with_capacity(length);
    for i in 0..length {
        let level = match seq.last() {
            None => 1,
            Some(prev) => base.depth(a, prev, LEVEL_CAP).min(base.depth(b, prev, LEVEL_CAP)).saturating_add(1),
        };
        let admissible: Vec<P> = candidates(level)
            .into_iter()
            .filter(|x| x != a && x != b && Some(x) != seq.last())
            .filter(|x| base.contains(a, level, x) && base.contains(b, level, x))
            .collect();
        if admissible.is_empty() {
            return Err(GalleryError::NoCandidate { level });
        }
        seq.push(admissible[i % admissible.len()].clone());
    }
    Ok(seq)
}

/// Which counterexample map to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleVariant {
    /// `S(x_i) = {x_{i+1}}` (the cover-contractive setting).
    Successor,
    /// `S(x_i) = {x_{i+1}, a, b}` (the premetric setting, giving (⋆̄₁)).
    SuccessorWithLimits,
}

/// `S(a) = {b}`, `S(b) = {a}`, `S(x_i)` per the variant and `S(x) = M` elsewhere.
///
/// `M` is a finite prefix, so its last point falls under the "elsewhere" rule.
pub fn hausdorff_counterexample_map<P: Point>(
    sequence: Vec<P>,
    a: P,
    b: P,
    variant: CounterexampleVariant,
) -> ClosureMap<P> {
    ClosureMap::finite(move |x: &P| {
        if *x == a {
            return vec![b.clone()];
        }
        if *x == b {
            return vec![a.clone()];
        }
        match sequence.iter().position(|s| s == x) {
            Some(i) if i + 1 < sequence.len() => {
                let mut image = vec![sequence[i + 1].clone()];
                if variant == CounterexampleVariant::SuccessorWithLimits {
                    image.extend([a.clone(), b.clone()]);
                }
                image
            }
            _ => sequence.clone(),
        }
    })
}
