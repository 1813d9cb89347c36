//! Labelled enumeration of finite topologies through their specialization
//! preorders: a topology on a finite set is the family of down-sets of a
//! unique preorder, so walking all transitive reflexive relations lists every
//! topology exactly once.

use super::space::{FiniteSpace, PointSet};
use super::FiniteError;

/// Default enumeration cap (355 topologies at `n = 4`).
pub const DEFAULT_MAX_POINTS: usize = 4;
/// Hard cap, reachable only with [`EnumerationCap::AllowFive`].
pub const EXTENDED_MAX_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnumerationCap {
    #[default]
    Default,
    /// Permits `n = 5` (6942 topologies); callers should warn about cost.
    AllowFive,
}

/// Every topology on `{0, .., n-1}`, `1 ≤ n ≤ 4`.
pub fn enumerate_topologies(n: usize) -> Result<Vec<FiniteSpace>, FiniteError> {
    enumerate_topologies_with(n, EnumerationCap::Default)
}

pub fn enumerate_topologies_with(n: usize, cap: EnumerationCap) -> Result<Vec<FiniteSpace>, FiniteError> {
    let max = match cap {
        EnumerationCap::Default => DEFAULT_MAX_POINTS,
        EnumerationCap::AllowFive => EXTENDED_MAX_POINTS,
    };
    if n == 0 || n > max {
        return Err(FiniteError::EnumerationRange { n, max });
    }
    let off_diagonal: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut spaces = Vec::new();
    for bits in 0u64..1 << off_diagonal.len() {
        // below[y] = points x with x ≤ y
        let mut below: Vec<PointSet> = (0..n).map(|y| 1 << y).collect();
        for (k, &(x, y)) in off_diagonal.iter().enumerate() {
            if bits >> k & 1 == 1 {
                below[y] |= 1 << x;
            }
        }
        let transitive = (0..n).all(|y| {
            (0..n)
                .filter(|&x| below[y] >> x & 1 == 1)
                .all(|x| below[x] & !below[y] == 0)
        });
        if !transitive {
            continue;
        }
        let opens = (0..1u32 << n).filter(|&u| {
            (0..n)
                .filter(|&y| u >> y & 1 == 1)
                .all(|y| below[y] & !u == 0)
        });
        // FiniteSpace::new re-checks the closure axioms on every result
        spaces.push(FiniteSpace::new(n, opens)?);
    }
    Ok(spaces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(enumerate_topologies(0), Err(FiniteError::EnumerationRange { .. })));
        assert!(matches!(enumerate_topologies(5), Err(FiniteError::EnumerationRange { .. })));
        assert!(matches!(enumerate_topologies(9), Err(FiniteError::EnumerationRange { .. })));
    }

    #[test]
    fn counts_up_to_three() {
        let counts: Vec<usize> = (1..=3).map(|n| enumerate_topologies(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 4, 29]);
    }

    #[test]
    fn five_points_behind_flag() {
        let spaces = enumerate_topologies_with(5, EnumerationCap::AllowFive).unwrap();
        assert_eq!(spaces.len(), 6942);
    }
}
