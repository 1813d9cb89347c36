use serde::{Deserialize, Serialize};

use super::FiniteError;

/// A subset of `{0, .., n-1}` as a bitmask.
pub type PointSet = u32;

/// Largest supported point count for explicit spaces.
pub const MAX_POINTS: usize = 16;

pub fn singleton(x: usize) -> PointSet {
    1 << x
}

pub fn contains(set: PointSet, x: usize) -> bool {
    set & (1 << x) != 0
}

pub fn is_subset(a: PointSet, b: PointSet) -> bool {
    a & !b == 0
}

pub fn members(set: PointSet) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&x| contains(set, x))
}

pub fn from_points<I: IntoIterator<Item = usize>>(points: I) -> PointSet {
    points.into_iter().fold(0, |acc, x| acc | singleton(x))
}

/// An explicit finite topological space.
///
/// The open family is kept sorted and deduplicated; construction checks that
/// it contains `∅` and `X` and is closed under pairwise union and
/// intersection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSpace {
    n: usize,
    opens: Vec<PointSet>,
}

/// The minimal open neighbourhood `m(x)` of every point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalBase {
    pub m: Vec<PointSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationClass {
    pub t0: bool,
    pub t1: bool,
    pub hausdorff: bool,
}

impl FiniteSpace {
    pub fn new<I: IntoIterator<Item = PointSet>>(n: usize, opens: I) -> Result<Self, FiniteError> {
        if n == 0 || n > MAX_POINTS {
            return Err(FiniteError::PointCount(n));
        }
        let full = full_set(n);
        let mut opens: Vec<PointSet> = opens.into_iter().collect();
        if let Some(&bad) = opens.iter().find(|&&u| !is_subset(u, full)) {
            return Err(FiniteError::OpenOutOfRange(bad));
        }
        opens.sort_unstable();
        opens.dedup();
        if opens.first() != Some(&0) {
            return Err(FiniteError::MissingEmptySet);
        }
        if opens.last() != Some(&full) {
            return Err(FiniteError::MissingFullSet);
        }
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if opens.binary_search(&(a | b)).is_err() {
                    return Err(FiniteError::NotClosedUnderUnion(a, b));
                }
                if opens.binary_search(&(a & b)).is_err() {
                    return Err(FiniteError::NotClosedUnderIntersection(a, b));
                }
            }
        }
        Ok(Self { n, opens })
    }

    pub fn discrete(n: usize) -> Self {
        Self::new(n, 0..=full_set(n)).expect("power set is a topology")
    }

    pub fn indiscrete(n: usize) -> Self {
        Self::new(n, [0, full_set(n)]).expect("indiscrete topology")
    }

    /// `{∅, {0}, {0, 1}}`: point 0 is open, point 1 is not.
    pub fn sierpinski() -> Self {
        Self::new(2, [0b00, 0b01, 0b11]).expect("Sierpinski topology")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> PointSet {
        full_set(self.n)
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    pub fn is_open(&self, set: PointSet) -> bool {
        self.opens.binary_search(&set).is_ok()
    }

    pub fn minimal_base(&self) -> MinimalBase {
        let m = (0..self.n)
            .map(|x| {
                self.opens
                    .iter()
                    .filter(|&&u| contains(u, x))
                    .fold(self.full(), |acc, &u| acc & u)
            })
            .collect();
        MinimalBase { m }
    }

    pub fn separation_class(&self) -> SeparationClass {
        let pairs = || (0..self.n).flat_map(|x| (0..self.n).filter(move |&y| y != x).map(move |y| (x, y)));
        let t0 = pairs().all(|(x, y)| {
            self.opens
                .iter()
                .any(|&u| contains(u, x) != contains(u, y))
        });
        let t1 = (0..self.n).all(|x| self.is_open(self.full() & !singleton(x)));
        let hausdorff = pairs().all(|(x, y)| {
            self.opens.iter().any(|&u| {
                contains(u, x)
                    && !contains(u, y)
                    && self
                        .opens
                        .iter()
                        .any(|&v| contains(v, y) && u & v == 0)
            })
        });
        SeparationClass { t0, t1, hausdorff }
    }

    pub fn is_discrete(&self) -> bool {
        self.opens.len() == 1 << self.n
    }
}

pub fn full_set(n: usize) -> PointSet {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

impl MinimalBase {
    pub fn of(&self, x: usize) -> PointSet {
        self.m[x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_missing_union() {
        let err = FiniteSpace::new(2, [0b00, 0b01, 0b10, 0b11 & 0b01]).unwrap_err();
        assert_eq!(err, FiniteError::MissingFullSet);
        let err = FiniteSpace::new(3, [0b000, 0b001, 0b010, 0b111]).unwrap_err();
        assert_eq!(err, FiniteError::NotClosedUnderUnion(0b001, 0b010));
    }

    #[test]
    fn rejects_missing_intersection() {
        let err = FiniteSpace::new(3, [0b000, 0b011, 0b110, 0b111]).unwrap_err();
        assert_eq!(err, FiniteError::NotClosedUnderIntersection(0b011, 0b110));
    }

    #[test]
    fn separation_examples() {
        let d = FiniteSpace::discrete(2).separation_class();
        assert!(d.t0 && d.t1 && d.hausdorff);
        let s = FiniteSpace::sierpinski().separation_class();
        assert!(s.t0 && !s.t1 && !s.hausdorff);
        let i = FiniteSpace::indiscrete(2).separation_class();
        assert!(!i.t0 && !i.t1);
    }

    #[test]
    fn minimal_base_examples() {
        let d = FiniteSpace::discrete(3).minimal_base();
        assert_eq!(d.m, vec![0b001, 0b010, 0b100]);
        let i = FiniteSpace::indiscrete(3).minimal_base();
        assert_eq!(i.m, vec![0b111; 3]);
        let s = FiniteSpace::sierpinski().minimal_base();
        assert_eq!(s.m, vec![0b01, 0b11]);
    }

    #[test]
    fn minimal_sets_are_open_and_contain_their_point() {
        let space = FiniteSpace::new(3, [0b000, 0b001, 0b011, 0b101, 0b111, 0b100 | 0b001 & 0b001]).unwrap();
        let base = space.minimal_base();
        for x in 0..3 {
            assert!(contains(base.of(x), x));
            assert!(space.is_open(base.of(x)));
        }
    }
}
