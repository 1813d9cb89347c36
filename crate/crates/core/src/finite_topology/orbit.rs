use serde::{Deserialize, Serialize};

use super::space::{contains, full_set, members, PointSet};
use super::FiniteError;

/// A set-valued map on `{0, .., n-1}`; `images[x]` is `S(x)`, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteSetMap {
    images: Vec<PointSet>,
}

impl FiniteSetMap {
    pub fn new(n: usize, images: Vec<PointSet>) -> Result<Self, FiniteError> {
        if images.len() != n {
            return Err(FiniteError::ImageCount {
                expected: n,
                found: images.len(),
            });
        }
        if let Some(&bad) = images.iter().find(|&&s| s & !full_set(n) != 0) {
            return Err(FiniteError::OpenOutOfRange(bad));
        }
        Ok(Self { images })
    }

    /// Decodes the `index`-th of the `2^(n·n)` maps on `n` points.
    pub fn from_index(n: usize, index: u64) -> Self {
        let width = n as u64;
        let images = (0..n)
            .map(|x| ((index >> (width * x as u64)) & ((1 << width) - 1)) as PointSet)
            .collect();
        Self { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, x: usize) -> PointSet {
        self.images[x]
    }

    pub fn images(&self) -> &[PointSet] {
        &self.images
    }

    pub fn in_graph(&self, x: usize, y: usize) -> bool {
        contains(self.images[x], y)
    }

    /// Points with `x ∈ S(x)`.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.n()).filter(|&x| self.in_graph(x, x)).collect()
    }

    /// Every eventually periodic orbit with preperiod at most `max_tail` and
    /// minimal period at most `max_cycle`, each listed once in canonical form.
    pub fn orbits(&self, max_tail: usize, max_cycle: usize) -> Vec<OrbitDescriptor> {
        let mut out = Vec::new();
        let mut walk = Vec::with_capacity(max_tail + max_cycle);
        for tail in 0..=max_tail {
            for cycle in 1..=max_cycle {
                for start in 0..self.n() {
                    walk.clear();
                    walk.push(start);
                    self.extend_walks(&mut walk, tail, cycle, &mut out);
                }
            }
        }
        out
    }

    fn extend_walks(&self, walk: &mut Vec<usize>, tail: usize, cycle: usize, out: &mut Vec<OrbitDescriptor>) {
        if walk.len() == tail + cycle {
            let last = walk[walk.len() - 1];
            if !self.in_graph(last, walk[tail]) {
                return;
            }
            if tail > 0 && walk[tail - 1] == last {
                return;
            }
            if primitive_period(&walk[tail..]) != cycle {
                return;
            }
            out.push(OrbitDescriptor {
                tail: walk[..tail].to_vec(),
                cycle: walk[tail..].to_vec(),
            });
            return;
        }
        let last = walk[walk.len() - 1];
        for y in members(self.images[last]) {
            walk.push(y);
            self.extend_walks(walk, tail, cycle, out);
            walk.pop();
        }
    }
}

/// An eventually periodic sequence `tail, cycle, cycle, ...`.
///
/// An empty cycle denotes a finite orbit that ends at the last tail point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrbitDescriptor {
    tail: Vec<usize>,
    cycle: Vec<usize>,
}

fn primitive_period(cycle: &[usize]) -> usize {
    let len = cycle.len();
    (1..=len)
        .find(|&p| len.is_multiple_of(p) && (0..len).all(|i| cycle[i] == cycle[i % p]))
        .unwrap_or(len)
}

impl OrbitDescriptor {
    /// Canonical lasso: the cycle is reduced to its primitive root and the
    /// tail is shortened while its last point equals the cycle's last point.
    pub fn new(mut tail: Vec<usize>, mut cycle: Vec<usize>) -> Self {
        if cycle.is_empty() {
            return Self { tail, cycle };
        }
        let p = primitive_period(&cycle);
        cycle.truncate(p);
        while let Some(&t) = tail.last() {
            if t != *cycle.last().unwrap() {
                break;
            }
            tail.pop();
            cycle.rotate_right(1);
        }
        Self { tail, cycle }
    }

    /// A finite orbit `points[0], .., points[k]` ending at `points[k]`.
    pub fn finite(points: Vec<usize>) -> Self {
        Self {
            tail: points,
            cycle: Vec::new(),
        }
    }

    pub fn stationary(x: usize) -> Self {
        Self::new(Vec::new(), vec![x])
    }

    /// The list `points` continued forever by its last point.
    pub fn eventually_constant(points: &[usize]) -> Self {
        match points.split_last() {
            Some((&last, rest)) => Self::new(rest.to_vec(), vec![last]),
            None => Self::finite(Vec::new()),
        }
    }

    pub fn tail(&self) -> &[usize] {
        &self.tail
    }

    pub fn cycle(&self) -> &[usize] {
        &self.cycle
    }

    pub fn is_infinite(&self) -> bool {
        !self.cycle.is_empty()
    }

    /// Number of distinct positions `tail + cycle`.
    pub fn positions(&self) -> usize {
        self.tail.len() + self.cycle.len()
    }

    /// Point at position `i` of the infinite sequence (0-based).
    pub fn at(&self, i: usize) -> usize {
        if i < self.tail.len() {
            self.tail[i]
        } else {
            let c = self.cycle.len();
            self.cycle[(i - self.tail.len()) % c]
        }
    }

    pub fn visited(&self) -> PointSet {
        self.tail.iter().chain(&self.cycle).fold(0, |acc, &x| acc | 1 << x)
    }

    pub fn recurrent(&self) -> PointSet {
        self.cycle.iter().fold(0, |acc, &x| acc | 1 << x)
    }

    /// Checks `x_{i+1} ∈ S(x_i)` for every consecutive pair, including the
    /// tail/cycle junction and the wrap-around.
    pub fn validate(&self, map: &FiniteSetMap) -> Result<(), FiniteError> {
        let n = map.n();
        if let Some(&x) = self.tail.iter().chain(&self.cycle).find(|&&x| x >= n) {
            return Err(FiniteError::PointOutOfRange(x));
        }
        if self.cycle.is_empty() {
            let Some(&last) = self.tail.last() else {
                return Err(FiniteError::EmptyOrbit);
            };
            for (i, w) in self.tail.windows(2).enumerate() {
                if !map.in_graph(w[0], w[1]) {
                    return Err(FiniteError::NotAnOrbit { step: i });
                }
            }
            if map.image(last) != 0 {
                return Err(FiniteError::NotAnOrbit { step: self.tail.len() - 1 });
            }
            return Ok(());
        }
        let len = self.positions();
        for i in 0..len {
            let next = if i + 1 < len { self.at(i + 1) } else { self.cycle[0] };
            if !map.in_graph(self.at(i), next) {
                return Err(FiniteError::NotAnOrbit { step: i });
            }
        }
        Ok(())
    }

    pub(crate) fn require_infinite(&self, map: &FiniteSetMap) -> Result<(), FiniteError> {
        self.validate(map)?;
        if self.is_infinite() {
            Ok(())
        } else {
            Err(FiniteError::FiniteOrbit)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_reduces_cycle_and_tail() {
        let o = OrbitDescriptor::new(vec![0, 1, 2], vec![1, 2, 1, 2]);
        assert_eq!(o.tail(), &[0]);
        assert_eq!(o.cycle(), &[1, 2]);
        let s = OrbitDescriptor::new(vec![2, 2], vec![2]);
        assert_eq!(s, OrbitDescriptor::stationary(2));
    }

    #[test]
    fn enumerated_orbits_are_canonical_and_unique() {
        let map = FiniteSetMap::new(3, vec![0b111; 3]).unwrap();
        let orbits = map.orbits(2, 3);
        for o in &orbits {
            assert_eq!(&OrbitDescriptor::new(o.tail().to_vec(), o.cycle().to_vec()), o);
            o.validate(&map).unwrap();
        }
        let mut dedup = orbits.clone();
        dedup.sort_by(|a, b| (a.tail(), a.cycle()).cmp(&(b.tail(), b.cycle())));
        dedup.dedup();
        assert_eq!(dedup.len(), orbits.len());
    }

    #[test]
    fn validate_rejects_broken_steps() {
        let map = FiniteSetMap::new(2, vec![0b10, 0b10]).unwrap();
        assert!(OrbitDescriptor::new(vec![0], vec![1]).validate(&map).is_ok());
        assert_eq!(
            OrbitDescriptor::new(vec![], vec![0, 1]).validate(&map),
            Err(FiniteError::NotAnOrbit { step: 1 })
        );
    }

    #[test]
    fn finite_orbit_must_end_at_empty_image() {
        let map = FiniteSetMap::new(2, vec![0b10, 0b00]).unwrap();
        assert!(OrbitDescriptor::finite(vec![0, 1]).validate(&map).is_ok());
        assert!(OrbitDescriptor::finite(vec![0]).validate(&map).is_err());
    }

    #[test]
    fn map_index_roundtrip_covers_all_images() {
        let maps: Vec<_> = (0..512).map(|i| FiniteSetMap::from_index(3, i)).collect();
        let mut uniq = maps.clone();
        uniq.sort_by(|a, b| a.images().cmp(b.images()));
        uniq.dedup();
        assert_eq!(uniq.len(), 512);
    }
}
