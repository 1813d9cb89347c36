use serde::{Deserialize, Serialize};

use super::RemetrizeError;
use crate::finite_topology::{
    is_tau_contractive, members, pairs_colocated, FiniteSetMap, FiniteSpace, OrbitDescriptor,
};

/// A metric on `{0, .., n-1}`, stored as a full distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMetric {
    d: Vec<Vec<f64>>,
}

impl FiniteMetric {
    /// Checks zero diagonal, positivity, symmetry and the triangle inequality.
    pub fn new(d: Vec<Vec<f64>>) -> Result<Self, RemetrizeError> {
        let n = d.len();
        if n == 0 || d.iter().any(|row| row.len() != n) {
            return Err(RemetrizeError::NotAMetric("matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let dij = d[i][j];
                if (i == j) != (dij == 0.0) || dij < 0.0 || !dij.is_finite() {
                    return Err(RemetrizeError::NotAMetric(format!("d({i},{j}) = {dij}")));
                }
                if dij != d[j][i] {
                    return Err(RemetrizeError::NotAMetric(format!("d({i},{j}) != d({j},{i})")));
                }
                if let Some(k) = (0..n).find(|&k| dij > d[i][k] + d[k][j]) {
                    return Err(RemetrizeError::NotAMetric(format!("triangle fails at {i},{k},{j}")));
                }
            }
        }
        Ok(Self { d })
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn dist(&self, x: usize, y: usize) -> f64 {
        self.d[x][y]
    }

    /// A finite metric space carries the discrete topology.
    pub fn topology(&self) -> FiniteSpace {
        FiniteSpace::discrete(self.n())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceRecord {
    pub tau_contractive: bool,
    pub p_contractive: bool,
}

impl EquivalenceRecord {
    pub fn agree(&self) -> bool {
        self.tau_contractive == self.p_contractive
    }
}

/// Decides both contractivity notions exactly for a lasso orbit.
///
/// On a finite carrier a subsequence converges only by being eventually
/// constant at a recurrent point `c`, so the distance notion reduces to
/// `sup_{y ∈ S(c)} d(y, c) = 0` at some cycle point.
pub fn tau_p_equivalence_test(
    metric: &FiniteMetric,
    map: &FiniteSetMap,
    orbit: &OrbitDescriptor,
) -> Result<EquivalenceRecord, RemetrizeError> {
    let tau = is_tau_contractive(&metric.topology(), map, orbit)?.contractive;
    let p = orbit.cycle().iter().any(|&c| {
        let image = map.image(c);
        image != 0 && members(image).map(|y| metric.dist(y, c)).fold(0.0, f64::max) == 0.0
    });
    Ok(EquivalenceRecord {
        tau_contractive: tau,
        p_contractive: p,
    })
}

/// Exact t-contraction test for a single-valued map `f` on a finite space.
///
/// Each pair orbit `(f^i a, f^i b)` is eventually periodic; the pair is
/// contracted iff every open cover has a member holding both points at every
/// pair on that cycle.
pub fn t_contractive_exact(space: &FiniteSpace, f: &[usize]) -> Result<bool, RemetrizeError> {
    let n = space.n();
    if f.len() != n {
        return Err(RemetrizeError::Finite(crate::finite_topology::FiniteError::ImageCount {
            expected: n,
            found: f.len(),
        }));
    }
    if let Some(&x) = f.iter().find(|&&x| x >= n) {
        return Err(RemetrizeError::Finite(crate::finite_topology::FiniteError::PointOutOfRange(x)));
    }
    let mut cycle_pairs = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let mut seen = vec![usize::MAX; n * n];
            let (mut x, mut y, mut i) = (a, b, 0);
            while seen[x * n + y] == usize::MAX {
                seen[x * n + y] = i;
                (x, y, i) = (f[x], f[y], i + 1);
            }
            // (x, y) is the first repeated pair: walk the cycle once
            let start = (x, y);
            loop {
                cycle_pairs.push((x, y));
                (x, y) = (f[x], f[y]);
                if (x, y) == start {
                    break;
                }
            }
        }
    }
    cycle_pairs.sort_unstable();
    cycle_pairs.dedup();
    Ok(pairs_colocated(space, &cycle_pairs))
}
