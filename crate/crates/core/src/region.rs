//! Region-A bookkeeping: numbering quantum-number sets by their distance
//! from a chosen center, and comparing configurations as unordered sets.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::exchange::ParticleSet;
use crate::linalg::permutation_sign;
use crate::orbital::Point3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSignature {
    pub center: Point3,
    pub radii: Vec<f64>,
    /// `order[k]` is the index of the `k`-th nearest set.
    pub order: Vec<usize>,
    pub parity: i32,
    /// True iff the sets are already numbered by strictly increasing distance.
    pub in_region_a: bool,
}

/// Equal radii are broken by position `(x, y, z)` and then by tags.
fn compare(config: &[ParticleSet], radii: &[f64], i: usize, j: usize) -> Ordering {
    radii[i]
        .total_cmp(&radii[j])
        .then_with(|| {
            let (p, q) = (config[i].position, config[j].position);
            p.x.total_cmp(&q.x)
                .then(p.y.total_cmp(&q.y))
                .then(p.z.total_cmp(&q.z))
        })
        .then_with(|| config[i].tags.cmp(&config[j].tags))
}

pub fn radial_order(config: &[ParticleSet], center: Point3) -> RegionSignature {
    let radii: Vec<f64> = config.iter().map(|p| p.position.distance(center)).collect();
    let mut order: Vec<usize> = (0..config.len()).collect();
    order.sort_by(|&i, &j| compare(config, &radii, i, j));
    let strict = order.windows(2).all(|w| radii[w[0]] < radii[w[1]]);
    let identity = order.iter().enumerate().all(|(k, &i)| k == i);
    RegionSignature {
        center,
        parity: permutation_sign(&order),
        in_region_a: strict && identity,
        radii,
        order,
    }
}

/// Reorders `config` into Region-A order; the second value is the sign of
/// the permutation that was applied.
pub fn canonicalize(config: &[ParticleSet], center: Point3) -> (Vec<ParticleSet>, i32) {
    let sig = radial_order(config, center);
    let canonical = sig.order.iter().map(|&i| config[i].clone()).collect();
    (canonical, sig.parity)
}

fn sets_match(a: &ParticleSet, b: &ParticleSet, tol: f64) -> bool {
    a.spin == b.spin
        && a.tags == b.tags
        && a.position.max_coord_diff(b.position) <= tol
        && a.spin_state.len() == b.spin_state.len()
        && a.spin_state
            .iter()
            .zip(b.spin_state.iter())
            .all(|(x, y)| (x - y).norm() <= tol)
}

/// True iff the two configurations hold the same quantum-number sets,
/// irrespective of order.
///
/// Sets are paired by bipartite matching, so near-duplicates within `tol`
/// cannot be claimed twice.
pub fn generic_equal(config1: &[ParticleSet], config2: &[ParticleSet], tol: f64) -> bool {
    if config1.len() != config2.len() {
        return false;
    }
    let n = config1.len();
    let adj: Vec<Vec<usize>> = config1
        .iter()
        .map(|a| {
            (0..n)
                .filter(|&j| sets_match(a, &config2[j], tol))
                .collect()
        })
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    (0..n).all(|i| augment(i, &adj, &mut owner, &mut vec![false; n]))
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if owner[j].is_none_or(|k| augment(k, adj, owner, seen)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}
