//! Concrete finite energy landscapes.
//!
//! A landscape is a finite graph with an energy `f` and a restart measure
//! `μ` on its nodes. Every neighborhood contains the node itself, so the
//! steepest-descent map `D` fixes exactly the local minima. Ties in the
//! descent argmin go to the lowest node id.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::LandscapeProfile;

pub type NodeId = u64;

/// Tolerance for the total restart mass before renormalizing.
pub const MASS_SUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: NodeId,
    pub f: f64,
    pub mu: f64,
}

/// On-disk layout: `{"nodes":[{"id","f","mu"}...],"edges":[[u,v]...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeJson {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<[NodeId; 2]>,
}

/// Which states are allowed to take a descent step (the set `A`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestartSet {
    /// Everything except the local minima.
    G1,
    /// The whole space.
    A2,
    Explicit(BTreeSet<NodeId>),
}

#[derive(Debug, Clone)]
pub struct DiscreteLandscape {
    ids: Vec<NodeId>,
    energy: Vec<f64>,
    mass: Vec<f64>,
    neighbors: Vec<Vec<usize>>,
    descent: Vec<usize>,
    limit: Vec<usize>,
}

/// The sets induced by a sublevel threshold and a restart set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetDecomposition {
    pub level_set: BTreeSet<NodeId>,
    pub above_set: BTreeSet<NodeId>,
    pub well: BTreeSet<NodeId>,
    pub outside_well: BTreeSet<NodeId>,
    pub local_minima: BTreeSet<NodeId>,
    /// Outside the well, descent ends outside the restart set.
    pub x1: BTreeSet<NodeId>,
    /// The well of the sublevel set.
    pub x2: BTreeSet<NodeId>,
    /// Outside the well, descent ends in a local minimum inside the restart set.
    pub x3: BTreeSet<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimumBarrier {
    pub id: NodeId,
    pub energy: f64,
    /// `H(x)`: largest boundary energy minus smallest energy in the well of `x`.
    pub barrier: f64,
    pub ratio: f64,
}

/// `D_f = max H(x)/f(x)` over strict local minima above level 0, with the
/// per-minimum table. `d_f` is `None` when there are no such minima.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalDepth {
    pub d_f: Option<f64>,
    pub minima: Vec<MinimumBarrier>,
}

impl DiscreteLandscape {
    /// Builds a landscape. Masses are renormalized (with a warning) if they
    /// do not sum to 1 within [`MASS_SUM_TOL`], and energies are shifted so
    /// the minimum is exactly 0.
    pub fn new(nodes: Vec<NodeRecord>, edges: &[[NodeId; 2]]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::input("landscape has no nodes"));
        }
        let mut nodes = nodes;
        nodes.sort_by_key(|n| n.id);
        if nodes.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::input("duplicate node ids"));
        }
        for n in &nodes {
            if !n.f.is_finite() {
                return Err(Error::input(format!("node {}: energy must be finite", n.id)));
            }
            if !(n.mu > 0.0 && n.mu.is_finite()) {
                return Err(Error::input(format!("node {}: mass must be positive", n.id)));
            }
        }
        let index: BTreeMap<NodeId, usize> =
            nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect();
        let ids: Vec<NodeId> = nodes.iter().map(|n| n.id).collect();

        let mut energy: Vec<f64> = nodes.iter().map(|n| n.f).collect();
        let min = energy.iter().copied().fold(f64::INFINITY, f64::min);
        if min != 0.0 {
            warn!("shifting energies by {min} so that the minimum is 0");
            energy.iter_mut().for_each(|f| *f -= min);
        }
        let mut mass: Vec<f64> = nodes.iter().map(|n| n.mu).collect();
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_SUM_TOL {
            warn!("restart masses sum to {total}; renormalizing");
        }
        mass.iter_mut().for_each(|m| *m /= total);

        let mut neighbors: Vec<BTreeSet<usize>> =
            (0..ids.len()).map(|i| BTreeSet::from([i])).collect();
        for &[u, v] in edges {
            let (Some(&i), Some(&j)) = (index.get(&u), index.get(&v)) else {
                return Err(Error::input(format!("edge [{u}, {v}] references an unknown node")));
            };
            neighbors[i].insert(j);
            neighbors[j].insert(i);
        }
        let neighbors: Vec<Vec<usize>> =
            neighbors.into_iter().map(|s| s.into_iter().collect()).collect();

        // (energy, index) is lexicographically nonincreasing along descent,
        // so iteration reaches a fixed point.
        let descent: Vec<usize> = neighbors
            .iter()
            .map(|nbrs| {
                *nbrs
                    .iter()
                    .min_by(|&&a, &&b| energy[a].total_cmp(&energy[b]).then(a.cmp(&b)))
                    .expect("neighborhood contains the node")
            })
            .collect();
        let mut limit = vec![usize::MAX; ids.len()];
        for start in 0..ids.len() {
            let mut path = vec![];
            let mut x = start;
            while limit[x] == usize::MAX && descent[x] != x {
                path.push(x);
                x = descent[x];
            }
            let end = if descent[x] == x { x } else { limit[x] };
            limit[x] = end;
            for y in path {
                limit[y] = end;
            }
        }

        Ok(Self {
            ids,
            energy,
            mass,
            neighbors,
            descent,
            limit,
        })
    }

    /// Path graph `0 - 1 - ... - n-1` with the given energies and uniform mass.
    pub fn path(energies: &[f64]) -> Result<Self> {
        let n = energies.len();
        let nodes = energies
            .iter()
            .enumerate()
            .map(|(i, &f)| NodeRecord {
                id: i as NodeId,
                f,
                mu: 1.0 / n as f64,
            })
            .collect();
        let edges: Vec<[NodeId; 2]> = (1..n).map(|i| [i as NodeId - 1, i as NodeId]).collect();
        Self::new(nodes, &edges)
    }

    /// Random connected landscape: a random recursive tree plus
    /// `extra_edges` random chords, iid uniform energies and masses.
    pub fn random(n: usize, extra_edges: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("landscape needs at least one node"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nodes = (0..n)
            .map(|i| NodeRecord {
                id: i as NodeId,
                f: rng.random::<f64>(),
                mu: rng.random_range(0.1..1.0),
            })
            .collect();
        let mut edges: Vec<[NodeId; 2]> = (1..n)
            .map(|i| [rng.random_range(0..i) as NodeId, i as NodeId])
            .collect();
        if n > 1 {
            for _ in 0..extra_edges {
                let u = rng.random_range(0..n) as NodeId;
                let v = rng.random_range(0..n) as NodeId;
                edges.push([u, v]);
            }
        }
        Self::new(nodes, &edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: LandscapeJson = serde_json::from_str(text)?;
        Self::new(raw.nodes, &raw.edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        let nodes = (0..self.len())
            .map(|i| NodeRecord {
                id: self.ids[i],
                f: self.energy[i],
                mu: self.mass[i],
            })
            .collect();
        let edges = (0..self.len())
            .flat_map(|i| {
                self.neighbors[i]
                    .iter()
                    .filter(move |&&j| j > i)
                    .map(move |&j| [self.ids[i], self.ids[j]])
            })
            .collect();
        Ok(serde_json::to_string_pretty(&LandscapeJson { nodes, edges })?)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn index_of(&self, id: NodeId) -> Result<usize> {
        self.ids
            .binary_search(&id)
            .map_err(|_| Error::input(format!("unknown node id {id}")))
    }

    pub fn energy(&self, id: NodeId) -> Result<f64> {
        Ok(self.energy[self.index_of(id)?])
    }

    pub fn mass(&self, id: NodeId) -> Result<f64> {
        Ok(self.mass[self.index_of(id)?])
    }

    pub fn neighbors(&self, id: NodeId) -> Result<Vec<NodeId>> {
        let i = self.index_of(id)?;
        Ok(self.neighbors[i].iter().map(|&j| self.ids[j]).collect())
    }

    pub(crate) fn energies(&self) -> &[f64] {
        &self.energy
    }

    pub(crate) fn masses(&self) -> &[f64] {
        &self.mass
    }

    pub(crate) fn descent_index(&self, i: usize) -> usize {
        self.descent[i]
    }

    fn to_ids(&self, mask: impl Fn(usize) -> bool) -> BTreeSet<NodeId> {
        (0..self.len()).filter(|&i| mask(i)).map(|i| self.ids[i]).collect()
    }

    fn to_mask(&self, set: &BTreeSet<NodeId>) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.len()];
        for &id in set {
            mask[self.index_of(id)?] = true;
        }
        Ok(mask)
    }

    /// One steepest-descent step: argmin of `f` over `N(x)`.
    pub fn descend(&self, id: NodeId) -> Result<NodeId> {
        Ok(self.ids[self.descent[self.index_of(id)?]])
    }

    pub fn is_local_min(&self, id: NodeId) -> Result<bool> {
        let i = self.index_of(id)?;
        Ok(self.descent[i] == i)
    }

    /// Fixed point reached by iterating descent from `id`.
    pub fn descent_limit(&self, id: NodeId) -> Result<NodeId> {
        Ok(self.ids[self.limit[self.index_of(id)?]])
    }

    /// Returns the attained energy matching `epsilon`; values strictly
    /// between attained energies are rejected.
    pub fn check_epsilon(&self, epsilon: f64) -> Result<f64> {
        self.energy
            .iter()
            .copied()
            .find(|&f| (f - epsilon).abs() <= 1e-12 * epsilon.abs().max(1.0))
            .ok_or_else(|| Error::input(format!("epsilon = {epsilon} is not an attained energy")))
    }

    /// Mask of `L(ε) = {f ≤ ε}`.
    pub(crate) fn level_mask(&self, epsilon: f64) -> Result<Vec<bool>> {
        let eps = self.check_epsilon(epsilon)?;
        Ok(self.energy.iter().map(|&f| f <= eps).collect())
    }

    /// Mask of the restart set `A`.
    pub(crate) fn restart_mask(&self, set: &RestartSet) -> Result<Vec<bool>> {
        match set {
            RestartSet::G1 => Ok((0..self.len()).map(|i| self.descent[i] != i).collect()),
            RestartSet::A2 => Ok(vec![true; self.len()]),
            RestartSet::Explicit(ids) => self.to_mask(ids),
        }
    }

    /// Steps until descent from `i` enters `F ∪ L(ε) ∪ (X \ A)`, and the
    /// node where it stops.
    fn depth_index(&self, i: usize, level: &[bool], in_a: &[bool]) -> (usize, usize) {
        let mut x = i;
        let mut k = 0;
        while !(self.descent[x] == x || level[x] || !in_a[x]) {
            x = self.descent[x];
            k += 1;
        }
        (k, x)
    }

    pub fn depth(&self, epsilon: f64, set: &RestartSet, id: NodeId) -> Result<usize> {
        let i = self.index_of(id)?;
        let level = self.level_mask(epsilon)?;
        let in_a = self.restart_mask(set)?;
        Ok(self.depth_index(i, &level, &in_a).0)
    }

    fn well_mask(&self, level: &[bool]) -> Vec<bool> {
        (0..self.len()).map(|i| level[self.limit[i]]).collect()
    }

    pub fn decompose(&self, epsilon: f64, set: &RestartSet) -> Result<SetDecomposition> {
        let level = self.level_mask(epsilon)?;
        let in_a = self.restart_mask(set)?;
        let well = self.well_mask(&level);
        let ends: Vec<usize> = (0..self.len())
            .map(|i| self.depth_index(i, &level, &in_a).1)
            .collect();
        Ok(SetDecomposition {
            level_set: self.to_ids(|i| level[i]),
            above_set: self.to_ids(|i| !level[i]),
            well: self.to_ids(|i| well[i]),
            outside_well: self.to_ids(|i| !well[i]),
            local_minima: self.to_ids(|i| self.descent[i] == i),
            x1: self.to_ids(|i| !well[i] && !in_a[ends[i]]),
            x2: self.to_ids(|i| well[i]),
            x3: self.to_ids(|i| !well[i] && in_a[ends[i]]),
        })
    }

    /// Neighbors of `set` that are not in it.
    pub fn boundary(&self, set: &BTreeSet<NodeId>) -> Result<BTreeSet<NodeId>> {
        let mask = self.to_mask(set)?;
        let mut out = BTreeSet::new();
        for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
            for &j in &self.neighbors[i] {
                if !mask[j] {
                    out.insert(self.ids[j]);
                }
            }
        }
        Ok(out)
    }

    pub fn closure(&self, set: &BTreeSet<NodeId>) -> Result<BTreeSet<NodeId>> {
        let mut out = self.boundary(set)?;
        out.extend(set.iter().copied());
        Ok(out)
    }

    /// Depth-indexed masses inside and outside the well of `L(ε)`.
    pub fn extract_profile(&self, epsilon: f64, set: &RestartSet) -> Result<LandscapeProfile> {
        let level = self.level_mask(epsilon)?;
        let in_a = self.restart_mask(set)?;
        let well = self.well_mask(&level);
        let n = self.len();
        let (mut q, mut p1, mut p2) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for i in 0..n {
            let (d, end) = self.depth_index(i, &level, &in_a);
            let m = self.mass[i];
            if well[i] {
                q[d] += m;
            } else if in_a[end] {
                p1[d] += m;
            } else {
                p2[d] += m;
            }
        }
        let inside: f64 = q.iter().sum();
        let outside: f64 = p1.iter().chain(&p2).sum();
        if inside <= 0.0 {
            return Err(Error::degenerate("the well of L(epsilon) has zero mass"));
        }
        if outside <= 0.0 {
            return Err(Error::degenerate(
                "no mass outside the well of L(epsilon); the mass ratio c is undefined",
            ));
        }
        let profile = LandscapeProfile::from_masses(q, p1, p2);
        profile.validate()?;
        Ok(profile)
    }

    /// Barrier heights of the strict local minima above level 0.
    pub fn critical_depth(&self) -> Result<CriticalDepth> {
        let mut minima = vec![];
        for x in 0..self.len() {
            if self.descent[x] != x || self.energy[x] <= 0.0 {
                continue;
            }
            let well: BTreeSet<NodeId> = self.to_ids(|i| self.limit[i] == x);
            let boundary = self.boundary(&well)?;
            if boundary.is_empty() {
                continue;
            }
            let top = boundary
                .iter()
                .map(|&z| self.energy[self.index_of(z).unwrap()])
                .fold(f64::NEG_INFINITY, f64::max);
            let bottom = well
                .iter()
                .map(|&y| self.energy[self.index_of(y).unwrap()])
                .fold(f64::INFINITY, f64::min);
            let barrier = top - bottom;
            minima.push(MinimumBarrier {
                id: self.ids[x],
                energy: self.energy[x],
                barrier,
                ratio: barrier / self.energy[x],
            });
        }
        let d_f = minima.iter().map(|m| m.ratio).reduce(f64::max);
        Ok(CriticalDepth { d_f, minima })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p4() -> DiscreteLandscape {
        DiscreteLandscape::path(&[0.0, 2.0, 1.0, 3.0]).unwrap()
    }

    fn set(ids: &[NodeId]) -> BTreeSet<NodeId> {
        ids.iter().copied().collect()
    }

    /// Argmin over the neighborhood by exhaustive scan.
    fn brute_descend(l: &DiscreteLandscape, id: NodeId) -> NodeId {
        let mut best = id;
        for y in l.neighbors(id).unwrap() {
            let (fy, fb) = (l.energy(y).unwrap(), l.energy(best).unwrap());
            if fy < fb || (fy == fb && y < best) {
                best = y;
            }
        }
        best
    }

    #[test]
    fn descend_p4() {
        let l = p4();
        assert_eq!(l.descend(1).unwrap(), 0);
        assert_eq!(l.descend(2).unwrap(), 2);
        assert_eq!(l.descend(3).unwrap(), 2);
        assert!(l.descend(9).is_err());
        let single = DiscreteLandscape::path(&[5.0]).unwrap();
        assert_eq!(single.descend(0).unwrap(), 0);
        assert_eq!(single.energy(0).unwrap(), 0.0);
    }

    #[test]
    fn ties_go_to_lowest_id() {
        let l = DiscreteLandscape::path(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(l.descend(2).unwrap(), 1);
        assert_eq!(l.descend(3).unwrap(), 2);
        assert!(l.is_local_min(1).unwrap());
    }

    #[test]
    fn depth_p4() {
        let l = p4();
        assert_eq!(l.depth(0.0, &RestartSet::G1, 3).unwrap(), 1);
        assert_eq!(l.depth(0.0, &RestartSet::G1, 1).unwrap(), 1);
        for mode in [RestartSet::G1, RestartSet::A2] {
            assert_eq!(l.depth(0.0, &mode, 0).unwrap(), 0);
        }
        assert!(l.depth(0.5, &RestartSet::G1, 0).is_err());
    }

    #[test]
    fn decompose_p4() {
        let d = p4().decompose(0.0, &RestartSet::G1).unwrap();
        assert_eq!(d.well, set(&[0, 1]));
        assert_eq!(d.outside_well, set(&[2, 3]));
        assert_eq!(d.local_minima, set(&[0, 2]));
        assert_eq!(d.x1, set(&[2, 3]));
        assert_eq!(d.x2, set(&[0, 1]));
        assert!(d.x3.is_empty());
        let d = p4().decompose(0.0, &RestartSet::A2).unwrap();
        assert_eq!(d.x3, set(&[2, 3]));
        assert!(d.x1.is_empty());
    }

    #[test]
    fn single_well() {
        let l = DiscreteLandscape::path(&[0.0, 1.0, 2.0, 3.0]).unwrap();
        let d = l.decompose(0.0, &RestartSet::G1).unwrap();
        assert!(d.outside_well.is_empty() && d.x3.is_empty());
        assert!(matches!(
            l.extract_profile(0.0, &RestartSet::G1),
            Err(Error::Degenerate(_))
        ));
        assert_eq!(l.critical_depth().unwrap().d_f, None);
    }

    #[test]
    fn boundary_and_closure() {
        let l = p4();
        assert_eq!(l.boundary(&set(&[2, 3])).unwrap(), set(&[1]));
        assert_eq!(l.closure(&set(&[0])).unwrap(), set(&[0, 1]));
    }

    #[test]
    fn profile_p4() {
        let l = p4();
        let g1 = l.extract_profile(0.0, &RestartSet::G1).unwrap();
        assert_eq!(g1.q, vec![0.25, 0.25]);
        assert_eq!(g1.p2, vec![0.25, 0.25]);
        assert_eq!(g1.p1, vec![0.0, 0.0]);
        assert_eq!((g1.a, g1.b, g1.c), (1, 1, 1.0));
        let a2 = l.extract_profile(0.0, &RestartSet::A2).unwrap();
        assert_eq!(a2.q, vec![0.25, 0.25]);
        assert_eq!(a2.p1, vec![0.25, 0.25]);
        assert_eq!(a2.p2, vec![0.0, 0.0]);
    }

    #[test]
    fn critical_depth_p4() {
        let cd = p4().critical_depth().unwrap();
        assert_eq!(cd.minima.len(), 1);
        assert_eq!(cd.minima[0].id, 2);
        assert_eq!(cd.minima[0].barrier, 1.0);
        assert_eq!(cd.d_f, Some(1.0));
        let raised = DiscreteLandscape::path(&[0.0, 2.0, 1.0, 10.0]).unwrap();
        assert_eq!(raised.critical_depth().unwrap().d_f, Some(1.0));
    }

    #[test]
    fn json_normalizes() {
        let text = r#"{"nodes":[{"id":3,"f":2.0,"mu":2.0},{"id":1,"f":1.0,"mu":2.0}],"edges":[[1,3]]}"#;
        let l = DiscreteLandscape::from_json(text).unwrap();
        assert_eq!(l.ids(), &[1, 3]);
        assert_eq!(l.energy(1).unwrap(), 0.0);
        assert_eq!(l.energy(3).unwrap(), 1.0);
        assert_eq!(l.mass(3).unwrap(), 0.5);
        let back = DiscreteLandscape::from_json(&l.to_json().unwrap()).unwrap();
        assert_eq!(back.energies(), l.energies());
        assert!(DiscreteLandscape::from_json(r#"{"nodes":[{"id":0,"f":0,"mu":1}],"edges":[[0,7]]}"#).is_err());
        assert!(DiscreteLandscape::from_json(r#"{"nodes":[{"id":0,"f":0,"mu":0}],"edges":[]}"#).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn landscape_invariants(n in 1usize..40, extra in 0usize..40, seed in any::<u64>(), a2 in any::<bool>()) {
            let l = DiscreteLandscape::random(n, extra, seed).unwrap();
            let mode = if a2 { RestartSet::A2 } else { RestartSet::G1 };
            for &id in l.ids() {
                let next = l.descend(id).unwrap();
                prop_assert_eq!(next, brute_descend(&l, id));
                let (f, g) = (l.energy(id).unwrap(), l.energy(next).unwrap());
                prop_assert!(g <= f);
                prop_assert_eq!(g == f, next == id);
                let d = l.depth(0.0, &mode, id).unwrap();
                if d >= 1 {
                    prop_assert_eq!(l.depth(0.0, &mode, next).unwrap(), d - 1);
                }
            }
            let dec = l.decompose(0.0, &mode).unwrap();
            let mut union = dec.x1.clone();
            union.extend(&dec.x2);
            union.extend(&dec.x3);
            prop_assert_eq!(union.len(), l.len());
            prop_assert_eq!(dec.x1.len() + dec.x2.len() + dec.x3.len(), l.len());
            if let Ok(profile) = l.extract_profile(0.0, &mode) {
                let total = profile.q_total() + profile.trap_total();
                prop_assert!((total - 1.0).abs() < 1e-12);
                if a2 {
                    prop_assert!(profile.p2_total() == 0.0);
                } else {
                    prop_assert!(profile.p1_total() == 0.0);
                }
                let level_mass: f64 = dec.level_set.iter().map(|&i| l.mass(i).unwrap()).sum();
                prop_assert!(profile.q[0] >= level_mass - 1e-15);
            } else {
                prop_assert!(dec.outside_well.is_empty());
            }
        }

        #[test]
        fn critical_depth_brute_force(n in 2usize..30, extra in 0usize..20, seed in any::<u64>()) {
            let l = DiscreteLandscape::random(n, extra, seed).unwrap();
            let cd = l.critical_depth().unwrap();
            for m in &cd.minima {
                let well: BTreeSet<NodeId> = l.ids().iter().copied()
                    .filter(|&y| l.descent_limit(y).unwrap() == m.id).collect();
                let boundary = l.boundary(&well).unwrap();
                let mut best = f64::NEG_INFINITY;
                for &y in &well {
                    for &z in &boundary {
                        best = best.max(l.energy(z).unwrap() - l.energy(y).unwrap());
                    }
                }
                prop_assert_eq!(best, m.barrier);
            }
        }
    }
}
