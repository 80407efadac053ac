//! Threshold graph maintenance.
//!
//! For a threshold `tau`, a vertex's cut-off is the largest level `i` at which
//! it has at least `tau * 2^i` incident edges of level at most `i`. An edge is
//! heavy when its level is at most the cut-off of one of its endpoints. The
//! threshold graph keeps the light edges with their weights and contracts
//! every connected component of the heavy subgraph into a component vertex,
//! joined to each of its members by an edge of weight 1/2.
//!
//! [`ThresholdState::apply`] turns a change of the underlying graph into a
//! list of [`GtauChange`]s. Consumers that apply the changes in order never
//! see a threshold-graph distance decrease, provided they treat a run of
//! consecutive [`GtauChange::RepointComponent`] events as one step: attach
//! every listed vertex to the new component vertex first, then detach them
//! all from the old one.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;

use crate::connectivity::{Backend, ConnectivityForest, ConnectivityStats};
use crate::error::{Error, Result};
use crate::graph::{ChangeRecord, DynamicGraph, EdgeKey, VertexId};
use crate::numeric::{level, meets_threshold};
use crate::oracle::FreshThresholdGraph;

/// Value of a cut-off when no level qualifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CutoffSentinel {
    /// No edge is heavy through this endpoint.
    #[default]
    MinusOne,
    /// Level-0 edges are heavy through this endpoint.
    Zero,
}

impl CutoffSentinel {
    fn value(self) -> i32 {
        match self {
            CutoffSentinel::MinusOne => -1,
            CutoffSentinel::Zero => 0,
        }
    }
}

/// A change to the threshold graph. Component vertex `c` is vertex `n + c`
/// of the threshold graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GtauChange {
    InsertLight { key: EdgeKey, w: f64 },
    DeleteLight { key: EdgeKey },
    IncreaseLight { key: EdgeKey, new_w: f64 },
    RepointComponent { vertex: VertexId, old_c: usize, new_c: usize },
}

/// Lifetime counters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThresholdCounters {
    /// Weight-1/2 edges ever inserted, including the initial ones.
    pub half_edge_insertions: u64,
    /// Edges that were light at construction or became light later, by the
    /// level they had at that moment.
    pub light_insertions_by_level: Vec<u64>,
    pub cutoff_recomputations: u64,
    pub reclassified: u64,
}

#[derive(Clone, Copy, Debug)]
struct EdgeInfo {
    w: f64,
    level: i32,
    heavy: bool,
}

/// Cut-offs, heavy/light partition, and component assignment for one `tau`.
#[derive(Clone, Debug)]
pub struct ThresholdState {
    n: usize,
    tau: Ratio<u64>,
    sentinel: CutoffSentinel,
    cnt: Vec<Vec<u64>>,
    cutoff: Vec<i32>,
    edges: BTreeMap<EdgeKey, EdgeInfo>,
    heavy_adj: Vec<BTreeSet<VertexId>>,
    conn: ConnectivityForest,
    comp: Vec<usize>,
    next_comp: usize,
    counters: ThresholdCounters,
}

impl ThresholdState {
    pub fn new(g: &DynamicGraph, tau: Ratio<u64>) -> Result<Self> {
        ThresholdState::with_options(g, tau, CutoffSentinel::MinusOne, Backend::Hdt)
    }

    pub fn with_options(
        g: &DynamicGraph,
        tau: Ratio<u64>,
        sentinel: CutoffSentinel,
        backend: Backend,
    ) -> Result<Self> {
        if *tau.numer() == 0 {
            return Err(Error::InvalidThreshold(format!("{tau} is not positive")));
        }
        let n = g.n();
        let mut st = ThresholdState {
            n,
            tau,
            sentinel,
            cnt: vec![Vec::new(); n],
            cutoff: vec![sentinel.value(); n],
            edges: BTreeMap::new(),
            heavy_adj: vec![BTreeSet::new(); n],
            conn: ConnectivityForest::new(n, backend),
            comp: vec![0; n],
            next_comp: 0,
            counters: ThresholdCounters {
                half_edge_insertions: n as u64,
                ..Default::default()
            },
        };
        for (key, w) in g.edges() {
            let l = level(w)?;
            for x in [key.u(), key.v()] {
                st.bump(x, l, 1);
            }
            st.edges.insert(key, EdgeInfo { w, level: l, heavy: false });
        }
        for v in 0..n {
            st.cutoff[v] = st.compute_cutoff(v);
        }
        let keys: Vec<EdgeKey> = st.edges.keys().copied().collect();
        for key in keys {
            let info = st.edges[&key];
            if st.heavy_by_cutoffs(key, info.level) {
                st.edges.get_mut(&key).expect("edge").heavy = true;
                st.heavy_adj[key.u()].insert(key.v());
                st.heavy_adj[key.v()].insert(key.u());
                st.conn.insert(key.u(), key.v())?;
            } else {
                st.count_light(info.level);
            }
        }
        // component ids in order of smallest member
        let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..n {
            let root = st.conn.component_id(v);
            let next = ids.len();
            st.comp[v] = *ids.entry(root).or_insert(next);
        }
        st.next_comp = ids.len();
        Ok(st)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> Ratio<u64> {
        self.tau
    }

    pub fn sentinel(&self) -> CutoffSentinel {
        self.sentinel
    }

    pub fn cutoff(&self, v: VertexId) -> i32 {
        self.cutoff[v]
    }

    pub fn cutoffs(&self) -> &[i32] {
        &self.cutoff
    }

    /// `Some(true)` for heavy, `Some(false)` for light, `None` if absent.
    pub fn is_heavy(&self, key: EdgeKey) -> Option<bool> {
        self.edges.get(&key).map(|e| e.heavy)
    }

    pub fn light_edges(&self) -> impl Iterator<Item = (EdgeKey, f64)> + '_ {
        self.edges.iter().filter(|(_, e)| !e.heavy).map(|(&k, e)| (k, e.w))
    }

    pub fn heavy_edges(&self) -> impl Iterator<Item = EdgeKey> + '_ {
        self.edges.iter().filter(|(_, e)| e.heavy).map(|(&k, _)| k)
    }

    /// Component vertex id of `v`, in `0..n`.
    pub fn component_of(&self, v: VertexId) -> usize {
        self.comp[v]
    }

    pub fn counters(&self) -> &ThresholdCounters {
        &self.counters
    }

    pub fn connectivity_stats(&self) -> ConnectivityStats {
        self.conn.stats()
    }

    /// Number of threshold-graph vertices: originals plus every component id
    /// that can ever be handed out.
    pub fn gtau_vertex_count(&self) -> usize {
        2 * self.n
    }

    /// Adjacency of the current threshold graph over
    /// [`gtau_vertex_count`](Self::gtau_vertex_count) vertices.
    pub fn gtau_adjacency(&self) -> Vec<Vec<(VertexId, f64)>> {
        let mut adj = vec![Vec::new(); 2 * self.n];
        for (key, w) in self.light_edges() {
            adj[key.u()].push((key.v(), w));
            adj[key.v()].push((key.u(), w));
        }
        for v in 0..self.n {
            let c = self.n + self.comp[v];
            adj[v].push((c, 0.5));
            adj[c].push((v, 0.5));
        }
        adj
    }

    /// The current state in the naming used by the from-scratch builder, so
    /// the two can be compared with `==`.
    pub fn snapshot(&self) -> FreshThresholdGraph {
        let mut min_member: BTreeMap<usize, usize> = BTreeMap::new();
        for v in 0..self.n {
            min_member.entry(self.comp[v]).or_insert(v);
        }
        FreshThresholdGraph {
            n: self.n,
            cutoffs: self.cutoff.clone(),
            heavy: self.heavy_edges().collect(),
            light: self.light_edges().collect(),
            component: (0..self.n).map(|v| min_member[&self.comp[v]]).collect(),
        }
    }

    fn bump(&mut self, x: VertexId, l: i32, delta: i64) {
        let l = l as usize;
        let c = &mut self.cnt[x];
        if c.len() <= l {
            c.resize(l + 1, 0);
        }
        c[l] = (c[l] as i64 + delta) as u64;
    }

    fn compute_cutoff(&mut self, v: VertexId) -> i32 {
        self.counters.cutoff_recomputations += 1;
        // above the highest incident level the prefix count is the degree
        let mut best = self.sentinel.value();
        let mut prefix = 0;
        for i in 0..64 {
            prefix += self.cnt[v].get(i).copied().unwrap_or(0);
            if meets_threshold(prefix, self.tau, i as u32) {
                best = best.max(i as i32);
            } else if i >= self.cnt[v].len() {
                break;
            }
        }
        best
    }

    fn heavy_by_cutoffs(&self, key: EdgeKey, l: i32) -> bool {
        l <= self.cutoff[key.u()] || l <= self.cutoff[key.v()]
    }

    fn count_light(&mut self, l: i32) {
        let c = &mut self.counters.light_insertions_by_level;
        if c.len() <= l as usize {
            c.resize(l as usize + 1, 0);
        }
        c[l as usize] += 1;
    }

    /// Removes a heavy edge from the heavy subgraph and repoints the smaller
    /// side if its component splits.
    fn remove_heavy(&mut self, key: EdgeKey, out: &mut Vec<GtauChange>) -> Result<()> {
        self.heavy_adj[key.u()].remove(&key.v());
        self.heavy_adj[key.v()].remove(&key.u());
        let rep = self.conn.delete(key.u(), key.v())?;
        if rep.split {
            let new_c = self.next_comp;
            self.next_comp += 1;
            for &x in &rep.smaller_side {
                let old_c = self.comp[x];
                self.comp[x] = new_c;
                self.counters.half_edge_insertions += 1;
                out.push(GtauChange::RepointComponent { vertex: x, old_c, new_c });
            }
        }
        Ok(())
    }

    /// Turns a heavy edge light: the light copy goes in before the heavy
    /// connection is removed.
    fn demote(&mut self, key: EdgeKey, out: &mut Vec<GtauChange>) -> Result<()> {
        let info = self.edges.get_mut(&key).expect("edge");
        info.heavy = false;
        let (w, l) = (info.w, info.level);
        self.count_light(l);
        self.counters.reclassified += 1;
        out.push(GtauChange::InsertLight { key, w });
        self.remove_heavy(key, out)
    }

    /// Applies one change of the underlying graph and returns the resulting
    /// threshold-graph changes in the order they must be applied.
    pub fn apply(&mut self, change: &ChangeRecord) -> Result<Vec<GtauChange>> {
        let key = change.key;
        let info = *self
            .edges
            .get(&key)
            .ok_or(Error::EdgeNotFound(key.u(), key.v()))?;
        let mut out = Vec::new();
        for x in [key.u(), key.v()] {
            self.bump(x, info.level, -1);
        }
        match (change.new_weight, change.new_level) {
            (Some(w), Some(l)) => {
                for x in [key.u(), key.v()] {
                    self.bump(x, l, 1);
                }
                let e = self.edges.get_mut(&key).expect("edge");
                e.w = w;
                e.level = l;
            }
            _ => {
                self.edges.remove(&key);
            }
        }
        let mut fallen = Vec::new();
        for x in [key.u(), key.v()] {
            let c = self.compute_cutoff(x);
            if c < self.cutoff[x] {
                self.cutoff[x] = c;
                fallen.push(x);
            }
        }
        match change.new_weight {
            None if info.heavy => self.remove_heavy(key, &mut out)?,
            None => out.push(GtauChange::DeleteLight { key }),
            Some(new_w) if !info.heavy => out.push(GtauChange::IncreaseLight { key, new_w }),
            Some(_) => {
                let l = self.edges[&key].level;
                if !self.heavy_by_cutoffs(key, l) {
                    self.demote(key, &mut out)?;
                }
            }
        }
        for x in fallen {
            let candidates: Vec<VertexId> = self.heavy_adj[x].iter().copied().collect();
            for y in candidates {
                let k = EdgeKey::new(x, y)?;
                let l = self.edges[&k].level;
                if !self.heavy_by_cutoffs(k, l) {
                    self.demote(k, &mut out)?;
                }
            }
        }
        Ok(out)
    }

    /// Cross-checks the incremental state against recomputation from the
    /// stored counters and the heavy edge set.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut cnt = vec![Vec::<u64>::new(); self.n];
        for (key, e) in &self.edges {
            for x in [key.u(), key.v()] {
                let c = &mut cnt[x];
                if c.len() <= e.level as usize {
                    c.resize(e.level as usize + 1, 0);
                }
                c[e.level as usize] += 1;
            }
            if e.heavy != self.heavy_by_cutoffs(*key, e.level) {
                return Err(format!("edge {key:?} misclassified"));
            }
        }
        for (v, expected) in cnt.iter().enumerate() {
            let stored: Vec<u64> = {
                let mut c = self.cnt[v].clone();
                while c.last() == Some(&0) {
                    c.pop();
                }
                c
            };
            if stored != *expected {
                return Err(format!("level counters of {v} are stale"));
            }
        }
        Ok(())
    }
}

/// Edge multiset of a threshold graph rebuilt purely from a change stream.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GtauMirror {
    pub light: BTreeMap<EdgeKey, f64>,
    pub component: Vec<usize>,
}

impl GtauMirror {
    pub fn from_state(st: &ThresholdState) -> Self {
        GtauMirror {
            light: st.light_edges().collect(),
            component: (0..st.n()).map(|v| st.component_of(v)).collect(),
        }
    }

    pub fn apply(&mut self, changes: &[GtauChange]) -> std::result::Result<(), String> {
        for ch in changes {
            match *ch {
                GtauChange::InsertLight { key, w } => {
                    if self.light.insert(key, w).is_some() {
                        return Err(format!("light edge {key:?} inserted twice"));
                    }
                }
                GtauChange::DeleteLight { key } => {
                    self.light.remove(&key).ok_or(format!("light edge {key:?} missing"))?;
                }
                GtauChange::IncreaseLight { key, new_w } => {
                    let w = self.light.get_mut(&key).ok_or(format!("light edge {key:?} missing"))?;
                    if new_w < *w {
                        return Err(format!("light edge {key:?} got lighter"));
                    }
                    *w = new_w;
                }
                GtauChange::RepointComponent { vertex, old_c, new_c } => {
                    if self.component[vertex] != old_c {
                        return Err(format!("vertex {vertex} was not on component {old_c}"));
                    }
                    self.component[vertex] = new_c;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UpdateEvent;
    use crate::oracle::{build_gtau_fresh, dijkstra};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, m: usize, wmax: u32) -> DynamicGraph {
        let mut g = DynamicGraph::new(n);
        while g.edge_count() < m {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let _ = g.insert_edge(u, v, rng.gen_range(1..=wmax) as f64);
        }
        g
    }

    #[test]
    fn cutoff_example() {
        let g = DynamicGraph::from_edges(
            7,
            [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (0, 4, 1.0), (0, 5, 3.0), (0, 6, 10.0)],
        )
        .unwrap();
        let st = ThresholdState::new(&g, Ratio::from_integer(2)).unwrap();
        assert_eq!(st.cutoff(0), 1);
        assert_eq!(st.cutoff(6), -1);
        assert_eq!(st.is_heavy(EdgeKey::new(0, 5).unwrap()), Some(true));
        assert_eq!(st.is_heavy(EdgeKey::new(0, 6).unwrap()), Some(false));
        assert_eq!(st.counters().half_edge_insertions, 7);
    }

    #[test]
    fn rejects_zero_tau() {
        let g = DynamicGraph::new(3);
        assert!(matches!(
            ThresholdState::new(&g, Ratio::from_integer(0)),
            Err(Error::InvalidThreshold(_))
        ));
    }

    #[test]
    fn light_deletion_emits_one_change() {
        let mut g = DynamicGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 4.0)]).unwrap();
        let mut st = ThresholdState::new(&g, Ratio::from_integer(10)).unwrap();
        let rec = g.delete(1, 2).unwrap();
        let out = st.apply(&rec).unwrap();
        assert_eq!(out, vec![GtauChange::DeleteLight { key: rec.key }]);
    }

    #[test]
    fn bridge_deletion_repoints_smaller_cluster() {
        // two heavy triangles, {0,1,2} and {3,4,5,6}, joined by a heavy bridge
        let mut edges = vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0), (2, 3, 1.0)];
        edges.extend([(3, 4, 1.0), (4, 5, 1.0), (5, 6, 1.0), (3, 6, 1.0), (4, 6, 1.0)]);
        let mut g = DynamicGraph::from_edges(7, edges).unwrap();
        let mut st = ThresholdState::new(&g, Ratio::new(1, 2)).unwrap();
        assert!(st.heavy_edges().count() == 9);
        let rec = g.delete(2, 3).unwrap();
        let out = st.apply(&rec).unwrap();
        let moved: Vec<VertexId> = out
            .iter()
            .map(|c| match c {
                GtauChange::RepointComponent { vertex, .. } => *vertex,
                other => panic!("unexpected {other:?}"),
            })
            .collect();
        assert_eq!(moved, vec![0, 1, 2]);
        assert_eq!(st.snapshot(), build_gtau_fresh(&g, Ratio::new(1, 2), CutoffSentinel::MinusOne));
    }

    #[test]
    fn increase_demotes_heavy_edge() {
        let mut g = DynamicGraph::from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let tau = Ratio::new(1, 1);
        let mut st = ThresholdState::new(&g, tau).unwrap();
        assert_eq!(st.heavy_edges().count(), 3);
        let rec = g.increase(0, 1, 64.0).unwrap();
        let out = st.apply(&rec).unwrap();
        assert_eq!(out[0], GtauChange::InsertLight { key: rec.key, w: 64.0 });
        assert_eq!(st.snapshot(), build_gtau_fresh(&g, tau, CutoffSentinel::MinusOne));
    }

    #[test]
    fn random_runs_match_fresh_builder_and_mirror() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (run, tau) in [Ratio::new(1, 2), Ratio::from_integer(1), Ratio::from_integer(3), Ratio::new(5, 2)]
            .into_iter()
            .enumerate()
        {
            for sentinel in [CutoffSentinel::MinusOne, CutoffSentinel::Zero] {
                let mut g = random_graph(&mut rng, 25, 90, 16);
                let mut st = ThresholdState::with_options(&g, tau, sentinel, Backend::Hdt).unwrap();
                assert_eq!(st.snapshot(), build_gtau_fresh(&g, tau, sentinel));
                let mut mirror = GtauMirror::from_state(&st);
                let mut keys: Vec<EdgeKey> = g.edges().map(|(k, _)| k).collect();
                keys.shuffle(&mut rng);
                let mut prev_cut = st.cutoffs().to_vec();
                let mut prev_dist = dijkstra(&st.gtau_adjacency(), run);
                for key in keys {
                    let ev = if rng.gen_bool(0.3) {
                        let w = g.edge_weight(key).unwrap() * rng.gen_range(1..5) as f64;
                        UpdateEvent::IncreaseWeight(key, w)
                    } else {
                        UpdateEvent::Delete(key)
                    };
                    let rec = g.apply_update(&ev).unwrap().unwrap();
                    let out = st.apply(&rec).unwrap();
                    mirror.apply(&out).unwrap();
                    assert_eq!(mirror, GtauMirror::from_state(&st));
                    assert_eq!(st.snapshot(), build_gtau_fresh(&g, tau, sentinel), "{sentinel:?} {tau} {ev:?} {out:?}");
                    st.audit().unwrap();
                    for v in 0..25 {
                        assert!(st.cutoff(v) <= prev_cut[v]);
                    }
                    prev_cut = st.cutoffs().to_vec();
                    let d = dijkstra(&st.gtau_adjacency(), run);
                    for v in 0..25 {
                        assert!(d[v] >= prev_dist[v]);
                    }
                    prev_dist = d;
                    if g.edge_count() == 0 {
                        break;
                    }
                }
            }
        }
    }
}
