//! Exact reference computations used by tests and the acceptance suite:
//! static shortest paths, a from-scratch threshold-graph builder, and the
//! additive-error sandwich check. Clarity over speed throughout.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use num_rational::Ratio;

use crate::connectivity::components;
use crate::graph::{DynamicGraph, EdgeKey, VertexId};
use crate::numeric::{level, meets_threshold};
use crate::threshold::CutoffSentinel;

/// Exact distances from one source; `f64::INFINITY` when unreachable.
pub type DistanceVector = Vec<f64>;

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

pub fn dijkstra(adj: &[Vec<(VertexId, f64)>], s: VertexId) -> DistanceVector {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Reverse((Key(0.0), s)));
    while let Some(Reverse((Key(d), x))) = heap.pop() {
        if d > dist[x] {
            continue;
        }
        for &(y, w) in &adj[x] {
            let nd = d + w;
            if nd < dist[y] {
                dist[y] = nd;
                heap.push(Reverse((Key(nd), y)));
            }
        }
    }
    dist
}

pub fn dijkstra_graph(g: &DynamicGraph, s: VertexId) -> DistanceVector {
    dijkstra(&g.adjacency_lists(), s)
}

/// Integer-weight distances; `None` when unreachable.
pub fn dijkstra_int(adj: &[Vec<(VertexId, u64)>], s: VertexId) -> Vec<Option<u64>> {
    let mut dist: Vec<Option<u64>> = vec![None; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(0);
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, x))) = heap.pop() {
        if Some(d) != dist[x] {
            continue;
        }
        for &(y, w) in &adj[x] {
            let nd = d + w;
            if dist[y].is_none_or(|cur| nd < cur) {
                dist[y] = Some(nd);
                heap.push(Reverse((nd, y)));
            }
        }
    }
    dist
}

pub fn bellman_ford(adj: &[Vec<(VertexId, f64)>], s: VertexId) -> DistanceVector {
    let n = adj.len();
    let mut dist = vec![f64::INFINITY; n];
    dist[s] = 0.0;
    for _ in 0..n {
        let mut changed = false;
        for x in 0..n {
            if dist[x].is_infinite() {
                continue;
            }
            for &(y, w) in &adj[x] {
                if dist[x] + w < dist[y] {
                    dist[y] = dist[x] + w;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Threshold graph built directly from its definition.
#[derive(Clone, Debug, PartialEq)]
pub struct FreshThresholdGraph {
    pub n: usize,
    pub cutoffs: Vec<i32>,
    pub heavy: BTreeSet<EdgeKey>,
    pub light: BTreeMap<EdgeKey, f64>,
    /// Heavy-subgraph component label (smallest member) per vertex.
    pub component: Vec<usize>,
}

pub fn cutoff_by_enumeration(
    incident_levels: &[i32],
    tau: Ratio<u64>,
    sentinel: CutoffSentinel,
) -> i32 {
    // levels above every incident edge still count: there |I_i| is the degree
    let mut best = None;
    for i in 0..64 {
        let count = incident_levels.iter().filter(|&&l| l <= i).count() as u64;
        if meets_threshold(count, tau, i as u32) {
            best = Some(i);
        }
    }
    match (best, sentinel) {
        (Some(i), _) => i,
        (None, CutoffSentinel::MinusOne) => -1,
        (None, CutoffSentinel::Zero) => 0,
    }
}

pub fn build_gtau_fresh(g: &DynamicGraph, tau: Ratio<u64>, sentinel: CutoffSentinel) -> FreshThresholdGraph {
    let n = g.n();
    let cutoffs: Vec<i32> = (0..n)
        .map(|v| {
            let levels: Vec<i32> = g.neighbors(v).map(|(_, w)| level(w).unwrap()).collect();
            cutoff_by_enumeration(&levels, tau, sentinel)
        })
        .collect();
    let mut heavy = BTreeSet::new();
    let mut light = BTreeMap::new();
    let mut heavy_adj = vec![BTreeSet::new(); n];
    for (key, w) in g.edges() {
        let l = level(w).unwrap();
        if l <= cutoffs[key.u()] || l <= cutoffs[key.v()] {
            heavy.insert(key);
            heavy_adj[key.u()].insert(key.v());
            heavy_adj[key.v()].insert(key.u());
        } else {
            light.insert(key, w);
        }
    }
    let (component, _) = components(&heavy_adj);
    FreshThresholdGraph {
        n,
        cutoffs,
        heavy,
        light,
        component,
    }
}

impl FreshThresholdGraph {
    /// Adjacency over `n` original vertices followed by one vertex per heavy
    /// component, in order of the component's smallest member.
    pub fn adjacency(&self) -> Vec<Vec<(VertexId, f64)>> {
        let labels: BTreeSet<usize> = self.component.iter().copied().collect();
        let index: BTreeMap<usize, usize> =
            labels.iter().enumerate().map(|(i, &c)| (c, self.n + i)).collect();
        let mut adj = vec![Vec::new(); self.n + labels.len()];
        for (key, &w) in &self.light {
            adj[key.u()].push((key.v(), w));
            adj[key.v()].push((key.u(), w));
        }
        for v in 0..self.n {
            let c = index[&self.component[v]];
            adj[v].push((c, 0.5));
            adj[c].push((v, 0.5));
        }
        adj
    }

    pub fn distances(&self, s: VertexId) -> DistanceVector {
        let mut d = dijkstra(&self.adjacency(), s);
        d.truncate(self.n);
        d
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichViolation {
    pub s: VertexId,
    pub t: VertexId,
    pub dist: f64,
    pub dist_tau: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SandwichReport {
    pub checked: usize,
    pub violations: Vec<SandwichViolation>,
}

/// Checks `dist_tau(s,t) <= dist(s,t) < dist_tau(s,t) + 14 n / tau` for
/// every pair.
pub fn check_sandwich(
    g: &DynamicGraph,
    gtau: &FreshThresholdGraph,
    tau: Ratio<u64>,
    pairs: &[(VertexId, VertexId)],
) -> SandwichReport {
    let slack = 14.0 * g.n() as f64 * *tau.denom() as f64 / *tau.numer() as f64;
    let adj = g.adjacency_lists();
    let mut report = SandwichReport::default();
    let mut cache: BTreeMap<VertexId, (DistanceVector, DistanceVector)> = BTreeMap::new();
    for &(s, t) in pairs {
        let (d, dt) = cache
            .entry(s)
            .or_insert_with(|| (dijkstra(&adj, s), gtau.distances(s)));
        let (dist, dist_tau) = (d[t], dt[t]);
        report.checked += 1;
        let ok = if dist.is_infinite() || dist_tau.is_infinite() {
            dist.is_infinite() && dist_tau.is_infinite()
        } else {
            dist_tau <= dist && dist < dist_tau + slack
        };
        if !ok {
            report.violations.push(SandwichViolation { s, t, dist, dist_tau });
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_distances() {
        assert_eq!(dijkstra(&[vec![]], 0), vec![0.0]);
        let g = DynamicGraph::from_edges(3, [(0, 1, 2.0), (1, 2, 3.0)]).unwrap();
        assert_eq!(dijkstra_graph(&g, 0), vec![0.0, 2.0, 5.0]);
        let g = DynamicGraph::from_edges(3, [(0, 1, 2.0)]).unwrap();
        assert!(dijkstra_graph(&g, 0)[2].is_infinite());
    }

    #[test]
    fn dijkstra_matches_bellman_ford() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut g = DynamicGraph::new(50);
            for _ in 0..150 {
                let (u, v) = (rng.gen_range(0..50), rng.gen_range(0..50));
                let _ = g.insert_edge(u, v, rng.gen_range(1..40) as f64 + 0.25);
            }
            let adj = g.adjacency_lists();
            assert_eq!(dijkstra(&adj, 0), bellman_ford(&adj, 0));
            let int_adj: Vec<Vec<(usize, u64)>> = adj
                .iter()
                .map(|a| a.iter().map(|&(u, w)| (u, (w * 4.0) as u64)).collect())
                .collect();
            let di = dijkstra_int(&int_adj, 0);
            for (x, y) in di.iter().zip(dijkstra(&adj, 0)) {
                assert_eq!(x.map(|v| v as f64 / 4.0).unwrap_or(f64::INFINITY), y);
            }
        }
    }

    #[test]
    fn cutoff_enumeration_example() {
        // weights {1,1,1,1,3,10}, tau = 2
        let levels = [0, 0, 0, 0, 1, 3];
        assert_eq!(cutoff_by_enumeration(&levels, Ratio::from_integer(2), CutoffSentinel::MinusOne), 1);
        assert_eq!(cutoff_by_enumeration(&[0], Ratio::from_integer(10), CutoffSentinel::MinusOne), -1);
        assert_eq!(cutoff_by_enumeration(&[0], Ratio::from_integer(10), CutoffSentinel::Zero), 0);
    }

    #[test]
    fn all_light_graph_is_g_plus_singletons() {
        let g = DynamicGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 5.0), (2, 3, 2.0)]).unwrap();
        let tau = Ratio::from_integer(10);
        let gt = build_gtau_fresh(&g, tau, CutoffSentinel::MinusOne);
        assert!(gt.heavy.is_empty());
        assert_eq!(gt.light.len(), 3);
        assert_eq!(gt.adjacency().len(), 8);
        assert_eq!(gt.distances(0), dijkstra_graph(&g, 0));
        let rep = check_sandwich(&g, &gt, tau, &[(0, 3), (1, 2)]);
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn all_heavy_graph_collapses_components() {
        let g = DynamicGraph::from_edges(4, [(0, 1, 9.0), (1, 2, 9.0), (2, 3, 9.0)]).unwrap();
        let tau = Ratio::new(1, 100);
        let gt = build_gtau_fresh(&g, tau, CutoffSentinel::MinusOne);
        assert_eq!(gt.heavy.len(), 3);
        assert!(gt.light.is_empty());
        assert_eq!(gt.distances(0), vec![0.0, 1.0, 1.0, 1.0]);
        let rep = check_sandwich(&g, &gt, tau, &[(0, 1), (0, 3)]);
        assert_eq!(rep.checked, 2);
        assert!(rep.violations.is_empty());
    }
}
