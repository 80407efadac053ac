//! Exact bounded-depth Even–Shiloach tree for positive integer weights.
//!
//! Each vertex keeps its neighbours ordered by `label(u) + w(u, v)`, so the
//! best reattachment candidate is always the first entry. Vertices awaiting
//! repair are processed in increasing `(label, vertex)` order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, EdgeKey, VertexId};

pub(crate) const INF: u64 = u64::MAX;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EsStats {
    pub label_increases: Vec<u64>,
    pub edge_touches: u64,
    pub queue_pops: u64,
}

#[derive(Clone, Debug)]
pub struct EsTree {
    source: VertexId,
    depth: u64,
    labels: Vec<u64>,
    parent: Vec<Option<VertexId>>,
    adj: Vec<BTreeMap<VertexId, u64>>,
    keys: Vec<BTreeSet<(u64, VertexId)>>,
    stats: EsStats,
}

/// Integer weight of a graph edge, or an error if it is not integral.
pub fn integer_weight(w: f64) -> Result<u64> {
    if w.fract() != 0.0 || w < 1.0 || w > (1u64 << 53) as f64 {
        return Err(Error::NonIntegerWeight(w));
    }
    Ok(w as u64)
}

impl EsTree {
    pub fn new(n: usize, edges: &[(VertexId, VertexId, u64)], source: VertexId, depth: u64) -> Result<Self> {
        if source >= n {
            return Err(Error::VertexOutOfRange { vertex: source, n });
        }
        if depth == 0 {
            return Err(Error::InvalidDepth(depth));
        }
        let mut adj = vec![BTreeMap::new(); n];
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            let key = EdgeKey::new(u, v)?;
            if w == 0 {
                return Err(Error::NonIntegerWeight(0.0));
            }
            if adj[u].contains_key(&v) {
                return Err(Error::DuplicateEdge(key.u(), key.v()));
            }
            adj[u].insert(v, w);
            adj[v].insert(u, w);
        }
        let lists: Vec<Vec<(VertexId, u64)>> =
            adj.iter().map(|a| a.iter().map(|(&u, &w)| (u, w)).collect()).collect();
        let labels: Vec<u64> = crate::oracle::dijkstra_int(&lists, source)
            .into_iter()
            .map(|d| match d {
                Some(x) if x <= depth => x,
                _ => INF,
            })
            .collect();
        let mut keys = vec![BTreeSet::new(); n];
        for v in 0..n {
            for (&u, &w) in &adj[v] {
                keys[v].insert((labels[u].saturating_add(w), u));
            }
        }
        let parent = (0..n)
            .map(|v| {
                if v == source || labels[v] == INF {
                    None
                } else {
                    keys[v].first().map(|&(_, u)| u)
                }
            })
            .collect();
        Ok(EsTree {
            source,
            depth,
            labels,
            parent,
            adj,
            keys,
            stats: EsStats {
                label_increases: vec![0; n],
                ..Default::default()
            },
        })
    }

    pub fn from_graph(g: &DynamicGraph, source: VertexId, depth: u64) -> Result<Self> {
        let edges = g
            .edges()
            .map(|(k, w)| Ok((k.u(), k.v(), integer_weight(w)?)))
            .collect::<Result<Vec<_>>>()?;
        EsTree::new(g.n(), &edges, source, depth)
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    /// `None` stands for infinity.
    pub fn label(&self, v: VertexId) -> Option<u64> {
        (self.labels[v] != INF).then_some(self.labels[v])
    }

    pub fn labels(&self) -> Vec<Option<u64>> {
        (0..self.labels.len()).map(|v| self.label(v)).collect()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn stats(&self) -> &EsStats {
        &self.stats
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        let key = EdgeKey::new(u, v)?;
        let w = self
            .adj
            .get_mut(u)
            .and_then(|a| a.remove(&v))
            .ok_or(Error::EdgeNotFound(key.u(), key.v()))?;
        self.adj[v].remove(&u);
        self.keys[v].remove(&(self.labels[u].saturating_add(w), u));
        self.keys[u].remove(&(self.labels[v].saturating_add(w), v));
        self.stats.edge_touches += 1;
        self.repair_after_edge_change(u, v);
        Ok(())
    }

    pub fn increase(&mut self, u: VertexId, v: VertexId, new_w: u64) -> Result<()> {
        let key = EdgeKey::new(u, v)?;
        let old = *self
            .adj
            .get(u)
            .and_then(|a| a.get(&v))
            .ok_or(Error::EdgeNotFound(key.u(), key.v()))?;
        if new_w < old {
            return Err(Error::WeightDecrease {
                u,
                v,
                old: old as f64,
                new: new_w as f64,
            });
        }
        if new_w == old {
            return Ok(());
        }
        self.adj[u].insert(v, new_w);
        self.adj[v].insert(u, new_w);
        for (x, y) in [(u, v), (v, u)] {
            self.keys[x].remove(&(self.labels[y].saturating_add(old), y));
            self.keys[x].insert((self.labels[y].saturating_add(new_w), y));
        }
        self.stats.edge_touches += 1;
        self.repair_after_edge_change(u, v);
        Ok(())
    }

    fn repair_after_edge_change(&mut self, u: VertexId, v: VertexId) {
        let mut heap = BinaryHeap::new();
        let mut queued = vec![false; self.labels.len()];
        for (x, y) in [(u, v), (v, u)] {
            if self.parent[y] == Some(x) {
                self.enqueue(&mut heap, &mut queued, y);
            }
        }
        while let Some(Reverse((label, x))) = heap.pop() {
            if !queued[x] || self.labels[x] != label {
                continue;
            }
            queued[x] = false;
            self.stats.queue_pops += 1;
            let best = self.keys[x].first().copied();
            let m = best.map_or(INF, |(k, _)| k);
            let new = if m > self.depth { INF } else { m };
            if new <= self.labels[x] {
                self.parent[x] = best.map(|(_, p)| p);
                continue;
            }
            let old = self.labels[x];
            self.labels[x] = new;
            self.parent[x] = if new == INF { None } else { best.map(|(_, p)| p) };
            self.stats.label_increases[x] += 1;
            let nbrs: Vec<(VertexId, u64)> = self.adj[x].iter().map(|(&y, &w)| (y, w)).collect();
            for (y, w) in nbrs {
                self.keys[y].remove(&(old.saturating_add(w), x));
                self.keys[y].insert((new.saturating_add(w), x));
                self.stats.edge_touches += 1;
                if self.parent[y] == Some(x) {
                    self.enqueue(&mut heap, &mut queued, y);
                }
            }
        }
    }

    fn enqueue(&self, heap: &mut BinaryHeap<Reverse<(u64, VertexId)>>, queued: &mut [bool], x: VertexId) {
        if x == self.source || self.labels[x] == INF {
            return;
        }
        queued[x] = true;
        heap.push(Reverse((self.labels[x], x)));
    }

    /// Tree and relaxation invariants, with labels above the depth bound
    /// treated as infinite.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        if self.labels[self.source] != 0 {
            return Err("source label is not zero".into());
        }
        for v in 0..self.labels.len() {
            if let Some(p) = self.parent[v] {
                let w = self.adj[v][&p];
                if self.labels[v] != self.labels[p].saturating_add(w) {
                    return Err(format!("tree edge ({p}, {v}) not tight"));
                }
            }
            for (&u, &w) in &self.adj[v] {
                let via = self.labels[u].saturating_add(w);
                if via <= self.depth && self.labels[v] > via {
                    return Err(format!("edge ({u}, {v}) violates relaxation"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dijkstra_int;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bounded(d: Vec<Option<u64>>, depth: u64) -> Vec<Option<u64>> {
        d.into_iter().map(|x| x.filter(|&v| v <= depth)).collect()
    }

    #[test]
    fn path_labels_and_depth_cutoff() {
        let t = EsTree::new(3, &[(0, 1, 1), (1, 2, 1)], 0, 10).unwrap();
        assert_eq!(t.labels(), vec![Some(0), Some(1), Some(2)]);
        let t = EsTree::new(3, &[(0, 1, 1), (1, 2, 1)], 0, 1).unwrap();
        assert_eq!(t.labels(), vec![Some(0), Some(1), None]);
    }

    #[test]
    fn non_tree_deletion_changes_nothing() {
        let mut t = EsTree::new(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 5)], 0, 10).unwrap();
        let before = t.labels();
        t.delete(0, 2).unwrap();
        assert_eq!(t.labels(), before);
        assert_eq!(t.stats().label_increases.iter().sum::<u64>(), 0);
    }

    #[test]
    fn tree_deletion_reroutes() {
        let mut t = EsTree::new(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 5)], 0, 10).unwrap();
        t.delete(1, 2).unwrap();
        assert_eq!(t.label(2), Some(5));
        assert_eq!(t.parent(2), Some(0));
        t.check_invariants().unwrap();
    }

    #[test]
    fn errors() {
        let mut t = EsTree::new(3, &[(0, 1, 3)], 0, 10).unwrap();
        assert!(matches!(t.delete(1, 2), Err(Error::EdgeNotFound(1, 2))));
        assert!(matches!(t.increase(0, 1, 2), Err(Error::WeightDecrease { .. })));
        let g = DynamicGraph::from_edges(2, [(0, 1, 1.5)]).unwrap();
        assert!(matches!(EsTree::from_graph(&g, 0, 5), Err(Error::NonIntegerWeight(_))));
    }

    #[test]
    fn random_decremental_run_matches_dijkstra() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 40;
        for _ in 0..5 {
            let mut g = DynamicGraph::new(n);
            while g.edge_count() < 200 {
                let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                let _ = g.insert_edge(u, v, rng.gen_range(1..10) as f64);
            }
            let depth = 25;
            let mut t = EsTree::from_graph(&g, 0, depth).unwrap();
            let mut keys: Vec<EdgeKey> = g.edges().map(|(k, _)| k).collect();
            keys.shuffle(&mut rng);
            for (step, key) in keys.into_iter().enumerate() {
                if step % 3 == 0 {
                    let w = g.edge_weight(key).unwrap() + rng.gen_range(1..4) as f64;
                    g.increase(key.u(), key.v(), w).unwrap();
                    t.increase(key.u(), key.v(), w as u64).unwrap();
                } else {
                    g.delete(key.u(), key.v()).unwrap();
                    t.delete(key.u(), key.v()).unwrap();
                }
                let adj: Vec<Vec<(usize, u64)>> = g
                    .adjacency_lists()
                    .into_iter()
                    .map(|a| a.into_iter().map(|(u, w)| (u, w as u64)).collect())
                    .collect();
                assert_eq!(t.labels(), bounded(dijkstra_int(&adj, 0), depth));
                t.check_invariants().unwrap();
            }
            assert!(t.stats().label_increases.iter().all(|&c| c <= depth));
        }
    }
}
