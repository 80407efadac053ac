//! Holm–de Lichtenberg–Thorup fully dynamic connectivity.
//!
//! Every edge carries a level in `0..=L`, `L = floor(log2 n)`. Forest `F_i`
//! holds the spanning-forest edges of level `>= i`, so `F_0` spans the graph.
//! A tree of `F_i` never has more than `n / 2^i` vertices; that bound is what
//! caps the number of times an edge can be promoted.

use std::collections::{BTreeSet, HashMap};

use super::euler::EulerForest;
use super::{ConnectivityStats, SplitReport};
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, VertexId};

const TREE: u8 = 1;
const NONTREE: u8 = 2;

#[derive(Clone, Debug)]
struct HdtEdge {
    level: usize,
    // (uv, vu) node pairs in F_0..=F_level; empty for non-tree edges
    tree_nodes: Vec<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct HdtForest {
    n: usize,
    max_level: usize,
    ett: EulerForest,
    edges: HashMap<EdgeKey, HdtEdge>,
    nontree: Vec<Vec<BTreeSet<VertexId>>>,
    stats: ConnectivityStats,
}

impl HdtForest {
    pub fn new(n: usize) -> Self {
        let max_level = if n <= 1 { 0 } else { (usize::BITS - 1 - n.leading_zeros()) as usize };
        let mut ett = EulerForest::new();
        for _ in 0..=max_level {
            for v in 0..n {
                ett.add_vertex(v as u32);
            }
        }
        HdtForest {
            n,
            max_level,
            ett,
            edges: HashMap::new(),
            nontree: vec![vec![BTreeSet::new(); n]; max_level + 1],
            stats: ConnectivityStats::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    // vertex nodes were allocated level-major before any edge node
    fn vnode(&self, level: usize, v: VertexId) -> u32 {
        (level * self.n + v) as u32
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    pub fn stats(&self) -> ConnectivityStats {
        ConnectivityStats {
            rotations: self.ett.rotations,
            ..self.stats
        }
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        EdgeKey::new(u, v).map(|k| self.edges.contains_key(&k)).unwrap_or(false)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn connected(&mut self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = (self.vnode(0, u), self.vnode(0, v));
        self.ett.same_tree(a, b)
    }

    pub fn component_size(&mut self, u: VertexId) -> usize {
        let a = self.vnode(0, u);
        self.ett.tree_size(a) as usize
    }

    /// Smallest vertex index of the component.
    pub fn component_id(&mut self, u: VertexId) -> usize {
        let a = self.vnode(0, u);
        self.ett.tree_min(a) as usize
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        let key = EdgeKey::new(u, v)?;
        if self.edges.contains_key(&key) {
            return Err(Error::DuplicateEdge(key.u(), key.v()));
        }
        self.stats.inserts += 1;
        if self.connected(u, v) {
            self.add_nontree(key, 0);
            self.edges.insert(key, HdtEdge { level: 0, tree_nodes: Vec::new() });
        } else {
            let mut edge = HdtEdge { level: 0, tree_nodes: Vec::new() };
            self.link_at(key, 0, &mut edge);
            self.ett.set_flag(edge.tree_nodes[0].0, TREE, true);
            self.edges.insert(key, edge);
        }
        Ok(())
    }

    fn link_at(&mut self, key: EdgeKey, level: usize, edge: &mut HdtEdge) {
        let (u, v) = key.endpoints();
        let uv = self.ett.add_edge_node(u as u32, v as u32);
        let vu = self.ett.add_edge_node(v as u32, u as u32);
        let (a, b) = (self.vnode(level, u), self.vnode(level, v));
        self.ett.link(a, b, uv, vu);
        debug_assert_eq!(edge.tree_nodes.len(), level);
        edge.tree_nodes.push((uv, vu));
        self.stats.links += 1;
    }

    fn add_nontree(&mut self, key: EdgeKey, level: usize) {
        let (u, v) = key.endpoints();
        for (x, y) in [(u, v), (v, u)] {
            let set = &mut self.nontree[level][x];
            let was_empty = set.is_empty();
            set.insert(y);
            if was_empty {
                let node = self.vnode(level, x);
                self.ett.set_flag(node, NONTREE, true);
            }
        }
    }

    fn remove_nontree(&mut self, key: EdgeKey, level: usize) {
        let (u, v) = key.endpoints();
        for (x, y) in [(u, v), (v, u)] {
            let set = &mut self.nontree[level][x];
            set.remove(&y);
            if set.is_empty() {
                let node = self.vnode(level, x);
                self.ett.set_flag(node, NONTREE, false);
            }
        }
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<SplitReport> {
        self.check(u)?;
        self.check(v)?;
        let key = EdgeKey::new(u, v)?;
        let edge = self
            .edges
            .remove(&key)
            .ok_or(Error::EdgeNotFound(key.u(), key.v()))?;
        self.stats.deletes += 1;
        if edge.tree_nodes.is_empty() {
            self.remove_nontree(key, edge.level);
            return Ok(SplitReport::joined(self.component_id(u)));
        }
        for &(uv, vu) in &edge.tree_nodes {
            self.ett.cut(uv, vu);
            self.ett.release(uv);
            self.ett.release(vu);
            self.stats.cuts += 1;
        }
        for level in (0..=edge.level).rev() {
            if self.replace(u, v, level) {
                return Ok(SplitReport::joined(self.component_id(u)));
            }
        }
        Ok(self.split_report(u, v))
    }

    /// Searches level `level` for an edge reconnecting the trees of `u` and
    /// `v` in `F_level`, promoting everything it inspects inside the smaller
    /// tree. Links the replacement into `F_0..=F_level` when found.
    fn replace(&mut self, u: VertexId, v: VertexId, level: usize) -> bool {
        let (nu, nv) = (self.vnode(level, u), self.vnode(level, v));
        let small = if self.ett.tree_size(nu) <= self.ett.tree_size(nv) { u } else { v };
        let small_node = self.vnode(level, small);

        while let Some(node) = self.ett.find_flag(small_node, TREE) {
            self.ett.set_flag(node, TREE, false);
            let (a, b) = self.ett.edge_of(node);
            let key = EdgeKey::new(a as usize, b as usize).expect("tree edge");
            let mut edge = self.edges.remove(&key).expect("tree edge registered");
            debug_assert_eq!(edge.level, level);
            edge.level = level + 1;
            assert!(edge.level <= self.max_level, "connectivity level overflow");
            self.link_at(key, level + 1, &mut edge);
            let fresh = edge.tree_nodes[level + 1].0;
            self.ett.set_flag(fresh, TREE, true);
            self.edges.insert(key, edge);
            self.stats.level_raises += 1;
        }

        while let Some(node) = self.ett.find_flag(small_node, NONTREE) {
            let x = self.ett.vertex_of(node) as usize;
            while let Some(&y) = self.nontree[level][x].iter().next() {
                self.stats.nontree_scans += 1;
                let key = EdgeKey::new(x, y).expect("non-tree edge");
                let (nx, ny) = (self.vnode(level, x), self.vnode(level, y));
                self.remove_nontree(key, level);
                if self.ett.same_tree(nx, ny) {
                    assert!(level < self.max_level, "connectivity level overflow");
                    self.add_nontree(key, level + 1);
                    self.edges.get_mut(&key).expect("registered").level = level + 1;
                    self.stats.level_raises += 1;
                } else {
                    let mut edge = self.edges.remove(&key).expect("registered");
                    for j in 0..=level {
                        self.link_at(key, j, &mut edge);
                    }
                    self.ett.set_flag(edge.tree_nodes[level].0, TREE, true);
                    self.edges.insert(key, edge);
                    return true;
                }
            }
        }
        false
    }

    fn split_report(&mut self, u: VertexId, v: VertexId) -> SplitReport {
        let (nu, nv) = (self.vnode(0, u), self.vnode(0, v));
        let (su, sv) = (self.ett.tree_size(nu), self.ett.tree_size(nv));
        let (mu, mv) = (self.ett.tree_min(nu), self.ett.tree_min(nv));
        // ties go to the side without the lowest vertex
        let small_is_u = su < sv || (su == sv && mu > mv);
        let (small, surviving) = if small_is_u { (nu, mv) } else { (nv, mu) };
        let mut side: Vec<VertexId> = self
            .ett
            .collect_vertices(small)
            .into_iter()
            .map(|x| x as usize)
            .collect();
        side.sort_unstable();
        self.stats.splits += 1;
        self.stats.enumerated += side.len() as u64;
        SplitReport {
            split: true,
            smaller_side: side,
            surviving_component: surviving as usize,
        }
    }

    /// Structural self-check: tree-size bound per level, forest nesting, and
    /// non-tree edges spanning a single tree at their level.
    pub fn audit(&mut self) -> std::result::Result<(), String> {
        for level in 0..=self.max_level {
            for v in 0..self.n {
                let node = self.vnode(level, v);
                let size = self.ett.tree_size(node) as usize;
                if size > self.n >> level {
                    return Err(format!("tree of {v} at level {level} has {size} vertices"));
                }
            }
        }
        let keys: Vec<_> = self.edges.iter().map(|(k, e)| (*k, e.level, e.tree_nodes.len())).collect();
        for (key, level, tree_len) in keys {
            let (u, v) = key.endpoints();
            if tree_len > 0 && tree_len != level + 1 {
                return Err(format!("tree edge {key:?} missing from a forest"));
            }
            let (a, b) = (self.vnode(level, u), self.vnode(level, v));
            if !self.ett.same_tree(a, b) {
                return Err(format!("edge {key:?} spans two trees at its level {level}"));
            }
            if tree_len == 0
                && !(self.nontree[level][u].contains(&v) && self.nontree[level][v].contains(&u))
            {
                return Err(format!("non-tree edge {key:?} missing from level {level} lists"));
            }
        }
        Ok(())
    }
}
