use std::collections::{BTreeSet, VecDeque};

use super::{ConnectivityStats, SplitReport};
use crate::error::{Error, Result};
use crate::graph::{EdgeKey, VertexId};

/// Recomputes components by breadth-first search after every change.
#[derive(Clone, Debug)]
pub struct NaiveForest {
    n: usize,
    adj: Vec<BTreeSet<VertexId>>,
    comp: Vec<usize>,
    size: Vec<usize>,
    stats: ConnectivityStats,
}

impl NaiveForest {
    pub fn new(n: usize) -> Self {
        NaiveForest {
            n,
            adj: vec![BTreeSet::new(); n],
            comp: (0..n).collect(),
            size: vec![1; n],
            stats: ConnectivityStats::default(),
        }
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    fn recompute(&mut self) {
        let (comp, size) = components(&self.adj);
        self.comp = comp;
        self.size = size;
    }

    pub fn stats(&self) -> ConnectivityStats {
        self.stats
    }

    pub fn contains(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n && self.adj[u].contains(&v)
    }

    pub fn insert(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        let key = EdgeKey::new(u, v)?;
        if self.adj[u].contains(&v) {
            return Err(Error::DuplicateEdge(key.u(), key.v()));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.stats.inserts += 1;
        self.recompute();
        Ok(())
    }

    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<SplitReport> {
        self.check(u)?;
        self.check(v)?;
        let key = EdgeKey::new(u, v)?;
        if !self.adj[u].remove(&v) {
            return Err(Error::EdgeNotFound(key.u(), key.v()));
        }
        self.adj[v].remove(&u);
        self.stats.deletes += 1;
        self.recompute();
        if self.comp[u] == self.comp[v] {
            return Ok(SplitReport::joined(self.comp[u]));
        }
        let (cu, cv) = (self.comp[u], self.comp[v]);
        let (su, sv) = (self.size[u], self.size[v]);
        let small_is_u = su < sv || (su == sv && cu > cv);
        let (small, surviving) = if small_is_u { (cu, cv) } else { (cv, cu) };
        let side: Vec<VertexId> = (0..self.n).filter(|&x| self.comp[x] == small).collect();
        self.stats.splits += 1;
        self.stats.enumerated += side.len() as u64;
        Ok(SplitReport {
            split: true,
            smaller_side: side,
            surviving_component: surviving,
        })
    }

    pub fn connected(&self, u: VertexId, v: VertexId) -> bool {
        self.comp[u] == self.comp[v]
    }

    pub fn component_size(&self, u: VertexId) -> usize {
        self.size[u]
    }

    pub fn component_id(&self, u: VertexId) -> usize {
        self.comp[u]
    }
}

/// Component labels (smallest member index) and per-vertex component sizes.
pub fn components(adj: &[BTreeSet<VertexId>]) -> (Vec<usize>, Vec<usize>) {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut size = vec![0; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = s;
        queue.push_back(s);
        let mut members = vec![s];
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if comp[y] == usize::MAX {
                    comp[y] = s;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        for &m in &members {
            size[m] = members.len();
        }
    }
    (comp, size)
}
