//! The mutable weighted undirected graph and its update-event model.
//!
//! `DynamicGraph` is the single source of truth for weights and levels. Every
//! mutation returns a [`ChangeRecord`] which downstream structures consume
//! instead of rescanning the graph.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::numeric::level;

pub type VertexId = usize;

/// Canonical unordered vertex pair, `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    u: VertexId,
    v: VertexId,
}

impl EdgeKey {
    pub fn new(a: VertexId, b: VertexId) -> Result<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(EdgeKey { u: a, v: b }),
            std::cmp::Ordering::Greater => Ok(EdgeKey { u: b, v: a }),
            std::cmp::Ordering::Equal => Err(Error::SelfLoop(a)),
        }
    }

    pub fn u(&self) -> VertexId {
        self.u
    }

    pub fn v(&self) -> VertexId {
        self.v
    }

    pub fn endpoints(&self) -> (VertexId, VertexId) {
        (self.u, self.v)
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// One appearance of an edge. A delete followed by a re-insert of the same
/// pair is a new appearance with a larger epoch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeAppearance {
    pub key: EdgeKey,
    pub w_o: f64,
    pub level_o: i32,
    pub epoch: u32,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UpdateEvent {
    Delete(EdgeKey),
    IncreaseWeight(EdgeKey, f64),
    QueryDistance(VertexId),
}

/// Effect of one update on a single edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChangeRecord {
    pub key: EdgeKey,
    pub old_weight: f64,
    pub old_level: i32,
    /// `None` when the edge was removed.
    pub new_weight: Option<f64>,
    pub new_level: Option<i32>,
}

impl ChangeRecord {
    pub fn removed(&self) -> bool {
        self.new_weight.is_none()
    }
}

#[derive(Clone, Debug)]
struct EdgeState {
    weight: f64,
    level: i32,
    appearance: EdgeAppearance,
}

#[derive(Clone, Debug)]
pub struct DynamicGraph {
    n: usize,
    adj: Vec<BTreeMap<VertexId, f64>>,
    edges: BTreeMap<EdgeKey, EdgeState>,
    epochs: HashMap<EdgeKey, u32>,
}

impl DynamicGraph {
    pub fn new(n: usize) -> Self {
        DynamicGraph {
            n,
            adj: vec![BTreeMap::new(); n],
            edges: BTreeMap::new(),
            epochs: HashMap::new(),
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId, f64)>,
    {
        let mut g = DynamicGraph::new(n);
        for (u, v, w) in edges {
            g.insert_edge(u, v, w)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n {
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        Ok(())
    }

    fn check_weight(w: f64) -> Result<()> {
        if !w.is_finite() || w < 1.0 {
            return Err(Error::InvalidWeight(w));
        }
        Ok(())
    }

    /// Adds an edge; used to build the initial graph.
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId, w: f64) -> Result<EdgeAppearance> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let key = EdgeKey::new(u, v)?;
        Self::check_weight(w)?;
        if self.edges.contains_key(&key) {
            return Err(Error::DuplicateEdge(key.u, key.v));
        }
        let epoch = self.epochs.entry(key).or_insert(0);
        let appearance = EdgeAppearance {
            key,
            w_o: w,
            level_o: level(w)?,
            epoch: *epoch,
        };
        *epoch += 1;
        self.adj[key.u].insert(key.v, w);
        self.adj[key.v].insert(key.u, w);
        self.edges.insert(
            key,
            EdgeState {
                weight: w,
                level: appearance.level_o,
                appearance,
            },
        );
        Ok(appearance)
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        self.adj.get(u).and_then(|a| a.get(&v)).copied()
    }

    pub fn edge_weight(&self, key: EdgeKey) -> Option<f64> {
        self.edges.get(&key).map(|e| e.weight)
    }

    pub fn edge_level(&self, key: EdgeKey) -> Option<i32> {
        self.edges.get(&key).map(|e| e.level)
    }

    pub fn appearance(&self, key: EdgeKey) -> Option<EdgeAppearance> {
        self.edges.get(&key).map(|e| e.appearance)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.adj[v].iter().map(|(&u, &w)| (u, w))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    /// Live edges in key order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeKey, f64)> + '_ {
        self.edges.iter().map(|(&k, e)| (k, e.weight))
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.values().map(|e| e.weight).fold(0.0, f64::max)
    }

    /// Applies one update. Queries do not touch the graph and yield `None`.
    pub fn apply_update(&mut self, event: &UpdateEvent) -> Result<Option<ChangeRecord>> {
        match *event {
            UpdateEvent::QueryDistance(v) => {
                self.check_vertex(v)?;
                Ok(None)
            }
            UpdateEvent::Delete(key) => {
                let state = self
                    .edges
                    .remove(&key)
                    .ok_or(Error::EdgeNotFound(key.u, key.v))?;
                self.adj[key.u].remove(&key.v);
                self.adj[key.v].remove(&key.u);
                Ok(Some(ChangeRecord {
                    key,
                    old_weight: state.weight,
                    old_level: state.level,
                    new_weight: None,
                    new_level: None,
                }))
            }
            UpdateEvent::IncreaseWeight(key, new_w) => {
                Self::check_weight(new_w)?;
                let state = self
                    .edges
                    .get_mut(&key)
                    .ok_or(Error::EdgeNotFound(key.u, key.v))?;
                if new_w < state.weight {
                    return Err(Error::WeightDecrease {
                        u: key.u,
                        v: key.v,
                        old: state.weight,
                        new: new_w,
                    });
                }
                let record = ChangeRecord {
                    key,
                    old_weight: state.weight,
                    old_level: state.level,
                    new_weight: Some(new_w),
                    new_level: Some(level(new_w)?),
                };
                state.weight = new_w;
                state.level = record.new_level.unwrap();
                self.adj[key.u].insert(key.v, new_w);
                self.adj[key.v].insert(key.u, new_w);
                Ok(Some(record))
            }
        }
    }

    /// Convenience wrapper: delete the edge `(u, v)`.
    pub fn delete(&mut self, u: VertexId, v: VertexId) -> Result<ChangeRecord> {
        let key = EdgeKey::new(u, v)?;
        Ok(self.apply_update(&UpdateEvent::Delete(key))?.expect("edge change"))
    }

    /// Convenience wrapper: raise the weight of `(u, v)` to `w`.
    pub fn increase(&mut self, u: VertexId, v: VertexId, w: f64) -> Result<ChangeRecord> {
        let key = EdgeKey::new(u, v)?;
        Ok(self
            .apply_update(&UpdateEvent::IncreaseWeight(key, w))?
            .expect("edge change"))
    }

    /// Adjacency in plain list form, for oracles.
    pub fn adjacency_lists(&self) -> Vec<Vec<(VertexId, f64)>> {
        self.adj
            .iter()
            .map(|a| a.iter().map(|(&u, &w)| (u, w)).collect())
            .collect()
    }

    /// Checks adjacency symmetry and cached levels; returns a description of
    /// the first inconsistency found.
    pub fn audit(&self) -> std::result::Result<(), String> {
        for (key, state) in &self.edges {
            if self.adj[key.u].get(&key.v) != Some(&state.weight)
                || self.adj[key.v].get(&key.u) != Some(&state.weight)
            {
                return Err(format!("asymmetric adjacency for {key:?}"));
            }
            if level(state.weight).ok() != Some(state.level) {
                return Err(format!("stale level for {key:?}"));
            }
            if state.weight < state.appearance.w_o || state.weight < 1.0 {
                return Err(format!("weight of {key:?} below its original weight"));
            }
        }
        let half_edges: usize = self.adj.iter().map(|a| a.len()).sum();
        if half_edges != 2 * self.edges.len() {
            return Err("adjacency holds edges missing from the edge table".into());
        }
        Ok(())
    }
}
