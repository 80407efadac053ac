//! Layered decremental SSSP.
//!
//! Layer `i` handles distances around `d = 2^i`. It keeps the threshold graph
//! for `tau = n / (eps * d)`, rounds its weights up to multiples of
//! `beta = d * eps / (2n)`, divides by `beta`, and runs a weight-sensitive ES
//! tree of depth `ceil(2n / eps)` on the resulting integer graph. A layer
//! reports `beta * label + 14 * eps * d`; a query takes the minimum over all
//! layers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, EdgeKey, UpdateEvent, VertexId};
use crate::numeric::{big_to_f64, exact, Epsilon};
use crate::threshold::{GtauChange, ThresholdState};
use crate::wses::{WsesConfig, WsesTree};

/// Scale parameters of one layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayerParams {
    pub i: u32,
    pub d: u64,
    pub tau: Ratio<u64>,
    pub beta: Ratio<u64>,
    pub scaled_depth: u64,
    pub epsilon: Epsilon,
}

impl LayerParams {
    pub fn new(n: usize, epsilon: Epsilon, i: u32) -> Result<Self> {
        if i >= 48 {
            return Err(Error::InvalidDepth(i as u64));
        }
        let (p, q) = (epsilon.numer(), epsilon.denom());
        let n64 = n.max(1) as u64;
        let d = 1u64 << i;
        let overflow = || Error::InvalidThreshold(format!("layer {i} parameters overflow"));
        let tau = Ratio::new(n64.checked_mul(q).ok_or_else(overflow)?, p.checked_mul(d).ok_or_else(overflow)?);
        let beta = Ratio::new(d.checked_mul(p).ok_or_else(overflow)?, 2 * n64 * q);
        let scaled_depth = (2 * n64 * q).div_ceil(p);
        Ok(LayerParams {
            i,
            d,
            tau,
            beta,
            scaled_depth,
            epsilon,
        })
    }

    /// Integer weight `round_mult(beta, w) / beta = floor(w / beta) + 1`.
    pub fn scale(&self, w: f64) -> u64 {
        let beta = BigRational::new(BigInt::from(*self.beta.numer()), BigInt::from(*self.beta.denom()));
        let k: BigInt = (exact(w) / beta).floor().to_integer() + 1;
        k.to_u64().unwrap_or(u64::MAX)
    }

    /// `beta * label + 14 * eps * d`, or infinity.
    pub fn answer(&self, label: Option<u64>) -> f64 {
        let Some(label) = label else {
            return f64::INFINITY;
        };
        let big = |r: Ratio<u64>| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()));
        let offset = self.epsilon.to_big() * BigRational::from_integer(BigInt::from(14 * self.d));
        big_to_f64(&(big(self.beta) * BigRational::from_integer(BigInt::from(label)) + offset))
    }

    /// Additive slack `14 * eps * d` as a float.
    pub fn offset(&self) -> f64 {
        self.answer(Some(0))
    }
}

/// Number of layers for `n` vertices and maximum weight `w_max`:
/// `ceil(log2(n * w_max)) + 1`.
pub fn layer_count(n: usize, w_max: f64) -> u32 {
    let nw = exact(w_max.max(1.0)) * BigRational::from_integer(BigInt::from(n.max(1)));
    let mut i = 0;
    let mut pow = BigRational::from_integer(BigInt::from(1));
    while pow < nw {
        pow *= BigRational::from_integer(BigInt::from(2));
        i += 1;
    }
    i + 1
}

/// Per-layer counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LayerStats {
    pub filtered_inserts: u64,
    pub forwarded: u64,
    pub repointed: u64,
}

/// One depth scale: threshold graph, scaling, and WSES tree.
#[derive(Clone, Debug)]
pub struct ScaledLayer {
    params: LayerParams,
    n: usize,
    threshold: ThresholdState,
    wses: WsesTree,
    // scaled weights of edges present in the WSES, keyed in threshold-graph ids
    scaled: BTreeMap<EdgeKey, u64>,
    stats: LayerStats,
}

impl ScaledLayer {
    pub fn new(g: &DynamicGraph, source: VertexId, params: LayerParams) -> Result<Self> {
        let n = g.n();
        let threshold = ThresholdState::new(g, params.tau)?;
        let half = params.scale(0.5);
        let mut scaled = BTreeMap::new();
        let mut stats = LayerStats::default();
        for (key, w) in threshold.light_edges() {
            if w <= params.d as f64 {
                scaled.insert(key, params.scale(w));
            } else {
                stats.filtered_inserts += 1;
            }
        }
        for v in 0..n {
            scaled.insert(EdgeKey::new(v, n + threshold.component_of(v))?, half);
        }
        let edges: Vec<(VertexId, VertexId, u64)> = scaled.iter().map(|(k, &w)| (k.u(), k.v(), w)).collect();
        let cfg = WsesConfig::new(source, params.scaled_depth, params.epsilon)?;
        let wses = WsesTree::new(2 * n, &edges, cfg)?;
        Ok(ScaledLayer {
            params,
            n,
            threshold,
            wses,
            scaled,
            stats,
        })
    }

    pub fn params(&self) -> &LayerParams {
        &self.params
    }

    pub fn threshold(&self) -> &ThresholdState {
        &self.threshold
    }

    pub fn wses(&self) -> &WsesTree {
        &self.wses
    }

    pub fn stats(&self) -> LayerStats {
        self.stats
    }

    /// The layer's distance estimate for `v`.
    pub fn answer(&self, v: VertexId) -> f64 {
        self.params.answer(self.wses.label(v))
    }

    /// Scaled graph currently held by the WSES tree, over `2n` vertices.
    pub fn scaled_adjacency(&self) -> Vec<Vec<(VertexId, u64)>> {
        let mut adj = vec![Vec::new(); 2 * self.n];
        for (k, &w) in &self.scaled {
            adj[k.u()].push((k.v(), w));
            adj[k.v()].push((k.u(), w));
        }
        adj
    }

    fn forward(&mut self, changes: &[GtauChange]) -> Result<()> {
        let d = self.params.d as f64;
        let mut idx = 0;
        while idx < changes.len() {
            match changes[idx] {
                GtauChange::InsertLight { key, w } => {
                    if w <= d {
                        let sw = self.params.scale(w);
                        self.wses.insert_monotone(key.u(), key.v(), sw)?;
                        self.scaled.insert(key, sw);
                    } else {
                        self.stats.filtered_inserts += 1;
                    }
                }
                GtauChange::DeleteLight { key } => {
                    if self.scaled.remove(&key).is_some() {
                        self.wses.delete(key.u(), key.v())?;
                    }
                }
                GtauChange::IncreaseLight { key, new_w } => {
                    if self.scaled.contains_key(&key) {
                        if new_w > d {
                            self.scaled.remove(&key);
                            self.wses.delete(key.u(), key.v())?;
                        } else {
                            let sw = self.params.scale(new_w);
                            self.wses.increase(key.u(), key.v(), sw)?;
                            self.scaled.insert(key, sw);
                        }
                    }
                }
                GtauChange::RepointComponent { .. } => {
                    let half = self.params.scale(0.5);
                    let mut attach = Vec::new();
                    let mut detach = Vec::new();
                    while let Some(&GtauChange::RepointComponent { vertex, old_c, new_c }) = changes.get(idx) {
                        attach.push((vertex, self.n + new_c, half));
                        detach.push(EdgeKey::new(vertex, self.n + old_c)?);
                        idx += 1;
                    }
                    idx -= 1;
                    self.wses.insert_batch_monotone(&attach)?;
                    for &(u, v, w) in &attach {
                        self.scaled.insert(EdgeKey::new(u, v)?, w);
                    }
                    for key in detach {
                        self.scaled.remove(&key);
                        self.wses.delete(key.u(), key.v())?;
                    }
                    self.stats.repointed += attach.len() as u64;
                }
            }
            self.stats.forwarded += 1;
            idx += 1;
        }
        Ok(())
    }
}

/// All layers plus the graph they follow.
#[derive(Clone, Debug)]
pub struct LayeredSssp {
    graph: DynamicGraph,
    source: VertexId,
    epsilon: Epsilon,
    layers: Vec<ScaledLayer>,
}

impl LayeredSssp {
    /// Builds one layer per scale `0..layer_count(n, w_max)`.
    pub fn new(g: DynamicGraph, source: VertexId, epsilon: Epsilon, w_max: f64) -> Result<Self> {
        if source >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: source, n: g.n() });
        }
        let w_max = w_max.max(g.max_weight());
        let layers = (0..layer_count(g.n(), w_max))
            .map(|i| ScaledLayer::new(&g, source, LayerParams::new(g.n(), epsilon, i)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(LayeredSssp {
            graph: g,
            source,
            epsilon,
            layers,
        })
    }

    pub fn graph(&self) -> &DynamicGraph {
        &self.graph
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn layers(&self) -> &[ScaledLayer] {
        &self.layers
    }

    /// Applies one update to every layer. Queries are answered and returned.
    pub fn apply(&mut self, event: &UpdateEvent) -> Result<Option<f64>> {
        if let UpdateEvent::QueryDistance(v) = *event {
            if v >= self.graph.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.graph.n() });
            }
            return Ok(Some(self.query(v)));
        }
        let Some(rec) = self.graph.apply_update(event)? else {
            return Ok(None);
        };
        for layer in &mut self.layers {
            let changes = layer.threshold.apply(&rec)?;
            layer.forward(&changes)?;
        }
        Ok(None)
    }

    /// Minimum layer answer; infinity iff `v` is unreachable.
    pub fn query(&self, v: VertexId) -> f64 {
        self.layers.iter().map(|l| l.answer(v)).fold(f64::INFINITY, f64::min)
    }

    /// Sum of WSES notifications over all layers.
    pub fn total_notifications(&self) -> u64 {
        self.layers.iter().map(|l| l.wses.charge_report().notifications).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{dijkstra_graph, dijkstra_int};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn layer_zero_parameters() {
        let p = LayerParams::new(10, Epsilon::new(1, 2).unwrap(), 0).unwrap();
        assert_eq!(p.d, 1);
        assert_eq!(p.tau, Ratio::from_integer(20));
        assert_eq!(p.beta, Ratio::new(1, 40));
        assert_eq!(p.scaled_depth, 40);
        assert_eq!(p.scale(0.5), 21);
        assert_eq!(p.scale(1.0), 41);
        assert!((p.offset() - 7.0).abs() < 1e-12);
    }

    #[test]
    fn layer_count_covers_n_times_w() {
        assert_eq!(layer_count(10, 1.0), 5);
        assert_eq!(layer_count(16, 4.0), 7);
        assert_eq!(layer_count(1, 1.0), 1);
    }

    #[test]
    fn path_query_within_bound() {
        let g = DynamicGraph::from_edges(10, (0..9).map(|i| (i, i + 1, 1.0))).unwrap();
        let sys = LayeredSssp::new(g, 0, Epsilon::new(1, 10).unwrap(), 1.0).unwrap();
        let a = sys.query(9);
        assert!((9.0..=9.0 * (1.0 + 30.0 * 0.1)).contains(&a), "answer {a}");
        let s = sys.query(0);
        assert!(s > 0.0 && s <= 14.0 * 0.1 + 1e-12);
    }

    #[test]
    fn disconnected_vertex_is_infinite() {
        let g = DynamicGraph::from_edges(4, [(0, 1, 2.0), (2, 3, 1.0)]).unwrap();
        let mut sys = LayeredSssp::new(g, 0, Epsilon::new(1, 4).unwrap(), 4.0).unwrap();
        assert!(sys.query(2).is_infinite());
        assert!(sys.query(1).is_finite());
        sys.apply(&UpdateEvent::Delete(EdgeKey::new(0, 1).unwrap())).unwrap();
        assert!(sys.query(1).is_infinite());
    }

    #[test]
    fn initial_labels_approximate_scaled_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut g = DynamicGraph::new(25);
        while g.edge_count() < 80 {
            let _ = g.insert_edge(rng.gen_range(0..25), rng.gen_range(0..25), rng.gen_range(1..20) as f64);
        }
        let eps = Epsilon::new(1, 4).unwrap();
        for i in 0..6 {
            let layer = ScaledLayer::new(&g, 0, LayerParams::new(25, eps, i).unwrap()).unwrap();
            let exact = dijkstra_int(&layer.scaled_adjacency(), 0);
            let depth = layer.params().scaled_depth;
            for v in 0..50 {
                match (exact[v], layer.wses().label(v)) {
                    (Some(d), Some(l)) => assert!(d <= l && 4 * l <= 5 * d, "{d} {l}"),
                    (Some(d), None) => assert!(d > depth),
                    (None, l) => assert_eq!(l, None),
                }
            }
        }
    }

    #[test]
    fn random_run_keeps_per_layer_and_global_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let n = 30;
        let mut g = DynamicGraph::new(n);
        while g.edge_count() < 90 {
            let _ = g.insert_edge(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(1..=64) as f64);
        }
        let eps = Epsilon::new(1, 4).unwrap();
        let mut sys = LayeredSssp::new(g.clone(), 0, eps, 64.0).unwrap();
        let mut keys: Vec<EdgeKey> = g.edges().map(|(k, _)| k).collect();
        keys.shuffle(&mut rng);
        let mut prev: Vec<Vec<Option<u64>>> = sys.layers().iter().map(|l| l.wses().labels()).collect();
        for key in keys {
            let ev = if rng.gen_bool(0.25) {
                UpdateEvent::IncreaseWeight(key, sys.graph().edge_weight(key).unwrap() + 7.0)
            } else {
                UpdateEvent::Delete(key)
            };
            sys.apply(&ev).unwrap();
            let dist = dijkstra_graph(sys.graph(), 0);
            for (li, layer) in sys.layers().iter().enumerate() {
                let d = layer.params().d as f64;
                let slack = 15.0 * eps.to_f64() * d;
                for v in 0..n {
                    let a = layer.answer(v);
                    assert!(a >= dist[v] - 1e-9, "layer {li} v {v}: {a} < {}", dist[v]);
                    if dist[v] <= d {
                        assert!(a <= dist[v] + slack + 1e-9, "layer {li} v {v}: {a} vs {}", dist[v]);
                    }
                }
                // original vertices never lose label height
                let labels = layer.wses().labels();
                for v in 0..n {
                    assert!(labels[v].unwrap_or(u64::MAX) >= prev[li][v].unwrap_or(u64::MAX));
                }
                prev[li] = labels;
                layer.wses().check_invariants().unwrap();
            }
            for v in 1..n {
                let q = sys.query(v);
                if dist[v].is_infinite() {
                    assert!(q.is_infinite());
                } else {
                    assert!(q >= dist[v] && q <= (1.0 + 30.0 * eps.to_f64()) * dist[v] + 1e-9);
                }
            }
        }
    }
}
