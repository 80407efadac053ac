//! Update traces: a line-based text format and deterministic generators.
//!
//! ```text
//! # comment
//! n 4 w 16
//! e 0 1 3
//! e 1 2 16
//! d 0 1
//! i 1 2 20
//! q 2
//! ```
//!
//! The header gives the vertex count and the declared maximum weight. `e`
//! lines list the initial edges; `d`, `i`, and `q` lines are deletions,
//! weight increases, and distance queries, replayed in order.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DynamicGraph, EdgeKey, UpdateEvent, VertexId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceOp {
    Delete(VertexId, VertexId),
    Increase(VertexId, VertexId, f64),
    Query(VertexId),
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpdateTrace {
    pub n: usize,
    pub w_max: f64,
    pub edges: Vec<(VertexId, VertexId, f64)>,
    pub ops: Vec<TraceOp>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

impl UpdateTrace {
    /// Parses a trace and checks that it replays cleanly on a graph.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, f64)> = None;
        let mut edges = Vec::new();
        let mut ops = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut toks = content.split_whitespace();
            let tag = toks.next().expect("non-empty");
            if header.is_none() && tag != "n" {
                return Err(parse_err(line, "expected header `n <n> w <W_max>`"));
            }
            match tag {
                "n" => {
                    if header.is_some() {
                        return Err(parse_err(line, "duplicate header"));
                    }
                    let n = field(toks.next(), line, "vertex count")?;
                    if toks.next() != Some("w") {
                        return Err(parse_err(line, "expected `w <W_max>` after vertex count"));
                    }
                    let w: f64 = field(toks.next(), line, "maximum weight")?;
                    if !(w.is_finite() && w >= 1.0) {
                        return Err(parse_err(line, "maximum weight must be at least 1"));
                    }
                    header = Some((n, w));
                }
                "e" => {
                    if !ops.is_empty() {
                        return Err(parse_err(line, "edge line after the first operation"));
                    }
                    edges.push((
                        field(toks.next(), line, "vertex")?,
                        field(toks.next(), line, "vertex")?,
                        field(toks.next(), line, "weight")?,
                    ));
                }
                "d" => ops.push(TraceOp::Delete(
                    field(toks.next(), line, "vertex")?,
                    field(toks.next(), line, "vertex")?,
                )),
                "i" => ops.push(TraceOp::Increase(
                    field(toks.next(), line, "vertex")?,
                    field(toks.next(), line, "vertex")?,
                    field(toks.next(), line, "weight")?,
                )),
                "q" => ops.push(TraceOp::Query(field(toks.next(), line, "vertex")?)),
                other => return Err(parse_err(line, format!("unknown record `{other}`"))),
            }
            if let Some(extra) = toks.next() {
                return Err(parse_err(line, format!("trailing token `{extra}`")));
            }
        }
        let (n, w_max) = header.ok_or_else(|| parse_err(0, "empty trace"))?;
        let trace = UpdateTrace { n, w_max, edges, ops };
        trace.validate()?;
        Ok(trace)
    }

    /// Replays the trace on a fresh graph, surfacing the first error.
    pub fn validate(&self) -> Result<()> {
        let mut g = self.initial_graph()?;
        for ev in self.events()? {
            g.apply_update(&ev)?;
        }
        Ok(())
    }

    pub fn initial_graph(&self) -> Result<DynamicGraph> {
        DynamicGraph::from_edges(self.n, self.edges.iter().copied())
    }

    pub fn events(&self) -> Result<Vec<UpdateEvent>> {
        self.ops
            .iter()
            .map(|op| {
                Ok(match *op {
                    TraceOp::Delete(u, v) => UpdateEvent::Delete(EdgeKey::new(u, v)?),
                    TraceOp::Increase(u, v, w) => UpdateEvent::IncreaseWeight(EdgeKey::new(u, v)?, w),
                    TraceOp::Query(v) => UpdateEvent::QueryDistance(v),
                })
            })
            .collect()
    }

    /// Largest weight appearing anywhere in the trace, at least the header value.
    pub fn max_weight(&self) -> f64 {
        let ops = self.ops.iter().filter_map(|op| match op {
            TraceOp::Increase(_, _, w) => Some(*w),
            _ => None,
        });
        self.edges.iter().map(|e| e.2).chain(ops).fold(self.w_max, f64::max)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for UpdateTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {} w {}", self.n, self.w_max)?;
        for (u, v, w) in &self.edges {
            writeln!(f, "e {u} {v} {w}")?;
        }
        for op in &self.ops {
            match op {
                TraceOp::Delete(u, v) => writeln!(f, "d {u} {v}")?,
                TraceOp::Increase(u, v, w) => writeln!(f, "i {u} {v} {w}")?,
                TraceOp::Query(v) => writeln!(f, "q {v}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceKind {
    UniformRandom,
    /// Unit-weight Hamiltonian path plus many edges of weight `ceil(sqrt n)`.
    HeavyDense,
    /// Unit path from the source with bridges into a heavy clique, deleted
    /// nearest-first so the clique drifts away one step at a time.
    PathPlusCliques,
}

impl FromStr for TraceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform-random" => Ok(TraceKind::UniformRandom),
            "heavy-dense" => Ok(TraceKind::HeavyDense),
            "path-plus-cliques" => Ok(TraceKind::PathPlusCliques),
            _ => Err(Error::Infeasible(format!("unknown trace kind `{s}`"))),
        }
    }
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::UniformRandom => "uniform-random",
            TraceKind::HeavyDense => "heavy-dense",
            TraceKind::PathPlusCliques => "path-plus-cliques",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub kind: TraceKind,
    pub n: usize,
    pub m: usize,
    pub w_max: u64,
    pub seed: u64,
    pub deletions: usize,
    /// A query follows every `query_every` updates; 0 disables queries.
    pub query_every: usize,
    /// Probability that a deletion is preceded by a weight increase of the
    /// same edge (uniform-random only).
    pub increase_prob: f64,
}

impl GenParams {
    pub fn new(kind: TraceKind, n: usize, m: usize, w_max: u64, seed: u64) -> Self {
        GenParams {
            kind,
            n,
            m,
            w_max,
            seed,
            deletions: m,
            query_every: 5,
            increase_prob: 0.2,
        }
    }
}

/// Smallest integer `r` with `r * r >= n`.
pub fn ceil_sqrt(n: usize) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r < n as u64 {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n as u64 {
        r -= 1;
    }
    r
}

/// Edge count of the heavy-dense hard case: a unit path plus about
/// `ceil(sqrt n)` heavy edges at every vertex.
pub fn heavy_dense_edge_count(n: usize) -> usize {
    (n - 1) + n * ceil_sqrt(n) as usize / 2
}

fn infeasible(msg: String) -> Error {
    Error::Infeasible(msg)
}

/// Generates a trace; identical parameters give identical traces.
pub fn generate(p: &GenParams) -> Result<UpdateTrace> {
    let max_m = p.n * p.n.saturating_sub(1) / 2;
    if p.n < 2 {
        return Err(infeasible(format!("need at least 2 vertices, got {}", p.n)));
    }
    if p.m > max_m {
        return Err(infeasible(format!("{} edges do not fit in {} vertices", p.m, p.n)));
    }
    if p.deletions > p.m {
        return Err(infeasible(format!("{} deletions exceed {} edges", p.deletions, p.m)));
    }
    if p.w_max == 0 {
        return Err(infeasible("maximum weight must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (edges, order, w_max) = match p.kind {
        TraceKind::UniformRandom => uniform_edges(p, &mut rng),
        TraceKind::HeavyDense => heavy_dense_edges(p, &mut rng)?,
        TraceKind::PathPlusCliques => path_clique_edges(p, &mut rng)?,
    };
    let mut weights: std::collections::BTreeMap<EdgeKey, u64> =
        edges.iter().map(|&(u, v, w)| (EdgeKey::new(u, v).expect("no loops"), w)).collect();
    let mut ops = Vec::new();
    let mut updates = 0;
    let mut push_update = |ops: &mut Vec<TraceOp>, op: TraceOp, rng: &mut ChaCha8Rng| {
        ops.push(op);
        updates += 1;
        if p.query_every > 0 && updates % p.query_every == 0 {
            ops.push(TraceOp::Query(rng.gen_range(0..p.n)));
        }
    };
    for key in order.into_iter().take(p.deletions) {
        let w = weights[&key];
        if p.kind == TraceKind::UniformRandom && w < w_max && rng.gen_bool(p.increase_prob) {
            let new_w = rng.gen_range(w + 1..=w_max);
            weights.insert(key, new_w);
            push_update(&mut ops, TraceOp::Increase(key.u(), key.v(), new_w as f64), &mut rng);
        }
        push_update(&mut ops, TraceOp::Delete(key.u(), key.v()), &mut rng);
    }
    Ok(UpdateTrace {
        n: p.n,
        w_max: w_max as f64,
        edges: edges.into_iter().map(|(u, v, w)| (u, v, w as f64)).collect(),
        ops,
    })
}

type Generated = (Vec<(VertexId, VertexId, u64)>, Vec<EdgeKey>, u64);

fn uniform_edges(p: &GenParams, rng: &mut ChaCha8Rng) -> Generated {
    let mut all: Vec<EdgeKey> = (0..p.n)
        .flat_map(|u| (u + 1..p.n).map(move |v| EdgeKey::new(u, v).expect("u < v")))
        .collect();
    all.shuffle(rng);
    all.truncate(p.m);
    all.sort();
    let edges = all.iter().map(|k| (k.u(), k.v(), rng.gen_range(1..=p.w_max))).collect();
    all.shuffle(rng);
    (edges, all, p.w_max)
}

fn heavy_dense_edges(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Generated> {
    let heavy_w = ceil_sqrt(p.n);
    let path = p.n - 1;
    if p.m < 10 * path {
        return Err(infeasible(format!(
            "heavy-dense needs m >= {} so that 90% of edges are heavy",
            10 * path
        )));
    }
    let mut perm: Vec<VertexId> = (0..p.n).collect();
    perm.shuffle(rng);
    let mut chosen = std::collections::BTreeMap::new();
    for w in perm.windows(2) {
        chosen.insert(EdgeKey::new(w[0], w[1])?, 1u64);
    }
    // rejection sampling is fine while the graph is far from complete
    if p.m > p.n * (p.n - 1) / 4 {
        let mut rest: Vec<EdgeKey> = (0..p.n)
            .flat_map(|u| (u + 1..p.n).map(move |v| EdgeKey::new(u, v).expect("u < v")))
            .filter(|k| !chosen.contains_key(k))
            .collect();
        rest.shuffle(rng);
        for k in rest.into_iter().take(p.m - path) {
            chosen.insert(k, heavy_w);
        }
    } else {
        while chosen.len() < p.m {
            let (u, v) = (rng.gen_range(0..p.n), rng.gen_range(0..p.n));
            if u != v {
                chosen.entry(EdgeKey::new(u, v)?).or_insert(heavy_w);
            }
        }
    }
    let edges: Vec<_> = chosen.iter().map(|(k, &w)| (k.u(), k.v(), w)).collect();
    let mut order: Vec<EdgeKey> = chosen.into_keys().collect();
    order.shuffle(rng);
    Ok((edges, order, heavy_w.max(1)))
}

fn path_clique_edges(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<Generated> {
    let path_len = p.n / 2;
    let clique: Vec<VertexId> = (path_len..p.n).collect();
    let mut fixed = Vec::new();
    for j in 1..path_len {
        fixed.push((j - 1, j, 1u64));
    }
    // bridges from every path vertex into the clique, cheaper further out
    let mut bridges = Vec::new();
    for j in 0..path_len {
        let c = clique[j % clique.len()];
        let w = (p.w_max.saturating_sub(j as u64)).max(1);
        bridges.push((j, c, w));
    }
    let base = fixed.len() + bridges.len();
    let clique_pairs: Vec<EdgeKey> = clique
        .iter()
        .flat_map(|&u| clique.iter().filter(move |&&v| v > u).map(move |&v| EdgeKey::new(u, v).expect("u < v")))
        .collect();
    if p.m < base || p.m > base + clique_pairs.len() {
        return Err(infeasible(format!(
            "path-plus-cliques with n = {} needs {} <= m <= {}",
            p.n,
            base,
            base + clique_pairs.len()
        )));
    }
    let mut pairs = clique_pairs;
    pairs.shuffle(rng);
    pairs.truncate(p.m - base);
    let mut edges: Vec<(VertexId, VertexId, u64)> = fixed.clone();
    edges.extend(bridges.iter().copied());
    edges.extend(pairs.iter().map(|k| (k.u(), k.v(), p.w_max)));
    // nearest bridges go first, then everything else at random
    let mut order: Vec<EdgeKey> = bridges.iter().map(|&(u, v, _)| EdgeKey::new(u, v).expect("distinct")).collect();
    let mut rest: Vec<EdgeKey> = fixed
        .iter()
        .map(|&(u, v, _)| EdgeKey::new(u, v).expect("distinct"))
        .chain(pairs)
        .collect();
    rest.shuffle(rng);
    order.extend(rest);
    Ok((edges, order, p.w_max))
}
