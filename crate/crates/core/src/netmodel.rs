//! Entanglement networks and the exact multiplicative min-cut.
//!
//! A [`Network`] is a multigraph whose edges carry a dimension (the rank of
//! the maximally entangled pair they stand for) and an optional direction.
//! Capacities are dimensions, not bits, so a cut is valued by the *product*
//! of the dimensions crossing it. Because `log d` is irrational there is no
//! exact additive reduction to max-flow; [`min_cut`] enumerates every
//! bipartition of the non-terminal vertices with exact integer arithmetic.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;

/// Default cap on the number of free (non-terminal) vertex groups for cut
/// enumeration; `2^20` partitions.
pub const MIN_CUT_ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    #[default]
    #[serde(rename = "undirected")]
    Undirected,
    #[serde(rename = "uv")]
    Uv,
    #[serde(rename = "vu")]
    Vu,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Edge {
    pub id: String,
    pub u: String,
    pub v: String,
    pub dim: u64,
    #[serde(default)]
    pub orientation: Orientation,
}

impl Edge {
    pub fn new(id: impl Into<String>, u: impl Into<String>, v: impl Into<String>, dim: u64) -> Self {
        Edge {
            id: id.into(),
            u: u.into(),
            v: v.into(),
            dim,
            orientation: Orientation::Undirected,
        }
    }

    pub fn directed(id: impl Into<String>, tail: impl Into<String>, head: impl Into<String>, dim: u64) -> Self {
        Edge {
            orientation: Orientation::Uv,
            ..Edge::new(id, tail, head, dim)
        }
    }

    /// `(tail, head)` for a directed edge.
    pub fn arc(&self) -> Option<(&str, &str)> {
        match self.orientation {
            Orientation::Undirected => None,
            Orientation::Uv => Some((&self.u, &self.v)),
            Orientation::Vu => Some((&self.v, &self.u)),
        }
    }

    pub fn is_directed(&self) -> bool {
        self.orientation != Orientation::Undirected
    }

    pub fn touches(&self, vertex: &str) -> bool {
        self.u == vertex || self.v == vertex
    }

    /// Whether the edge contributes to a cut whose source side is decided by
    /// `on_source_side`. Undirected edges count in either direction, directed
    /// ones only from the source side to the sink side.
    pub fn crosses(&self, on_source_side: impl Fn(&str) -> bool) -> bool {
        match self.arc() {
            None => on_source_side(&self.u) != on_source_side(&self.v),
            Some((tail, head)) => on_source_side(tail) && !on_source_side(head),
        }
    }
}

/// The two halves of a vertex that was split into staged I/O. The late stage
/// sees everything the early stage received, so the pair behaves as one
/// logical vertex for cuts and tensor contraction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StagePair {
    pub node: String,
    pub early: String,
    pub late: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Network {
    pub vertices: Vec<String>,
    pub sources: Vec<String>,
    pub sinks: Vec<String>,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StagePair>,
}

impl Network {
    pub fn new<V: Into<String>>(
        vertices: impl IntoIterator<Item = V>,
        sources: impl IntoIterator<Item = V>,
        sinks: impl IntoIterator<Item = V>,
        edges: Vec<Edge>,
    ) -> Self {
        Network {
            vertices: vertices.into_iter().map(Into::into).collect(),
            sources: sources.into_iter().map(Into::into).collect(),
            sinks: sinks.into_iter().map(Into::into).collect(),
            edges,
            stages: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Canonical serialization: pretty JSON in field declaration order with a
    /// trailing newline. Fixture files are stored in exactly this form.
    pub fn to_canonical_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("network serializes");
        out.push('\n');
        out
    }

    pub fn is_source(&self, v: &str) -> bool {
        self.sources.iter().any(|s| s == v)
    }

    pub fn is_sink(&self, v: &str) -> bool {
        self.sinks.iter().any(|t| t == v)
    }

    pub fn is_terminal(&self, v: &str) -> bool {
        self.is_source(v) || self.is_sink(v)
    }

    /// Non-terminal vertices in declaration order.
    pub fn internal_vertices(&self) -> impl Iterator<Item = &str> {
        self.vertices
            .iter()
            .map(String::as_str)
            .filter(|v| !self.is_terminal(v))
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn dims(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.dim).collect()
    }

    /// Every invariant violation, in a stable order. Empty means well-formed.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                problems.push(format!("duplicate vertex `{v}`"));
            }
        }
        if self.sources.is_empty() {
            problems.push("no sources".to_string());
        }
        if self.sinks.is_empty() {
            problems.push("no sinks".to_string());
        }
        for (role, list) in [("source", &self.sources), ("sink", &self.sinks)] {
            for v in list {
                if !seen.contains(v.as_str()) {
                    problems.push(format!("{role} `{v}` is not a declared vertex"));
                }
            }
        }
        if self.sources.iter().any(|s| self.is_sink(s)) {
            problems.push("sources and sinks overlap".to_string());
        }
        let mut ids = BTreeSet::new();
        for e in &self.edges {
            if !ids.insert(e.id.as_str()) {
                problems.push(format!("duplicate edge id `{}`", e.id));
            }
            for end in [&e.u, &e.v] {
                if !seen.contains(end.as_str()) {
                    problems.push(format!("edge `{}` has unknown endpoint `{end}`", e.id));
                }
            }
            if e.dim < 1 {
                problems.push(format!("edge `{}`: dimension < 1", e.id));
            }
        }
        let mut staged = BTreeSet::new();
        for st in &self.stages {
            for part in [&st.early, &st.late] {
                if !seen.contains(part.as_str()) {
                    problems.push(format!("stage `{part}` is not a declared vertex"));
                } else if self.is_terminal(part) {
                    problems.push(format!("stage `{part}` is a source or sink"));
                }
                if !staged.insert(part.as_str()) {
                    problems.push(format!("vertex `{part}` appears in more than one stage pair"));
                }
            }
            if st.early == st.late {
                problems.push(format!("stage pair `{}` uses one vertex twice", st.node));
            }
        }
        problems
    }

    pub fn validated(&self) -> Result<&Self> {
        let problems = self.validate();
        if problems.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidNetwork(problems))
        }
    }

    /// Collapse every stage pair back into its logical vertex. Parallel edges
    /// produced by a split stay separate; in every capacity they act like a
    /// single edge with the product dimension.
    pub fn merge_stages(&self) -> Network {
        if self.stages.is_empty() {
            return self.clone();
        }
        let rename: HashMap<&str, &str> = self
            .stages
            .iter()
            .flat_map(|st| [(st.early.as_str(), st.node.as_str()), (st.late.as_str(), st.node.as_str())])
            .collect();
        let map = |v: &str| rename.get(v).copied().unwrap_or(v).to_string();
        let mut vertices = Vec::new();
        for v in &self.vertices {
            let m = map(v);
            if !vertices.contains(&m) {
                vertices.push(m);
            }
        }
        Network {
            vertices,
            sources: self.sources.clone(),
            sinks: self.sinks.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    u: map(&e.u),
                    v: map(&e.v),
                    ..e.clone()
                })
                .collect(),
            stages: Vec::new(),
        }
    }

    /// True when the directed edges (plus early-to-late stage links) form no
    /// directed cycle. Undirected edges are ignored.
    pub fn is_acyclic(&self) -> bool {
        let mut arcs: Vec<(&str, &str)> = self.edges.iter().filter_map(Edge::arc).collect();
        arcs.extend(self.stages.iter().map(|st| (st.early.as_str(), st.late.as_str())));
        find_cycle(&self.vertices, &arcs).is_none()
    }
}

/// Kahn's algorithm; returns a vertex on a cycle if one exists.
pub(crate) fn find_cycle<'a>(vertices: &'a [String], arcs: &[(&'a str, &'a str)]) -> Option<&'a str> {
    let index: HashMap<&str, usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let mut indeg = vec![0usize; vertices.len()];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for &(t, h) in arcs {
        let (Some(&ti), Some(&hi)) = (index.get(t), index.get(h)) else {
            continue;
        };
        out[ti].push(hi);
        indeg[hi] += 1;
    }
    let mut queue: Vec<usize> = (0..vertices.len()).filter(|&i| indeg[i] == 0).collect();
    let mut done = 0;
    while let Some(i) = queue.pop() {
        done += 1;
        for &j in &out[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                queue.push(j);
            }
        }
    }
    if done == vertices.len() {
        None
    } else {
        (0..vertices.len()).find(|&i| indeg[i] > 0).map(|i| vertices[i].as_str())
    }
}

/// A vertex bipartition `(S̃, complement)` and its exact product value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cut {
    pub s_side: BTreeSet<String>,
    #[serde(with = "crate::bigser")]
    pub value: BigUint,
}

impl Cut {
    /// Edges of `net` crossing this cut.
    pub fn crossing_edges<'a>(&self, net: &'a Network) -> Vec<&'a Edge> {
        let inside = |v: &str| self.s_side.contains(v);
        net.edges.iter().filter(|e| e.crosses(inside)).collect()
    }
}

/// Product of the dimensions of the edges crossing `s_side`. Stage halves
/// are named individually; a valid side keeps each pair together.
pub fn cut_value(net: &Network, s_side: &BTreeSet<String>) -> BigUint {
    let inside = |v: &str| s_side.contains(v);
    net.edges
        .iter()
        .filter(|e| e.crosses(inside))
        .fold(BigUint::from(1u32), |acc, e| acc * e.dim)
}

#[derive(Debug, Clone, Copy)]
pub struct MinCutOptions {
    pub limit: usize,
    pub exec: Exec,
}

impl Default for MinCutOptions {
    fn default() -> Self {
        MinCutOptions {
            limit: MIN_CUT_ENUMERATION_LIMIT,
            exec: Exec::default(),
        }
    }
}

/// Exact product value; `Big` only once the product no longer fits `u128`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum CutValue {
    Small(u128),
    Big(BigUint),
}

impl CutValue {
    fn into_big(self) -> BigUint {
        match self {
            CutValue::Small(v) => BigUint::from(v),
            CutValue::Big(v) => v,
        }
    }
}

/// Compressed graph for the enumeration kernel: group 0 is the source side,
/// group 1 the sink side, groups `2..` the free logical vertices.
struct CutKernel {
    free: Vec<Vec<String>>,
    sources: Vec<String>,
    edges: Vec<(usize, usize, u64, bool)>,
}

impl CutKernel {
    fn build(net: &Network) -> CutKernel {
        let logical = net.merge_stages();
        let mut group: HashMap<&str, usize> = HashMap::new();
        let mut free: Vec<Vec<String>> = Vec::new();
        for v in &logical.vertices {
            let g = if logical.is_source(v) {
                0
            } else if logical.is_sink(v) {
                1
            } else {
                free.push(vec![v.clone()]);
                free.len() + 1
            };
            group.insert(v, g);
        }
        // the side key lists original vertex ids, so stage halves appear by name
        for st in &net.stages {
            if let Some(&g) = group.get(st.node.as_str()) {
                let members = &mut free[g - 2];
                members.retain(|m| m != &st.node);
                members.push(st.early.clone());
                members.push(st.late.clone());
                members.sort();
            }
        }
        let edges = logical
            .edges
            .iter()
            .filter(|e| e.dim != 1)
            .filter_map(|e| {
                let (a, b, directed) = match e.arc() {
                    None => (e.u.as_str(), e.v.as_str(), false),
                    Some((t, h)) => (t, h, true),
                };
                let (ga, gb) = (group[a], group[b]);
                (ga != gb).then_some((ga, gb, e.dim, directed))
            })
            .collect();
        CutKernel {
            free,
            sources: logical.sources.clone(),
            edges,
        }
    }

    fn side(mask: u64, g: usize) -> bool {
        match g {
            0 => true,
            1 => false,
            k => mask >> (k - 2) & 1 == 1,
        }
    }

    fn value(&self, mask: u64) -> CutValue {
        let mut small: u128 = 1;
        let mut big: Option<BigUint> = None;
        for &(a, b, dim, directed) in &self.edges {
            let (sa, sb) = (Self::side(mask, a), Self::side(mask, b));
            let crosses = if directed { sa && !sb } else { sa != sb };
            if !crosses {
                continue;
            }
            match &mut big {
                Some(v) => *v *= dim,
                None => match small.checked_mul(dim as u128) {
                    Some(v) => small = v,
                    None => big = Some(BigUint::from(small) * dim),
                },
            }
        }
        big.map_or(CutValue::Small(small), CutValue::Big)
    }

    fn s_side(&self, mask: u64) -> BTreeSet<String> {
        let mut side: BTreeSet<String> = self.sources.iter().cloned().collect();
        for (k, members) in self.free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                side.extend(members.iter().cloned());
            }
        }
        side
    }

    /// Lexicographic comparison of the sorted source sides.
    fn cmp_sides(&self, a: u64, b: u64) -> Ordering {
        if a == b {
            return Ordering::Equal;
        }
        self.s_side(a).iter().cmp(self.s_side(b).iter())
    }

    fn better(&self, a: (CutValue, u64), b: (CutValue, u64)) -> (CutValue, u64) {
        match a.0.cmp(&b.0).then_with(|| self.cmp_sides(a.1, b.1)) {
            Ordering::Greater => b,
            _ => a,
        }
    }
}

/// Exact minimum over all source/sink bipartitions of the crossing-dimension
/// product, with the lexicographically smallest minimizing source side as
/// witness.
pub fn min_cut(net: &Network) -> Result<Cut> {
    min_cut_with(net, MinCutOptions::default())
}

pub fn min_cut_with(net: &Network, opts: MinCutOptions) -> Result<Cut> {
    net.validated()?;
    let kernel = CutKernel::build(net);
    let k = kernel.free.len();
    if k > opts.limit || k >= 63 {
        return Err(Error::TooLarge {
            free: k,
            limit: opts.limit,
        });
    }
    const CHUNK: u64 = 1 << 12;
    let total = 1u64 << k;
    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(total)))
        .collect();
    let best = opts
        .exec
        .map(chunks, |(lo, hi)| {
            (lo..hi)
                .map(|m| (kernel.value(m), m))
                .reduce(|a, b| kernel.better(a, b))
                .expect("non-empty chunk")
        })
        .into_iter()
        .reduce(|a, b| kernel.better(a, b))
        .expect("at least one partition");
    Ok(Cut {
        s_side: kernel.s_side(best.1),
        value: best.0.into_big(),
    })
}

/// `N^{⊠n}`: every dimension raised to the `n`-th power.
pub fn tensor_power(net: &Network, n: u32) -> Result<Network> {
    map_dims(net, |d| d.checked_pow(n), "tensor power")
}

/// `(G, k·d, S, T)`: every dimension multiplied by `k`.
pub fn scale(net: &Network, k: u64) -> Result<Network> {
    map_dims(net, |d| d.checked_mul(k), "scaled network")
}

fn map_dims(net: &Network, f: impl Fn(u64) -> Option<u64>, what: &'static str) -> Result<Network> {
    let mut out = net.clone();
    for e in &mut out.edges {
        e.dim = f(e.dim).ok_or(Error::Overflow(what))?;
    }
    Ok(out)
}

/// Apply a direction to edges by id. Every edge left undirected afterwards is
/// an error, so the result is fully directed.
pub fn orient(net: &Network, assignment: &BTreeMap<String, Orientation>) -> Result<Network> {
    let mut out = net.clone();
    for (id, dir) in assignment {
        let edge = out
            .edges
            .iter_mut()
            .find(|e| &e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.clone()))?;
        edge.orientation = *dir;
    }
    if let Some(e) = out.edges.iter().find(|e| !e.is_directed()) {
        return Err(Error::MissingOrientation(e.id.clone()));
    }
    Ok(out)
}

/// Replace each undirected edge by two opposite directed edges of the same
/// dimension (`<id>+` along `u→v`, `<id>-` along `v→u`).
pub fn bidirect(net: &Network) -> Network {
    let mut out = net.clone();
    out.edges = net
        .edges
        .iter()
        .flat_map(|e| {
            if e.is_directed() {
                vec![e.clone()]
            } else {
                vec![
                    Edge::directed(format!("{}+", e.id), e.u.clone(), e.v.clone(), e.dim),
                    Edge::directed(format!("{}-", e.id), e.v.clone(), e.u.clone(), e.dim),
                ]
            }
        })
        .collect();
    out
}
