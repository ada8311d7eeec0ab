//! Network transformations: splitting a vertex pair around a length-2 cycle,
//! the teleportation reduction of the scaled four-vertex network, and the
//! power-of-two rounding used to sandwich the regularized tensor capacity.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::{min_cut, tensor_power, Edge, Network, Orientation, StagePair};

/// Factor the dimension of edge `edge` as `a * b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub edge: String,
    pub a: u64,
    pub b: u64,
}

impl SplitSpec {
    pub fn new(edge: impl Into<String>, a: u64, b: u64) -> Self {
        SplitSpec { edge: edge.into(), a, b }
    }
}

pub fn early_name(v: &str) -> String {
    format!("{v}:early")
}

pub fn late_name(v: &str) -> String {
    format!("{v}:late")
}

/// Direction of `e`, resolving undirected edges at terminals: away from a
/// source, into a sink.
fn resolve_arc(net: &Network, e: &Edge) -> Option<(String, String)> {
    if let Some((t, h)) = e.arc() {
        return Some((t.to_string(), h.to_string()));
    }
    if net.is_source(&e.u) || net.is_sink(&e.v) {
        Some((e.u.clone(), e.v.clone()))
    } else if net.is_source(&e.v) || net.is_sink(&e.u) {
        Some((e.v.clone(), e.u.clone()))
    } else {
        None
    }
}

/// Split both endpoints `u`, `v` of a middle edge into early and late
/// stages and replace the edge by two opposite directed edges: `<id>a` of
/// dimension `a` from `v:early` to `u:late`, and `<id>b` of dimension `b`
/// from `u:early` to `v:late`. In-edges move to early stages, out-edges to
/// late stages. Undirected edges at terminals are pointed away from sources
/// and into sinks; any other undirected edge at `u` or `v` is rejected.
pub fn split_cycle_edge(net: &Network, spec: &SplitSpec) -> Result<Network> {
    net.validated()?;
    let reject = |msg: String| Err(Error::Transform(msg));
    let edge = net.edge(&spec.edge).ok_or_else(|| Error::UnknownEdge(spec.edge.clone()))?;
    let (u, v) = (edge.u.clone(), edge.v.clone());
    if net.is_terminal(&u) || net.is_terminal(&v) {
        return reject(format!("edge `{}` touches a source or sink", spec.edge));
    }
    if u == v {
        return reject(format!("edge `{}` is a self-loop", spec.edge));
    }
    if spec.a < 1 || spec.b < 1 || spec.a.checked_mul(spec.b) != Some(edge.dim) {
        return reject(format!("{} x {} does not factor dimension {}", spec.a, spec.b, edge.dim));
    }
    let staged: BTreeSet<&str> =
        net.stages.iter().flat_map(|st| [st.early.as_str(), st.late.as_str()]).collect();
    if staged.contains(u.as_str()) || staged.contains(v.as_str()) {
        return reject("endpoint is already a split stage".to_string());
    }
    let new_names = [early_name(&u), late_name(&u), early_name(&v), late_name(&v)];
    if let Some(clash) = new_names.iter().find(|n| net.vertices.contains(n)) {
        return reject(format!("vertex `{clash}` already exists"));
    }
    let (id_a, id_b) = (format!("{}a", spec.edge), format!("{}b", spec.edge));
    if net.edges.iter().any(|e| e.id == id_a || e.id == id_b) {
        return reject(format!("edge ids `{id_a}`/`{id_b}` already exist"));
    }

    let is_split = |x: &str| x == u || x == v;
    let mut edges = Vec::with_capacity(net.edges.len() + 1);
    for e in &net.edges {
        if e.id == spec.edge {
            edges.push(Edge::directed(id_a.clone(), early_name(&v), late_name(&u), spec.a));
            edges.push(Edge::directed(id_b.clone(), early_name(&u), late_name(&v), spec.b));
            continue;
        }
        if !is_split(&e.u) && !is_split(&e.v) {
            edges.push(e.clone());
            continue;
        }
        let Some((tail, head)) = resolve_arc(net, e) else {
            return reject(format!("edge `{}` needs an explicit direction", e.id));
        };
        let tail = if is_split(&tail) { late_name(&tail) } else { tail };
        let head = if is_split(&head) { early_name(&head) } else { head };
        edges.push(Edge {
            id: e.id.clone(),
            u: tail,
            v: head,
            dim: e.dim,
            orientation: Orientation::Uv,
        });
    }

    let vertices = net
        .vertices
        .iter()
        .flat_map(|x| {
            if is_split(x) {
                vec![early_name(x), late_name(x)]
            } else {
                vec![x.clone()]
            }
        })
        .collect();
    let mut stages = net.stages.clone();
    for x in [&u, &v] {
        stages.push(StagePair {
            node: x.clone(),
            early: early_name(x),
            late: late_name(x),
        });
    }
    let out = Network {
        vertices,
        sources: net.sources.clone(),
        sinks: net.sinks.clone(),
        edges,
        stages,
    };
    if !out.is_acyclic() {
        return Err(Error::Cyclic(u));
    }
    Ok(out)
}

/// Point every undirected edge at a terminal away from the source side and
/// into the sink side, leaving other edges as they are.
pub fn orient_terminal_edges(net: &Network) -> Network {
    let mut out = net.clone();
    for e in &mut out.edges {
        if e.is_directed() {
            continue;
        }
        if let Some((tail, _)) = resolve_arc(net, e) {
            e.orientation = if tail == e.u { Orientation::Uv } else { Orientation::Vu };
        }
    }
    out
}

/// Result of teleporting a `k^2`-dimensional system across the scaled
/// four-vertex network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Teleported {
    pub through_rank: BigUint,
    pub residual: Network,
}

impl Teleported {
    /// Lower bound on the scaled network's capacity given the residual's.
    pub fn composed_lower_bound(&self, residual_capacity: u64) -> BigUint {
        &self.through_rank * residual_capacity
    }
}

/// Roles of the five edges of the four-vertex network: two source edges, two
/// sink edges, and the middle edge, identified by shape rather than by name.
pub struct Fig1Roles {
    pub source_edges: [usize; 2],
    pub sink_edges: [usize; 2],
    pub middle: usize,
}

pub fn fig1_roles(net: &Network) -> Result<Fig1Roles> {
    net.validated()?;
    let reject = |msg: &str| Err(Error::Transform(msg.to_string()));
    if !net.stages.is_empty() || net.sources.len() != 1 || net.sinks.len() != 1 {
        return reject("expected one source, one sink and no split stages");
    }
    let internal: Vec<&str> = net.internal_vertices().collect();
    if internal.len() != 2 || net.edges.len() != 5 {
        return reject("expected two internal vertices and five edges");
    }
    let (s, t) = (net.sources[0].as_str(), net.sinks[0].as_str());
    let mut source_edges = Vec::new();
    let mut sink_edges = Vec::new();
    let mut middle = Vec::new();
    for (i, e) in net.edges.iter().enumerate() {
        let other = |x: &str| if e.u == x { Some(e.v.as_str()) } else if e.v == x { Some(e.u.as_str()) } else { None };
        match (other(s), other(t)) {
            (Some(w), None) if internal.contains(&w) => source_edges.push((w, i)),
            (None, Some(w)) if internal.contains(&w) => sink_edges.push((w, i)),
            (None, None) if e.u != e.v => middle.push(i),
            _ => return reject("edge does not fit the four-vertex shape"),
        }
    }
    source_edges.sort();
    sink_edges.sort();
    let distinct = |v: &[(&str, usize)]| v.len() == 2 && v[0].0 != v[1].0;
    if !distinct(&source_edges) || !distinct(&sink_edges) || middle.len() != 1 {
        return reject("each internal vertex needs one source edge and one sink edge");
    }
    Ok(Fig1Roles {
        source_edges: [source_edges[0].1, source_edges[1].1],
        sink_edges: [sink_edges[0].1, sink_edges[1].1],
        middle: middle[0],
    })
}

/// Teleport one `k`-dimensional qudit along each source-node-sink route of
/// the network scaled by `k`. The factor `k` of the four outer edges is
/// consumed; the middle edge keeps its full dimension `k * d5`.
pub fn teleport_reduce_scaled(net: &Network, k: u64) -> Result<Teleported> {
    let roles = fig1_roles(net)?;
    if k == 0 || net.edges.iter().any(|e| e.dim % k != 0) {
        return Err(Error::Transform(format!("dimensions are not all divisible by {k}")));
    }
    let mut residual = net.clone();
    for i in roles.source_edges.into_iter().chain(roles.sink_edges) {
        residual.edges[i].dim /= k;
    }
    Ok(Teleported {
        through_rank: BigUint::from(k) * k,
        residual,
    })
}

/// Networks bracketing `N^{⊠n}` with power-of-two dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundedPair {
    pub lower: Network,
    pub upper: Network,
    /// Edges crossing the min-cut witness of `lower`.
    pub c1: usize,
    /// Edges crossing the min-cut witness of `N^{⊠n}`.
    pub c2: usize,
}

/// `(2^⌊n log2 d⌋, 2^⌈n log2 d⌉)`, computed exactly from the bit length.
pub fn round_dim(d: u64, n: u32) -> Result<(u64, u64)> {
    let power = BigUint::from(d).pow(n);
    let floor_log = power.bits() - 1;
    let exact = power == BigUint::one() << floor_log;
    let ceil_log = if exact { floor_log } else { floor_log + 1 };
    let as_u64 = |e: u64| 1u64.checked_shl(e as u32).filter(|_| e < 64).ok_or(Error::Overflow("rounded dimension"));
    Ok((as_u64(floor_log)?, as_u64(ceil_log)?))
}

pub fn round_networks(net: &Network, n: u32) -> Result<RoundedPair> {
    let n = n.max(1);
    let mut lower = net.clone();
    let mut upper = net.clone();
    for ((e, lo), hi) in net.edges.iter().zip(&mut lower.edges).zip(&mut upper.edges) {
        let (l, u) = round_dim(e.dim, n)?;
        lo.dim = l;
        hi.dim = u;
    }
    let power = tensor_power(net, n)?;
    let c1 = min_cut(&lower)?.crossing_edges(&lower).len();
    let c2 = min_cut(&power)?.crossing_edges(&power).len();
    Ok(RoundedPair { lower, upper, c1, c2 })
}

/// The five quantities of the sandwich
/// `MC(N^n)/2^c1 <= MC(N_l) <= R1(N^n) <= MC(N_u) <= 2^c2 MC(N^n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub n: u32,
    pub c1: usize,
    pub c2: usize,
    #[serde(with = "crate::bigser")]
    pub mc_power: BigUint,
    #[serde(with = "crate::bigser::ratio")]
    pub scaled_lower: Ratio<BigUint>,
    #[serde(with = "crate::bigser")]
    pub mc_lower: BigUint,
    pub r1_estimate: u64,
    #[serde(with = "crate::bigser")]
    pub mc_upper: BigUint,
    #[serde(with = "crate::bigser")]
    pub scaled_upper: BigUint,
}

impl SandwichReport {
    /// `MC(N_l) <= R1 <= MC(N_u)`.
    pub fn inner_holds(&self) -> bool {
        let r1 = BigUint::from(self.r1_estimate);
        self.mc_lower <= r1 && r1 <= self.mc_upper
    }

    /// The power-of-two envelope around the rounded min-cuts.
    pub fn outer_holds(&self) -> bool {
        self.scaled_lower <= Ratio::from_integer(self.mc_lower.clone()) && self.mc_upper <= self.scaled_upper
    }

    pub fn holds(&self) -> bool {
        self.inner_holds() && self.outer_holds()
    }
}

/// Evaluate the sandwich for `N^{⊠n}` using `rank_estimator` for the middle
/// term.
pub fn sandwich_check(
    net: &Network,
    n: u32,
    rank_estimator: impl Fn(&Network) -> Result<u64>,
) -> Result<SandwichReport> {
    let n = n.max(1);
    let pair = round_networks(net, n)?;
    let power = tensor_power(net, n)?;
    let mc_power = min_cut(&power)?.value;
    let two = BigUint::from(2u32);
    Ok(SandwichReport {
        n,
        c1: pair.c1,
        c2: pair.c2,
        scaled_lower: Ratio::new(mc_power.clone(), Pow::pow(&two, pair.c1)),
        mc_lower: min_cut(&pair.lower)?.value,
        r1_estimate: rank_estimator(&power)?,
        mc_upper: min_cut(&pair.upper)?.value,
        scaled_upper: Pow::pow(&two, pair.c2) * &mc_power,
        mc_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1_network, path_network};
    use crate::netmodel::scale;

    #[test]
    fn round_dim_matches_floor_and_ceiling() {
        assert_eq!(round_dim(3, 1).unwrap(), (2, 4));
        assert_eq!(round_dim(4, 1).unwrap(), (4, 4));
        assert_eq!(round_dim(4, 3).unwrap(), (64, 64));
        assert_eq!(round_dim(3, 2).unwrap(), (8, 16));
        assert_eq!(round_dim(1, 5).unwrap(), (1, 1));
    }

    #[test]
    fn rounded_fig1_dims() {
        let pair = round_networks(&fig1_network([2, 3, 3, 2, 2]), 2).unwrap();
        assert_eq!(pair.lower.dims(), vec![4, 8, 8, 4, 4]);
        assert_eq!(pair.upper.dims(), vec![4, 16, 16, 4, 4]);
    }

    #[test]
    fn split_builds_staged_dag() {
        let net = split_cycle_edge(&fig1_network([2, 3, 3, 2, 4]), &SplitSpec::new("e5", 2, 2)).unwrap();
        assert!(net.is_acyclic());
        assert_eq!(net.stages.len(), 2);
        let a = net.edge("e5a").unwrap();
        assert_eq!((a.arc(), a.dim), (Some(("n2:early", "n1:late")), 2));
        let b = net.edge("e5b").unwrap();
        assert_eq!(b.arc(), Some(("n1:early", "n2:late")));
        assert_eq!(net.edge("e1").unwrap().arc(), Some(("s", "n1:early")));
        assert_eq!(net.edge("e3").unwrap().arc(), Some(("n1:late", "t")));
    }

    #[test]
    fn split_rejections() {
        let net = fig1_network([2, 3, 3, 2, 4]);
        let err = |spec: SplitSpec| split_cycle_edge(&net, &spec).unwrap_err();
        assert!(matches!(err(SplitSpec::new("e1", 1, 2)), Error::Transform(_)));
        assert!(matches!(err(SplitSpec::new("e5", 3, 2)), Error::Transform(_)));
        assert!(matches!(err(SplitSpec::new("e9", 2, 2)), Error::UnknownEdge(_)));
    }

    #[test]
    fn split_with_trivial_factors() {
        let net = split_cycle_edge(&fig1_network([2, 3, 3, 2, 1]), &SplitSpec::new("e5", 1, 1)).unwrap();
        assert_eq!(net.edge("e5a").unwrap().dim, 1);
        assert_eq!(net.edge("e5b").unwrap().dim, 1);
    }

    #[test]
    fn teleport_reduction() {
        let base = fig1_network([2, 3, 3, 2, 2]);
        let t = teleport_reduce_scaled(&scale(&base, 2).unwrap(), 2).unwrap();
        assert_eq!(t.through_rank, BigUint::from(4u32));
        assert_eq!(t.residual.dims(), vec![2, 3, 3, 2, 4]);
        let same = teleport_reduce_scaled(&base, 1).unwrap();
        assert_eq!(same.residual, base);
        assert_eq!(same.through_rank, BigUint::one());
        assert!(matches!(teleport_reduce_scaled(&base, 2), Err(Error::Transform(_))));
        assert!(matches!(teleport_reduce_scaled(&path_network(2, 2), 1), Err(Error::Transform(_))));
    }

    #[test]
    fn sandwich_on_path() {
        let report = sandwich_check(&path_network(2, 3), 2, |n| Ok(u64::try_from(&min_cut(n)?.value).unwrap())).unwrap();
        assert_eq!(report.mc_lower, BigUint::from(4u32));
        assert_eq!(report.mc_upper, BigUint::from(4u32));
        assert!(report.holds());
    }
}
