//! One-shot classical network coding on directed acyclic networks:
//! protocol tables, simulation, and exhaustive search for the largest
//! transmissible alphabet.
//!
//! A protocol sends a message from `[l]` through a source encoder and one
//! deterministic function table per non-terminal vertex. A decoder at the
//! sinks exists exactly when the map from messages to sink symbols is
//! injective, so decoders are never represented.
//!
//! Conventions shared by tables, simulation and the JSON form:
//! - all sources act as one encoder, all sinks as one decoder;
//! - edge tuples (source outputs, node inputs, node outputs, sink symbols)
//!   are ordered by edge id;
//! - a node table row is the row-major index of its input tuple and its
//!   value the row-major index of its output tuple;
//! - the late half of a split vertex also reads every input of its early
//!   half;
//! - edges leaving a sink carry the constant symbol 0; edges entering a
//!   source are ignored.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::netmodel::{min_cut, Network};

/// Default cap on candidate tables examined per search shard.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeTable {
    pub table: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolTable {
    pub l: usize,
    /// Row `m`: the symbols message `m` puts on the source out-edges.
    pub source: Vec<Vec<u32>>,
    pub nodes: BTreeMap<String, NodeTable>,
}

impl ProtocolTable {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_canonical_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("protocol serializes");
        out.push('\n');
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Source,
    Sink,
    Node(usize),
}

#[derive(Debug, Clone)]
struct PlanNode {
    name: String,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    rows: usize,
    out_space: u64,
}

/// Evaluation order and wiring of a coding network.
#[derive(Debug, Clone)]
pub struct CodingPlan {
    edge_ids: Vec<String>,
    dims: Vec<u32>,
    source_out: Vec<usize>,
    sink_in: Vec<usize>,
    nodes: Vec<PlanNode>,
}

fn mixed_radix(digits: impl Iterator<Item = (u64, u64)>) -> u64 {
    digits.fold(0, |acc, (digit, radix)| acc * radix + digit)
}

impl CodingPlan {
    pub fn new(net: &Network) -> Result<CodingPlan> {
        net.validated()?;
        let mut edges: Vec<(&str, &str, &str, u64)> = Vec::new();
        for e in &net.edges {
            let (tail, head) = e.arc().ok_or_else(|| Error::MissingOrientation(e.id.clone()))?;
            edges.push((e.id.as_str(), tail, head, e.dim));
        }
        edges.sort_by(|a, b| a.0.cmp(b.0));

        let internal: Vec<&str> = net.internal_vertices().collect();
        let end_of = |v: &str| {
            if net.is_source(v) {
                End::Source
            } else if net.is_sink(v) {
                End::Sink
            } else {
                End::Node(internal.iter().position(|x| *x == v).expect("declared vertex"))
            }
        };

        let mut edge_ids = Vec::new();
        let mut dims = Vec::new();
        let mut source_out = Vec::new();
        let mut sink_in = Vec::new();
        let mut ins: Vec<Vec<usize>> = vec![Vec::new(); internal.len()];
        let mut outs: Vec<Vec<usize>> = vec![Vec::new(); internal.len()];
        let mut arcs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (id, tail, head, dim) in edges {
            let (t, h) = (end_of(tail), end_of(head));
            let useful = match (t, h) {
                (End::Source, End::Source) | (End::Sink, End::Sink) | (End::Sink, End::Source) => false,
                (End::Node(a), End::Node(b)) => a != b,
                _ => true,
            };
            if !useful {
                continue;
            }
            let dim = u32::try_from(dim).map_err(|_| Error::Overflow("edge alphabet"))?;
            let idx = edge_ids.len();
            edge_ids.push(id.to_string());
            dims.push(dim);
            match t {
                End::Source => source_out.push(idx),
                End::Node(a) => outs[a].push(idx),
                End::Sink => {}
            }
            match h {
                End::Sink => sink_in.push(idx),
                End::Node(b) => ins[b].push(idx),
                End::Source => {}
            }
            if let (End::Node(a), End::Node(b)) = (t, h) {
                arcs.insert((a, b));
            }
        }

        // late halves inherit the inputs of their early halves
        let mut inputs = ins.clone();
        for st in &net.stages {
            let (End::Node(e), End::Node(l)) = (end_of(&st.early), end_of(&st.late)) else {
                continue;
            };
            arcs.insert((e, l));
            inputs[l].extend(ins[e].iter().copied());
            inputs[l].sort_unstable();
            inputs[l].dedup();
        }

        // Kahn's algorithm, smallest vertex id first
        let mut indeg = vec![0usize; internal.len()];
        for &(_, b) in &arcs {
            indeg[b] += 1;
        }
        let mut ready: BTreeSet<(&str, usize)> =
            (0..internal.len()).filter(|&i| indeg[i] == 0).map(|i| (internal[i], i)).collect();
        let mut order = Vec::new();
        while let Some(&first) = ready.iter().next() {
            ready.remove(&first);
            let i = first.1;
            order.push(i);
            for &(_, b) in arcs.range((i, 0)..(i + 1, 0)) {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.insert((internal[b], b));
                }
            }
        }
        if order.len() < internal.len() {
            let stuck = (0..internal.len()).find(|&i| indeg[i] > 0).expect("cycle member");
            return Err(Error::Cyclic(internal[stuck].to_string()));
        }

        let mut nodes = Vec::with_capacity(order.len());
        for i in order {
            let rows = inputs[i]
                .iter()
                .try_fold(1usize, |acc, &e| acc.checked_mul(dims[e] as usize))
                .ok_or(Error::Overflow("node table rows"))?;
            let out_space = outs[i]
                .iter()
                .try_fold(1u64, |acc, &e| acc.checked_mul(dims[e] as u64))
                .ok_or(Error::Overflow("node output space"))?;
            nodes.push(PlanNode {
                name: internal[i].to_string(),
                inputs: inputs[i].clone(),
                outputs: outs[i].clone(),
                rows,
                out_space,
            });
        }
        // edges leaving a sink feed nodes with the constant 0; nothing to record
        Ok(CodingPlan {
            edge_ids,
            dims,
            source_out,
            sink_in,
            nodes,
        })
    }

    /// Size of the source encoder's output space.
    pub fn source_space(&self) -> u64 {
        self.source_out.iter().map(|&e| self.dims[e] as u64).product()
    }

    /// Node names in evaluation order.
    pub fn order(&self) -> Vec<&str> {
        self.nodes.iter().map(|n| n.name.as_str()).collect()
    }

    pub fn sink_edges(&self) -> Vec<&str> {
        self.sink_in.iter().map(|&e| self.edge_ids[e].as_str()).collect()
    }

    fn row_of(&self, node: &PlanNode, sym: &[u32]) -> usize {
        mixed_radix(node.inputs.iter().map(|&e| (sym[e] as u64, self.dims[e] as u64))) as usize
    }

    fn write_outputs(&self, node: &PlanNode, mut value: u64, sym: &mut [u32]) {
        for &e in node.outputs.iter().rev() {
            let d = self.dims[e] as u64;
            sym[e] = (value % d) as u32;
            value /= d;
        }
    }

    fn write_source(&self, mut value: u64, sym: &mut [u32]) {
        for &e in self.source_out.iter().rev() {
            let d = self.dims[e] as u64;
            sym[e] = (value % d) as u32;
            value /= d;
        }
    }

    fn check(&self, pt: &ProtocolTable) -> Result<()> {
        let bad = |msg: String| Err(Error::ShapeMismatch(msg));
        if pt.l == 0 || pt.source.len() != pt.l {
            return bad(format!("source encoder has {} rows for l = {}", pt.source.len(), pt.l));
        }
        for row in &pt.source {
            if row.len() != self.source_out.len() {
                return bad(format!("source rows need {} symbols", self.source_out.len()));
            }
            if row.iter().zip(&self.source_out).any(|(&s, &e)| s >= self.dims[e]) {
                return bad("source symbol outside its edge alphabet".into());
            }
        }
        for node in &self.nodes {
            let Some(t) = pt.nodes.get(&node.name) else {
                return bad(format!("no table for `{}`", node.name));
            };
            if t.table.len() != node.rows {
                return bad(format!("table for `{}` needs {} rows", node.name, node.rows));
            }
            if t.table.iter().any(|&v| v >= node.out_space) {
                return bad(format!("table for `{}` leaves its output alphabet", node.name));
            }
        }
        if let Some(extra) = pt.nodes.keys().find(|k| !self.nodes.iter().any(|n| &n.name == *k)) {
            return bad(format!("table for unknown node `{extra}`"));
        }
        Ok(())
    }

    fn run(&self, pt: &ProtocolTable, message: usize) -> Vec<u32> {
        let mut sym = vec![0u32; self.dims.len()];
        for (&e, &s) in self.source_out.iter().zip(&pt.source[message]) {
            sym[e] = s;
        }
        for node in &self.nodes {
            let row = self.row_of(node, &sym);
            self.write_outputs(node, pt.nodes[&node.name].table[row], &mut sym);
        }
        self.sink_in.iter().map(|&e| sym[e]).collect()
    }
}

/// Symbols arriving at the sinks (ordered by edge id) when `message` is sent.
pub fn simulate(net: &Network, pt: &ProtocolTable, message: usize) -> Result<Vec<u32>> {
    let plan = CodingPlan::new(net)?;
    plan.check(pt)?;
    if message >= pt.l {
        return Err(Error::MessageOutOfRange { message, l: pt.l });
    }
    Ok(plan.run(pt, message))
}

/// Whether the sinks can decode every message, i.e. the end-to-end map is
/// injective.
pub fn is_valid(net: &Network, pt: &ProtocolTable) -> Result<bool> {
    let plan = CodingPlan::new(net)?;
    plan.check(pt)?;
    let mut seen = BTreeSet::new();
    Ok((0..pt.l).all(|m| seen.insert(plan.run(pt, m))))
}

#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    /// Target alphabet size.
    pub l: usize,
    /// Candidate tables examined per shard before giving up.
    pub node_budget: u64,
    /// Messages are interchangeable labels, so the encoder only needs to be
    /// enumerated up to relabeling: when `l` equals the source output space
    /// it is fixed to the identity bijection, otherwise enumerated as
    /// strictly increasing sequences.
    pub fix_source_bijection: bool,
    /// `(index, count)`: examine only this slice of the outermost choices.
    /// `None` runs every shard, in parallel under [`Exec::Parallel`].
    pub shard: Option<(usize, usize)>,
    pub exec: Exec,
}

impl SearchConfig {
    pub fn new(l: usize) -> Self {
        SearchConfig {
            l,
            node_budget: DEFAULT_BUDGET,
            fix_source_bijection: true,
            shard: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Witness(ProtocolTable),
    Impossible,
    BudgetExceeded,
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<&ProtocolTable> {
        match self {
            SearchOutcome::Witness(pt) => Some(pt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    /// Upper estimate of the search space before pruning: encoder choices
    /// times every full node table.
    pub space_estimate: BigUint,
    /// Candidate tables actually examined, summed over shards.
    pub tables_tried: u64,
}

/// Number of candidate protocols before pruning.
pub fn search_space(plan: &CodingPlan, cfg: &SearchConfig) -> BigUint {
    let n = BigUint::from(plan.source_space());
    let l = cfg.l as u64;
    let encoders = if cfg.fix_source_bijection && BigUint::from(l) == n {
        BigUint::one()
    } else if cfg.fix_source_bijection {
        binomial(&n, l)
    } else {
        num_traits::pow(n, cfg.l)
    };
    plan.nodes.iter().fold(encoders, |acc, node| {
        acc * num_traits::pow(BigUint::from(node.out_space), node.rows)
    })
}

fn binomial(n: &BigUint, k: u64) -> BigUint {
    if BigUint::from(k) > *n {
        return BigUint::from(0u32);
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - BigUint::from(i)) / BigUint::from(i + 1))
}

struct Shard<'a> {
    plan: &'a CodingPlan,
    cfg: SearchConfig,
    sym: Vec<Vec<u32>>,
    /// `needed[level]`: edges whose symbols can still influence the sinks
    /// once levels `0..=level` are fixed (level 0 = encoder).
    needed: Vec<Vec<usize>>,
    keys: Vec<u128>,
    encoder: Vec<u64>,
    chosen: Vec<Vec<(usize, u64)>>,
    tried: u64,
    exhausted: bool,
    /// Index of the current choice at the outermost enumerated level.
    outer_index: u64,
}

struct ShardResult {
    witness: Option<(u64, ProtocolTable)>,
    exhausted: bool,
    tried: u64,
}

impl<'a> Shard<'a> {
    fn new(plan: &'a CodingPlan, cfg: SearchConfig) -> Self {
        let mut needed = Vec::with_capacity(plan.nodes.len() + 1);
        let mut determined: BTreeSet<usize> = plan.source_out.iter().copied().collect();
        for level in 0..=plan.nodes.len() {
            if level > 0 {
                determined.extend(plan.nodes[level - 1].outputs.iter().copied());
            }
            let mut future: BTreeSet<usize> = plan.sink_in.iter().copied().collect();
            for node in &plan.nodes[level..] {
                future.extend(node.inputs.iter().copied());
            }
            needed.push(determined.intersection(&future).copied().collect());
        }
        Shard {
            plan,
            cfg,
            sym: vec![vec![0; plan.dims.len()]; cfg.l],
            needed,
            keys: vec![0; cfg.l],
            encoder: vec![0; cfg.l],
            chosen: vec![Vec::new(); plan.nodes.len()],
            tried: 0,
            exhausted: false,
            outer_index: 0,
        }
    }

    /// No two messages agree on every edge that still matters.
    fn separated(&mut self, level: usize) -> bool {
        let needed = &self.needed[level];
        let dims = &self.plan.dims;
        let fits = needed
            .iter()
            .try_fold(1u128, |acc, &e| acc.checked_mul(dims[e] as u128))
            .is_some();
        if fits {
            for (key, sym) in self.keys.iter_mut().zip(&self.sym) {
                *key = needed.iter().fold(0u128, |acc, &e| acc * dims[e] as u128 + sym[e] as u128);
            }
            self.keys.sort_unstable();
            self.keys.windows(2).all(|w| w[0] != w[1])
        } else {
            let mut seen = BTreeSet::new();
            self.sym
                .iter()
                .all(|s| seen.insert(needed.iter().map(|&e| s[e]).collect::<Vec<_>>()))
        }
    }

    fn spend(&mut self) -> bool {
        self.tried += 1;
        if self.tried > self.cfg.node_budget {
            self.exhausted = true;
        }
        !self.exhausted
    }

    /// Whether candidate `index` at the outermost level belongs to this shard.
    fn mine(&self, index: u64) -> bool {
        match self.cfg.shard {
            Some((i, n)) => index % n as u64 == i as u64,
            None => true,
        }
    }

    fn run(mut self) -> ShardResult {
        let n = self.plan.source_space();
        let l = self.cfg.l as u64;
        let found = if l > n {
            false
        } else if self.cfg.fix_source_bijection && l == n {
            for m in 0..self.cfg.l {
                self.encoder[m] = m as u64;
                self.plan.write_source(m as u64, &mut self.sym[m]);
            }
            self.separated(0) && self.node_level(0, true)
        } else {
            let increasing = self.cfg.fix_source_bijection;
            let mut counter = 0u64;
            let mut used = vec![false; n as usize];
            self.encoder_level(0, increasing, &mut used, &mut counter)
        };
        let witness = found.then(|| (self.outer_index, self.assemble()));
        ShardResult {
            witness,
            exhausted: self.exhausted,
            tried: self.tried,
        }
    }

    fn encoder_level(&mut self, m: usize, increasing: bool, used: &mut [bool], counter: &mut u64) -> bool {
        if m == self.cfg.l {
            let index = *counter;
            *counter += 1;
            if !self.mine(index) || !self.spend() {
                return false;
            }
            self.outer_index = index;
            return self.separated(0) && self.node_level(0, false);
        }
        let start = if increasing && m > 0 { self.encoder[m - 1] + 1 } else { 0 };
        for value in start..used.len() as u64 {
            if used[value as usize] {
                continue;
            }
            used[value as usize] = true;
            self.encoder[m] = value;
            self.plan.write_source(value, &mut self.sym[m]);
            let found = self.encoder_level(m + 1, increasing, used, counter);
            used[value as usize] = false;
            if found || self.exhausted {
                return found;
            }
        }
        false
    }

    /// Enumerate tables of node `i` over the rows some message reaches; rows
    /// no message reaches stay 0.
    fn node_level(&mut self, i: usize, outermost: bool) -> bool {
        let plan = self.plan;
        if i == plan.nodes.len() {
            return true;
        }
        let node = &plan.nodes[i];
        let rows: Vec<usize> = self.sym.iter().map(|s| plan.row_of(node, s)).collect();
        let mut relevant: Vec<usize> = rows.clone();
        relevant.sort_unstable();
        relevant.dedup();
        let slot: Vec<usize> = rows.iter().map(|r| relevant.binary_search(r).unwrap()).collect();

        let mut values = vec![0u64; relevant.len()];
        let mut index = 0u64;
        loop {
            let take = !outermost || self.mine(index);
            if take {
                if !self.spend() {
                    return false;
                }
                if outermost {
                    self.outer_index = index;
                }
                for (m, &k) in slot.iter().enumerate() {
                    plan.write_outputs(node, values[k], &mut self.sym[m]);
                }
                if self.separated(i + 1) && self.node_level(i + 1, false) {
                    self.chosen[i] = relevant.iter().copied().zip(values.iter().copied()).collect();
                    return true;
                }
                if self.exhausted {
                    return false;
                }
            }
            index += 1;
            // odometer, last relevant row fastest
            let mut pos = values.len();
            loop {
                if pos == 0 {
                    return false;
                }
                pos -= 1;
                values[pos] += 1;
                if values[pos] < node.out_space {
                    break;
                }
                values[pos] = 0;
            }
        }
    }

    fn assemble(&self) -> ProtocolTable {
        let plan = self.plan;
        let source = self
            .encoder
            .iter()
            .map(|&v| {
                let mut sym = vec![0u32; plan.dims.len()];
                plan.write_source(v, &mut sym);
                plan.source_out.iter().map(|&e| sym[e]).collect()
            })
            .collect();
        let nodes = plan
            .nodes
            .iter()
            .zip(&self.chosen)
            .map(|(node, chosen)| {
                let mut table = vec![0u64; node.rows];
                for &(row, value) in chosen {
                    table[row] = value;
                }
                (node.name.clone(), NodeTable { table })
            })
            .collect();
        ProtocolTable {
            l: self.cfg.l,
            source,
            nodes,
        }
    }
}

/// Decide whether an alphabet of size `cfg.l` can be sent through `net`.
///
/// Backtracks over the encoder and then each node's table in evaluation
/// order. After every level the messages are compared on the edges that can
/// still reach the sinks; two messages that agree there can never be
/// separated, and the branch is cut. The first witness in lexicographic
/// table order is returned, `Impossible` only after the space is exhausted.
pub fn exhaustive_achievable(net: &Network, cfg: &SearchConfig) -> Result<SearchReport> {
    let plan = CodingPlan::new(net)?;
    Ok(search_plan(&plan, cfg))
}

fn search_plan(plan: &CodingPlan, cfg: &SearchConfig) -> SearchReport {
    let space_estimate = search_space(plan, cfg);
    if cfg.l == 0 {
        return SearchReport {
            outcome: SearchOutcome::Impossible,
            space_estimate,
            tables_tried: 0,
        };
    }
    let shards: Vec<SearchConfig> = match cfg.shard {
        Some(_) => vec![*cfg],
        None => {
            let count = if cfg.exec.threads() > 1 { cfg.exec.threads() * 4 } else { 1 };
            (0..count)
                .map(|i| SearchConfig {
                    shard: Some((i, count)),
                    ..*cfg
                })
                .collect()
        }
    };
    let results = cfg.exec.map(shards, |c| Shard::new(plan, c).run());

    let tables_tried = results.iter().map(|r| r.tried).sum();
    let exhausted = results.iter().any(|r| r.exhausted);
    let witness = results
        .into_iter()
        .filter_map(|r| r.witness)
        .min_by_key(|(index, _)| *index)
        .map(|(_, pt)| pt);
    let outcome = match (witness, exhausted) {
        (Some(pt), _) => SearchOutcome::Witness(pt),
        (None, true) => SearchOutcome::BudgetExceeded,
        (None, false) => SearchOutcome::Impossible,
    };
    SearchReport {
        outcome,
        space_estimate,
        tables_tried,
    }
}

#[derive(Debug, Clone)]
pub struct C1Result {
    /// Largest achievable alphabet not above the requested cap.
    pub c1: usize,
    pub witness: ProtocolTable,
    /// Directed min-cut of the network.
    pub mc_directed: BigUint,
    /// Searches run, from the largest `l` down.
    pub searched: Vec<(usize, SearchOutcome)>,
}

/// Largest `l <= l_max` with a valid protocol, searching downward from
/// `min(l_max, directed min-cut)`.
pub fn c1_exact(net: &Network, l_max: usize, cfg: &SearchConfig) -> Result<C1Result> {
    let plan = CodingPlan::new(net)?;
    let mc_directed = min_cut(net)?.value;
    let cap = u64::try_from(&mc_directed).map_or(l_max, |mc| l_max.min(mc as usize));
    let mut searched = Vec::new();
    for l in (1..=cap.max(1)).rev() {
        let report = search_plan(&plan, &SearchConfig { l, ..*cfg });
        match report.outcome {
            SearchOutcome::Witness(witness) => {
                searched.push((l, SearchOutcome::Witness(witness.clone())));
                return Ok(C1Result {
                    c1: l,
                    witness,
                    mc_directed,
                    searched,
                });
            }
            SearchOutcome::BudgetExceeded => return Err(Error::BudgetExceeded(cfg.node_budget)),
            SearchOutcome::Impossible => searched.push((l, SearchOutcome::Impossible)),
        }
    }
    unreachable!("a single message is always transmissible")
}

/// Builds a table for node `name` from a rule on its input tuple.
fn table_for(net: &Network, name: &str, rule: impl Fn(&HashMap<&str, u32>) -> HashMap<&'static str, u32>) -> NodeTable {
    let plan = CodingPlan::new(net).expect("fixture network");
    let node = plan.nodes.iter().find(|n| n.name == name).expect("fixture node");
    let table = (0..node.rows)
        .map(|row| {
            let mut rest = row as u64;
            let mut input = HashMap::new();
            for &e in node.inputs.iter().rev() {
                let d = plan.dims[e] as u64;
                input.insert(plan.edge_ids[e].as_str(), (rest % d) as u32);
                rest /= d;
            }
            let out = rule(&input);
            mixed_radix(node.outputs.iter().map(|&e| {
                (out.get(plan.edge_ids[e].as_str()).copied().unwrap_or(0) as u64, plan.dims[e] as u64)
            }))
        })
        .collect();
    NodeTable { table }
}

/// The `l = 6` protocol on the split network with a 4-dimensional middle
/// edge factored as `2 x 2` (see [`crate::fixtures::n4_split`]).
///
/// Messages are pairs `(x1, x2)` in `[2] x [3]`. The lower node tells the
/// upper one whether `x2 = 2`. If not, both forward their inputs; if so, the
/// upper node emits 2 and the lower node forwards the bit `x1` it received on
/// the downward half of the middle edge.
pub fn reference_protocol_n4() -> ProtocolTable {
    let net = crate::fixtures::build::n4_split();
    let source = (0..2).flat_map(|x1| (0..3).map(move |x2| vec![x1, x2])).collect();
    let nodes = [
        ("n1:early", table_for(&net, "n1:early", |i| [("e5b", i["e1"])].into())),
        ("n2:early", table_for(&net, "n2:early", |i| [("e5a", u32::from(i["e2"] == 2))].into())),
        (
            "n1:late",
            table_for(&net, "n1:late", |i| {
                [("e3", if i["e5a"] == 0 { i["e1"] } else { 2 })].into()
            }),
        ),
        (
            "n2:late",
            table_for(&net, "n2:late", |i| {
                [("e4", if i["e2"] < 2 { i["e2"] } else { i["e5b"] })].into()
            }),
        ),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    ProtocolTable { l: 6, source, nodes }
}

/// The `l = 5` protocol on the network with a 2-dimensional middle edge
/// pointing from `n2` to `n1` (see [`crate::fixtures::n2_up`]).
///
/// The messages are the input pairs `(0,0), (0,1), (1,0), (1,1), (0,2)`. If
/// `x2 < 2` both nodes forward their inputs; if `x2 = 2` the lower node sends
/// 1 upward and 0 to the sink while the upper node sends 2.
pub fn reference_protocol_n2() -> ProtocolTable {
    let net = crate::fixtures::build::n2_up();
    let source = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1], vec![0, 2]];
    let nodes = [
        (
            "n1",
            table_for(&net, "n1", |i| [("e3", if i["e5"] == 0 { i["e1"] } else { 2 })].into()),
        ),
        (
            "n2",
            table_for(&net, "n2", |i| {
                if i["e2"] < 2 {
                    [("e4", i["e2"]), ("e5", 0)].into()
                } else {
                    [("e4", 0), ("e5", 1)].into()
                }
            }),
        ),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    ProtocolTable { l: 5, source, nodes }
}
