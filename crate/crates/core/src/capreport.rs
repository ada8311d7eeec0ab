//! One-shot capacity summary of a network: min-cut, rank estimate, classical
//! coding capacities over orientations and splits, and the resulting bounds
//! on the one-shot quantum capacity.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bigser;
use crate::codingsearch::{c1_exact, CodingPlan, ProtocolTable, SearchConfig, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::netmodel::{min_cut, orient, Network, Orientation};
use crate::tnrank::{estimate_r1_with, PrimeField, DEFAULT_PRIME};
use crate::transforms::{orient_terminal_edges, split_cycle_edge, SplitSpec};

/// Orientation sweeps enumerate `2^m` assignments; `m` is capped here.
pub const MAX_FREE_EDGES: usize = 16;

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub splits: Vec<SplitSpec>,
    /// Also enumerate directions of edges at sources and sinks instead of
    /// pointing them away from sources and into sinks.
    pub all_orientations: bool,
    pub prime: u64,
    pub rank_trials: usize,
    pub seed: u64,
    pub coding_budget: u64,
    /// Exact tensor rank known independently (e.g. from a fixture).
    pub r1_exact: Option<u64>,
    pub exec: Exec,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            splits: Vec::new(),
            all_orientations: false,
            prime: DEFAULT_PRIME,
            rank_trials: 5,
            seed: 0,
            coding_budget: DEFAULT_BUDGET,
            r1_exact: None,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    Orientation,
    Split,
}

#[derive(Debug, Clone, Serialize)]
pub struct C1Entry {
    pub label: String,
    pub kind: CandidateKind,
    #[serde(with = "bigser::opt")]
    pub mc_directed: Option<BigUint>,
    pub c1: Option<usize>,
    /// `exact`, `budget_exceeded` or `error: ...`.
    pub status: String,
    #[serde(skip)]
    pub witness: Option<ProtocolTable>,
}

#[derive(Debug, Clone, Serialize)]
pub struct R1Summary {
    pub r1_lower: u64,
    pub failure_bound: f64,
    #[serde(with = "bigser::ratio")]
    pub failure_bound_exact: num_rational::Ratio<BigUint>,
    pub certified_exact: bool,
    pub prime: u64,
    pub trials: usize,
    pub ranks: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Regularized {
    #[serde(rename = "R", with = "bigser")]
    pub r: BigUint,
    #[serde(rename = "Q", with = "bigser")]
    pub q: BigUint,
    /// `Q` is taken equal to `R` as an external claim, not computed here.
    pub q_basis: &'static str,
    #[serde(rename = "C_directed", with = "bigser::opt")]
    pub c_directed: Option<BigUint>,
    /// Candidate whose directed min-cut is reported.
    pub chosen: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CapacityReport {
    #[serde(with = "bigser")]
    pub mc: BigUint,
    pub mc_witness: Vec<String>,
    pub r1: Option<R1Summary>,
    /// `estimated`, `certified`, `fixture` or `error: ...`.
    pub r1_status: String,
    pub c1_results: Vec<C1Entry>,
    pub q1_lower: u64,
    #[serde(with = "bigser")]
    pub q1_upper: BigUint,
    /// Set when the bounds meet.
    pub q1: Option<u64>,
    pub regularized: Regularized,
    pub checks: Vec<Check>,
    pub ok: bool,
}

fn label_of(assignment: &BTreeMap<String, Orientation>) -> String {
    if assignment.is_empty() {
        return "fixed".to_string();
    }
    assignment
        .iter()
        .map(|(id, o)| format!("{id}:{}", if *o == Orientation::Uv { "uv" } else { "vu" }))
        .collect::<Vec<_>>()
        .join(",")
}

/// Every direction assignment of the undirected edges that leaves the
/// non-terminal part acyclic, labelled by the enumerated choices. Unless
/// `all` is set, edges at sources and sinks are pointed outward first and
/// only edges between non-terminals are enumerated.
pub fn acyclic_orientations(net: &Network, all: bool) -> Result<Vec<(String, Network)>> {
    net.validated()?;
    let base = if all { net.clone() } else { orient_terminal_edges(net) };
    let free: Vec<String> = base.edges.iter().filter(|e| !e.is_directed()).map(|e| e.id.clone()).collect();
    if free.len() > MAX_FREE_EDGES {
        return Err(Error::TooLarge {
            free: free.len(),
            limit: MAX_FREE_EDGES,
        });
    }
    let mut out = Vec::new();
    for mask in 0u32..(1 << free.len()) {
        let assignment: BTreeMap<String, Orientation> = free
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), if mask >> i & 1 == 0 { Orientation::Uv } else { Orientation::Vu }))
            .collect();
        let oriented = orient(&base, &assignment)?;
        match CodingPlan::new(&oriented) {
            Ok(_) => out.push((label_of(&assignment), oriented)),
            Err(Error::Cyclic(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn evaluate(label: String, kind: CandidateKind, net: Result<Network>, cfg: &SearchConfig) -> C1Entry {
    let result = net.and_then(|net| {
        let mc = min_cut(&net)?.value;
        let cap = usize::try_from(&mc).unwrap_or(usize::MAX);
        Ok((mc, c1_exact(&net, cap, cfg)))
    });
    let (mc_directed, c1) = match result {
        Ok((mc, c1)) => (Some(mc), c1),
        Err(e) => (None, Err(e)),
    };
    let (c1, status, witness) = match c1 {
        Ok(r) => (Some(r.c1), "exact".to_string(), Some(r.witness)),
        Err(Error::BudgetExceeded(_)) => (None, "budget_exceeded".to_string(), None),
        Err(e) => (None, format!("error: {e}"), None),
    };
    C1Entry {
        label,
        kind,
        mc_directed,
        c1,
        status,
        witness,
    }
}

pub fn capacity_report(net: &Network, opts: &ReportOptions) -> Result<CapacityReport> {
    net.validated()?;
    let cut = min_cut(net)?;
    let mc = cut.value.clone();

    let field = PrimeField::new(opts.prime)?;
    let (r1, r1_status) = match estimate_r1_with(net, field, opts.rank_trials, opts.seed, opts.exec) {
        Ok(est) => {
            let status = if est.is_certified_exact() {
                "certified"
            } else if opts.r1_exact == Some(est.r1_lower) {
                "fixture"
            } else {
                "estimated"
            };
            let summary = R1Summary {
                r1_lower: est.r1_lower,
                failure_bound: est.failure_bound_f64(),
                failure_bound_exact: est.failure_bound.clone(),
                certified_exact: est.is_certified_exact(),
                prime: opts.prime,
                trials: est.ranks.len(),
                ranks: est.ranks,
            };
            (Some(summary), status.to_string())
        }
        Err(e) => (None, format!("error: {e}")),
    };

    let cfg = SearchConfig {
        node_budget: opts.coding_budget,
        exec: opts.exec,
        ..SearchConfig::new(1)
    };
    let mut candidates: Vec<(String, CandidateKind, Result<Network>)> = acyclic_orientations(net, opts.all_orientations)?
        .into_iter()
        .map(|(label, n)| (label, CandidateKind::Orientation, Ok(n)))
        .collect();
    for spec in &opts.splits {
        let label = format!("split {} {}x{}", spec.edge, spec.a, spec.b);
        candidates.push((label, CandidateKind::Split, split_cycle_edge(net, spec)));
    }
    let c1_results = opts
        .exec
        .map(candidates, |(label, kind, n)| evaluate(label, kind, n, &cfg));

    let q1_lower = c1_results.iter().filter_map(|e| e.c1).max().unwrap_or(1) as u64;
    let r1_exact_known = r1.as_ref().is_some_and(|s| s.certified_exact || opts.r1_exact == Some(s.r1_lower));
    let q1_upper = match &r1 {
        Some(s) if r1_exact_known => BigUint::from(s.r1_lower),
        _ => mc.clone(),
    };
    let q1 = (BigUint::from(q1_lower) == q1_upper).then_some(q1_lower);

    let chosen = c1_results.iter().find(|e| e.c1 == Some(q1_lower as usize));
    let regularized = Regularized {
        r: mc.clone(),
        q: mc.clone(),
        q_basis: "asserted equal to R, not computed",
        c_directed: chosen.and_then(|e| e.mc_directed.clone()),
        chosen: chosen.map(|e| e.label.clone()),
    };

    let mut checks = vec![
        Check {
            name: "q1_lower <= q1_upper".into(),
            ok: BigUint::from(q1_lower) <= q1_upper,
        },
        Check {
            name: "q1_upper <= mc".into(),
            ok: q1_upper <= mc,
        },
        Check {
            name: "regularized R = mc".into(),
            ok: regularized.r == mc,
        },
    ];
    if let Some(s) = &r1 {
        checks.push(Check {
            name: "r1_lower <= mc".into(),
            ok: BigUint::from(s.r1_lower) <= mc,
        });
        if let Some(x) = opts.r1_exact {
            checks.push(Check {
                name: format!("r1 estimate reaches known value {x}"),
                ok: s.r1_lower == x,
            });
        }
    }
    for e in &c1_results {
        if let (Some(c1), Some(mcd)) = (e.c1, &e.mc_directed) {
            checks.push(Check {
                name: format!("c1 <= directed mc <= mc [{}]", e.label),
                ok: BigUint::from(c1) <= *mcd && *mcd <= mc,
            });
        }
    }
    let ok = checks.iter().all(|c| c.ok);

    Ok(CapacityReport {
        mc,
        mc_witness: cut.s_side.into_iter().collect(),
        r1,
        r1_status,
        c1_results,
        q1_lower,
        q1_upper,
        q1,
        regularized,
        checks,
        ok,
    })
}

impl CapacityReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1_network, path_network};

    #[test]
    fn path_report_is_tight() {
        let r = capacity_report(&path_network(2, 3), &ReportOptions::default()).unwrap();
        assert_eq!(r.mc, BigUint::from(2u32));
        assert_eq!(r.r1.as_ref().unwrap().r1_lower, 2);
        assert_eq!(r.c1_results.len(), 1);
        assert_eq!(r.c1_results[0].c1, Some(2));
        assert_eq!(r.q1, Some(2));
        assert_eq!(r.regularized.r, BigUint::from(2u32));
        assert_eq!(r.regularized.q, BigUint::from(2u32));
        assert_eq!(r.regularized.c_directed, Some(BigUint::from(2u32)));
        assert!(r.ok);
    }

    #[test]
    fn fig1_has_two_default_orientations() {
        let o = acyclic_orientations(&fig1_network([2, 3, 3, 2, 2]), false).unwrap();
        let labels: Vec<&str> = o.iter().map(|(l, _)| l.as_str()).collect();
        assert_eq!(labels, ["e5:uv", "e5:vu"]);
    }

    #[test]
    fn all_orientations_drops_cycles() {
        let o = acyclic_orientations(&fig1_network([2, 3, 3, 2, 2]), true).unwrap();
        // a single edge joins the two internal vertices, so nothing is cyclic
        assert_eq!(o.len(), 32);
    }

    #[test]
    fn known_rank_tightens_upper_bound() {
        let opts = ReportOptions {
            r1_exact: Some(14),
            coding_budget: 10_000,
            ..ReportOptions::default()
        };
        let r = capacity_report(&fig1_network([5, 3, 3, 5, 2]), &opts).unwrap();
        assert_eq!(r.mc, BigUint::from(15u32));
        assert_eq!(r.r1_status, "fixture");
        assert_eq!(r.q1_upper, BigUint::from(14u32));
        let vu = r.c1_results.iter().find(|e| e.label == "e5:vu").unwrap();
        assert_eq!((vu.c1, vu.status.as_str()), (Some(9), "exact"));
        let uv = r.c1_results.iter().find(|e| e.label == "e5:uv").unwrap();
        assert_eq!(uv.status, "budget_exceeded");
        assert_eq!(r.q1_lower, 9);
        assert_eq!(r.regularized.c_directed, Some(BigUint::from(9u32)));
        assert!(r.ok);
    }
}
