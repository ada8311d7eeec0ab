//! Named numeric claims about the four-vertex network family, each
//! recomputed from scratch and compared with its expected value.

use std::fmt::Display;

use num_bigint::BigUint;
use serde::Serialize;

use crate::capreport::acyclic_orientations;
use crate::codingsearch::{exhaustive_achievable, is_valid, reference_protocol_n2, reference_protocol_n4, SearchConfig, SearchOutcome};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fixtures;
use crate::gen::{property_sweep, GenParams};
use crate::netmodel::{min_cut, scale, Edge, Network};
use crate::tnrank::{contract, estimate_r1_with, rank_mod_p, PrimeField, DEFAULT_PRIME};
use crate::transforms::{sandwich_check, teleport_reduce_scaled};

pub const CLAIMS: &[(&str, &str)] = &[
    ("mincut", "MC = 15 on (5,3,3,5,2) and MC = 6 on (2,3,3,2,d5) for d5 in 2..=10"),
    ("r1-gap", "tensor rank 14 on (5,3,3,5,2), one below its min-cut"),
    ("r1-saturation", "tensor rank 6 = MC on (2,3,3,2,d5) for d5 in 2..=4"),
    ("coding-achievability", "6 messages through the split d5=4 network, 5 through the up-oriented d5=2 network"),
    ("coding-impossibility", "6 messages fail on the up-oriented d5=2 network and on every orientation of d5=4"),
    ("scaled-rank", "tensor rank meets the min-cut on (2,3,3,2,2) scaled by k = 2, 3"),
    ("sandwich", "power-of-two sandwich of the regularized rank for n = 1, 2"),
    ("properties", "invariants on 200 random networks"),
    ("q1-interval", "one-shot quantum capacity of (2,3,3,2,d5), d5 = 2, 3, lies in [5, 6]"),
];

#[derive(Debug, Clone, Serialize)]
pub struct ClaimOutcome {
    pub name: String,
    pub pass: bool,
    /// One line of computed values and the verdict.
    pub summary: String,
    pub details: Vec<String>,
}

struct Tally {
    pass: bool,
    headline: Option<String>,
    details: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            pass: true,
            headline: None,
            details: Vec::new(),
        }
    }

    fn eq<T: PartialEq + Display>(&mut self, what: impl Display, got: T, want: T) {
        let ok = got == want;
        self.pass &= ok;
        self.details.push(format!("{what} = {got} (expected {want}) {}", verdict(ok)));
    }

    fn holds(&mut self, what: impl Display, ok: bool) {
        self.pass &= ok;
        self.details.push(format!("{what} {}", verdict(ok)));
    }

    fn note(&mut self, text: impl Into<String>) {
        self.details.push(text.into());
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn field() -> PrimeField {
    PrimeField::new(DEFAULT_PRIME).expect("default modulus is prime")
}

fn r1(net: &Network, exec: Exec) -> Result<u64> {
    Ok(estimate_r1_with(net, field(), 5, 0, exec)?.r1_lower)
}

fn outcome_name(o: &SearchOutcome) -> &'static str {
    match o {
        SearchOutcome::Witness(_) => "witness",
        SearchOutcome::Impossible => "impossible",
        SearchOutcome::BudgetExceeded => "budget exceeded",
    }
}

/// The up-oriented network with middle dimension `d5`.
fn up_oriented(d5: u64) -> Network {
    let mut net = fixtures::n2_up();
    for e in &mut net.edges {
        if e.id == "e5" {
            *e = Edge::directed("e5", "n2", "n1", d5);
        }
    }
    net
}

pub fn run_claim(name: &str, exec: Exec) -> Result<ClaimOutcome> {
    let mut t = Tally::new();
    let search = |l| SearchConfig { exec, ..SearchConfig::new(l) };
    match name {
        "mincut" => {
            t.eq("MC(5,3,3,5,2)", min_cut(&fixtures::fig2_counterexample())?.value, BigUint::from(15u32));
            for d5 in 2..=10 {
                t.eq(format!("MC(2,3,3,2,{d5})"), min_cut(&fixtures::n_d5(d5))?.value, BigUint::from(6u32));
            }
        }
        "r1-gap" => {
            let net = fixtures::fig2_counterexample();
            let est = estimate_r1_with(&net, field(), 5, 0, exec)?;
            t.eq("R1 estimate", est.r1_lower, 14);
            t.eq("MC", est.mc_upper.clone(), BigUint::from(15u32));
            t.note(format!("failure bound {:e}", est.failure_bound_f64()));
            let stored = contract(&net, &fixtures::assignment("r1_witness_fig2")?)?;
            t.eq("rank of stored witness assignment", rank_mod_p(&stored)?, 14);
            t.headline = Some(format!("R1={} MC={}", est.r1_lower, est.mc_upper));
        }
        "r1-saturation" => {
            for d5 in 2..=4 {
                t.eq(format!("R1(2,3,3,2,{d5})"), r1(&fixtures::n_d5(d5), exec)?, 6);
            }
            let stored = contract(&fixtures::n_d5(2), &fixtures::assignment("r1_witness_n_d5_2")?)?;
            t.eq("rank of stored witness assignment", rank_mod_p(&stored)?, 6);
        }
        "coding-achievability" => {
            let split = fixtures::n4_split();
            let found = exhaustive_achievable(&split, &search(6))?;
            t.eq("l=6 on split d5=4", outcome_name(&found.outcome), "witness");
            if let Some(w) = found.outcome.witness() {
                t.holds("found l=6 protocol is valid", is_valid(&split, w)?);
            }
            let up = fixtures::n2_up();
            let found = exhaustive_achievable(&up, &search(5))?;
            t.eq("l=5 on up-oriented d5=2", outcome_name(&found.outcome), "witness");
            t.holds("reference l=6 protocol is valid", is_valid(&split, &reference_protocol_n4())?);
            t.holds("reference l=5 protocol is valid", is_valid(&up, &reference_protocol_n2())?);
            t.holds("shipped protocol files match", fixtures::protocol("protocol_n4")? == reference_protocol_n4() && fixtures::protocol("protocol_n2")? == reference_protocol_n2());
        }
        "coding-impossibility" => {
            let report = exhaustive_achievable(&fixtures::n2_up(), &search(6))?;
            t.eq("l=6 on up-oriented d5=2", outcome_name(&report.outcome), "impossible");
            for (label, net) in acyclic_orientations(&fixtures::n_d5(4), false)? {
                let report = exhaustive_achievable(&net, &search(6))?;
                t.eq(format!("l=6 on d5=4 [{label}]"), outcome_name(&report.outcome), "impossible");
                t.note(format!("  {} tables examined", report.tables_tried));
            }
        }
        "scaled-rank" => {
            let base = fixtures::n_d5(2);
            for (k, want) in [(2u64, 24u64), (3, 54)] {
                let net = scale(&base, k)?;
                let mc = min_cut(&net)?.value;
                t.eq(format!("MC(k={k})"), mc.clone(), BigUint::from(want));
                t.eq(format!("R1(k={k})"), r1(&net, exec)?, want);
                let tele = teleport_reduce_scaled(&net, k)?;
                let bound = tele.composed_lower_bound(r1(&tele.residual, exec)?);
                t.holds(format!("k^2 R1(residual) = {bound} <= MC(k={k})"), bound <= mc);
            }
        }
        "sandwich" => {
            for n in [1, 2] {
                let r = sandwich_check(&fixtures::n_d5(2), n, |p| r1(p, exec))?;
                t.holds(
                    format!(
                        "n={n}: {} <= {} <= {} <= {} <= {}",
                        r.scaled_lower, r.mc_lower, r.r1_estimate, r.mc_upper, r.scaled_upper
                    ),
                    r.holds(),
                );
            }
        }
        "properties" => {
            let report = property_sweep(200, 0, GenParams::default(), exec);
            t.eq("violations", report.violations.len(), 0);
            t.note(format!("{} networks, {} coding witnesses checked", report.networks, report.coding_witnesses));
            for v in report.violations.iter().take(10) {
                t.note(v.clone());
            }
        }
        "q1-interval" => {
            for d5 in [2, 3] {
                let net = up_oriented(d5);
                let lower = exhaustive_achievable(&net, &search(5))?;
                let upper = estimate_r1_with(&fixtures::n_d5(d5), field(), 5, 0, exec)?;
                t.eq(format!("l=5 on up-oriented d5={d5}"), outcome_name(&lower.outcome), "witness");
                t.holds(format!("R1 = {} certified by MC", upper.r1_lower), upper.is_certified_exact() && upper.r1_lower == 6);
                t.note("  Q1 in [5, 6]; the point value 5 is not checked");
            }
        }
        other => return Err(Error::InvalidNetwork(vec![format!("unknown claim `{other}`")])),
    }
    let summary = format!("{} {}", t.headline.unwrap_or_else(|| name.to_string()), verdict(t.pass));
    Ok(ClaimOutcome {
        name: name.to_string(),
        pass: t.pass,
        summary,
        details: t.details,
    })
}
