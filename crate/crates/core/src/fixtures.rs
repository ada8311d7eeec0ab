//! Named networks, protocols and tensor assignments shipped as JSON data
//! files under `fixtures/`, plus builders for the parametric families.
//!
//! The files are produced by [`build::catalog`] through the canonical
//! serializers; `cargo run -p entcap --example write_fixtures` regenerates
//! them and a unit test checks that they are byte-identical.

use crate::codingsearch::ProtocolTable;
use crate::error::{Error, Result};
use crate::netmodel::{Edge, Network};
use crate::tnrank::TensorAssignment;

/// Four-vertex network: `s`, `n1`, `n2`, `t` with undirected edges
/// `e1 = s-n1`, `e2 = s-n2`, `e3 = n1-t`, `e4 = n2-t`, `e5 = n1-n2`.
pub fn fig1_network(d: [u64; 5]) -> Network {
    Network::new(
        ["s", "n1", "n2", "t"],
        ["s"],
        ["t"],
        vec![
            Edge::new("e1", "s", "n1", d[0]),
            Edge::new("e2", "s", "n2", d[1]),
            Edge::new("e3", "n1", "t", d[2]),
            Edge::new("e4", "n2", "t", d[3]),
            Edge::new("e5", "n1", "n2", d[4]),
        ],
    )
}

/// `s - n - t` with dimensions `a` and `b`.
pub fn path_network(a: u64, b: u64) -> Network {
    Network::new(
        ["s", "n", "t"],
        ["s"],
        ["t"],
        vec![Edge::new("e1", "s", "n", a), Edge::new("e2", "n", "t", b)],
    )
}

/// Code-built versions of the shipped fixtures. These are the single source
/// the data files are generated from.
pub mod build {
    use super::*;
    use crate::codingsearch::{reference_protocol_n2, reference_protocol_n4};
    use crate::netmodel::scale;
    use crate::tnrank::{estimate_r1, random_assignment, trial_seed, PrimeField, DEFAULT_PRIME};
    use crate::transforms::{split_cycle_edge, SplitSpec};

    /// Seed and trial count used for the stored rank witnesses.
    pub const WITNESS_SEED: u64 = 0;
    pub const WITNESS_TRIALS: usize = 5;

    /// `(2,3,3,2,2)` with outer edges pointing from `s` toward `t` and the
    /// middle edge from `n2` to `n1`.
    pub fn n2_up() -> Network {
        let mut net = fig1_network([2, 3, 3, 2, 2]);
        for e in &mut net.edges {
            *e = if e.id == "e5" {
                Edge::directed("e5", "n2", "n1", e.dim)
            } else {
                Edge::directed(e.id.clone(), e.u.clone(), e.v.clone(), e.dim)
            };
        }
        net
    }

    pub fn n2_split() -> Network {
        split_cycle_edge(&fig1_network([2, 3, 3, 2, 2]), &SplitSpec::new("e5", 2, 1)).expect("valid split")
    }

    pub fn n4_split() -> Network {
        split_cycle_edge(&fig1_network([2, 3, 3, 2, 4]), &SplitSpec::new("e5", 2, 2)).expect("valid split")
    }

    /// First trial assignment reaching the estimated rank.
    pub fn rank_witness(net: &Network) -> TensorAssignment {
        let field = PrimeField::new(DEFAULT_PRIME).expect("prime");
        let est = estimate_r1(net, field, WITNESS_TRIALS, WITNESS_SEED).expect("rank estimate");
        random_assignment(net, field, trial_seed(WITNESS_SEED, est.witness_trial)).expect("assignment")
    }

    fn json<T: serde::Serialize>(value: &T) -> String {
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        text
    }

    /// `(name, file contents)` for every shipped fixture.
    pub fn catalog() -> Vec<(&'static str, String)> {
        let nd5_2 = fig1_network([2, 3, 3, 2, 2]);
        let nd5_3 = fig1_network([2, 3, 3, 2, 3]);
        let nd5_4 = fig1_network([2, 3, 3, 2, 4]);
        let fig2 = fig1_network([5, 3, 3, 5, 2]);
        vec![
            ("fig2_counterexample", fig2.to_canonical_json()),
            ("n_d5_2", nd5_2.to_canonical_json()),
            ("n_d5_3", nd5_3.to_canonical_json()),
            ("n_d5_4", nd5_4.to_canonical_json()),
            ("n2_up", n2_up().to_canonical_json()),
            ("n2_split", n2_split().to_canonical_json()),
            ("n4_split", n4_split().to_canonical_json()),
            ("fig1_scaled_k2", scale(&nd5_2, 2).expect("small").to_canonical_json()),
            ("fig1_scaled_k3", scale(&nd5_2, 3).expect("small").to_canonical_json()),
            ("path_2_3", path_network(2, 3).to_canonical_json()),
            ("path_3_3", path_network(3, 3).to_canonical_json()),
            ("protocol_n2", reference_protocol_n2().to_canonical_json()),
            ("protocol_n4", reference_protocol_n4().to_canonical_json()),
            ("r1_witness_fig2", json(&rank_witness(&fig2))),
            ("r1_witness_n_d5_2", json(&rank_witness(&nd5_2))),
        ]
    }
}

macro_rules! shipped {
    ($($name:literal),* $(,)?) => {
        /// `(name, file contents)` of the embedded fixture files.
        pub const FILES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../fixtures/", $name, ".json")))),*
        ];
    };
}

shipped!(
    "fig2_counterexample",
    "n_d5_2",
    "n_d5_3",
    "n_d5_4",
    "n2_up",
    "n2_split",
    "n4_split",
    "fig1_scaled_k2",
    "fig1_scaled_k3",
    "path_2_3",
    "path_3_3",
    "protocol_n2",
    "protocol_n4",
    "r1_witness_fig2",
    "r1_witness_n_d5_2",
);

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

pub fn raw(name: &str) -> Result<&'static str> {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| Error::InvalidNetwork(vec![format!("unknown fixture `{name}`")]))
}

pub fn network(name: &str) -> Result<Network> {
    Network::from_json(raw(name)?)
}

pub fn protocol(name: &str) -> Result<ProtocolTable> {
    ProtocolTable::from_json(raw(name)?)
}

pub fn assignment(name: &str) -> Result<TensorAssignment> {
    Ok(serde_json::from_str(raw(name)?)?)
}

fn shipped_network(name: &str) -> Network {
    network(name).unwrap_or_else(|e| panic!("fixture `{name}`: {e}"))
}

/// `(5,3,3,5,2)`: min-cut 15 but tensor rank 14.
pub fn fig2_counterexample() -> Network {
    shipped_network("fig2_counterexample")
}

/// `(2,3,3,2,d5)` for `d5` in 2..=4 from the data files, built otherwise.
pub fn n_d5(d5: u64) -> Network {
    match d5 {
        2..=4 => shipped_network(&format!("n_d5_{d5}")),
        _ => fig1_network([2, 3, 3, 2, d5]),
    }
}

pub fn n2_up() -> Network {
    shipped_network("n2_up")
}

pub fn n2_split() -> Network {
    shipped_network("n2_split")
}

pub fn n4_split() -> Network {
    shipped_network("n4_split")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn files_match_generated_catalog() {
        let generated = build::catalog();
        assert_eq!(generated.len(), FILES.len());
        for ((gn, gtext), (fname, ftext)) in generated.iter().zip(FILES) {
            assert_eq!(gn, fname);
            assert_eq!(gtext, ftext, "fixture `{fname}` is stale");
        }
    }

    #[test]
    fn networks_round_trip_byte_identical() {
        for name in names().filter(|n| !n.starts_with("protocol") && !n.starts_with("r1_")) {
            let text = raw(name).unwrap();
            assert_eq!(network(name).unwrap().to_canonical_json(), text, "{name}");
        }
        for name in ["protocol_n2", "protocol_n4"] {
            assert_eq!(protocol(name).unwrap().to_canonical_json(), raw(name).unwrap());
        }
    }

    #[test]
    fn shipped_networks_validate() {
        for name in names().filter(|n| !n.starts_with("protocol") && !n.starts_with("r1_")) {
            assert!(network(name).unwrap().validate().is_empty(), "{name}");
        }
    }

    #[test]
    fn unknown_fixture() {
        assert!(raw("nope").is_err());
    }
}
