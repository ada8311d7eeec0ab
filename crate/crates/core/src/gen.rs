//! Seeded random small networks and the invariant sweep run over them.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::capreport::acyclic_orientations;
use crate::codingsearch::{c1_exact, is_valid, SearchConfig};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::netmodel::{cut_value, min_cut, min_cut_with, tensor_power, Edge, MinCutOptions, Network};
use crate::tnrank::{estimate_r1_with, trial_seed, PrimeField, DEFAULT_PRIME};

#[derive(Debug, Clone, Copy)]
pub struct GenParams {
    /// Including the source and the sink; at least 3.
    pub max_vertices: usize,
    pub max_dim: u64,
    pub max_edges: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            max_vertices: 6,
            max_dim: 4,
            max_edges: 7,
        }
    }
}

/// An undirected network with source `s`, sink `t` and up to
/// `max_vertices - 2` internal vertices `a, b, ...`. Parallel edges may occur;
/// self-loops do not.
pub fn random_network(seed: u64, params: GenParams) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=params.max_vertices.max(3));
    let mut vertices = vec!["s".to_string()];
    vertices.extend((0..n - 2).map(|i| char::from(b'a' + i as u8).to_string()));
    vertices.push("t".to_string());
    let m = rng.gen_range(1..=params.max_edges.max(1));
    let edges = (1..=m)
        .map(|i| {
            let u = rng.gen_range(0..n);
            let v = (u + rng.gen_range(1..n)) % n;
            let dim = rng.gen_range(1..=params.max_dim.max(1));
            Edge::new(format!("e{i}"), vertices[u].clone(), vertices[v].clone(), dim)
        })
        .collect();
    Network::new(vertices, ["s".to_string()], ["t".to_string()], edges)
}

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub networks: usize,
    pub coding_witnesses: usize,
    pub violations: Vec<String>,
}

/// Budget per coding search in the sweep; searches that run out are skipped.
pub const SWEEP_CODING_BUDGET: u64 = 200_000;

/// Check the basic invariants on one network, returning violations and
/// whether a coding witness was checked.
pub fn check_invariants(net: &Network, seed: u64, exec: Exec) -> Result<(Vec<String>, bool)> {
    let mut bad = Vec::new();
    let cut = min_cut_with(net, MinCutOptions { exec, ..Default::default() })?;
    if cut_value(net, &cut.s_side) != cut.value {
        bad.push(format!("min-cut witness does not recompute to {}", cut.value));
    }
    let squared = min_cut(&tensor_power(net, 2)?)?.value;
    if squared != &cut.value * &cut.value {
        bad.push(format!("MC(N^2) = {squared}, MC(N)^2 = {}", &cut.value * &cut.value));
    }
    let field = PrimeField::new(DEFAULT_PRIME)?;
    match estimate_r1_with(net, field, 2, seed, exec) {
        Ok(est) if BigUint::from(est.r1_lower) > cut.value => {
            bad.push(format!("r1_lower {} exceeds MC {}", est.r1_lower, cut.value));
        }
        Ok(_) => {}
        Err(e) => return Err(e),
    }

    let mut witnessed = false;
    let orientations = acyclic_orientations(net, false)?;
    if !orientations.is_empty() {
        let (label, oriented) = &orientations[seed as usize % orientations.len()];
        let mc_dir = min_cut(oriented)?.value;
        let cap = usize::try_from(&mc_dir).unwrap_or(usize::MAX).min(16);
        let cfg = SearchConfig {
            node_budget: SWEEP_CODING_BUDGET,
            exec: Exec::Sequential,
            ..SearchConfig::new(1)
        };
        match c1_exact(oriented, cap, &cfg) {
            Ok(r) => {
                witnessed = true;
                if !is_valid(oriented, &r.witness)? {
                    bad.push(format!("coding witness for l={} on {label} is invalid", r.c1));
                }
                if BigUint::from(r.c1) > mc_dir {
                    bad.push(format!("c1 {} exceeds directed MC {mc_dir} on {label}", r.c1));
                }
            }
            Err(Error::BudgetExceeded(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok((bad, witnessed))
}

/// Run [`check_invariants`] over `count` random networks derived from
/// `seed`.
pub fn property_sweep(count: usize, seed: u64, params: GenParams, exec: Exec) -> SweepReport {
    let results = exec.map((0..count).collect(), |i| {
        let s = trial_seed(seed, i);
        let net = random_network(s, params);
        (i, check_invariants(&net, s, Exec::Sequential))
    });
    let mut report = SweepReport {
        networks: count,
        ..SweepReport::default()
    };
    for (i, r) in results {
        match r {
            Ok((bad, witnessed)) => {
                report.coding_witnesses += usize::from(witnessed);
                report.violations.extend(bad.into_iter().map(|b| format!("network {i}: {b}")));
            }
            Err(e) => report.violations.push(format!("network {i}: {e}")),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_networks_are_valid_and_deterministic() {
        for seed in 0..100 {
            let net = random_network(seed, GenParams::default());
            assert!(net.validate().is_empty(), "{:?}", net.validate());
            assert!(net.vertices.len() <= 6);
            assert!(net.edges.iter().all(|e| (1..=4).contains(&e.dim) && e.u != e.v));
            assert_eq!(net, random_network(seed, GenParams::default()));
        }
    }

    #[test]
    fn small_sweep_is_clean() {
        let report = property_sweep(20, 7, GenParams::default(), Exec::Sequential);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }
}
