//! Contraction and rank checked against brute-force definitions.

use std::collections::HashMap;

use entcap::fixtures::{self, fig1_network, path_network};
use entcap::gen::{random_network, GenParams};
use entcap::netmodel::{Edge, Network};
use entcap::tnrank::{contract, random_assignment, rank_in, rank_mod_p, PrimeField, TensorAssignment, TensorLayout};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = index % dims[i];
        index /= dims[i];
    }
    out
}

/// Entry `(r, c)` as the explicit sum over every labelling of the internal
/// edges of the product of vertex tensor entries.
fn summed_entry(net: &Network, ta: &TensorAssignment, r: usize, c: usize) -> u64 {
    let net = net.merge_stages();
    let layout = TensorLayout::new(&net).unwrap();
    let p = ta.prime as u128;
    let row_dims: Vec<usize> = layout.row_legs.iter().map(|l| l.1).collect();
    let col_dims: Vec<usize> = layout.col_legs.iter().map(|l| l.1).collect();
    let mut fixed: HashMap<&str, usize> = HashMap::new();
    for ((id, _), v) in layout.row_legs.iter().zip(digits(r, &row_dims)) {
        fixed.insert(id, v);
    }
    for ((id, _), v) in layout.col_legs.iter().zip(digits(c, &col_dims)) {
        if let Some(&prev) = fixed.get(id.as_str()) {
            if prev != v {
                return 0;
            }
        }
        fixed.insert(id, v);
    }
    let free: Vec<&Edge> = net
        .edges
        .iter()
        .filter(|e| !net.is_terminal(&e.u) && !net.is_terminal(&e.v) && e.u != e.v)
        .collect();
    let free_dims: Vec<usize> = free.iter().map(|e| e.dim as usize).collect();
    let total: usize = free_dims.iter().product();
    let mut sum = 0u128;
    for k in 0..total {
        let mut values = fixed.clone();
        for (e, v) in free.iter().zip(digits(k, &free_dims)) {
            values.insert(&e.id, v);
        }
        let mut prod = 1u128;
        for t in ta.tensors.values() {
            let idx = t.legs.iter().zip(&t.shape).fold(0usize, |acc, (leg, d)| acc * d + values[leg.as_str()]);
            prod = prod * t.data[idx] as u128 % p;
        }
        sum = (sum + prod) % p;
    }
    sum as u64
}

fn assert_matches_oracle(net: &Network, prime: u64, seed: u64) {
    let field = PrimeField::new(prime).unwrap();
    let ta = random_assignment(net, field, seed).unwrap();
    let m = contract(net, &ta).unwrap();
    for r in 0..m.rows {
        for c in 0..m.cols {
            assert_eq!(m.get(r, c), summed_entry(net, &ta, r, c), "entry ({r},{c})");
        }
    }
}

#[test]
fn fixtures_contract_like_explicit_sums() {
    assert_matches_oracle(&path_network(2, 3), 101, 1);
    assert_matches_oracle(&fig1_network([2, 3, 3, 2, 2]), 2_147_483_647, 2);
    assert_matches_oracle(&fig1_network([2, 2, 2, 2, 3]), 13, 3);
    assert_matches_oracle(&fixtures::n4_split(), 2_147_483_647, 4);
}

#[test]
fn random_networks_contract_like_explicit_sums() {
    let params = GenParams {
        max_vertices: 5,
        max_dim: 3,
        max_edges: 5,
    };
    for seed in 0..60 {
        let net = random_network(seed, params);
        let layout = TensorLayout::new(&net).unwrap();
        if layout.rows().unwrap() * layout.cols().unwrap() > 400 {
            continue;
        }
        assert_matches_oracle(&net, 1_000_003, seed);
    }
}

fn det(p: u64, m: &[Vec<u64>]) -> u64 {
    // Laplace expansion along the first row
    let n = m.len();
    if n == 1 {
        return m[0][0] % p;
    }
    let mut acc = 0u64;
    for j in 0..n {
        let minor: Vec<Vec<u64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
            .collect();
        let term = m[0][j] % p * det(p, &minor) % p;
        acc = if j % 2 == 0 { (acc + term) % p } else { (acc + p - term) % p };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Largest size of a nonzero minor.
fn minor_rank(p: u64, rows: usize, cols: usize, data: &[u64]) -> usize {
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let m: Vec<Vec<u64>> = rs.iter().map(|&r| cs.iter().map(|&c| data[r * cols + c]).collect()).collect();
                if det(p, &m) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

#[test]
fn rank_matches_minor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [2u64, 3, 7, 101] {
        let field = PrimeField::new(p).unwrap();
        for _ in 0..300 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            // small alphabet so that rank deficiency is common
            let hi = p.min(3);
            let data: Vec<u64> = (0..rows * cols).map(|_| rng.gen_range(0..hi)).collect();
            assert_eq!(rank_in(field, rows, cols, &data), minor_rank(p, rows, cols, &data), "{rows}x{cols} {data:?} mod {p}");
        }
    }
}

#[test]
fn contracted_rank_matches_minor_oracle() {
    let net = path_network(2, 3);
    for seed in 0..20 {
        let ta = random_assignment(&net, PrimeField::new(5).unwrap(), seed).unwrap();
        let m = contract(&net, &ta).unwrap();
        assert_eq!(rank_mod_p(&m).unwrap(), minor_rank(5, m.rows, m.cols, &m.data));
    }
}
