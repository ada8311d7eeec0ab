//! Tensor-network contraction over a prime field and randomized estimation of
//! the one-shot tensor-network capacity (the maximal rank of the boundary map).
//!
//! Every non-terminal vertex carries a tensor with one index per incident
//! edge. Contracting all internal edges leaves a linear map from the source
//! boundary space to the sink boundary space. Its maximal rank over all
//! assignments is attained by generic assignments, so uniformly random
//! entries from a large prime field find it with high probability; any rank
//! observed is a certified lower bound either way.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::netmodel::{min_cut, Network};

/// `2^31 - 1`.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// Upper bound on the number of entries of any intermediate tensor.
pub const MAX_TENSOR_ENTRIES: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    /// Products of two residues must fit in `u64`, hence `p < 2^32`.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Inverse of a non-zero residue.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense tensor, row-major over `legs` (first leg most significant). Legs are
/// named by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tensor {
    pub legs: Vec<String>,
    pub shape: Vec<usize>,
    pub data: Vec<u64>,
}

impl Tensor {
    pub fn scalar(value: u64) -> Self {
        Tensor {
            legs: Vec::new(),
            shape: Vec::new(),
            data: vec![value],
        }
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.shape.len()];
        for i in (0..self.shape.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.shape[i + 1];
        }
        strides
    }

    fn axis(&self, leg: &str) -> Option<usize> {
        self.legs.iter().position(|l| l == leg)
    }

    /// Reorder axes so that the legs appear in `order`.
    fn permuted(&self, order: &[usize]) -> Tensor {
        let strides = self.strides();
        let shape: Vec<usize> = order.iter().map(|&a| self.shape[a]).collect();
        let src_strides: Vec<usize> = order.iter().map(|&a| strides[a]).collect();
        let mut data = Vec::with_capacity(self.data.len());
        let mut idx = vec![0usize; shape.len()];
        let mut offset = 0usize;
        for _ in 0..self.data.len() {
            data.push(self.data[offset]);
            for ax in (0..shape.len()).rev() {
                idx[ax] += 1;
                offset += src_strides[ax];
                if idx[ax] < shape[ax] {
                    break;
                }
                offset -= src_strides[ax] * shape[ax];
                idx[ax] = 0;
            }
        }
        Tensor {
            legs: order.iter().map(|&a| self.legs[a].clone()).collect(),
            shape,
            data,
        }
    }
}

/// Contract every leg shared by `a` and `b`. Result legs: free legs of `a`
/// followed by free legs of `b`.
fn tensordot(a: &Tensor, b: &Tensor, field: PrimeField) -> Result<Tensor> {
    let shared: Vec<usize> = (0..a.legs.len()).filter(|&i| b.axis(&a.legs[i]).is_some()).collect();
    let a_free: Vec<usize> = (0..a.legs.len()).filter(|i| !shared.contains(i)).collect();
    let b_shared: Vec<usize> = shared.iter().map(|&i| b.axis(&a.legs[i]).unwrap()).collect();
    let b_free: Vec<usize> = (0..b.legs.len()).filter(|i| !b_shared.contains(i)).collect();
    for (&i, &j) in shared.iter().zip(&b_shared) {
        if a.shape[i] != b.shape[j] {
            return Err(Error::ShapeMismatch(format!("leg `{}` has two different dimensions", a.legs[i])));
        }
    }

    let left = a.permuted(&[a_free.clone(), shared.clone()].concat());
    let right = b.permuted(&[b_shared.clone(), b_free.clone()].concat());
    let m: usize = a_free.iter().map(|&i| a.shape[i]).product();
    let k: usize = shared.iter().map(|&i| a.shape[i]).product();
    let n: usize = b_free.iter().map(|&i| b.shape[i]).product();
    if m.saturating_mul(n) > MAX_TENSOR_ENTRIES {
        return Err(Error::ShapeMismatch(format!("intermediate tensor of {m}x{n} entries is too large")));
    }

    let p = field.modulus() as u128;
    let mut data = vec![0u64; m * n];
    let mut acc = vec![0u128; n];
    for r in 0..m {
        acc.iter_mut().for_each(|x| *x = 0);
        for s in 0..k {
            let x = left.data[r * k + s];
            if x == 0 {
                continue;
            }
            let row = &right.data[s * n..(s + 1) * n];
            for (slot, &y) in acc.iter_mut().zip(row) {
                *slot += (x * y) as u128;
            }
        }
        for (out, &x) in data[r * n..(r + 1) * n].iter_mut().zip(&acc) {
            *out = (x % p) as u64;
        }
    }

    let legs = a_free
        .iter()
        .map(|&i| a.legs[i].clone())
        .chain(b_free.iter().map(|&i| b.legs[i].clone()))
        .collect();
    let shape = a_free
        .iter()
        .map(|&i| a.shape[i])
        .chain(b_free.iter().map(|&i| b.shape[i]))
        .collect();
    Ok(Tensor { legs, shape, data })
}

/// Per-vertex tensors, keyed by logical vertex id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorAssignment {
    pub prime: u64,
    pub tensors: BTreeMap<String, Tensor>,
}

/// The contracted map as a `rows x cols` matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryMatrix {
    pub prime: u64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl BoundaryMatrix {
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }
}

/// How a network's edges map onto the tensor network. Sources are treated as
/// one boundary, sinks as the other; stage pairs are merged first.
#[derive(Debug, Clone)]
pub struct TensorLayout {
    /// Non-terminal logical vertices in declaration order.
    pub internal: Vec<String>,
    /// Legs (edge id, dim) of each internal vertex, in edge-list order.
    pub legs: HashMap<String, Vec<(String, usize)>>,
    /// Legs of the source boundary space, in edge-list order.
    pub row_legs: Vec<(String, usize)>,
    /// Legs of the sink boundary space, in edge-list order.
    pub col_legs: Vec<(String, usize)>,
    /// Edges joining a source directly to a sink; they appear in both
    /// boundaries and contract as identity wiring.
    pub through: Vec<String>,
}

impl TensorLayout {
    pub fn new(net: &Network) -> Result<TensorLayout> {
        net.validated()?;
        let net = net.merge_stages();
        let internal: Vec<String> = net.internal_vertices().map(str::to_string).collect();
        let mut legs: HashMap<String, Vec<(String, usize)>> =
            internal.iter().map(|v| (v.clone(), Vec::new())).collect();
        let mut row_legs = Vec::new();
        let mut col_legs = Vec::new();
        let mut through = Vec::new();
        for e in &net.edges {
            let dim = usize::try_from(e.dim).map_err(|_| Error::Overflow("tensor leg"))?;
            let leg = (e.id.clone(), dim);
            let ends = [e.u.as_str(), e.v.as_str()];
            let sources = ends.iter().filter(|v| net.is_source(v)).count();
            let sinks = ends.iter().filter(|v| net.is_sink(v)).count();
            match (sources, sinks) {
                (2, _) | (_, 2) => {}
                (1, 1) => {
                    row_legs.push(leg.clone());
                    col_legs.push(leg);
                    through.push(e.id.clone());
                }
                _ if e.u == e.v => {}
                (s, t) => {
                    if s == 1 {
                        row_legs.push(leg.clone());
                    }
                    if t == 1 {
                        col_legs.push(leg.clone());
                    }
                    for end in ends {
                        if let Some(l) = legs.get_mut(end) {
                            l.push(leg.clone());
                        }
                    }
                }
            }
        }
        Ok(TensorLayout {
            internal,
            legs,
            row_legs,
            col_legs,
            through,
        })
    }

    pub fn rows(&self) -> Result<usize> {
        checked_product(&self.row_legs)
    }

    pub fn cols(&self) -> Result<usize> {
        checked_product(&self.col_legs)
    }

    /// Total number of tensor entries over all internal vertices.
    pub fn tensor_entries(&self) -> Result<usize> {
        self.internal.iter().try_fold(0usize, |acc, v| {
            acc.checked_add(checked_product(&self.legs[v])?)
                .ok_or(Error::Overflow("tensor entries"))
        })
    }
}

fn checked_product(legs: &[(String, usize)]) -> Result<usize> {
    legs.iter()
        .try_fold(1usize, |acc, (_, d)| acc.checked_mul(*d))
        .ok_or(Error::Overflow("boundary dimension"))
}

/// SplitMix64 finalizer, used to derive independent seeds.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(text: &str) -> u64 {
    text.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of trial `trial` in a run seeded with `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    mix(seed ^ mix(trial as u64 ^ 0x5452_4941_4c00_0000))
}

/// Uniform entries from `[0, p)`. Each vertex gets its own ChaCha8 stream
/// keyed by `(seed, vertex id)`; entry `i` is the `i`-th draw of that stream.
pub fn random_assignment(net: &Network, field: PrimeField, seed: u64) -> Result<TensorAssignment> {
    let layout = TensorLayout::new(net)?;
    let mut tensors = BTreeMap::new();
    for v in &layout.internal {
        let legs = &layout.legs[v];
        let len = checked_product(legs)?;
        if len > MAX_TENSOR_ENTRIES {
            return Err(Error::ShapeMismatch(format!("tensor at `{v}` has {len} entries")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ mix(fnv1a(v))));
        let data = (0..len).map(|_| rng.gen_range(0..field.modulus())).collect();
        tensors.insert(
            v.clone(),
            Tensor {
                legs: legs.iter().map(|(id, _)| id.clone()).collect(),
                shape: legs.iter().map(|&(_, d)| d).collect(),
                data,
            },
        );
    }
    Ok(TensorAssignment {
        prime: field.modulus(),
        tensors,
    })
}

/// Contract all internal edges, leaving the source-to-sink boundary matrix.
///
/// Internal tensors are absorbed one at a time in declaration order; each
/// absorption sums out the legs the new tensor shares with the running
/// product.
pub fn contract(net: &Network, ta: &TensorAssignment) -> Result<BoundaryMatrix> {
    let field = PrimeField::new(ta.prime)?;
    let layout = TensorLayout::new(net)?;
    let rows = layout.rows()?;
    let cols = layout.cols()?;
    if rows.saturating_mul(cols) > MAX_TENSOR_ENTRIES {
        return Err(Error::ShapeMismatch(format!("boundary matrix {rows}x{cols} is too large")));
    }
    for v in ta.tensors.keys() {
        if !layout.legs.contains_key(v) {
            return Err(Error::ShapeMismatch(format!("`{v}` is not an internal vertex")));
        }
    }

    let mut product = Tensor::scalar(1);
    for v in &layout.internal {
        let t = ta
            .tensors
            .get(v)
            .ok_or_else(|| Error::ShapeMismatch(format!("no tensor for `{v}`")))?;
        let expected = &layout.legs[v];
        let legs_match = t.legs.len() == expected.len()
            && t.legs.iter().zip(&t.shape).zip(expected).all(|((l, d), (el, ed))| l == el && d == ed);
        if !legs_match || t.data.len() != t.shape.iter().product::<usize>() {
            return Err(Error::ShapeMismatch(format!("tensor at `{v}` does not match its edges")));
        }
        if t.data.iter().any(|&x| x >= ta.prime) {
            return Err(Error::ShapeMismatch(format!("tensor at `{v}` has entries outside the field")));
        }
        product = tensordot(&product, t, field)?;
    }

    // locate each boundary leg in the contracted product
    let strides = product.strides();
    let offset_of = |leg: &str| product.axis(leg).map(|a| strides[a]);
    let boundary = |legs: &[(String, usize)], count: usize| -> Vec<(usize, Vec<usize>)> {
        (0..count)
            .map(|mut idx| {
                let mut offset = 0;
                let mut wiring = Vec::new();
                for (leg, dim) in legs.iter().rev() {
                    let digit = idx % dim;
                    idx /= dim;
                    if layout.through.contains(leg) {
                        wiring.push(digit);
                    } else {
                        offset += digit * offset_of(leg).expect("boundary leg survives contraction");
                    }
                }
                (offset, wiring)
            })
            .collect()
    };
    let row_info = boundary(&layout.row_legs, rows);
    let col_info = boundary(&layout.col_legs, cols);

    let mut data = vec![0u64; rows * cols];
    for (r, (roff, rwire)) in row_info.iter().enumerate() {
        for (c, (coff, cwire)) in col_info.iter().enumerate() {
            if rwire == cwire {
                data[r * cols + c] = product.data[roff + coff];
            }
        }
    }
    Ok(BoundaryMatrix {
        prime: ta.prime,
        rows,
        cols,
        data,
    })
}

/// Rank of a row-major `rows x cols` matrix over `GF(p)`.
pub fn rank_in(field: PrimeField, rows: usize, cols: usize, data: &[u64]) -> usize {
    let mut m: Vec<Vec<u64>> = data.chunks(cols.max(1)).take(rows).map(<[u64]>::to_vec).collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] % field.modulus() != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = field.inv(m[rank][col]);
        for x in m[rank][col..].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = field.sub(*x, field.mul(factor, y));
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn rank_mod_p(m: &BoundaryMatrix) -> Result<usize> {
    Ok(rank_in(PrimeField::new(m.prime)?, m.rows, m.cols, &m.data))
}

#[derive(Debug, Clone, PartialEq)]
pub struct R1Estimate {
    /// Largest rank seen; a certified lower bound on the capacity.
    pub r1_lower: u64,
    /// Exact min-cut, an upper bound on the capacity.
    pub mc_upper: BigUint,
    /// Probability bound that every trial missed the generic rank.
    pub failure_bound: Ratio<BigUint>,
    /// Rank reached by each trial.
    pub ranks: Vec<u64>,
    /// First trial reaching `r1_lower`.
    pub witness_trial: usize,
}

impl R1Estimate {
    /// The lower bound meets the min-cut, so it is the exact capacity.
    pub fn is_certified_exact(&self) -> bool {
        BigUint::from(self.r1_lower) == self.mc_upper
    }

    pub fn failure_bound_f64(&self) -> f64 {
        ratio_to_f64(&self.failure_bound)
    }
}

pub(crate) fn ratio_to_f64(r: &Ratio<BigUint>) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    // scale both sides down to ~64 significant bits
    let shift = |x: &BigUint| x.bits().saturating_sub(64);
    let (sn, sd) = (shift(r.numer()), shift(r.denom()));
    let n = (r.numer() >> sn).to_f64().unwrap_or(f64::INFINITY);
    let d = (r.denom() >> sd).to_f64().unwrap_or(f64::INFINITY);
    n / d * 2f64.powi(sn as i32 - sd as i32)
}

/// Maximal observed rank over `trials` random assignments, bracketed by the
/// min-cut.
pub fn estimate_r1(net: &Network, field: PrimeField, trials: usize, seed: u64) -> Result<R1Estimate> {
    estimate_r1_with(net, field, trials, seed, Exec::default())
}

pub fn estimate_r1_with(
    net: &Network,
    field: PrimeField,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<R1Estimate> {
    let trials = trials.max(1);
    let layout = TensorLayout::new(net)?;
    let (rows, cols) = (layout.rows()?, layout.cols()?);
    let needed = rows.max(cols) as u64;
    if field.modulus() <= needed {
        return Err(Error::FieldTooSmall {
            p: field.modulus(),
            needed,
        });
    }
    let mc_upper = min_cut(net)?.value;

    let ranks = exec
        .map((0..trials).collect(), |t| -> Result<u64> {
            let ta = random_assignment(net, field, trial_seed(seed, t))?;
            Ok(rank_mod_p(&contract(net, &ta)?)? as u64)
        })
        .into_iter()
        .collect::<Result<Vec<u64>>>()?;
    let r1_lower = *ranks.iter().max().expect("at least one trial");
    let witness_trial = ranks.iter().position(|&r| r == r1_lower).expect("max is present");
    debug_assert!(BigUint::from(r1_lower) <= mc_upper);

    // a generic-rank minor has degree at most rank * |entries| in the entries
    let degree = BigUint::from(rows.min(cols)) * BigUint::from(layout.tensor_entries()?);
    let p = BigUint::from(field.modulus());
    let per_trial = if degree >= p {
        Ratio::one()
    } else {
        Ratio::new(degree, p)
    };
    let failure_bound = num_traits::pow(per_trial, trials);

    Ok(R1Estimate {
        r1_lower,
        mc_upper,
        failure_bound,
        ranks,
        witness_trial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig1_network, path_network};
    use crate::netmodel::Edge;

    fn delta(legs: &[(&str, usize)]) -> Tensor {
        let shape: Vec<usize> = legs.iter().map(|l| l.1).collect();
        let d = shape[0];
        let len: usize = shape.iter().product();
        let mut data = vec![0; len];
        for i in 0..d {
            let idx = shape.iter().fold(0, |acc, &s| acc * s + i);
            data[idx] = 1;
        }
        Tensor {
            legs: legs.iter().map(|l| l.0.to_string()).collect(),
            shape,
            data,
        }
    }

    #[test]
    fn field_rejects_composites_and_large() {
        assert!(PrimeField::new(DEFAULT_PRIME).is_ok());
        assert!(matches!(PrimeField::new(15), Err(Error::NotPrime(15))));
        assert!(PrimeField::new((1 << 61) - 1).is_err());
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.mul(3, f.inv(3)), 1);
    }

    #[test]
    fn rank_of_simple_matrices() {
        let f = PrimeField::default();
        let mut identity = vec![0; 36];
        for i in 0..6 {
            identity[i * 6 + i] = 1;
        }
        assert_eq!(rank_in(f, 6, 6, &identity), 6);
        assert_eq!(rank_in(f, 4, 7, &[1; 28]), 1);
        assert_eq!(rank_in(f, 3, 5, &[0; 15]), 0);
        assert_eq!(rank_in(f, 0, 0, &[]), 0);
    }

    #[test]
    fn all_ones_path_tensor_has_rank_one() {
        let net = path_network(3, 4);
        let ta = TensorAssignment {
            prime: DEFAULT_PRIME,
            tensors: [(
                "n".to_string(),
                Tensor {
                    legs: vec!["e1".into(), "e2".into()],
                    shape: vec![3, 4],
                    data: vec![1; 12],
                },
            )]
            .into(),
        };
        let m = contract(&net, &ta).unwrap();
        assert_eq!((m.rows, m.cols), (3, 4));
        assert!(m.data.iter().all(|&x| x == 1));
        assert_eq!(rank_mod_p(&m).unwrap(), 1);
    }

    #[test]
    fn delta_path_contracts_to_identity() {
        let net = path_network(2, 2);
        let ta = TensorAssignment {
            prime: DEFAULT_PRIME,
            tensors: [("n".to_string(), delta(&[("e1", 2), ("e2", 2)]))].into(),
        };
        let m = contract(&net, &ta).unwrap();
        assert_eq!(m.data, vec![1, 0, 0, 1]);
    }

    #[test]
    fn chain_of_deltas_is_identity() {
        let names = ["s", "a", "b", "c", "t"];
        let edges = (0..4).map(|i| Edge::new(format!("e{i}"), names[i], names[i + 1], 3)).collect();
        let net = Network::new(names, ["s"], ["t"], edges);
        let ta = TensorAssignment {
            prime: DEFAULT_PRIME,
            tensors: [
                ("a".to_string(), delta(&[("e0", 3), ("e1", 3)])),
                ("b".to_string(), delta(&[("e1", 3), ("e2", 3)])),
                ("c".to_string(), delta(&[("e2", 3), ("e3", 3)])),
            ]
            .into(),
        };
        let m = contract(&net, &ta).unwrap();
        assert_eq!(rank_mod_p(&m).unwrap(), 3);
        assert_eq!(m.data, vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);
    }

    #[test]
    fn source_sink_edge_is_identity_wiring() {
        let net = Network::new(["s", "t"], ["s"], ["t"], vec![Edge::new("e", "s", "t", 3)]);
        let ta = random_assignment(&net, PrimeField::default(), 1).unwrap();
        assert!(ta.tensors.is_empty());
        let m = contract(&net, &ta).unwrap();
        assert_eq!(rank_mod_p(&m).unwrap(), 3);
    }

    #[test]
    fn fig2_boundary_shape() {
        let net = fig1_network([5, 3, 3, 5, 2]);
        let ta = random_assignment(&net, PrimeField::default(), 0).unwrap();
        assert_eq!(ta.tensors["n1"].shape, vec![5, 3, 2]);
        let m = contract(&net, &ta).unwrap();
        assert_eq!((m.rows, m.cols), (15, 15));
    }

    #[test]
    fn assignments_are_deterministic() {
        let net = fig1_network([2, 3, 3, 2, 2]);
        let f = PrimeField::default();
        assert_eq!(random_assignment(&net, f, 9).unwrap(), random_assignment(&net, f, 9).unwrap());
        assert_ne!(random_assignment(&net, f, 0).unwrap(), random_assignment(&net, f, 1).unwrap());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let net = fig1_network([2, 3, 3, 2, 2]);
        let mut ta = random_assignment(&net, PrimeField::default(), 0).unwrap();
        ta.tensors.get_mut("n1").unwrap().shape[0] = 3;
        assert!(matches!(contract(&net, &ta), Err(Error::ShapeMismatch(_))));
        ta.tensors.remove("n1");
        assert!(matches!(contract(&net, &ta), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn estimate_on_paths_and_fig1() {
        let f = PrimeField::default();
        let est = estimate_r1(&path_network(3, 5), f, 2, 0).unwrap();
        assert_eq!(est.r1_lower, 3);
        assert!(est.is_certified_exact());
        let est = estimate_r1(&fig1_network([2, 4, 4, 2, 2]), f, 3, 0).unwrap();
        assert_eq!(BigUint::from(est.r1_lower), est.mc_upper);
    }

    #[test]
    fn failure_bound_is_small_for_large_prime() {
        let est = estimate_r1(&fig1_network([2, 3, 3, 2, 2]), PrimeField::default(), 3, 0).unwrap();
        let b = est.failure_bound_f64();
        // per trial 6*24/p, cubed
        let expected = (144.0 / DEFAULT_PRIME as f64).powi(3);
        assert!((b - expected).abs() / expected < 1e-9, "{b} vs {expected}");
    }

    #[test]
    fn tiny_prime_is_rejected() {
        let err = estimate_r1(&fig1_network([5, 3, 3, 5, 2]), PrimeField::new(13).unwrap(), 1, 0);
        assert!(matches!(err, Err(Error::FieldTooSmall { p: 13, needed: 15 })));
    }
}
