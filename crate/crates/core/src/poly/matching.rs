//! Exact matching polynomials by the vertex-deletion recurrence.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::IntPolynomial;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Edge count above which [`matching_polynomial`] refuses to run.
pub const DEFAULT_MATCHING_EDGE_LIMIT: usize = 64;

/// `μ_G(x) = Σ_k (−1)^k m_k x^{n−2k}` with exact coefficients.
pub fn matching_polynomial(g: &Graph) -> Result<IntPolynomial> {
    matching_polynomial_with_limit(g, DEFAULT_MATCHING_EDGE_LIMIT)
}

pub fn matching_polynomial_with_limit(g: &Graph, max_edges: usize) -> Result<IntPolynomial> {
    let counts = matching_counts(g, max_edges)?;
    let n = g.n();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (k, m_k) in counts.into_iter().enumerate() {
        let c = BigInt::from(m_k);
        coeffs[n - 2 * k] = if k % 2 == 0 { c } else { -c };
    }
    Ok(IntPolynomial::new(coeffs))
}

/// `m_k`, the number of `k`-edge matchings, for `k = 0..=⌊n/2⌋`.
pub fn matching_counts(g: &Graph, max_edges: usize) -> Result<Vec<BigUint>> {
    if g.m() > max_edges {
        return Err(Error::WorkLimit {
            what: "matching polynomial edges",
            needed: g.m() as u128,
            limit: max_edges as u128,
        });
    }
    let words = g.n().div_ceil(64).max(1);
    let mut neighbours = vec![vec![0u64; words]; g.n()];
    for &(u, v) in g.edges() {
        set_bit(&mut neighbours[u - 1], v - 1);
        set_bit(&mut neighbours[v - 1], u - 1);
    }
    let mut all = vec![0u64; words];
    for v in 0..g.n() {
        set_bit(&mut all, v);
    }
    let mut counter = Counter { neighbours, memo: HashMap::new() };
    let mut counts = counter.count(&all);
    counts.resize(g.n() / 2 + 1, BigUint::zero());
    Ok(counts)
}

struct Counter {
    neighbours: Vec<Vec<u64>>,
    memo: HashMap<Vec<u64>, Vec<BigUint>>,
}

impl Counter {
    /// Matching counts of the subgraph induced on `set`. Removing the lowest vertex `v`
    /// splits matchings into those avoiding `v` and those using an edge `{v, u}`.
    fn count(&mut self, set: &[u64]) -> Vec<BigUint> {
        let Some(v) = lowest_bit(set) else {
            return vec![BigUint::from(1u32)];
        };
        if let Some(hit) = self.memo.get(set) {
            return hit.clone();
        }
        let mut without_v = set.to_vec();
        clear_bit(&mut without_v, v);
        let mut result = self.count(&without_v);
        let partners: Vec<usize> = iter_bits(&and(&without_v, &self.neighbours[v])).collect();
        for u in partners {
            let mut rest = without_v.clone();
            clear_bit(&mut rest, u);
            let sub = self.count(&rest);
            if result.len() < sub.len() + 1 {
                result.resize(sub.len() + 1, BigUint::zero());
            }
            for (k, c) in sub.into_iter().enumerate() {
                result[k + 1] += c;
            }
        }
        self.memo.insert(set.to_vec(), result.clone());
        result
    }
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn clear_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] &= !(1 << (i % 64));
}

fn lowest_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn iter_bits(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(i, &w)| {
        (0..64).filter(move |b| w & (1 << b) != 0).map(move |b| i * 64 + b)
    })
}
