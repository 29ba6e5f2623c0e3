//! Expected characteristic polynomials by literal enumeration.
//!
//! For the `k3` family the average of `det(xI − A_s(ω))` over `s ∈ {0,1,2}^m`,
//! and for the `k4` family the average of `det(xI − A_{s+b}(i))` over
//! `s ∈ {0,2}^m`, should both reproduce the matching polynomial. Averages are
//! used instead of sums; the scaling does not move any root.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Family, PrefixNode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lift::{quotient_matrix, AssignmentSpace};
use crate::poly::{char_poly, matching_polynomial, Polynomial};
use crate::scalar::{czero, Scalar};

/// Largest number of characteristic polynomials averaged for one node.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 1 << 22;

/// Indices summed sequentially before the per-chunk partial sums are combined in order.
const SUM_CHUNK: u128 = 256;

/// Average characteristic polynomial over all completions of the node's prefix.
pub fn conditional_expected_poly<T: Scalar>(g: &Graph, node: &PrefixNode, limit: u128) -> Result<Polynomial<T>> {
    let space = completion_space(g, node)?;
    let total = space.size().unwrap_or(u128::MAX);
    if total > limit {
        return Err(Error::WorkLimit { what: "conditional expectation terms", needed: total, limit });
    }
    let chunks = total.div_ceil(SUM_CHUNK);
    let partials = (0..chunks as u64)
        .into_par_iter()
        .map(|c| {
            let start = u128::from(c) * SUM_CHUNK;
            let end = (start + SUM_CHUNK).min(total);
            let mut acc = vec![czero::<T>(); g.n() + 1];
            for s in space.range(start, end) {
                let full = node.family.full_assignment(&s)?;
                let p = char_poly(&quotient_matrix::<T>(g, &full, 1)?.entries)?;
                for (a, &x) in acc.iter_mut().zip(p.coeffs()) {
                    *a += x;
                }
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut sum = vec![czero::<T>(); g.n() + 1];
    for part in partials {
        for (a, x) in sum.iter_mut().zip(part) {
            *a += x;
        }
    }
    let scale = Complex::new(T::one() / T::lit(total as f64), T::zero());
    Ok(Polynomial::new(sum.into_iter().map(|c| c * scale).collect()))
}

fn completion_space(g: &Graph, node: &PrefixNode) -> Result<AssignmentSpace> {
    let m = g.m();
    node.family.check_edges(m)?;
    if node.depth() > m {
        return Err(Error::LengthMismatch { expected: m, got: node.depth() });
    }
    let values = node.family.values();
    let mask = (0..m)
        .map(|j| node.fixed.get(j).map_or_else(|| values.to_vec(), |&v| vec![v]))
        .collect();
    AssignmentSpace::new(m, node.family.k(), Some(mask))
}

/// The unconditioned average, i.e. the root of the conditional tree.
pub fn expected_charpoly_oracle<T: Scalar>(g: &Graph, family: &Family, limit: u128) -> Result<Polynomial<T>> {
    conditional_expected_poly(g, &PrefixNode::root(family.clone()), limit)
}

/// Oracle average set against the exact matching polynomial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub family: Family,
    pub terms: u64,
    pub matching: String,
    pub average: Polynomial<f64>,
    pub max_residual: f64,
    /// `max_residual / max |coefficient of μ|`.
    pub relative_residual: f64,
}

pub fn compare_with_matching<T: Scalar>(g: &Graph, family: &Family, limit: u128) -> Result<OracleComparison> {
    let mu = matching_polynomial(g)?;
    let average = expected_charpoly_oracle::<T>(g, family, limit)?.cast::<f64>();
    let exact = mu.to_poly::<f64>();
    let max_residual = average.max_abs_diff(&exact);
    let terms = (family.values().len() as u64).pow(g.m() as u32);
    Ok(OracleComparison {
        family: family.clone(),
        terms,
        matching: mu.to_string(),
        relative_residual: max_residual / exact.max_abs_coeff(),
        max_residual,
        average,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle, path};
    use crate::lift::ShiftAssignment;
    use crate::poly::{is_real_rooted, matching_polynomial};

    #[test]
    fn path_terms_all_equal_matching() {
        // trees: every single term already equals μ
        let g = path(3).unwrap();
        let mu = matching_polynomial(&g).unwrap().to_poly::<f64>();
        assert_eq!(mu, Polynomial::from_real(&[0.0, -2.0, 0.0, 1.0]));
        for a in 0..3 {
            for b in 0..3 {
                let node = PrefixNode::new(vec![a, b], Family::K3).unwrap();
                let p = conditional_expected_poly::<f64>(&g, &node, 1).unwrap();
                assert!(p.max_abs_diff(&mu) < 1e-12);
            }
        }
        let avg = expected_charpoly_oracle::<f64>(&g, &Family::K3, 100).unwrap();
        assert!(avg.max_abs_diff(&mu) < 1e-12);
    }

    #[test]
    fn c4_k3_average() {
        let g = cycle(4).unwrap();
        let cmp = compare_with_matching::<f64>(&g, &Family::K3, 1 << 10).unwrap();
        assert_eq!(cmp.terms, 81);
        assert!(cmp.relative_residual <= 1e-9, "{cmp:?}");
        assert_eq!(cmp.matching, "x^4 - 4x^2 + 2");
    }

    #[test]
    fn k4_average_independent_of_signing() {
        let g = complete_bipartite(2).unwrap();
        let mu = matching_polynomial(&g).unwrap().to_poly::<f64>();
        for bits in 0..16u32 {
            let b = ShiftAssignment::new(2, (0..4).map(|j| (bits >> j) & 1).collect()).unwrap();
            let avg = expected_charpoly_oracle::<f64>(&g, &Family::k4(b).unwrap(), 1 << 10).unwrap();
            assert!(avg.max_abs_diff(&mu) <= 1e-9 * mu.max_abs_coeff());
        }
    }

    #[test]
    fn full_prefix_is_single_char_poly() {
        let g = cycle(4).unwrap();
        let node = PrefixNode::new(vec![1, 2, 0, 1], Family::K3).unwrap();
        let p = conditional_expected_poly::<f64>(&g, &node, 1).unwrap();
        let s = ShiftAssignment::new(3, vec![1, 2, 0, 1]).unwrap();
        let direct = char_poly(&quotient_matrix::<f64>(&g, &s, 1).unwrap().entries).unwrap();
        assert_eq!(p, direct);
    }

    #[test]
    fn every_c4_prefix_is_real_rooted() {
        let g = cycle(4).unwrap();
        let mut frontier = vec![PrefixNode::root(Family::K3)];
        let mut seen = 0;
        while let Some(node) = frontier.pop() {
            let p = conditional_expected_poly::<f64>(&g, &node, 1 << 10).unwrap();
            assert!(is_real_rooted(&p, 1e-7).unwrap(), "prefix {:?}", node.fixed);
            seen += 1;
            if node.depth() < 3 {
                frontier.extend((0..3).map(|v| node.child(v).unwrap()));
            }
        }
        assert_eq!(seen, 1 + 3 + 9 + 27);
    }

    #[test]
    fn guards() {
        let g = complete_bipartite(3).unwrap();
        assert!(matches!(
            expected_charpoly_oracle::<f64>(&g, &Family::K3, 100),
            Err(Error::WorkLimit { needed: 19683, .. })
        ));
        let b = ShiftAssignment::new(2, vec![0; 3]).unwrap();
        assert!(matches!(
            expected_charpoly_oracle::<f64>(&g, &Family::k4(b).unwrap(), 1 << 20),
            Err(Error::LengthMismatch { .. })
        ));
        let long = PrefixNode::new(vec![0; 10], Family::K3).unwrap();
        assert!(conditional_expected_poly::<f64>(&g, &long, 1).is_err());
    }
}
