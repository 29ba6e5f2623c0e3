//! Greedy descent through the conditional-expectation tree: fix one edge at a
//! time to the value whose conditional expected polynomial has the smallest
//! largest root.

use serde::{Deserialize, Serialize};

use super::oracle::conditional_expected_poly;
use super::{Family, PrefixNode, DEFAULT_ENUMERATION_LIMIT};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lift::ShiftAssignment;
use crate::poly::{
    check_common_interlacing, common_interlacing_by_roots, is_real_rooted, matching_polynomial, max_real_root,
    Polynomial,
};
use crate::scalar::Scalar;
use crate::spectral::{Certificate, LiftCertifier, DEFAULT_EPSILON};

/// Relative gap below which two branch roots count as tied; ties go to the smaller value.
const TIE_TOL: f64 = 1e-12;

/// Slack allowed between the leaf's largest root and the largest matching root.
pub const GUARANTEE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreedyOptions {
    /// Slack for the final certificate.
    pub epsilon: f64,
    /// Realness tolerance for root finding.
    pub root_tol: f64,
    /// Lattice resolution for the sampled interlacing check.
    pub samples: usize,
    pub limit: u128,
    /// Record a [`BranchReport`] at every level.
    pub with_reports: bool,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self { epsilon: DEFAULT_EPSILON, root_tol: 1e-6, samples: 21, limit: DEFAULT_ENUMERATION_LIMIT, with_reports: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyStep {
    pub edge: usize,
    /// `(value, largest root)` per branch; `None` when no real root was found.
    pub branches: Vec<(u32, Option<f64>)>,
    pub chosen: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchEntry {
    pub value: Option<u32>,
    pub leading_positive: bool,
    pub real_rooted: bool,
    pub max_root: Option<f64>,
}

/// Numeric checks on the children of one tree node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub prefix: Vec<u32>,
    pub branches: Vec<BranchEntry>,
    pub common_interlacing: bool,
    pub common_interlacing_by_roots: bool,
}

impl BranchReport {
    pub fn all_affirmative(&self) -> bool {
        self.common_interlacing
            && self.common_interlacing_by_roots
            && self.branches.iter().all(|b| b.leading_positive && b.real_rooted)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub family: Family,
    /// Order-`k` assignment actually lifted (`b + s` for the `k4` family).
    pub assignment: ShiftAssignment,
    pub certificate: Certificate,
    pub trace: Vec<GreedyStep>,
    pub reports: Vec<BranchReport>,
    pub final_max_root: f64,
    pub mu_max_root: f64,
    /// `final_max_root ≤ mu_max_root + GUARANTEE_TOL`. A false value is a numeric
    /// failure: the descent should never climb above the root's largest root.
    pub guarantee_ok: bool,
    /// Characteristic polynomials summed over the whole descent.
    pub leaves_evaluated: u64,
}

fn completions(node: &PrefixNode, m: usize) -> u64 {
    (node.family.values().len() as u64).pow((m - node.depth().min(m)) as u32)
}

fn entry<T: Scalar>(value: Option<u32>, p: &Polynomial<T>, tol: T) -> Result<BranchEntry> {
    let real_rooted = is_real_rooted(p, tol)?;
    let max_root = match max_real_root(p, tol) {
        Ok(r) => Some(r.to_f64_lossy()),
        Err(Error::NoRealRoot) => None,
        Err(e) => return Err(e),
    };
    Ok(BranchEntry { value, leading_positive: p.leading().re > T::zero(), real_rooted, max_root })
}

fn report_from<T: Scalar>(
    node: &PrefixNode,
    values: Vec<Option<u32>>,
    polys: &[Polynomial<T>],
    samples: usize,
    tol: T,
) -> Result<BranchReport> {
    let branches = values.into_iter().zip(polys).map(|(v, p)| entry(v, p, tol)).collect::<Result<Vec<_>>>()?;
    Ok(BranchReport {
        prefix: node.fixed.clone(),
        branches,
        common_interlacing: check_common_interlacing(polys, samples, tol)?,
        common_interlacing_by_roots: common_interlacing_by_roots(polys, tol)?,
    })
}

/// Real-rootedness and common interlacing of the node's children. A node with
/// every edge fixed has no children and reports its own polynomial.
pub fn branch_interlacing_report<T: Scalar>(
    g: &Graph,
    node: &PrefixNode,
    samples: usize,
    tol: T,
    limit: u128,
) -> Result<BranchReport> {
    if node.depth() >= g.m() {
        let p = conditional_expected_poly::<T>(g, node, limit)?;
        return report_from(node, vec![None], &[p], samples, tol);
    }
    let values = node.family.values();
    let polys = values
        .iter()
        .map(|&v| conditional_expected_poly::<T>(g, &node.child(v)?, limit))
        .collect::<Result<Vec<_>>>()?;
    report_from(node, values.iter().copied().map(Some).collect(), &polys, samples, tol)
}

/// Walks the tree edge by edge and certifies the resulting lift.
pub fn greedy_interlacing_search<T: Scalar>(g: &Graph, family: &Family, options: &GreedyOptions) -> Result<GreedyResult> {
    let certifier = LiftCertifier::new(g, options.epsilon)?;
    let m = g.m();
    family.check_edges(m)?;
    let tol = T::lit(options.root_tol);
    let mut node = PrefixNode::root(family.clone());
    let mut trace = Vec::with_capacity(m);
    let mut reports = Vec::new();
    let mut leaves = 0u64;
    for edge in 0..m {
        let mut polys = Vec::new();
        let mut branches = Vec::new();
        let mut best: Option<(u32, f64)> = None;
        for &v in family.values() {
            let child = node.child(v)?;
            let p = conditional_expected_poly::<T>(g, &child, options.limit)?;
            leaves += completions(&child, m);
            let root = match max_real_root(&p, tol) {
                Ok(r) => Some(r.to_f64_lossy()),
                Err(Error::NoRealRoot) => None,
                Err(e) => return Err(e),
            };
            if let Some(r) = root {
                let better = best.is_none_or(|(_, b)| r < b - TIE_TOL * (1.0 + b.abs()));
                if better {
                    best = Some((v, r));
                }
            }
            branches.push((v, root));
            polys.push(p);
        }
        if options.with_reports {
            let values = family.values().iter().copied().map(Some).collect();
            reports.push(report_from(&node, values, &polys, options.samples, tol)?);
        }
        let (chosen, _) = best.ok_or(Error::NoRealRoot)?;
        trace.push(GreedyStep { edge, branches, chosen });
        node = node.child(chosen)?;
    }
    let leaf = conditional_expected_poly::<T>(g, &node, 1)?;
    leaves += 1;
    if options.with_reports {
        reports.push(report_from(&node, vec![None], std::slice::from_ref(&leaf), options.samples, tol)?);
    }
    let final_max_root = max_real_root(&leaf, tol)?.to_f64_lossy();
    let mu_max_root = max_real_root(&matching_polynomial(g)?.to_poly::<f64>(), options.root_tol)?;
    let s = ShiftAssignment::new(family.k(), node.fixed.clone())?;
    let assignment = family.full_assignment(&s)?;
    let certificate = certifier.certify::<T>(&assignment)?;
    Ok(GreedyResult {
        family: family.clone(),
        assignment,
        certificate,
        trace,
        reports,
        final_max_root,
        mu_max_root,
        guarantee_ok: final_max_root <= mu_max_root + GUARANTEE_TOL,
        leaves_evaluated: leaves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle};
    use crate::spectral::ramanujan_bound;

    fn run(g: &Graph, family: Family) -> GreedyResult {
        greedy_interlacing_search::<f64>(g, &family, &GreedyOptions::default()).unwrap()
    }

    #[test]
    fn c4_three_lift() {
        let g = cycle(4).unwrap();
        let r = run(&g, Family::K3);
        assert!(r.guarantee_ok, "{} vs {}", r.final_max_root, r.mu_max_root);
        assert!(r.certificate.passes());
        assert_eq!(r.trace.len(), 4);
        assert_eq!(r.reports.len(), 5);
        assert!(r.reports.iter().all(BranchReport::all_affirmative));
        assert!((r.mu_max_root - (2.0 + 2f64.sqrt()).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn k33_three_lift() {
        let g = complete_bipartite(3).unwrap();
        let r = run(&g, Family::K3);
        assert!(r.guarantee_ok);
        assert!(r.final_max_root <= ramanujan_bound(3) + 1e-9);
        assert!(r.certificate.passes());
        assert!(r.reports.iter().all(BranchReport::all_affirmative));
    }

    #[test]
    fn k33_four_lift_over_passing_signing() {
        let g = complete_bipartite(3).unwrap();
        let b = (0..1u32 << 9)
            .map(|bits| ShiftAssignment::new(2, (0..9).map(|j| (bits >> j) & 1).collect()).unwrap())
            .find(|b| crate::spectral::certify_lift::<f64>(&g, b, DEFAULT_EPSILON).unwrap().passes())
            .unwrap();
        let r = run(&g, Family::k4(b.clone()).unwrap());
        assert!(r.guarantee_ok);
        assert!(r.certificate.passes());
        assert_eq!(r.assignment.k(), 4);
        assert!(r.assignment.shifts().iter().zip(b.shifts()).all(|(x, y)| x % 2 == *y));
        assert!(r.reports.iter().all(BranchReport::all_affirmative));
    }

    #[test]
    fn leaf_report_has_one_branch() {
        let g = cycle(4).unwrap();
        let node = PrefixNode::new(vec![0, 1, 2, 0], Family::K3).unwrap();
        let rep = branch_interlacing_report::<f64>(&g, &node, 5, 1e-6, 1).unwrap();
        assert_eq!(rep.branches.len(), 1);
        assert_eq!(rep.branches[0].value, None);
        assert!(rep.all_affirmative());
    }

    #[test]
    fn ties_pick_smallest_value() {
        // a tree: every branch has the same polynomial
        let g = crate::graph::path(4).unwrap();
        let err = greedy_interlacing_search::<f64>(&g, &Family::K3, &GreedyOptions::default());
        assert!(matches!(err, Err(Error::NotRegular)));
        let g = cycle(4).unwrap();
        let r = run(&g, Family::K3);
        assert_eq!(r.trace[0].chosen, 0);
    }
}
