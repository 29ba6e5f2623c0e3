//! Searching for shift assignments whose new eigenvalues meet the Ramanujan
//! bound, and brute-force oracles for the expected characteristic polynomials
//! that drive the interlacing argument.
//!
//! Every enumeration is split into fixed lexicographic chunks that are consumed
//! in parallel and reduced in index order, so results never depend on the
//! number of worker threads.

mod greedy;
mod oracle;
mod scan;

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lift::ShiftAssignment;
use crate::spectral::Certificate;

pub use greedy::{
    branch_interlacing_report, greedy_interlacing_search, BranchEntry, BranchReport, GreedyOptions, GreedyResult,
    GreedyStep, GUARANTEE_TOL,
};
pub use oracle::{
    compare_with_matching, conditional_expected_poly, expected_charpoly_oracle, OracleComparison,
    DEFAULT_ENUMERATION_LIMIT,
};
pub use scan::{
    exhaustive_search, random_search, search, two_step_4lift, AutoThresholds, SearchReport, Strategy, TwoStepOutcome,
};

/// Limits for one search. At least one of the two limits must be set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_assignments: Option<u64>,
    /// Seconds.
    pub max_wall_time: Option<f64>,
    pub seed: u64,
}

impl SearchBudget {
    pub fn new(max_assignments: Option<u64>, max_wall_time: Option<f64>, seed: u64) -> Result<Self> {
        if max_assignments.is_none() && max_wall_time.is_none() {
            return Err(Error::InvalidBudget("set an assignment limit, a time limit, or both".into()));
        }
        if let Some(t) = max_wall_time {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidBudget(format!("wall time {t} is not a finite non-negative number")));
            }
        }
        Ok(Self { max_assignments, max_wall_time, seed })
    }

    pub fn assignments(max: u64) -> Self {
        Self { max_assignments: Some(max), max_wall_time: None, seed: 0 }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub(crate) fn wall_time(&self) -> Option<Duration> {
        self.max_wall_time.map(Duration::from_secs_f64)
    }
}

/// Result of one search. `examined` counts assignments in enumeration order up to
/// and including the winner, so it is reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found { certificate: Certificate, examined: u64 },
    /// The whole space was checked and nothing passed.
    NonePass { examined: u64 },
    /// The budget ran out before the space was covered.
    Exhausted { examined: u64 },
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            SearchOutcome::Found { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn examined(&self) -> u64 {
        match self {
            SearchOutcome::Found { examined, .. }
            | SearchOutcome::NonePass { examined }
            | SearchOutcome::Exhausted { examined } => *examined,
        }
    }
}

/// Which expected-polynomial family is in play: uniform shifts in `{0,1,2}`
/// evaluated at `ω = e^{2πi/3}`, or shifts in `{0,2}` added to a fixed `{0,1}`
/// signing `b` and evaluated at `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Family {
    K3,
    K4 { b: ShiftAssignment },
}

impl Family {
    /// A `k4` family; `b` must be an order-2 assignment.
    pub fn k4(b: ShiftAssignment) -> Result<Self> {
        if b.k() != 2 {
            return Err(Error::InvalidAssignment(format!("background signing must have k = 2, got {}", b.k())));
        }
        Ok(Family::K4 { b })
    }

    /// Order of the resulting lift.
    pub fn k(&self) -> u32 {
        match self {
            Family::K3 => 3,
            Family::K4 { .. } => 4,
        }
    }

    /// The allowed shift set `H`.
    pub fn values(&self) -> &'static [u32] {
        match self {
            Family::K3 => &[0, 1, 2],
            Family::K4 { .. } => &[0, 2],
        }
    }

    pub fn background(&self) -> Option<&ShiftAssignment> {
        match self {
            Family::K3 => None,
            Family::K4 { b } => Some(b),
        }
    }

    /// The order-`k` assignment whose quotient at `ω_k` is evaluated.
    pub fn full_assignment(&self, s: &ShiftAssignment) -> Result<ShiftAssignment> {
        match self {
            Family::K3 => ShiftAssignment::new(3, s.shifts().to_vec()),
            Family::K4 { b } => s.add(b, 4),
        }
    }

    pub(crate) fn check_edges(&self, m: usize) -> Result<()> {
        match self.background() {
            Some(b) if b.len() != m => Err(Error::LengthMismatch { expected: m, got: b.len() }),
            _ => Ok(()),
        }
    }
}

/// A node of the conditional-expectation tree: shifts fixed for the first edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixNode {
    pub fixed: Vec<u32>,
    pub family: Family,
}

impl PrefixNode {
    pub fn new(fixed: Vec<u32>, family: Family) -> Result<Self> {
        if let Some(v) = fixed.iter().find(|v| !family.values().contains(v)) {
            return Err(Error::InvalidAssignment(format!(
                "prefix value {v} not in allowed set {:?}",
                family.values()
            )));
        }
        Ok(Self { fixed, family })
    }

    pub fn root(family: Family) -> Self {
        Self { fixed: Vec::new(), family }
    }

    pub fn child(&self, value: u32) -> Result<Self> {
        let mut fixed = self.fixed.clone();
        fixed.push(value);
        Self::new(fixed, self.family.clone())
    }

    pub fn depth(&self) -> usize {
        self.fixed.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_needs_a_limit() {
        assert!(SearchBudget::new(None, None, 1).is_err());
        assert!(SearchBudget::new(None, Some(-1.0), 1).is_err());
        assert!(SearchBudget::new(Some(10), None, 1).is_ok());
        assert!(SearchBudget::new(None, Some(2.5), 1).is_ok());
    }

    #[test]
    fn family_shapes() {
        assert_eq!(Family::K3.values(), &[0, 1, 2]);
        let b = ShiftAssignment::new(2, vec![1, 0, 1]).unwrap();
        let fam = Family::k4(b).unwrap();
        assert_eq!(fam.values(), &[0, 2]);
        let s = ShiftAssignment::new(4, vec![2, 2, 0]).unwrap();
        assert_eq!(fam.full_assignment(&s).unwrap().shifts(), &[3, 2, 1]);
        assert!(Family::k4(ShiftAssignment::new(3, vec![0]).unwrap()).is_err());
        assert!(fam.check_edges(4).is_err());
    }

    #[test]
    fn prefix_values_checked() {
        let b = ShiftAssignment::new(2, vec![0, 0]).unwrap();
        assert!(PrefixNode::new(vec![1], Family::k4(b).unwrap()).is_err());
        let node = PrefixNode::root(Family::K3).child(2).unwrap();
        assert_eq!(node.depth(), 1);
        assert!(node.child(3).is_err());
    }
}
