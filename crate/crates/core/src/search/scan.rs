//! Exhaustive, randomized and two-step searches over shift assignments.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::greedy::{greedy_interlacing_search, GreedyOptions, GreedyResult};
use super::{Family, SearchBudget, SearchOutcome};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lift::{AssignmentSpace, ShiftAssignment};
use crate::scalar::Scalar;
use crate::spectral::{Certificate, LiftCertifier};

/// Assignments checked per sequential step; the chunk is scanned in parallel.
const CHUNK: u128 = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Exhaustive,
    Random,
    Greedy,
    TwoStep,
    /// Exhaustive up to the [`AutoThresholds`] edge counts, randomized above.
    Auto,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "random" => Ok(Strategy::Random),
            "greedy" => Ok(Strategy::Greedy),
            "two-step" => Ok(Strategy::TwoStep),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

/// Largest edge count searched exhaustively by [`Strategy::Auto`], per lift order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoThresholds {
    pub k2: usize,
    pub k3: usize,
    pub k4: usize,
}

impl Default for AutoThresholds {
    fn default() -> Self {
        Self { k2: 20, k3: 14, k4: 11 }
    }
}

impl AutoThresholds {
    pub fn exhaustive(&self, k: u32, m: usize) -> bool {
        match k {
            2 => m <= self.k2,
            3 => m <= self.k3,
            _ => m <= self.k4,
        }
    }
}

type Transform<'a> = &'a (dyn Fn(ShiftAssignment) -> Result<ShiftAssignment> + Sync);

fn certify_if_pass<T: Scalar>(
    certifier: &LiftCertifier,
    s: ShiftAssignment,
    transform: Transform<'_>,
) -> Option<Result<Certificate>> {
    match transform(s).and_then(|full| certifier.certify::<T>(&full)) {
        Ok(c) if c.passes() => Some(Ok(c)),
        Ok(_) => None,
        Err(e) => Some(Err(e)),
    }
}

/// Lexicographic scan; the first passing index wins regardless of thread count.
fn scan_space<T: Scalar>(
    certifier: &LiftCertifier,
    space: &AssignmentSpace,
    transform: Transform<'_>,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let total = space.size().unwrap_or(u128::MAX);
    let limit = budget.max_assignments.map_or(total, |b| total.min(u128::from(b)));
    let deadline = budget.wall_time();
    let started = Instant::now();
    let mut start = 0u128;
    while start < limit {
        if deadline.is_some_and(|d| started.elapsed() > d) {
            return Ok(SearchOutcome::Exhausted { examined: start as u64 });
        }
        let end = (start + CHUNK).min(limit);
        let hit = (0..(end - start) as usize).into_par_iter().find_map_first(|offset| {
            let index = start + offset as u128;
            certify_if_pass::<T>(certifier, space.get(index), transform).map(|r| r.map(|c| (index, c)))
        });
        if let Some(found) = hit {
            let (index, certificate) = found?;
            return Ok(SearchOutcome::Found { certificate, examined: index as u64 + 1 });
        }
        start = end;
    }
    Ok(if limit < total {
        SearchOutcome::Exhausted { examined: limit as u64 }
    } else {
        SearchOutcome::NonePass { examined: limit as u64 }
    })
}

/// Sample `index` of a seeded stream: its own ChaCha stream, so samples are
/// independent of how they are distributed across threads.
fn sample(space: &AssignmentSpace, seed: u64, index: u64) -> ShiftAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let digits: u128 = space
        .allowed()
        .iter()
        .fold(0u128, |acc, set| acc * set.len() as u128 + rng.random_range(0..set.len()) as u128);
    space.get(digits)
}

fn random_scan<T: Scalar>(
    certifier: &LiftCertifier,
    space: &AssignmentSpace,
    transform: Transform<'_>,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    let limit = budget.max_assignments.unwrap_or(u64::MAX);
    let deadline = budget.wall_time();
    let started = Instant::now();
    let mut start = 0u64;
    while start < limit {
        if deadline.is_some_and(|d| started.elapsed() > d) {
            break;
        }
        let end = start.saturating_add(CHUNK as u64).min(limit);
        let hit = (start..end).into_par_iter().find_map_first(|index| {
            certify_if_pass::<T>(certifier, sample(space, budget.seed, index), transform).map(|r| r.map(|c| (index, c)))
        });
        if let Some(found) = hit {
            let (index, certificate) = found?;
            return Ok(SearchOutcome::Found { certificate, examined: index + 1 });
        }
        start = end;
    }
    Ok(SearchOutcome::Exhausted { examined: start })
}

fn identity(s: ShiftAssignment) -> Result<ShiftAssignment> {
    Ok(s)
}

fn check_k(k: u32) -> Result<()> {
    if (2..=4).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedK(k))
    }
}

/// Lexicographically smallest assignment in `{0..k}^m` whose lift passes.
pub fn exhaustive_search<T: Scalar>(g: &Graph, k: u32, epsilon: f64, budget: &SearchBudget) -> Result<SearchOutcome> {
    check_k(k)?;
    let certifier = LiftCertifier::new(g, epsilon)?;
    let space = AssignmentSpace::new(g.m(), k, None)?;
    scan_space::<T>(&certifier, &space, &identity, budget)
}

/// Uniform seeded sampling; the lowest passing sample index wins.
pub fn random_search<T: Scalar>(g: &Graph, k: u32, epsilon: f64, budget: &SearchBudget) -> Result<SearchOutcome> {
    if k < 2 {
        return Err(Error::UnsupportedK(k));
    }
    let certifier = LiftCertifier::new(g, epsilon)?;
    let space = AssignmentSpace::new(g.m(), k, None)?;
    random_scan::<T>(&certifier, &space, &identity, budget)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum TwoStepOutcome {
    /// `certificate` covers `s′ = b + s` as a 4-lift.
    Found {
        b: ShiftAssignment,
        b_certificate: Certificate,
        s: ShiftAssignment,
        certificate: Certificate,
        examined: [u64; 2],
    },
    Step1Failed { step1: SearchOutcome },
    Step2Failed { b: ShiftAssignment, b_certificate: Certificate, step2: SearchOutcome },
}

impl TwoStepOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            TwoStepOutcome::Found { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    /// Collapses to a plain search outcome for the final 4-lift.
    pub fn outcome(&self) -> SearchOutcome {
        match self {
            TwoStepOutcome::Found { certificate, examined, .. } => {
                SearchOutcome::Found { certificate: certificate.clone(), examined: examined[0] + examined[1] }
            }
            TwoStepOutcome::Step1Failed { step1 } => step1.clone(),
            TwoStepOutcome::Step2Failed { step2, .. } => step2.clone(),
        }
    }
}

fn pick_scan<T: Scalar>(
    exhaustive: bool,
    certifier: &LiftCertifier,
    space: &AssignmentSpace,
    transform: Transform<'_>,
    budget: &SearchBudget,
) -> Result<SearchOutcome> {
    if exhaustive {
        scan_space::<T>(certifier, space, transform, budget)
    } else {
        random_scan::<T>(certifier, space, transform, budget)
    }
}

/// Finds a `{0,1}` signing `b` whose 2-lift passes, then `{0,2}` shifts `s` such
/// that the 4-lift `b + s` passes. The `ω⁴ = −1` quotient of `b + s` is the signing
/// of `b`, so step two only has to fix the quotients at `±i`.
pub fn two_step_4lift<T: Scalar>(
    g: &Graph,
    epsilon: f64,
    budget: &SearchBudget,
    thresholds: &AutoThresholds,
) -> Result<TwoStepOutcome> {
    let exhaustive = thresholds.exhaustive(2, g.m());
    let signer = LiftCertifier::new(g, epsilon)?;
    let signings = AssignmentSpace::new(g.m(), 2, None)?;
    let step1 = pick_scan::<T>(exhaustive, &signer, &signings, &identity, budget)?;
    let (b_certificate, first) = match step1 {
        SearchOutcome::Found { certificate, examined } => (certificate, examined),
        other => return Ok(TwoStepOutcome::Step1Failed { step1: other }),
    };
    let b = b_certificate.assignment()?;
    let evens = AssignmentSpace::uniform(g.m(), 4, &[0, 2])?;
    let add_b = |s: ShiftAssignment| s.add(&b, 4);
    let step2 = pick_scan::<T>(exhaustive, &signer, &evens, &add_b, budget)?;
    Ok(match step2 {
        SearchOutcome::Found { certificate, examined } => TwoStepOutcome::Found {
            s: ShiftAssignment::new(4, certificate.shifts.iter().zip(b.shifts()).map(|(x, y)| (x + 4 - y) % 4).collect())?,
            b,
            b_certificate,
            certificate,
            examined: [first, examined],
        },
        other => TwoStepOutcome::Step2Failed { b, b_certificate, step2: other },
    })
}

/// Full record of one strategy run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub strategy: Strategy,
    pub k: u32,
    pub outcome: SearchOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_step: Option<TwoStepOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub greedy: Option<GreedyResult>,
}

/// Dispatches to the requested strategy. `Auto` resolves to exhaustive or random
/// by edge count; `Greedy` at `k = 4` first finds its background signing.
pub fn search<T: Scalar>(
    g: &Graph,
    k: u32,
    strategy: Strategy,
    epsilon: f64,
    budget: &SearchBudget,
    thresholds: &AutoThresholds,
) -> Result<SearchReport> {
    check_k(k)?;
    let strategy = match strategy {
        Strategy::Auto if thresholds.exhaustive(k, g.m()) => Strategy::Exhaustive,
        Strategy::Auto => Strategy::Random,
        other => other,
    };
    let plain = |outcome| SearchReport { strategy, k, outcome, two_step: None, greedy: None };
    match strategy {
        Strategy::Exhaustive => exhaustive_search::<T>(g, k, epsilon, budget).map(plain),
        Strategy::Random => random_search::<T>(g, k, epsilon, budget).map(plain),
        Strategy::TwoStep => {
            if k != 4 {
                return Err(Error::UnsupportedK(k));
            }
            let two = two_step_4lift::<T>(g, epsilon, budget, thresholds)?;
            Ok(SearchReport { strategy, k, outcome: two.outcome(), two_step: Some(two), greedy: None })
        }
        Strategy::Greedy => {
            let family = match k {
                3 => Family::K3,
                4 => {
                    let signer = LiftCertifier::new(g, epsilon)?;
                    let space = AssignmentSpace::new(g.m(), 2, None)?;
                    let step1 =
                        pick_scan::<T>(thresholds.exhaustive(2, g.m()), &signer, &space, &identity, budget)?;
                    match step1 {
                        SearchOutcome::Found { certificate, .. } => Family::k4(certificate.assignment()?)?,
                        other => return Ok(plain(other)),
                    }
                }
                other => return Err(Error::UnsupportedK(other)),
            };
            let options = GreedyOptions { epsilon, ..GreedyOptions::default() };
            let result = greedy_interlacing_search::<T>(g, &family, &options)?;
            let outcome = if result.certificate.passes() {
                SearchOutcome::Found { certificate: result.certificate.clone(), examined: result.leaves_evaluated }
            } else {
                SearchOutcome::NonePass { examined: result.leaves_evaluated }
            };
            Ok(SearchReport { strategy, k, outcome, two_step: None, greedy: Some(result) })
        }
        Strategy::Auto => unreachable!("resolved above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_bipartite, cycle};
    use crate::lift::quotient_matrix;
    use crate::spectral::DEFAULT_EPSILON;

    fn big() -> SearchBudget {
        SearchBudget::assignments(1 << 20)
    }

    #[test]
    fn single_edge_has_no_ramanujan_two_lift() {
        let g = complete_bipartite(1).unwrap();
        let out = exhaustive_search::<f64>(&g, 2, DEFAULT_EPSILON, &big()).unwrap();
        assert_eq!(out, SearchOutcome::NonePass { examined: 2 });
    }

    #[test]
    fn exhaustion_is_distinct() {
        let g = complete_bipartite(1).unwrap();
        let out = exhaustive_search::<f64>(&g, 2, DEFAULT_EPSILON, &SearchBudget::assignments(1)).unwrap();
        assert_eq!(out, SearchOutcome::Exhausted { examined: 1 });
        let g = complete_bipartite(3).unwrap();
        let out = random_search::<f64>(&g, 3, DEFAULT_EPSILON, &SearchBudget::assignments(0)).unwrap();
        assert_eq!(out, SearchOutcome::Exhausted { examined: 0 });
    }

    #[test]
    fn rejects_unsupported_k() {
        let g = complete_bipartite(2).unwrap();
        assert!(matches!(exhaustive_search::<f64>(&g, 5, 1e-8, &big()), Err(Error::UnsupportedK(5))));
    }

    #[test]
    fn k33_three_lift_is_smallest_pass() {
        let g = complete_bipartite(3).unwrap();
        let out = exhaustive_search::<f64>(&g, 3, DEFAULT_EPSILON, &big()).unwrap();
        let SearchOutcome::Found { certificate, examined } = out else { panic!("no 3-lift found") };
        assert!(certificate.lambda_new_max <= 2.0 * 2f64.sqrt() + 1e-8);
        // sequential re-scan: everything before the winner fails
        let certifier = LiftCertifier::new(&g, DEFAULT_EPSILON).unwrap();
        let space = AssignmentSpace::new(9, 3, None).unwrap();
        let first = space.iter().position(|s| certifier.certify::<f64>(&s).unwrap().passes()).unwrap();
        assert_eq!(first as u64 + 1, examined);
    }

    #[test]
    fn random_is_reproducible() {
        let g = complete_bipartite(3).unwrap();
        let budget = SearchBudget::assignments(10_000).with_seed(1);
        let a = random_search::<f64>(&g, 3, DEFAULT_EPSILON, &budget).unwrap();
        let b = random_search::<f64>(&g, 3, DEFAULT_EPSILON, &budget).unwrap();
        assert_eq!(a, b);
        assert!(a.certificate().unwrap().passes());
    }

    #[test]
    fn two_step_on_k33() {
        let g = complete_bipartite(3).unwrap();
        let out = two_step_4lift::<f64>(&g, DEFAULT_EPSILON, &big(), &AutoThresholds::default()).unwrap();
        let TwoStepOutcome::Found { b, s, certificate, b_certificate, .. } = out else { panic!("two-step failed") };
        assert!(b_certificate.passes() && certificate.passes());
        assert!(s.shifts().iter().all(|v| *v == 0 || *v == 2));
        let combined = certificate.assignment().unwrap();
        assert_eq!(combined, s.add(&b, 4).unwrap());
        let half = quotient_matrix::<f64>(&g, &combined, 2).unwrap();
        let signing = quotient_matrix::<f64>(&g, &b, 1).unwrap();
        assert_eq!(half.entries, signing.entries);
    }

    #[test]
    fn two_step_on_single_edge_fails_first() {
        let g = complete_bipartite(1).unwrap();
        let out = two_step_4lift::<f64>(&g, DEFAULT_EPSILON, &big(), &AutoThresholds::default()).unwrap();
        assert!(matches!(out, TwoStepOutcome::Step1Failed { step1: SearchOutcome::NonePass { examined: 2 } }));
    }

    #[test]
    fn auto_dispatch() {
        let g = cycle(6).unwrap();
        let tight = AutoThresholds { k2: 0, k3: 0, k4: 0 };
        let report = search::<f64>(&g, 3, Strategy::Auto, 1e-8, &big().with_seed(3), &tight).unwrap();
        assert_eq!(report.strategy, Strategy::Random);
        let report = search::<f64>(&g, 3, Strategy::Auto, 1e-8, &big(), &AutoThresholds::default()).unwrap();
        assert_eq!(report.strategy, Strategy::Exhaustive);
        assert!(report.outcome.certificate().is_some());
    }

    #[test]
    fn strategy_names() {
        assert_eq!("two-step".parse::<Strategy>().unwrap(), Strategy::TwoStep);
        assert_eq!(serde_json::to_string(&Strategy::TwoStep).unwrap(), "\"two-step\"");
        assert!("nope".parse::<Strategy>().is_err());
    }
}
