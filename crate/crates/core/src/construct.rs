//! Iterated lifting from `K_{d,d}`: each stage searches for a passing shift lift
//! of the current graph and replaces it by that lift.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{complete_bipartite, Graph};
use crate::lift::expand_lift;
use crate::scalar::Scalar;
use crate::search::{search, AutoThresholds, SearchBudget, SearchReport, Strategy};
use crate::spectral::{ramanujan_verdict, BaseVerdict, Certificate};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StagePlan {
    pub k: u32,
    pub strategy: Strategy,
    pub budget: SearchBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionPlan {
    pub d: usize,
    pub stages: Vec<StagePlan>,
    pub epsilon: f64,
    #[serde(default)]
    pub thresholds: AutoThresholds,
}

impl ConstructionPlan {
    pub fn new(d: usize, stages: Vec<StagePlan>, epsilon: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDegree(d));
        }
        if stages.is_empty() {
            return Err(Error::InvalidBudget("schedule must name at least one lift".into()));
        }
        if let Some(bad) = stages.iter().find(|s| !(2..=4).contains(&s.k)) {
            return Err(Error::UnsupportedK(bad.k));
        }
        Ok(Self { d, stages, epsilon, thresholds: AutoThresholds::default() })
    }

    /// Same strategy and budget at every stage.
    pub fn uniform(d: usize, schedule: &[u32], strategy: Strategy, budget: SearchBudget, epsilon: f64) -> Result<Self> {
        Self::new(d, schedule.iter().map(|&k| StagePlan { k, strategy, budget }).collect(), epsilon)
    }

    pub fn schedule(&self) -> Vec<u32> {
        self.stages.iter().map(|s| s.k).collect()
    }

    /// `2d · Π k`.
    pub fn target_vertices(&self) -> usize {
        self.stages.iter().fold(2 * self.d, |n, s| n * s.k as usize)
    }
}

/// One completed lift with everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub index: usize,
    pub base: Graph,
    pub report: SearchReport,
    pub certificate: Certificate,
    pub lifted: Graph,
    pub lifted_verdict: BaseVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StageFailure {
    /// The search produced no passing assignment.
    Search { index: usize, report: Box<SearchReport> },
    /// A passing certificate whose expanded lift did not revalidate.
    Verdict { index: usize, certificate: Certificate, verdict: Option<BaseVerdict>, error: Option<String> },
}

impl StageFailure {
    pub fn index(&self) -> usize {
        match self {
            StageFailure::Search { index, .. } | StageFailure::Verdict { index, .. } => *index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Construction {
    pub plan: ConstructionPlan,
    pub base: Graph,
    pub base_verdict: BaseVerdict,
    pub stages: Vec<StageRecord>,
    /// Present when the run stopped early; `stages` then holds the partial chain.
    pub failure: Option<StageFailure>,
}

impl Construction {
    pub fn succeeded(&self) -> bool {
        self.failure.is_none()
    }

    /// The last graph reached.
    pub fn graph(&self) -> &Graph {
        self.stages.last().map_or(&self.base, |s| &s.lifted)
    }
}

pub fn construct<T: Scalar>(plan: &ConstructionPlan) -> Result<Construction> {
    let base = complete_bipartite(plan.d)?.with_computed_bipartition()?;
    let base_verdict = ramanujan_verdict::<T>(&base, plan.epsilon)?;
    let mut current = base.clone();
    let mut stages = Vec::with_capacity(plan.stages.len());
    let mut failure = None;
    for (index, stage) in plan.stages.iter().enumerate() {
        let report = search::<T>(&current, stage.k, stage.strategy, plan.epsilon, &stage.budget, &plan.thresholds)?;
        let Some(certificate) = report.outcome.certificate().cloned() else {
            failure = Some(StageFailure::Search { index, report: Box::new(report) });
            break;
        };
        let lifted = expand_lift(&current, &certificate.assignment()?)?;
        match ramanujan_verdict::<T>(&lifted, plan.epsilon) {
            Ok(v) if v.verdict.is_pass() => {
                stages.push(StageRecord { index, base: current, report, certificate, lifted: lifted.clone(), lifted_verdict: v });
                current = lifted;
            }
            Ok(v) => {
                failure = Some(StageFailure::Verdict { index, certificate, verdict: Some(v), error: None });
                break;
            }
            Err(e) => {
                failure = Some(StageFailure::Verdict { index, certificate, verdict: None, error: Some(e.to_string()) });
                break;
            }
        }
    }
    Ok(Construction { plan: plan.clone(), base, base_verdict, stages, failure })
}
