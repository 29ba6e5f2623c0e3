//! Command implementations behind the `shiftlift` binary. Each `cmd_*` returns a
//! [`Status`] alongside its JSON-serializable payload; the binary maps the status
//! to an exit code.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, ensure, Context};
use serde::{Deserialize, Serialize};
use shiftlift::construct::{construct, Construction, ConstructionPlan, StageFailure};
use shiftlift::graph::{complete_bipartite, cycle, parse_graph, path, star};
use shiftlift::lift::{expand_lift, ShiftAssignment};
use shiftlift::search::{
    branch_interlacing_report, compare_with_matching, search, AutoThresholds, BranchReport, Family,
    OracleComparison, PrefixNode, SearchBudget, SearchOutcome, SearchReport, Strategy, DEFAULT_ENUMERATION_LIMIT,
};
use shiftlift::spectral::{certify_lift, ramanujan_verdict, BaseVerdict, Certificate};
use shiftlift::{content_digest, Graph};

/// Largest drift allowed between a recorded and a replayed `lambda_new_max`.
pub const REPLAY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Exhausted,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Exhausted => 3,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn of_outcome(outcome: &SearchOutcome) -> Self {
        match outcome {
            SearchOutcome::Found { .. } => Status::Pass,
            SearchOutcome::NonePass { .. } => Status::Fail,
            SearchOutcome::Exhausted { .. } => Status::Exhausted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    Json,
    Edgelist,
}

impl GraphFormat {
    pub fn render(self, g: &Graph) -> String {
        match self {
            GraphFormat::Json => g.to_json() + "\n",
            GraphFormat::Edgelist => g.to_edgelist(),
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::Json => "json",
            GraphFormat::Edgelist => "edgelist",
        }
    }
}

impl std::str::FromStr for GraphFormat {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        match s {
            "json" => Ok(GraphFormat::Json),
            "edgelist" => Ok(GraphFormat::Edgelist),
            other => bail!("unknown format {other:?}, expected json or edgelist"),
        }
    }
}

pub fn read_graph(path: &Path) -> anyhow::Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_graph(&text).with_context(|| format!("parsing graph {}", path.display()))
}

pub fn read_shifts(path: &Path) -> anyhow::Result<ShiftAssignment> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ShiftAssignment::from_json(&text).with_context(|| format!("parsing shifts {}", path.display()))
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> anyhow::Result<R> {
    match threads {
        None => Ok(f()),
        Some(0) => bail!("--threads must be positive"),
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f)),
    }
}

pub fn cmd_generate(family: &str, size: usize) -> anyhow::Result<Graph> {
    let g = match family {
        "complete-bipartite" | "kdd" => complete_bipartite(size)?,
        "cycle" => cycle(size)?,
        "path" => path(size)?,
        "star" => star(size)?,
        other => bail!("unknown family {other:?}"),
    };
    Ok(g.with_computed_bipartition()?)
}

pub fn cmd_verify(g: &Graph, epsilon: f64) -> anyhow::Result<(Status, BaseVerdict)> {
    let v = ramanujan_verdict::<f64>(g, epsilon)?;
    Ok((Status::from_bool(v.verdict.is_pass()), v))
}

pub fn cmd_lift(g: &Graph, s: &ShiftAssignment) -> anyhow::Result<Graph> {
    Ok(expand_lift(g, s)?)
}

pub fn cmd_certify(g: &Graph, s: &ShiftAssignment, epsilon: f64) -> anyhow::Result<(Status, Certificate)> {
    let c = certify_lift::<f64>(g, s, epsilon)?;
    Ok((Status::from_bool(c.passes()), c))
}

pub fn cmd_search(
    g: &Graph,
    k: u32,
    strategy: Strategy,
    epsilon: f64,
    budget: &SearchBudget,
) -> anyhow::Result<(Status, SearchReport)> {
    let report = search::<f64>(g, k, strategy, epsilon, budget, &AutoThresholds::default())?;
    Ok((Status::of_outcome(&report.outcome), report))
}

/// `k3`, or `k4` over the signing `b` (all zeros when absent).
pub fn family_for(g: &Graph, k: u32, b: Option<ShiftAssignment>) -> anyhow::Result<Family> {
    match k {
        3 => {
            ensure!(b.is_none(), "a background signing only applies to k = 4");
            Ok(Family::K3)
        }
        4 => {
            let b = match b {
                Some(b) => b,
                None => ShiftAssignment::zeros(2, g.m())?,
            };
            Ok(Family::k4(b)?)
        }
        other => bail!("expected-polynomial families exist for k = 3 and k = 4, not {other}"),
    }
}

/// Passes when the relative residual is at most `tol`.
pub fn cmd_oracle(g: &Graph, family: &Family, tol: f64) -> anyhow::Result<(Status, OracleComparison)> {
    let cmp = compare_with_matching::<f64>(g, family, DEFAULT_ENUMERATION_LIMIT)?;
    Ok((Status::from_bool(cmp.relative_residual <= tol), cmp))
}

pub fn cmd_interlace(
    g: &Graph,
    family: &Family,
    prefix: Vec<u32>,
    samples: usize,
    tol: f64,
) -> anyhow::Result<(Status, BranchReport)> {
    ensure!(prefix.len() <= g.m(), "prefix has {} values but the graph has {} edges", prefix.len(), g.m());
    let node = PrefixNode::new(prefix, family.clone())?;
    let report = branch_interlacing_report::<f64>(g, &node, samples, tol, DEFAULT_ENUMERATION_LIMIT)?;
    Ok((Status::from_bool(report.all_affirmative()), report))
}

/// File names inside a run directory, relative to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStage {
    pub index: usize,
    pub k: u32,
    pub strategy: Strategy,
    pub base: String,
    pub shifts: String,
    pub certificate: String,
    pub report: String,
    pub lifted: String,
    pub lambda_new_max: f64,
    pub epsilon: f64,
}

/// `chain.json`: the provenance of one construction run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub d: usize,
    pub schedule: Vec<u32>,
    pub epsilon: f64,
    pub base: String,
    pub stages: Vec<ChainStage>,
    #[serde(rename = "final")]
    pub final_graph: String,
    pub complete: bool,
    pub failure: Option<String>,
}

pub const CHAIN_FILE: &str = "chain.json";

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructRun {
    pub construction: Construction,
    pub chain: Option<Chain>,
}

impl ConstructRun {
    pub fn status(&self) -> Status {
        match &self.construction.failure {
            None => Status::Pass,
            Some(StageFailure::Search { report, .. }) => Status::of_outcome(&report.outcome),
            Some(StageFailure::Verdict { .. }) => Status::Fail,
        }
    }
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

struct RunDir<'a> {
    dir: &'a Path,
    format: GraphFormat,
}

impl RunDir<'_> {
    fn put(&self, prefix: &str, ext: &str, text: &str, digest: String) -> anyhow::Result<String> {
        let name = format!("{prefix}-{digest}.{ext}");
        fs::write(self.dir.join(&name), text).with_context(|| format!("writing {name}"))?;
        Ok(name)
    }

    fn graph(&self, g: &Graph) -> anyhow::Result<String> {
        self.put("graph", self.format.extension(), &self.format.render(g), g.content_hash())
    }

    fn value<T: Serialize>(&self, prefix: &str, value: &T) -> anyhow::Result<String> {
        let text = json(value)?;
        let digest = content_digest(text.as_bytes());
        self.put(prefix, "json", &text, digest)
    }
}

/// Runs the plan and, given a directory, stores every graph, assignment,
/// certificate and search report under content-hash names plus a `chain.json`.
pub fn cmd_construct(plan: &ConstructionPlan, out_dir: Option<&Path>, format: GraphFormat) -> anyhow::Result<ConstructRun> {
    let construction = construct::<f64>(plan)?;
    let Some(dir) = out_dir else {
        return Ok(ConstructRun { construction, chain: None });
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let run = RunDir { dir, format };
    let base = run.graph(&construction.base)?;
    let mut stages = Vec::new();
    for (record, stage) in construction.stages.iter().zip(&plan.stages) {
        let assignment = record.certificate.assignment()?;
        stages.push(ChainStage {
            index: record.index,
            k: stage.k,
            strategy: record.report.strategy,
            base: run.graph(&record.base)?,
            shifts: run.value("shifts", &assignment)?,
            certificate: run.value("certificate", &record.certificate)?,
            report: run.value("report", &record.report)?,
            lifted: run.graph(&record.lifted)?,
            lambda_new_max: record.certificate.lambda_new_max,
            epsilon: record.certificate.epsilon,
        });
    }
    let failure = construction.failure.as_ref().map(|f| run.value("failure", f)).transpose()?;
    let chain = Chain {
        d: plan.d,
        schedule: plan.schedule(),
        epsilon: plan.epsilon,
        base,
        final_graph: run.graph(construction.graph())?,
        stages,
        complete: construction.succeeded(),
        failure,
    };
    fs::write(dir.join(CHAIN_FILE), json(&chain)?)?;
    Ok(ConstructRun { construction, chain: Some(chain) })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayStage {
    pub index: usize,
    pub recorded: f64,
    pub replayed: f64,
    pub lift_matches: bool,
    pub lifted_verdict: BaseVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    pub stages: Vec<ReplayStage>,
    pub ok: bool,
}

fn hash_from_name(name: &str) -> Option<&str> {
    name.strip_prefix("graph-")?.split('.').next()
}

fn load_graph(dir: &Path, name: &str) -> anyhow::Result<Graph> {
    let g = read_graph(&dir.join(name))?;
    let expected = hash_from_name(name).ok_or_else(|| anyhow!("graph file name {name:?} carries no hash"))?;
    ensure!(g.content_hash() == expected, "{name} does not match its content hash");
    Ok(g)
}

/// Re-certifies every stored stage of a run directory from its files alone.
pub fn replay_chain(dir: &Path) -> anyhow::Result<Replay> {
    let text = fs::read_to_string(dir.join(CHAIN_FILE)).with_context(|| format!("reading {CHAIN_FILE}"))?;
    let chain: Chain = serde_json::from_str(&text)?;
    let mut previous = load_graph(dir, &chain.base)?;
    let mut stages = Vec::new();
    let mut ok = chain.complete;
    for stage in &chain.stages {
        let base = load_graph(dir, &stage.base)?;
        ensure!(base == previous, "stage {} does not start from the previous output", stage.index);
        let s = read_shifts(&dir.join(&stage.shifts))?;
        let certificate = certify_lift::<f64>(&base, &s, stage.epsilon)?;
        let lifted = load_graph(dir, &stage.lifted)?;
        let expanded = expand_lift(&base, &s)?;
        let lift_matches = expanded.content_hash() == lifted.content_hash();
        let lifted_verdict = ramanujan_verdict::<f64>(&lifted, stage.epsilon)?;
        ok &= lift_matches
            && certificate.passes()
            && lifted_verdict.verdict.is_pass()
            && (certificate.lambda_new_max - stage.lambda_new_max).abs() <= REPLAY_TOL;
        stages.push(ReplayStage {
            index: stage.index,
            recorded: stage.lambda_new_max,
            replayed: certificate.lambda_new_max,
            lift_matches,
            lifted_verdict,
        });
        previous = lifted;
    }
    ok &= previous.content_hash() == hash_from_name(&chain.final_graph).unwrap_or_default();
    Ok(Replay { stages, ok })
}

pub fn parse_list(text: &str) -> anyhow::Result<Vec<u32>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| t.trim().parse::<u32>().with_context(|| format!("bad list entry {t:?}"))).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    json(value)
}

pub fn write_or_print(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
