use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use shiftlift::construct::ConstructionPlan;
use shiftlift::search::{SearchBudget, Strategy};
use shiftlift::spectral::DEFAULT_EPSILON;
use shiftlift_cli::*;

#[derive(Parser)]
#[command(name = "shiftlift", version, about = "Shift k-lifts of bipartite Ramanujan graphs")]
struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Slack added to the Ramanujan bound.
    #[arg(long, global = true, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    /// Assignments a search may examine.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    /// Wall-clock limit for a search, in seconds.
    #[arg(long, global = true)]
    time_limit: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Graph output format: json or edgelist.
    #[arg(long, global = true, default_value = "json")]
    format: GraphFormat,
    /// Write the result here instead of stdout (construct: the run directory).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a base graph: complete-bipartite, cycle, path or star.
    Generate { family: String, size: usize },
    /// Ramanujan verdict of a connected regular bipartite graph.
    Verify { graph: PathBuf },
    /// Expand a shift lift.
    Lift { graph: PathBuf, shifts: PathBuf },
    /// Certify the new eigenvalues of a lift.
    Certify { graph: PathBuf, shifts: PathBuf },
    Search {
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        /// exhaustive, random, greedy, two-step or auto.
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
    },
    /// Compare the averaged characteristic polynomial with the matching polynomial.
    Oracle {
        graph: PathBuf,
        #[arg(long, default_value = "k3")]
        mode: String,
        /// Order-2 shifts file for the k4 mode; all zeros when omitted.
        #[arg(long)]
        b: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Real-rootedness and common interlacing at one node of the prefix tree.
    Interlace {
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        b: Option<PathBuf>,
        /// Comma-separated fixed shifts.
        #[arg(long, default_value = "")]
        prefix: String,
        #[arg(long, default_value_t = 21)]
        samples: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Iterated lifting from K_{d,d}.
    Construct {
        #[arg(long)]
        d: usize,
        /// Comma-separated lift orders.
        #[arg(long)]
        schedule: String,
        #[arg(long, default_value = "auto")]
        strategy: Strategy,
    },
    /// Re-certify every stage stored in a construct run directory.
    Replay { dir: PathBuf },
}

fn mode_k(mode: &str) -> anyhow::Result<u32> {
    match mode {
        "k3" => Ok(3),
        "k4" => Ok(4),
        other => anyhow::bail!("unknown mode {other:?}, expected k3 or k4"),
    }
}

fn emit<T: serde::Serialize>(cli: &Cli, status: Status, value: &T) -> anyhow::Result<Status> {
    let file = cli.out_dir.as_ref().map(|d| d.join("result.json"));
    if let Some(d) = &cli.out_dir {
        std::fs::create_dir_all(d)?;
    }
    write_or_print(file.as_ref(), &to_json(value)?)?;
    Ok(status)
}

fn emit_graph(cli: &Cli, g: &shiftlift::Graph) -> anyhow::Result<Status> {
    let text = cli.format.render(g);
    match &cli.out_dir {
        Some(d) => {
            std::fs::create_dir_all(d)?;
            let file = d.join(format!("graph-{}.{}", g.content_hash(), cli.format.extension()));
            write_or_print(Some(&file), &text)?;
        }
        None => write_or_print(None, &text)?,
    }
    Ok(Status::Pass)
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    let budget = SearchBudget::new(Some(cli.budget), cli.time_limit, cli.seed)?;
    match &cli.command {
        Command::Generate { family, size } => emit_graph(cli, &cmd_generate(family, *size)?),
        Command::Verify { graph } => {
            let (status, v) = cmd_verify(&read_graph(graph)?, cli.epsilon)?;
            emit(cli, status, &v)
        }
        Command::Lift { graph, shifts } => emit_graph(cli, &cmd_lift(&read_graph(graph)?, &read_shifts(shifts)?)?),
        Command::Certify { graph, shifts } => {
            let (status, c) = cmd_certify(&read_graph(graph)?, &read_shifts(shifts)?, cli.epsilon)?;
            emit(cli, status, &c)
        }
        Command::Search { graph, k, strategy } => {
            let g = read_graph(graph)?;
            let (status, report) = with_threads(cli.threads, || cmd_search(&g, *k, *strategy, cli.epsilon, &budget))??;
            emit(cli, status, &report)
        }
        Command::Oracle { graph, mode, b, tol } => {
            let g = read_graph(graph)?;
            let b = b.as_deref().map(read_shifts).transpose()?;
            let family = family_for(&g, mode_k(mode)?, b)?;
            let (status, cmp) = with_threads(cli.threads, || cmd_oracle(&g, &family, *tol))??;
            emit(cli, status, &cmp)
        }
        Command::Interlace { graph, k, b, prefix, samples, tol } => {
            let g = read_graph(graph)?;
            let b = b.as_deref().map(read_shifts).transpose()?;
            let family = family_for(&g, *k, b)?;
            let prefix = parse_list(prefix)?;
            let (status, report) =
                with_threads(cli.threads, || cmd_interlace(&g, &family, prefix, *samples, *tol))??;
            emit(cli, status, &report)
        }
        Command::Construct { d, schedule, strategy } => {
            let plan = ConstructionPlan::uniform(*d, &parse_list(schedule)?, *strategy, budget, cli.epsilon)?;
            let out = cli.out_dir.as_deref();
            let run = with_threads(cli.threads, || cmd_construct(&plan, out, cli.format))??;
            match &run.chain {
                Some(chain) => print!("{}", to_json(chain)?),
                None => print!("{}", to_json(&run.construction)?),
            }
            Ok(run.status())
        }
        Command::Replay { dir } => {
            let replay = replay_chain(dir).with_context(|| format!("replaying {}", dir.display()))?;
            print!("{}", to_json(&replay)?);
            Ok(if replay.ok { Status::Pass } else { Status::Fail })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
