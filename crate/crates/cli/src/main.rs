use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpdlreg::consistency::TraceGraph;
use cpdlreg::semantics::{bounded_sat, check_model, extract_model};
use cpdlreg::{io, solve, Error, Outcome, Problem, Search, SolveOptions, Strategy, Verdict};
use log::info;

const EXIT_SAT: u8 = 0;
const EXIT_UNSAT: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_LIMIT: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

/// Largest `--oracle-bound` accepted without `--allow-large-oracle`.
const ORACLE_LIMIT: usize = 4;

#[derive(Parser)]
#[command(name = "cpdlreg", version, about = "Satisfiability checker for converse PDL with regular inclusion axioms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a problem file. Exit status: 0 SAT, 1 UNSAT, 2 bad input,
    /// 3 resource limit, 4 internal error.
    Solve(SolveArgs),
    /// Parse a problem file and print it in normal form.
    Print { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Batch,
    Onthefly,
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchArg {
    Dfs,
    Bfs,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value = "onthefly")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "dfs")]
    search: SearchArg,
    /// Write the final tableau as Graphviz DOT.
    #[arg(long, value_name = "PATH")]
    dump_graph: Option<PathBuf>,
    /// Write the trace graph of the final tableau as Graphviz DOT.
    #[arg(long, value_name = "PATH")]
    dump_traces: Option<PathBuf>,
    /// On SAT, write an extracted model.
    #[arg(long, value_name = "PATH")]
    extract_model: Option<PathBuf>,
    /// On SAT, extract a model and verify it with the model checker.
    #[arg(long)]
    check_model: bool,
    /// Also search all models up to this many states and compare.
    #[arg(long, value_name = "N")]
    oracle_bound: Option<usize>,
    /// Allow an oracle bound above 4.
    #[arg(long)]
    allow_large_oracle: bool,
    #[arg(long, env = "CPDLREG_NODE_BUDGET", default_value_t = cpdlreg::tableau::DEFAULT_NODE_BUDGET)]
    node_budget: usize,
    /// Log every rule application.
    #[arg(long)]
    trace: bool,
}

enum Failure {
    Input(String),
    Limit(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::Logic(_) => Failure::Input(e.to_string()),
            Error::ResourceLimit(_) => Failure::Limit(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let trace = matches!(&cli.command, Command::Solve(a) if a.trace);
    let mut logger = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"));
    if trace {
        logger.filter_module("cpdlreg", log::LevelFilter::Trace);
    }
    logger.format_timestamp(None).init();
    let result = match cli.command {
        Command::Solve(args) => run_solve(&args),
        Command::Print { file } => read_problem(&file).map(|p| {
            print!("{}", io::print_problem(&p));
            EXIT_SAT
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Limit(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_LIMIT)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(EXIT_INTERNAL)
        }
    }
}

fn read_problem(path: &PathBuf) -> Result<Problem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let problem = io::parse_problem(&text).map_err(|e| Failure::Input(format!("{}:{e}", path.display())))?;
    for w in &problem.warnings {
        eprintln!("warning: {w}");
    }
    Ok(problem)
}

fn write(path: &PathBuf, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn run_solve(args: &SolveArgs) -> Result<u8, Failure> {
    if let Some(n) = args.oracle_bound {
        if n > ORACLE_LIMIT && !args.allow_large_oracle {
            return Err(Failure::Input(format!(
                "--oracle-bound {n} is above {ORACLE_LIMIT}; pass --allow-large-oracle to force it"
            )));
        }
    }
    let problem = read_problem(&args.file)?;
    let options = SolveOptions {
        strategy: match args.strategy {
            StrategyArg::Batch => Strategy::Batch,
            StrategyArg::Onthefly => Strategy::OnTheFly,
        },
        search: match args.search {
            SearchArg::Dfs => Search::Dfs,
            SearchArg::Bfs => Search::Bfs,
        },
        node_budget: args.node_budget,
        ..Default::default()
    };
    let outcome = solve(&problem, &options)?;
    print_stats(&outcome);
    if let Some(path) = &args.dump_graph {
        write(path, &io::tableau_to_dot(&outcome.tableau))?;
    }
    if let Some(path) = &args.dump_traces {
        let mut g = TraceGraph::build(&outcome.tableau);
        g.recompute(&outcome.tableau, false);
        write(path, &g.to_dot(&outcome.tableau))?;
    }
    if outcome.verdict == Verdict::Sat && (args.extract_model.is_some() || args.check_model) {
        let t = &outcome.tableau;
        let ctx = &t.session().ctx;
        let graph = extract_model(t)?;
        let model = graph.to_kripke(ctx);
        if args.check_model {
            check_model(ctx, &problem.logic, &graph, &problem.goal, &problem.assumptions)?;
            eprintln!("model check: passed ({} worlds)", model.size());
        }
        if let Some(path) = &args.extract_model {
            write(path, &io::write_model(ctx, &model))?;
        }
    }
    if let Some(n) = args.oracle_bound {
        let found = bounded_sat(&problem.ctx, &problem.logic, &problem.goal, &problem.assumptions, n);
        info!("oracle: {}", if found.is_some() { "model found" } else { "no model" });
        if let (Some(m), Verdict::Unsat) = (&found, outcome.verdict) {
            return Err(Failure::Internal(format!("UNSAT, but the oracle found a {}-state model", m.size())));
        }
        eprintln!(
            "oracle (up to {n} states): {}",
            found.map_or("no model".to_string(), |m| format!("{}-state model", m.size()))
        );
    }
    Ok(match outcome.verdict {
        Verdict::Sat => {
            println!("SAT");
            EXIT_SAT
        }
        Verdict::Unsat => {
            println!("UNSAT");
            EXIT_UNSAT
        }
    })
}

fn print_stats(outcome: &Outcome) {
    let s = &outcome.stats;
    eprintln!("nodes created: {}", s.nodes_created);
    eprintln!("states created: {}", s.states_created);
    eprintln!("cache hits: {}", s.cache_hits);
    eprintln!("conv firings: {}", s.conv_applications);
    eprintln!("incomplete states: {}", s.incomplete_states);
    eprintln!("prune iterations: {}", s.prune_iterations);
}
