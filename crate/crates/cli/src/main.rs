mod commands;
mod io;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gassoc::{Error, Exec, SearchLimits};

#[derive(Parser, Debug)]
#[command(name = "gassoc", version, about = "Elimination trees and graph associahedra")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// Worker threads; 1 runs every loop sequentially.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Maximum number of trees a search may hold.
    #[arg(long, global = true, default_value_t = 10_000_000, value_parser = positive)]
    node_budget: usize,
    /// Rough byte limit for search state.
    #[arg(long, global = true, default_value_t = 8 << 30, value_parser = positive)]
    memory_budget: usize,
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// Settings shared by every subcommand.
pub struct RunConfig {
    pub limits: SearchLimits,
    pub exec: Exec,
    pub seed: u64,
    pub json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance between two elimination trees.
    Dist {
        graph: PathBuf,
        t1: PathBuf,
        t2: PathBuf,
        /// Vertex weights; switches to weighted distance.
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Also print a shortest sequence.
        #[arg(long)]
        path: bool,
    },
    /// Exact diameter of the flip graph.
    Diameter {
        graph: PathBuf,
        /// BFS from every tree instead of the pruned sweep.
        #[arg(long)]
        exact_allpairs: bool,
        /// Print the flip graph in DOT format instead.
        #[arg(long)]
        dot: bool,
    },
    /// Count (or export) every elimination tree.
    Enumerate {
        graph: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Build a reduction instance bundle.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Rank of a vertex subset.
    Rank { graph: PathBuf, labels: Vec<String> },
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Project a tree onto a connected vertex subset.
    Project {
        graph: PathBuf,
        tree: PathBuf,
        #[arg(required = true)]
        labels: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
enum ReduceCmd {
    /// Weighted instance from a balanced minimum s-t cut instance.
    Cut {
        graph: PathBuf,
        #[arg(long)]
        s: String,
        #[arg(long)]
        t: String,
        /// Gadget size parameter.
        #[arg(long = "N", value_name = "N")]
        big_n: usize,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated side of a balanced minimum cut; writes the
        /// constructed sequence to `sufficiency.moves`.
        #[arg(long, value_delimiter = ',')]
        sufficiency: Option<Vec<String>>,
    },
    /// Unweighted instance by clique blow-up.
    Blowup {
        graph: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        ini: PathBuf,
        #[arg(long)]
        tar: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Realization,
    Projection,
    BlowupEquiv,
    Sequence,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    suite: Suite,
    /// Check this graph only.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Check every connected graph up to this many vertices.
    #[arg(long, default_value_t = 5)]
    max_n: usize,
    /// Upper bound on the total weight sampled by `blowup-equiv`.
    #[arg(long, default_value_t = 7)]
    max_weight: usize,
    /// Weight assignments sampled per graph by `blowup-equiv`.
    #[arg(long, default_value_t = 2)]
    samples: usize,
    /// Instance bundle for `sequence`; supplies the graph, start tree,
    /// weights, target and `sufficiency.moves` unless overridden.
    #[arg(long)]
    bundle: Option<PathBuf>,
    #[arg(long)]
    start: Option<PathBuf>,
    #[arg(long)]
    moves: Option<PathBuf>,
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    target: Option<PathBuf>,
    /// Weight the sequence must stay strictly below.
    #[arg(long)]
    below: Option<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Io(_) => 2,
        Error::InvalidArgument(_) | Error::IllegalMove { .. } => 3,
        Error::ResourceLimit(_) => 4,
    }
}

fn configure(run: &RunArgs) -> Result<RunConfig, Error> {
    let threads = run.threads.map(usize::from);
    #[cfg(feature = "parallel")]
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let exec = if threads == Some(1) || !cfg!(feature = "parallel") {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    Ok(RunConfig {
        limits: SearchLimits {
            node_budget: run.node_budget,
            memory_budget: run.memory_budget,
        },
        exec,
        seed: run.seed,
        json: run.json,
    })
}

fn run(cli: Cli) -> Result<bool, Error> {
    let cfg = configure(&cli.run)?;
    match cli.command {
        Command::Dist {
            graph,
            t1,
            t2,
            weights,
            path,
        } => commands::dist(&cfg, &graph, &t1, &t2, weights.as_deref(), path),
        Command::Diameter {
            graph,
            exact_allpairs,
            dot,
        } => commands::diameter(&cfg, &graph, exact_allpairs, dot),
        Command::Enumerate { graph, dot } => commands::enumerate(&cfg, &graph, dot),
        Command::Reduce(ReduceCmd::Cut {
            graph,
            s,
            t,
            big_n,
            out,
            sufficiency,
        }) => commands::reduce_cut(&cfg, &graph, &s, &t, big_n, &out, sufficiency.as_deref()),
        Command::Reduce(ReduceCmd::Blowup {
            graph,
            weights,
            ini,
            tar,
            out,
        }) => commands::reduce_blowup(&cfg, &graph, &weights, &ini, &tar, &out),
        Command::Rank { graph, labels } => commands::rank(&cfg, &graph, &labels),
        Command::Project {
            graph,
            tree,
            labels,
        } => commands::project(&cfg, &graph, &tree, &labels),
        Command::Verify(args) => return verify::run(&cfg, &args),
    }?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("gassoc: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_kinds_map_to_exit_codes() {
        assert_eq!(exit_code(&Error::Parse { line: 1, msg: String::new() }), 2);
        assert_eq!(exit_code(&Error::Io(String::new())), 2);
        assert_eq!(exit_code(&Error::InvalidArgument(String::new())), 3);
        let illegal = Error::IllegalMove {
            parent: "a".into(),
            child: "b".into(),
        };
        assert_eq!(exit_code(&illegal), 3);
        assert_eq!(exit_code(&Error::ResourceLimit(String::new())), 4);
    }

    #[test]
    fn zero_budgets_are_rejected() {
        assert!(positive("0").is_err());
        assert_eq!(positive("12"), Ok(12));
        assert!(Cli::try_parse_from(["gassoc", "--node-budget", "0", "rank", "g"]).is_err());
        assert!(Cli::try_parse_from(["gassoc", "--threads", "0", "rank", "g"]).is_err());
    }
}
