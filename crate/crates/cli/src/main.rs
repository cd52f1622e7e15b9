use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use krwlab_cli::cache::ResultCache;
use krwlab_cli::commands::{self, exit_code, BarrierArgs, Output, EXIT_CONFIG, EXIT_SKIPPED};
use krwlab_cli::config::ExperimentConfig;
use krwlab_cli::error::CliError;

/// Exact small-scale experiments on KW relations, compositions and
/// prefix-thick sets.
///
/// Exit codes: 0 all checks pass, 1 some check failed, 2 bad input or
/// configuration, 3 a budget ran out before a check could be decided.
#[derive(Parser)]
#[command(name = "krwlab", version)]
struct Cli {
    /// TOML experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cache file; overrides the configuration and KRWLAB_CACHE.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Ignore any configured cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named suite, a group of suites or `all`.
    Suite {
        name: String,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List suite names.
    Suites,
    /// L and D of every n-bit function (a seeded sample for n = 3) by both solvers.
    CcTable {
        #[arg(long)]
        n: usize,
    },
    /// Formula size and depth of one function given as truth-table hex.
    Kw {
        #[arg(long)]
        f: String,
        /// Arity; inferred from the number of hex digits otherwise.
        #[arg(long)]
        arity: Option<usize>,
        /// Print an optimal KW protocol as JSON.
        #[arg(long)]
        protocol: bool,
    },
    /// Winning set of a string set read from a file, one string per line.
    WinningSet {
        #[arg(long)]
        input: PathBuf,
        /// Alphabet size.
        #[arg(long, default_value_t = 2)]
        q: usize,
    },
    /// Cover numbers of graph equality for a graph6 or adjacency-list file.
    GraphEq {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Build the barrier transcript and check its characteristic graph.
    Barrier {
        #[arg(long)]
        m: usize,
        /// `rep`, or comma-separated hex basis vectors.
        #[arg(long, default_value = "rep")]
        code: String,
        #[arg(long)]
        wx: usize,
        #[arg(long)]
        wy: usize,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Outer function as truth-table hex; required unless m = 4.
        #[arg(long)]
        f: Option<String>,
        /// Density parameter for the reported aliveness bullets.
        #[arg(long, default_value_t = 0.64)]
        gamma: f64,
        #[arg(long, default_value_t = 8)]
        kappa: u32,
    },
    /// Run the configured suites and relations and write one JSON report.
    Report {
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute a seeded sample of cached values.
    CacheVerify,
}

fn open_cache(cli: &Cli, cfg: &ExperimentConfig) -> Result<ResultCache, CliError> {
    if cli.no_cache {
        return Ok(ResultCache::in_memory());
    }
    match cli.cache.as_ref().or(cfg.cache.as_ref()) {
        Some(p) => {
            let cache = ResultCache::open(p)?;
            for d in &cache.dropped {
                eprintln!("cache {}: dropped corrupt record, {d}", p.display());
            }
            Ok(cache)
        }
        None => Ok(ResultCache::in_memory()),
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = ExperimentConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Suite { name, out } => commands::suite(name, &cfg, out.as_deref()),
        Command::Suites => {
            Ok(Output { text: krwlab::suites::suite_names().join("\n") + "\n", outcome: commands::Outcome::Ok })
        }
        Command::CcTable { n } => commands::cc_table(*n, &cfg, &mut open_cache(cli, &cfg)?),
        Command::Kw { f, arity, protocol } => {
            commands::kw_command(f, *arity, *protocol, &cfg, &mut open_cache(cli, &cfg)?)
        }
        Command::WinningSet { input, q } => commands::winning_set_command(input, *q),
        Command::GraphEq { graph } => commands::graph_eq_command(graph),
        Command::Barrier { m, code, wx, wy, n, f, gamma, kappa } => {
            let args =
                BarrierArgs { m: *m, code, w_x: *wx, w_y: *wy, n: *n, f: f.as_deref(), gamma: *gamma, kappa: *kappa };
            commands::barrier_command(&args, &cfg)
        }
        Command::Report { out } => commands::report_command(&cfg, &mut open_cache(cli, &cfg)?, out),
        Command::CacheVerify => commands::cache_verify(&cfg, &open_cache(cli, &cfg)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(exit_code(out.outcome))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Core(ref inner) if inner.is_budget() => EXIT_SKIPPED,
                CliError::Core(_) | CliError::Config(_) | CliError::Io { .. } => EXIT_CONFIG,
            })
        }
    }
}
