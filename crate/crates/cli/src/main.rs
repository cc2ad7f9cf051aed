use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use semnet::graph::FuseRule;
use semnet_cli::commands::{sibling_freq, ListingKind};
use semnet_cli::{cmd_affinity, cmd_build, cmd_fuse, cmd_scores, cmd_semaffinity, AffinityChoice, RunConfig};

/// Semantic-value analysis of co-occurrence networks built from tagged text.
#[derive(Parser, Debug)]
#[command(name = "semnet", version)]
struct Cli {
    /// Co-occurrence window, in tokens of running text
    #[arg(long, global = true, default_value_t = 10)]
    window: usize,
    /// Number of most frequent terms kept for analysis
    #[arg(long, global = true, default_value_t = 300)]
    top: usize,
    /// Weight of best-friend affinity in the mixed affinity
    #[arg(long, global = true, default_value_t = 0.9)]
    alpha: f64,
    /// Affinity used for the extrinsic value and pipe routing: bf, bcf, mach or mix
    #[arg(long, global = true, default_value_t = AffinityChoice::Mixed)]
    affinity: AffinityChoice,
    /// Capacity and liquid below this count as exhausted
    #[arg(long, global = true, default_value_t = 1e-9)]
    epsilon: f64,
    /// Directory for output files
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Accepted for reproducible scripts; every command is deterministic
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Eigenvector convergence tolerance
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Eigenvector iteration limit
    #[arg(long, global = true, default_value_t = 1000)]
    max_iter: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build `<book>.edges.tsv` and `<book>.freq.csv` from each token file
    Build {
        #[arg(required = true)]
        tokens: Vec<PathBuf>,
        /// Add edge weights across documents instead of taking the maximum
        #[arg(long)]
        sum: bool,
    },
    /// Fuse several book networks into `<name>.edges.tsv` and `<name>.freq.csv`
    Fuse {
        #[arg(required = true)]
        edges: Vec<PathBuf>,
        /// Frequency tables, one per edge list (default: the sibling `.freq.csv`)
        #[arg(long = "freq")]
        freqs: Vec<PathBuf>,
        #[arg(long, default_value = "fused")]
        name: String,
    },
    /// Write `<stem>.scores.csv` with I, E, S and centralities
    Scores {
        edges: PathBuf,
        /// Frequency table (default: the sibling `.freq.csv`)
        #[arg(long)]
        freq: Option<PathBuf>,
    },
    /// Write the pairwise semantic affinity matrix `<stem>.semaffinity.csv`
    Semaffinity {
        edges: PathBuf,
        #[arg(long)]
        freq: Option<PathBuf>,
        /// Terms to compare (default: the ten most frequent)
        #[arg(long, value_delimiter = ',')]
        labels: Vec<String>,
    },
    /// List the strongest affinities of one term
    Affinity {
        edges: PathBuf,
        node: String,
        #[arg(long)]
        freq: Option<PathBuf>,
        /// Comma-separated kinds: bf, bcf, mach, mix, sem
        #[arg(long, value_delimiter = ',', default_value = "bf,bcf,mach,mix,sem")]
        kinds: Vec<ListingKind>,
        #[arg(short, default_value_t = 10)]
        k: usize,
    },
}

fn run(cli: Cli) -> Result<()> {
    let config = RunConfig {
        window: cli.window,
        top: cli.top,
        alpha: cli.alpha,
        affinity: cli.affinity,
        tol: cli.tol,
        max_iter: cli.max_iter,
        epsilon: cli.epsilon,
        out_dir: cli.out_dir,
    };
    config.validate()?;
    let freq_for = |edges: &PathBuf, freq: Option<PathBuf>| freq.unwrap_or_else(|| sibling_freq(edges));
    match cli.command {
        Command::Build { tokens, sum } => {
            let rule = if sum { FuseRule::Sum } else { FuseRule::Max };
            for p in cmd_build(&config, &tokens, rule)? {
                println!("{}", p.display());
            }
        }
        Command::Fuse { edges, freqs, name } => {
            for p in cmd_fuse(&config, &edges, &freqs, &name)? {
                println!("{}", p.display());
            }
        }
        Command::Scores { edges, freq } => {
            let freq = freq_for(&edges, freq);
            println!("{}", cmd_scores(&config, &edges, &freq)?.display());
        }
        Command::Semaffinity { edges, freq, labels } => {
            let freq = freq_for(&edges, freq);
            println!("{}", cmd_semaffinity(&config, &edges, &freq, &labels)?.display());
        }
        Command::Affinity {
            edges,
            node,
            freq,
            kinds,
            k,
        } => {
            let freq = freq_for(&edges, freq);
            let path = cmd_affinity(&config, &edges, &freq, &node, &kinds, k)?;
            print!("{}", std::fs::read_to_string(&path)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
