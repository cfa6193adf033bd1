mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "stretchwidth", version, about = "Stretch-width of ordered graphs and symmetric 0/1 matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Input file; repeat to run a batch. `-` reads standard input.
    #[arg(long, global = true)]
    pub input: Vec<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized commands; required by them.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for batches.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Edge budget below which the clean-biclique search is exhaustive.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Vertex limit for the exact solvers.
    #[arg(long = "limit-n", global = true)]
    pub limit_n: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emit {
    Graph,
    Matrix,
    Witness,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Random graph of bounded maximum degree.
    Bounded,
    /// Bounded degree with a target edge count.
    Sparse,
    /// Erdos-Renyi with edge probability `--p`.
    Gnp,
    /// Random cograph with a twin-merge sequence.
    Cograph,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate instances.
    #[command(subcommand)]
    Gen(Gen),
    /// Stretch-width: exact, approximate, verification.
    #[command(subcommand)]
    Stw(Stw),
    /// Overlap graphs, rainbows and clean bicliques.
    #[command(subcommand)]
    Overlap(Overlap),
    /// Symmetric divisions of matrices.
    #[command(subcommand)]
    Division(Division),
    /// Separators and tree decompositions.
    #[command(subcommand)]
    Separator(Separator),
    /// Maximum independent set.
    #[command(subcommand)]
    Mis(Mis),
}

#[derive(Subcommand, Debug)]
pub enum Gen {
    Hk {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
    },
    HkBad {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
    },
    A3 {
        #[arg(long, default_value_t = 3)]
        b: usize,
        #[arg(long)]
        h: usize,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
    },
    Grid {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
    },
    FlattenGrid {
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Model::Bounded)]
        model: Model,
        /// Maximum degree.
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// Target edge count for the sparse model.
        #[arg(long)]
        m: Option<usize>,
        /// Edge probability for the gnp model.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
    },
    /// Flatten every edge of the input once, in edge order. With `--edge u v`, subdivide
    /// that single edge keeping the overlap graph; with `--pipeline`, also pad the stems.
    Subdivide {
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        edge: Option<Vec<usize>>,
        #[arg(long, conflicts_with = "edge")]
        pipeline: bool,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
    },
    /// Flatten one edge of the input.
    Flatten {
        #[arg(long, num_args = 2, value_names = ["U", "V"], required = true)]
        edge: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Emit::Graph)]
        emit: Emit,
    },
}

#[derive(Subcommand, Debug)]
pub enum Stw {
    /// Exact stretch-width over all vertex orders.
    Exact {
        /// Write the optimal sequence (for the reordered graph).
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Write the graph with an `order` line realizing the optimum.
        #[arg(long)]
        reordered: Option<PathBuf>,
    },
    /// Exact stretch-width in the given order.
    FixedOrder {
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Refuse when every sequence has stretch above this value.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Greedy diagonal approximation on a matrix (a graph input uses its adjacency matrix).
    Approx {
        #[arg(long)]
        k: usize,
        /// On success, write the partition sequence.
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// On success, write the division chain.
        #[arg(long)]
        chain: Option<PathBuf>,
        /// On refusal, write the wide division.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Report the stretch of a sequence on a graph or matrix.
    Verify {
        #[arg(long)]
        sequence: PathBuf,
        /// Fail when the stretch exceeds this value.
        #[arg(long)]
        max: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Overlap {
    Build,
    Rainbow {
        /// Vertex to look over; all vertices when omitted.
        #[arg(long)]
        v: Option<usize>,
    },
    CleanBiclique {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Certify that the overlap graph has no K_{2s,2s}.
    KttCheck {
        #[arg(long)]
        s: usize,
    },
    /// Check a clean biclique certificate.
    Verify {
        #[arg(long)]
        biclique: PathBuf,
        #[arg(long)]
        s: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Division {
    /// Which blocks of each division are k-wide. Fails unless all of them are.
    Wide {
        #[arg(long)]
        k: usize,
        #[arg(long, conflicts_with = "bounds")]
        divisions: Option<PathBuf>,
        /// Block boundaries `0,...,n`.
        #[arg(long, value_delimiter = ',')]
        bounds: Option<Vec<usize>>,
    },
    /// Greedy chain of q-diagonal divisions; q defaults to 2(9k+1).
    DiagonalSeq {
        #[arg(long, required_unless_present = "k")]
        q: Option<usize>,
        #[arg(long, conflicts_with = "q")]
        k: Option<usize>,
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// When stuck, write the pairwise-merged division.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Partition sequence from a chain of q-diagonal divisions.
    ToSequence {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        divisions: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check that a chain is complete and every division is q-diagonal.
    Verify {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        divisions: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum Separator {
    /// Balanced separation; t defaults to 2s for the smallest s with no clean K_{s,s}.
    Balanced {
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    LeftRight {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    Treedecomp {
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check a separation, left-right separator or tree decomposition.
    Verify {
        #[arg(long, group = "cert")]
        separation: Option<PathBuf>,
        #[arg(long, group = "cert")]
        leftright: Option<PathBuf>,
        #[arg(long, group = "cert")]
        treedecomp: Option<PathBuf>,
        /// Balance factor `num/den` for separations.
        #[arg(long, default_value = "1/12")]
        factor: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum Mis {
    Exact {
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    Branch {
        /// Degree threshold; defaults to ceil(n^(1/5)).
        #[arg(long)]
        threshold: Option<usize>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    Dp {
        /// Tree decomposition to use; a min-degree one otherwise.
        #[arg(long)]
        td: Option<PathBuf>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check an independent set.
    Verify {
        #[arg(long)]
        set: PathBuf,
        /// Fail when the set is smaller.
        #[arg(long)]
        size: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (code, out) = commands::run(&cli);
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, &out).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(out.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
