mod commands;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qgraph", version, about = "Scattering, walk expansions, reconstruction and walk-based solvers on metric graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct BcArgs {
    /// Boundary-condition family (dirichlet, neumann, standard, haar, positive) or a JSON file
    #[arg(long, default_value = "standard")]
    pub bc: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct EdgeArgs {
    /// Entry external edge e′ (default: the first one)
    #[arg(long)]
    pub from: Option<String>,
    /// Exit external edge e (default: the last one)
    #[arg(long)]
    pub to: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report the standing assumptions of a graph file
    Validate {
        graph: PathBuf,
        /// Coefficient bound for the rational-independence search
        #[arg(long, default_value_t = 12)]
        bound: u32,
    },
    /// S(k) over a k grid as CSV
    Smatrix {
        graph: PathBuf,
        #[command(flatten)]
        bc: BcArgs,
        /// `start:stop:step` or a comma list
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier coefficient matrices Ŝ_n(k) as CSV
    Fourier {
        graph: PathBuf,
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value = "1")]
        k: String,
        /// Comma-separated score n
        #[arg(long)]
        score: String,
        #[arg(long, value_enum, default_value_t = Method::Walks)]
        method: Method,
        /// Quadrature nodes per axis
        #[arg(long, default_value_t = 256)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the walks with a given score
    Walks {
        graph: PathBuf,
        #[command(flatten)]
        edges: EdgeArgs,
        #[arg(long)]
        score: String,
        #[arg(long, default_value_t = 1000)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Length spectrum up to a combinatorial length, as CSV
    Spectrum {
        graph: PathBuf,
        #[command(flatten)]
        edges: EdgeArgs,
        #[arg(long, default_value_t = 6)]
        max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild the interior seen from one external edge and compare
    Reconstruct {
        graph: PathBuf,
        /// External edge carrying the spectrum (default: the first one)
        #[arg(long)]
        ext: Option<String>,
        /// Where to write the reconstructed graph as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// KBP, HPP and TSP I/II/III
    Solve {
        #[arg(value_enum)]
        problem: ProblemArg,
        graph: PathBuf,
        #[command(flatten)]
        edges: EdgeArgs,
        /// Length bound L for tsp3 (rational, e.g. 7/2)
        #[arg(long)]
        max_length: Option<String>,
        /// Answer by exhaustive search instead
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = qgraph::combinatorial::ORACLE_BOUND)]
        oracle_bound: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verification suites
    Check {
        #[arg(value_enum)]
        suite: Suite,
        graph: PathBuf,
        #[command(flatten)]
        bc: BcArgs,
        #[arg(long, default_value = "0.5:5:0.5")]
        k: String,
        /// Residual above which the suite fails
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a graph file: a random graph or a named example
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
}

#[derive(Subcommand, Debug)]
pub enum Generate {
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        internal: usize,
        #[arg(long, default_value_t = 1)]
        external: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw rational lengths p/q instead of symbols
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Named {
        #[arg(value_enum)]
        name: Named,
        /// Number of vertices for `cycle`
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Method {
    Walks,
    Quadrature,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProblemArg {
    Kbp,
    Hpp,
    Tsp1,
    Tsp2,
    Tsp3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    /// Unitarity, S(−k)S(k) = I, gauge, transposition, route agreement
    Identities,
    /// Σ_{|n|≤K} Ŝ_n e^{ik⟨n,a⟩} against the truncated Neumann series
    Series,
    /// Walk sums against periodic quadrature (|I| ≤ 2)
    Quadrature,
    /// identities + series
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Named {
    Path,
    Pendant,
    DoubleEdge,
    Konigsberg,
    Triangle,
    Cycle,
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    /// infeasible or failed verification: exit 1
    Negative(String),
    /// unreadable input: exit 2
    Input(String),
    /// internal invariant violated: exit 3
    Invariant(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Input(_) => 2,
            Failure::Invariant(_) => 3,
        }
    }
}

impl From<qgraph::Error> for Failure {
    fn from(e: qgraph::Error) -> Self {
        use qgraph::Error as E;
        match e {
            E::Invariant(_) | E::Classification(_) | E::NotUnitary(_) | E::NotHermitian(_) => Failure::Invariant(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Negative(m) | Failure::Input(m) | Failure::Invariant(m) => m,
            };
            if !msg.is_empty() {
                eprintln!("qgraph: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
