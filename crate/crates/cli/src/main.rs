//! `butterfly`: command line front end for butterfly networks, zero forcing,
//! exact ranks and row-dependence certificates.

mod commands;
mod limits;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use butterfly_core::{FieldTag, Ordering};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Emitter;

#[derive(Parser, Debug)]
#[command(name = "butterfly", version, about = "Zero forcing, minimum rank and power domination of butterfly networks")]
pub struct Cli {
    /// Human readable tables instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Worker threads for rank, certificate and search stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write BF(r) as an edge list, DOT graph or adjacency matrix.
    Gen(GenArgs),
    /// Zero forcing closure, the canonical forcing set, exact Z.
    #[command(subcommand)]
    Zf(ZfCommand),
    /// Exact adjacency rank over Q or GF(p).
    Rank(RankArgs),
    /// Row-dependence certificates.
    #[command(subcommand)]
    Cert(CertCommand),
    /// Power domination bound and exact search.
    #[command(subcommand)]
    Pd(PdCommand),
    /// Check n - Z = mr = rank for a range of r.
    #[command(alias = "verify-theorem")]
    Verify(VerifyArgs),
    /// Time the main stages for one r.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrderArg {
    Layer,
    Recursive,
}

impl From<OrderArg> for Ordering {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Layer => Ordering::Layer,
            OrderArg::Recursive => Ordering::Recursive,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GenFormat {
    Edgelist,
    Dot,
    Matrix,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(short)]
    pub r: u32,
    #[arg(long, value_enum, default_value = "layer")]
    pub order: OrderArg,
    #[arg(long, value_enum, default_value = "edgelist")]
    pub format: GenFormat,
    /// Write to a file instead of stdout.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum ZfCommand {
    /// Run simultaneous forcing rounds from a vertex set.
    Closure {
        /// Edge list: header `n m`, then one `u v` pair per line.
        #[arg(long)]
        graph: PathBuf,
        /// Vertex ids separated by whitespace or commas.
        #[arg(long)]
        set: PathBuf,
        /// Write every round as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Build the canonical forcing set of BF(r) and check it.
    Check {
        #[arg(short)]
        r: u32,
        #[arg(long, value_enum, default_value = "layer")]
        order: OrderArg,
    },
    /// Exact zero forcing number by exhaustive search.
    Min {
        #[arg(long)]
        graph: PathBuf,
        /// Wall clock limit in seconds.
        #[arg(long)]
        budget: Option<f64>,
    },
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["graph", "r"]))]
pub struct RankArgs {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Use BF(r) instead of a graph file.
    #[arg(short)]
    pub r: Option<u32>,
    /// `q`, `gf2`, `gf3` or any `gfP` with P prime.
    #[arg(long, default_value = "gf2")]
    pub field: FieldTag,
}

#[derive(Subcommand, Debug)]
pub enum CertCommand {
    /// Build the certificate book for r from the books for r - 1 and r - 2.
    Build {
        #[arg(short)]
        r: u32,
        /// Check every identity against A_r with exact integer arithmetic.
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Show the certificate for one row of S^(r), 1-based recursive numbering.
    Show {
        #[arg(short)]
        r: u32,
        #[arg(long)]
        target: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum PdCommand {
    /// ceil(Z(BF(r)) / max degree).
    Bound {
        #[arg(short)]
        r: u32,
    },
    /// Minimum power dominating set and power propagation time.
    Min {
        #[arg(long)]
        graph: PathBuf,
        /// Wall clock limit in seconds.
        #[arg(long)]
        budget: Option<f64>,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// A single r, a range `a..b` / `a..=b`, or a comma list.
    #[arg(short, value_parser = commands::parse_r_spec)]
    pub r: commands::RSpec,
    /// Comma separated fields.
    #[arg(long, value_delimiter = ',', default_value = "gf2")]
    pub fields: Vec<FieldTag>,
    /// Skip building and checking certificate books.
    #[arg(long)]
    pub no_certs: bool,
    /// Skip the exhaustive Z search on small graphs.
    #[arg(long)]
    pub no_brute_force: bool,
    /// Highest r for rational ranks.
    #[arg(long, default_value_t = 8)]
    pub max_r_rational: u32,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(short, default_value_t = 8)]
    pub r: u32,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let out = Emitter::new(cli.pretty);
    match commands::run(cli.command, &out) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e) as u8)
        }
    }
}
