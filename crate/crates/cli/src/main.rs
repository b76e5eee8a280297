mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "qmv", version, about = "Exact checks for quantized multiplicative quiver varieties")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Master seed for random samples.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Format written to standard output.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Directory receiving <command>.json and <command>.md.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Md,
}

#[derive(Args, Debug, Clone)]
pub struct QuiverArgs {
    /// Bundled quiver name or path to a quiver TOML file.
    #[arg(long, default_value = "kronecker_1x1")]
    pub quiver: String,
    /// Order of the root of unity; overrides the quiver file.
    #[arg(long)]
    pub ell: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Algebra-level verifications.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Fibers of the Frobenius center.
    Fiber {
        #[command(subcommand)]
        what: Fiber,
    },
    /// Quantum Hamiltonian reduction.
    Reduce {
        #[command(subcommand)]
        what: Reduce,
    },
    /// Classical multiplicative geometry.
    Classical {
        #[command(subcommand)]
        what: Classical,
    },
    /// The root-of-unity condition on a root datum.
    Assumption {
        #[command(subcommand)]
        what: Assumption,
    },
    /// Poisson brackets of quantum tori across orders.
    Torus {
        #[command(subcommand)]
        what: Torus,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// ℓ-th powers of generators are central; rewriting system is confluent.
    Center(QuiverArgs),
    /// Degeneration bracket on the center against the closed-form bivector.
    Bivector(QuiverArgs),
    /// Moment matrices generate a reflection-equation image; (g^α)^ℓ is central.
    Moment(QuiverArgs),
}

#[derive(Subcommand, Debug)]
pub enum Fiber {
    /// Matrix-algebra certificate for the fiber over zero.
    Zero(QuiverArgs),
}

#[derive(Subcommand, Debug)]
pub enum Reduce {
    /// Reduction at a scalar character of a rank-one gauge group.
    Abelian {
        #[command(flatten)]
        quiver: QuiverArgs,
        /// One value per vertex: an integer, z, z^k or a parenthesized scalar.
        #[arg(long, value_delimiter = ',')]
        xi: Vec<String>,
        /// Central character values of g^ℓ, one per generator (default 0 for
        /// x and ∂, 1 for invertible generators).
        #[arg(long, value_delimiter = ',')]
        chi: Vec<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Classical {
    /// Random representations: moment values, big cell, leaf and stability.
    Sample {
        #[command(flatten)]
        quiver: QuiverArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Stability parameter, one integer per vertex (default 0).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Vec<i64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Assumption {
    /// Decides the condition for a root datum label such as GLn, A2-adjoint, G2.
    Check {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        ell: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum Torus {
    /// Brackets of ℓ-th powers agree up to one scalar per ℓ.
    Scaling {
        /// Skew matrix rows separated by ';', entries by ','.
        #[arg(long, allow_hyphen_values = true)]
        skew: Vec<String>,
        #[arg(long, value_delimiter = ',', default_values_t = [3u32, 5])]
        ells: Vec<u32>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = std::env::var("QMV_WORKERS").ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).stack_size(64 << 20).build_global();
    if let Err(e) = pool {
        eprintln!("qmv: {e}");
        return ExitCode::from(2);
    }
    let handle = std::thread::Builder::new()
        .stack_size(256 << 20)
        .spawn(move || commands::run(&cli))
        .expect("spawn worker thread");
    match handle.join() {
        Ok(Ok(true)) => ExitCode::SUCCESS,
        Ok(Ok(false)) => ExitCode::from(1),
        Ok(Err(e)) => {
            eprintln!("qmv: {e}");
            ExitCode::from(2)
        }
        Err(_) => {
            eprintln!("qmv: internal error");
            ExitCode::from(2)
        }
    }
}
