use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod input;

/// Detects and certifies Galois points of projective hypersurfaces over exact fields.
#[derive(Parser, Debug)]
#[command(name = "galois-locus", version, about)]
pub struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct PolyArgs {
    /// JSON file `{"field": ..., "vars": [...], "poly": ..., "point": ...}`.
    #[arg(long, conflicts_with_all = ["field", "vars", "poly"])]
    pub input: Option<PathBuf>,
    /// `Q`, `Q(zeta N)` or `GF(p^k)`.
    #[arg(long)]
    pub field: Option<String>,
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    #[arg(long, allow_hyphen_values = true)]
    pub poly: Option<String>,
    /// Modulus coefficients for `GF(p^k)`, low to high.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Galois criterion at a point: verdict, group, normal form and fixed hyperplane.
    Analyze {
        #[command(flatten)]
        poly: PolyArgs,
        /// Homogeneous coordinates, e.g. `1:0:0:0`.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Splitting certificate and specialization oracle in positive characteristic.
    Certify {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// auto, additive, kummer, fermat-inner or fermat-outer.
        #[arg(long, default_value = "auto")]
        recipe: String,
        /// Explicit root in `x0..xn`; repeat for each root. Overrides `--recipe`.
        #[arg(long = "root", allow_hyphen_values = true)]
        roots: Vec<String>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Degree of the extension the oracle samples from.
        #[arg(long, default_value_t = 2)]
        ext: u32,
    },
    /// Classifies every point of P^{n+1}(GF(q^(2 ext))) for the Fermat hypersurface of degree q+1.
    ScanFermat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        ext: u32,
        /// Write the CSV here and the JSON summary to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Vertex space and cone decomposition.
    Cone {
        #[command(flatten)]
        poly: PolyArgs,
    },
    /// Hyperplane sections through a Galois point.
    Section {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Comma-separated coefficients of one hyperplane; random ones otherwise.
        #[arg(long, allow_hyphen_values = true)]
        hyperplane: Option<String>,
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Galois points on a line, or on every coordinate line.
    LineScan {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long, requires = "b", allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, requires = "a", allow_hyphen_values = true)]
        b: Option<String>,
    },
    /// Named instances with their claimed Galois points.
    Catalog {
        #[command(subcommand)]
        command: CatalogCommand,
    },
}

#[derive(Args, Debug, Clone)]
pub struct CatalogArgs {
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<i64>,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub a: Option<u8>,
    /// Vertex dimension plus one, for cones.
    #[arg(long)]
    pub vertex: Option<usize>,
    /// Number of sampled members of each infinite family.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u64>>,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    List,
    Build(CatalogArgs),
    Verify {
        #[command(flatten)]
        args: CatalogArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        ext: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
