use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quadcalc", version, about = "Discrete complex analysis on quad-graphs")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Graph JSON file, or `fixture:fig3` / `fixture:unit-square`.
    #[arg(long, global = true)]
    pub graph: Option<String>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance: Laplacian residual for `solve`, agreement for `cauchy`,
    /// holomorphicity for `conjugate`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A vertex field: symbolic or from an `id,re,im` CSV file.
#[derive(Debug, Clone, Args)]
pub struct FieldArg {
    /// One of 1, v, vbar, v^2, |v|^2, "Re v^2", exp(λ).
    #[arg(long = "f")]
    pub expr: Option<String>,
    #[arg(long = "f-csv", conflicts_with = "expr")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Skew,
    SkewDisk,
    Rhombic,
    DeBruijn,
    Perturbed,
    Fig3,
    UnitSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Direct,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    /// `K_{v0}` on quads.
    Vertex,
    /// `K_{Q0}` on vertices.
    Face,
    /// `∂K_{Q0}` on quads.
    FaceDerivative,
    /// `(−1)ⁿ/n! ∂ⁿK_{Q0}` on a skew lattice; needs `--n`.
    Skew,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CauchyInput {
    /// Reconstruct `f(v0)`, or `∂f(Q0)` when `--q0` is given.
    Vertex,
    /// Reconstruct `h(Q0)` for `h = ∂f`.
    Face,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportWhat {
    Vertices,
    Quads,
    Edges,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a quad-graph.
    Gen {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 10)]
        m: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value = "1")]
        e1: String,
        #[arg(long, default_value = "i")]
        e2: String,
        #[arg(long, default_value_t = 5.0)]
        radius: f64,
        /// Comma-separated edge vectors for de Bruijn families.
        #[arg(long)]
        dirs: Option<String>,
        /// Comma-separated grid offsets for `de-bruijn`.
        #[arg(long)]
        offsets: Option<String>,
        #[arg(long, default_value_t = 0.2)]
        jitter: f64,
    },
    /// Solve the Dirichlet problem with the real part of a field as boundary data.
    Solve {
        #[command(flatten)]
        boundary: FieldArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// ∂_Λ f and ∂̄_Λ f on quads.
    Deriv {
        #[command(flatten)]
        field: FieldArg,
    },
    /// △f on interior vertices.
    Laplacian {
        #[command(flatten)]
        field: FieldArg,
        /// Report only this vertex.
        #[arg(long)]
        at: Option<usize>,
    },
    /// Dirichlet energy of f.
    Energy {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Harmonic conjugate of the real part of f.
    Conjugate {
        #[command(flatten)]
        field: FieldArg,
    },
    /// Free Green's function with pole at v0.
    Green {
        #[arg(long)]
        v0: Option<usize>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// A Cauchy kernel table.
    Kernel {
        #[arg(long, value_enum)]
        kind: KernelArg,
        #[arg(long)]
        v0: Option<usize>,
        #[arg(long)]
        q0: Option<usize>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Evaluate a Cauchy integral formula and compare with the direct value.
    Cauchy {
        #[command(flatten)]
        field: FieldArg,
        #[arg(long)]
        v0: Option<usize>,
        #[arg(long, conflicts_with = "v0")]
        q0: Option<usize>,
        /// `ring:R` or `quads:ID,ID,...`.
        #[arg(long, default_value = "ring:3")]
        contour: String,
        #[arg(long, value_enum, default_value_t = CauchyInput::Vertex)]
        input: CauchyInput,
    },
    /// Asymptote defects of a kernel table with the binned decay check.
    Asym {
        /// Table JSON written by `green` or `kernel`.
        #[arg(long)]
        table: PathBuf,
        /// Bin edges.
        #[arg(long, default_value = "10,20,30,40")]
        bins: String,
    },
    /// Run the identity suite on the given graph or a default set.
    Verify,
    /// CSV of the graph geometry, optionally with field values.
    Export {
        #[arg(long, value_enum, default_value_t = ExportWhat::Vertices)]
        what: ExportWhat,
        #[command(flatten)]
        field: FieldArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen { .. } => "gen",
            Command::Solve { .. } => "solve",
            Command::Deriv { .. } => "deriv",
            Command::Laplacian { .. } => "laplacian",
            Command::Energy { .. } => "energy",
            Command::Conjugate { .. } => "conjugate",
            Command::Green { .. } => "green",
            Command::Kernel { .. } => "kernel",
            Command::Cauchy { .. } => "cauchy",
            Command::Asym { .. } => "asym",
            Command::Verify => "verify",
            Command::Export { .. } => "export",
        }
    }
}
