//! Command-line front end: argument parsing, file formats and exit codes.
//!
//! Every subcommand writes its primary output to stdout or `--output`.
//! JSON outputs carry a `"manifest"` object; errors go to stderr as one
//! JSON line with a stable `code`.

pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;
pub mod report;
pub mod selftest;
pub mod svg;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use idealpoly_core::optvol::{DEFAULT_MAX_DENOMINATOR, DEFAULT_RATIONAL_TOL};
use idealpoly_core::rivin::DEFAULT_EPSILON;

pub use error::{CliError, EXIT_INPUT, EXIT_NEGATIVE, EXIT_NUMERICAL, EXIT_OK};
pub use manifest::RunManifest;

#[derive(Debug, Parser)]
#[command(name = "idealpoly", version, about = "Ideal hyperbolic polyhedra: realizability, maximal volume, volume statistics")]
pub struct Cli {
    /// Worker threads (default: machine parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArg {
    /// Output file (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ApexArgs {
    /// Vertex placed at infinity (default: a vertex of maximal degree).
    #[arg(long)]
    pub apex: Option<usize>,
    /// Strictness margin of the angle inequalities.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub eps: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether a triangulation is realizable (exit 2 if not).
    Check {
        input: PathBuf,
        #[command(flatten)]
        apex: ApexArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Maximal-volume angle structure of a triangulation.
    Optimize {
        input: PathBuf,
        #[command(flatten)]
        apex: ApexArgs,
        /// Tolerance of rational-angle detection, in units of π.
        #[arg(long, default_value_t = DEFAULT_RATIONAL_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_DENOMINATOR)]
        max_denominator: u64,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Best maximal volume over the types of random configurations.
    Search {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        eps: f64,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Volumes of random configurations as CSV.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 5000)]
        count: usize,
        /// `table`, `search`, or a number.
        #[arg(long, default_value = "table")]
        vmax: String,
        /// Trials for `--vmax search`.
        #[arg(long, default_value_t = 200)]
        search_trials: usize,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Beta fit of a sample CSV.
    Fit {
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Linear fits of α and β against n from several fit files.
    Scaling {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Also write the three panels as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArg,
    },
    /// SVG histogram of a sample with the fitted Beta density.
    Report {
        input: PathBuf,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Geometry of a realized polyhedron as JSON or OBJ.
    Export {
        /// Triangulation, configuration, or search result.
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
        format: ExportFormat,
        #[command(flatten)]
        apex: ApexArgs,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Number of combinatorial automorphisms.
    Automorphisms {
        input: PathBuf,
        #[command(flatten)]
        out: OutputArg,
    },
    /// Run the built-in acceptance checks (exit 3 on failure).
    Selftest {
        #[arg(long)]
        json: bool,
    },
    /// Search, sample, fit and scaling for the standard vertex counts,
    /// written into one directory.
    Pipeline {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 5000)]
        count: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ExportFormat {
    Json,
    Obj,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
            eprintln!("{}", CliError::Usage { message: first }.to_json_line());
            return EXIT_INPUT;
        }
    };
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("{}", CliError::InvalidArgument("--threads must be positive".into()).to_json_line());
            return EXIT_INPUT;
        }
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", CliError::Numerical(format!("thread pool: {e}")).to_json_line());
            return EXIT_NUMERICAL;
        }
    };
    match pool.install(|| commands::dispatch(&cli, &argv)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", e.to_json_line());
            e.exit_code()
        }
    }
}
