//! Command-line interface: `gen`, `search`, `bench`, `verify` and
//! `loadbalance`.
//!
//! Exit codes: 0 success or pass, 1 fail verdict or infeasible search,
//! 2 invalid configuration, 3 guard exceeded.

mod bench;
mod commands;
mod seed;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::analysis::AnalysisError;
use crate::expander::ExpanderError;
use crate::field::FieldContext;
use crate::generator::{
    build_cascade_generator, build_expander_generator, Blueprint, CascadeParams, ExpanderParams,
    GeneratorError, GraphStorage, InnerKind, Kind,
};
use crate::loadbalance::LoadBalanceError;

pub use bench::{expander_params_for, measure_ns_per_value, table_lookup_ns, BenchRow};
pub use seed::{decode_seed, encode_element, encode_seed, hex_width};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("guard exceeded: {0}")]
    Guard(String),
    #[error("period exhausted after {emitted} values")]
    Exhausted { emitted: u128 },
    #[error("output: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Guard(_) => EXIT_GUARD,
            _ => EXIT_CONFIG,
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Expander(ExpanderError::Guard { .. }) => CliError::Guard(e.to_string()),
            GeneratorError::PeriodExhausted { emitted, .. } => CliError::Exhausted { emitted },
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Guard { .. } => CliError::Guard(format!(
                "{e}; lower the field size, k or --n, or use --method support/screen"
            )),
            AnalysisError::Generator(g) => g.into(),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<LoadBalanceError> for CliError {
    fn from(e: LoadBalanceError) -> Self {
        match e {
            LoadBalanceError::Generator(g) => g.into(),
            LoadBalanceError::Csv(e) if e.is_io_error() => match e.into_kind() {
                csv::ErrorKind::Io(io) => CliError::Io(io),
                _ => unreachable!("checked to be an I/O error"),
            },
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ExpanderError> for CliError {
    fn from(e: ExpanderError) -> Self {
        match e {
            ExpanderError::Guard { .. } => CliError::Guard(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "kgen",
    version,
    about = "Generate and verify k-independent sequences over finite fields"
)]
pub struct Cli {
    /// Worker threads for parallel checks and experiments.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit values from a generator.
    Gen(GenArgs),
    /// Search expander parameters meeting a failure-probability target.
    Search(SearchArgs),
    /// Measure nanoseconds per value.
    Bench(BenchArgs),
    /// Check k-independence of a generator's stream.
    Verify(VerifyArgs),
    /// Run a load-balancing experiment.
    Loadbalance(LoadBalanceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StorageArg {
    Auto,
    Stored,
    Hashed,
}

impl From<StorageArg> for GraphStorage {
    fn from(s: StorageArg) -> Self {
        match s {
            StorageArg::Auto => GraphStorage::Auto,
            StorageArg::Stored => GraphStorage::Stored,
            StorageArg::Hashed => GraphStorage::Hashed,
        }
    }
}

/// Generator selection shared by the subcommands.
#[derive(Debug, Clone, Args)]
pub struct GeneratorArgs {
    /// `gf2w:<w>` or `gfp:<p>`.
    #[arg(long, default_value = "gf2w:64")]
    pub field: FieldContext,
    /// horner, fft-batch, table, expander or cascade.
    #[arg(long, default_value = "horner")]
    pub kind: Kind,
    /// Independence k.
    #[arg(long)]
    pub k: Option<usize>,
    /// Polynomial coefficients for horner and fft-batch (defaults to k).
    #[arg(long)]
    pub seedlen: Option<usize>,
    /// Expander imbalance.
    #[arg(long, default_value_t = 16)]
    pub c: usize,
    /// Expander right side `m`, the size of the inner table; also the
    /// table kind's length.
    #[arg(long = "table-size", default_value_t = 1024)]
    pub m: usize,
    /// Expander degree.
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    /// Cascade levels.
    #[arg(long, default_value_t = 2)]
    pub t: usize,
    /// Inner generator of expander and cascade kinds.
    #[arg(long, default_value = "fft-batch")]
    pub inner: InnerKind,
    /// Key of the sampled graphs.
    #[arg(long, default_value_t = 0)]
    pub graph_key: u64,
    #[arg(long, value_enum, default_value_t = StorageArg::Auto)]
    pub storage: StorageArg,
}

impl GeneratorArgs {
    pub fn blueprint(&self, default_k: usize) -> Result<Blueprint, CliError> {
        let k = self.k.unwrap_or(default_k);
        let field = self.field.clone();
        let bp = match self.kind {
            Kind::Horner => Blueprint::horner(field, self.seedlen.unwrap_or(k))?,
            Kind::FftBatch => Blueprint::fft_batch(field, self.seedlen.unwrap_or(k))?,
            Kind::Table => Blueprint::table(field, self.m)?,
            Kind::Expander => build_expander_generator(
                field,
                &ExpanderParams {
                    k,
                    c: self.c,
                    m: self.m,
                    d: self.d,
                    inner: self.inner,
                    storage: self.storage.into(),
                },
                self.graph_key,
            )?,
            Kind::Cascade => build_cascade_generator(
                field,
                &CascadeParams {
                    k,
                    c: self.c,
                    m: self.m,
                    d: self.d,
                    t: self.t,
                    base: self.inner,
                    storage: self.storage.into(),
                },
                self.graph_key,
            )?,
        };
        Ok(bp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Little-endian fixed-width elements.
    Bin,
    /// One width-padded hex element per line.
    Hex,
    /// `index,value` rows with decimal values.
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Seed as hex elements, comma or space separated.
    #[arg(long, conflicts_with = "entropy")]
    pub seed: Option<String>,
    /// Draw the seed from the operating system and record it in the header.
    #[arg(long)]
    pub entropy: bool,
    #[arg(long, default_value_t = 16)]
    pub count: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Hex)]
    pub format: Format,
    /// Shorthand for `--format hex`.
    #[arg(long, conflicts_with = "format")]
    pub hex: bool,
    /// Write a descriptor line first (to stderr for binary output).
    #[arg(long)]
    pub header: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Independence values, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "32")]
    pub k: Vec<usize>,
    /// Failure-probability target.
    #[arg(long, default_value_t = 1e-7)]
    pub delta: f64,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    pub c: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
    pub d: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub min_log2_m: u32,
    #[arg(long, default_value_t = 26)]
    pub max_log2_m: u32,
    /// Print every (c, d) cell instead of the winner only.
    #[arg(long)]
    pub all: bool,
    /// Measure ns/value of each winner over GF(2^64).
    #[arg(long)]
    pub bench: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "horner,fft-batch,expander"
    )]
    pub kinds: Vec<Kind>,
    #[arg(long, value_delimiter = ',', default_value = "16,64,256,1024")]
    pub k: Vec<usize>,
    #[arg(long, default_value = "gf2w:64")]
    pub field: FieldContext,
    /// Timed repetitions; the median is reported.
    #[arg(long, default_value_t = 7)]
    pub reps: usize,
    /// Values per timed batch (defaults to a size pinned per kind and k).
    #[arg(long)]
    pub batch: Option<usize>,
    /// Expander imbalance and degree.
    #[arg(long, default_value_t = 64)]
    pub c: usize,
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    /// Expander table size; by default the least power of two meeting `--delta`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1e-7)]
    pub delta: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Seed enumeration, falling back to support enumeration for linear
    /// streams over binary fields.
    Auto,
    Seed,
    Support,
    Screen,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Stream length checked (defaults to the period, capped at 64, or the
    /// first block of expander kinds).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_positions: u64,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Streams enumerated at most by seed enumeration.
    #[arg(long, default_value_t = 10_000_000)]
    pub guard: u128,
    /// Screen window and trial count.
    #[arg(long, default_value_t = 64)]
    pub window: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    /// Key of the seeds drawn by the screen.
    #[arg(long, default_value_t = 0)]
    pub screen_seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WorkloadArg {
    Poisson,
    Burst,
}

#[derive(Debug, Clone, Args)]
pub struct LoadBalanceArgs {
    /// Generator; k defaults to m b.
    #[command(flatten)]
    pub generator: GeneratorArgs,
    /// Machines.
    #[arg(long = "m", default_value_t = 8)]
    pub machines: usize,
    /// Capacity per machine.
    #[arg(long, default_value_t = 16)]
    pub b: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 1000)]
    pub runs: u64,
    #[arg(long, value_enum, default_value_t = WorkloadArg::Poisson)]
    pub workload: WorkloadArg,
    /// Poisson arrival rate, task duration and horizon.
    #[arg(long, default_value_t = 20.0)]
    pub rate: f64,
    #[arg(long, default_value_t = 2.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 100.0)]
    pub horizon: f64,
    /// Burst size.
    #[arg(long, default_value_t = 50)]
    pub tasks: usize,
    /// Key of the workload draw.
    #[arg(long, default_value_t = 0)]
    pub workload_seed: u64,
    /// Base key of the per-run seeds, in hex.
    #[arg(long, default_value = "0")]
    pub seed: String,
    /// Place tasks with fully random choices instead of the generator.
    #[arg(long)]
    pub baseline: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_PASS
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // A pool built by an earlier call in the same process stays in use.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match commands::dispatch(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "kgen: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
