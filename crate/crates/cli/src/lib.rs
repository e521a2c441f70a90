//! Command-line front end for `fdl-core`.
//!
//! [`run`] parses arguments, executes one command and writes the rendered
//! output. It returns the process exit code instead of exiting so that the
//! whole surface can be exercised in-process.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
pub mod records;
mod render;

pub use crate::render::Rendered;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_HORIZON: i32 = 2;
pub const EXIT_FALSIFIED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fdl",
    version,
    about = "Exact first-passage statistics for cylinder sets of full shifts"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Fractional digits for decimal probabilities.
    #[arg(long, default_value_t = 12, global = true)]
    pub precision: usize,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, env = "FPL_THREADS", global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kernel {
    Iid,
    Doubling,
    Tent,
    Ulam,
    Baker,
}

#[derive(Debug, Clone, Args)]
pub struct WordArg {
    /// The word, as digits (`1011`), comma separated integers or letters.
    #[arg(value_name = "WORD", required_unless_present = "word")]
    pub positional: Option<String>,
    #[arg(long, conflicts_with = "positional")]
    pub word: Option<String>,
    /// Alphabet size; inferred from the word when absent.
    #[arg(long)]
    pub q: Option<u32>,
}

impl WordArg {
    fn text(&self) -> &str {
        self.positional
            .as_deref()
            .or(self.word.as_deref())
            .expect("clap enforces one of the two")
    }
}

/// `k` or an inclusive range `a..b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KRange(pub RangeInclusive<usize>);

impl KRange {
    fn single(&self) -> Result<usize, CliError> {
        if self.0.start() == self.0.end() {
            Ok(*self.0.start())
        } else {
            Err(CliError::Usage("this command takes a single --k".into()))
        }
    }
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid length {t:?}"))
        };
        let range = match s.split_once("..") {
            Some((a, b)) => {
                let b = b.strip_prefix('=').unwrap_or(b);
                parse(a)?..=parse(b)?
            }
            None => {
                let k = parse(s)?;
                k..=k
            }
        };
        if range.is_empty() || *range.start() == 0 {
            return Err(format!("empty or zero-based range {s:?}"));
        }
        Ok(KRange(range))
    }
}

#[derive(Debug, Clone, Args)]
pub struct Refinement {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Word length, or a range `a..b` where the command accepts one.
    #[arg(long)]
    pub k: KRange,
    /// Series horizon; the default follows the adaptive crossing policy.
    #[arg(long)]
    pub horizon: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Autocorrelation bits, value and largest overlap.
    Cor(WordArg),
    /// Every structural index of the autocorrelation.
    Profile(WordArg),
    /// Counts a, h, H and the probability curves.
    Series {
        #[command(flatten)]
        word: WordArg,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Crossing point of two words' first hitting curves.
    Compare {
        first: String,
        second: String,
        #[arg(long)]
        q: Option<u32>,
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Correlation classes of a refinement.
    Classes {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        k: KRange,
    },
    /// First and last crossing moments of a refinement.
    Partition(Refinement),
    /// Tower bases ranked by return-time tails.
    Towers(Refinement),
    /// Greedy hole-switching schedule and its exact survival.
    Schedule {
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long)]
        k: KRange,
        /// Probability-time horizon; defaults to 10k.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Runs the invariant suite over every word up to a length.
    OracleCheck {
        #[arg(long, default_value_t = 2)]
        q: u32,
        /// Largest word length.
        #[arg(long, default_value = "8")]
        k: KRange,
        /// Series run to `factor · k`.
        #[arg(long, default_value_t = 12)]
        factor: usize,
    },
    /// Monte Carlo first-hit histogram against the exact curve.
    Simulate {
        #[command(flatten)]
        word: WordArg,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Kernel::Iid)]
        kernel: Kernel,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(fdl_core::Error),
    Falsified(String),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(fdl_core::Error::HorizonExhausted { .. }) => EXIT_HORIZON,
            CliError::Core(fdl_core::Error::InvariantFalsified(_)) | CliError::Falsified(_) => {
                EXIT_FALSIFIED
            }
            CliError::Core(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Falsified(m) => write!(f, "invariant falsified: {m}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<fdl_core::Error> for CliError {
    fn from(e: fdl_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its output to `out` or to `--output`. Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((rendered, status)) => {
            if let Err(e) = emit(&cli.global, &rendered, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if let Some(message) = status {
                let _ = writeln!(err, "{message}");
                return EXIT_FALSIFIED;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the parsed command inside a pool of the requested size. The second
/// value carries a falsification message when the output itself reports one.
pub fn execute(cli: &Cli) -> Result<(Rendered, Option<String>), CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    pool.install(|| commands::dispatch(&cli.command, &cli.global))
}

fn emit(global: &Global, rendered: &Rendered, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match global.format {
        Format::Csv => rendered.csv.clone(),
        Format::Json => rendered.json.clone(),
    };
    match &global.output {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}
