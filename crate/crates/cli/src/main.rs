mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qift_core::experiment::{PeriodClass, ScanMode, DEFAULT_SEED, DEFAULT_THRESHOLD};
use qift_core::shor::{DEFAULT_C_MIN, DEFAULT_MAX_ATTEMPTS};
use qift_core::TransformSpec;

/// Classical simulation of Shor period finding under exact, approximate and
/// integral quantum Fourier transforms.
#[derive(Debug, Parser)]
#[command(name = "qift", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Print the JSON envelope instead of the human-readable summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the result to a file: `.csv` for CSV, anything else JSON.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, env = "QIFT_THREADS", default_value_t = 0)]
    pub threads: usize,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Register width; N = 2^n.
    #[arg(long)]
    pub n: u32,
    /// Offset of the periodic state, below r.
    #[arg(long)]
    pub x0: u64,
    /// Period.
    #[arg(long)]
    pub r: u64,
    /// Transform: qft, aqft:m, maqft:m or integral.
    #[arg(long, default_value = "integral")]
    pub spec: TransformSpec,
}

#[derive(Debug, Args)]
pub struct RecoveryArgs {
    /// Denominator bound for fraction recovery [default: 2^ceil(n/2)].
    #[arg(long)]
    pub bound: Option<u64>,
    /// Restrict recovery to plain convergents.
    #[arg(long)]
    pub convergents_only: bool,
    /// Also test the trivial k = 0 peak.
    #[arg(long)]
    pub include_k_zero: bool,
    /// Lift the register-size ceiling.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relative probability RP(y) and probability Prob(y) of one outcome.
    Rp {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long)]
        y: u64,
    },
    /// Evaluate every outcome and report those above a threshold.
    ScanFull {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        #[command(flatten)]
        recovery: RecoveryArgs,
    },
    /// Test the four outcomes around every peak k/r.
    ScanPeaks {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        recovery: RecoveryArgs,
    },
    /// Minimum total success probability over seeded random runs, per n.
    Table {
        #[arg(long, default_value = "integral")]
        spec: TransformSpec,
        #[arg(long)]
        n_from: u32,
        #[arg(long)]
        n_to: u32,
        #[arg(long, default_value_t = qift_core::experiment::DEFAULT_RUNS)]
        runs: usize,
        /// Period class drawn: odd, even, any or pow2.
        #[arg(long, default_value = "odd")]
        r_parity: PeriodClass,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Smallest period drawn [default: isqrt(N-1)/2 + 1].
        #[arg(long)]
        r_min: Option<u64>,
        /// Scan used per run: peak or full.
        #[arg(long, default_value = "peak", value_parser = parse_mode)]
        mode: ScanMode,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// Fit Pr_min(n) = C / n^c.
        #[arg(long)]
        fit: bool,
        #[command(flatten)]
        recovery: RecoveryArgs,
    },
    /// Best rational approximation of y/2^n with the convergent ladder.
    Cf {
        #[arg(long)]
        y: u64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        convergents_only: bool,
    },
    /// Factor a small odd composite by simulated period finding.
    Factor {
        #[arg(long)]
        target: u64,
        #[arg(long, default_value_t = DEFAULT_C_MIN)]
        c_min: u64,
        #[arg(long, default_value = "integral")]
        spec: TransformSpec,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_ATTEMPTS)]
        max_attempts: usize,
        /// Fixed base instead of a random one.
        #[arg(long)]
        base: Option<u64>,
    },
    /// Worst-case AQFT success bound (8/π²) sin²(π m / 4n).
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: f64,
    },
    /// Exact orthogonality check of a transform on n qubits.
    Unitary {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "integral")]
        spec: TransformSpec,
    },
    /// The full outcome distribution of a periodic state.
    Dist {
        #[command(flatten)]
        state: StateArgs,
        /// Lift the register-size ceiling.
        #[arg(long)]
        force: bool,
    },
}

fn parse_mode(s: &str) -> Result<ScanMode, String> {
    match s {
        "peak" | "peak-scan" => Ok(ScanMode::PeakScan),
        "full" | "full-scan" => Ok(ScanMode::FullScan),
        _ => Err(format!("unknown scan mode {s:?} (peak or full)")),
    }
}

const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_OTHER);
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<qift_core::Error>() {
                Some(qift_core::Error::ResourceLimit { .. }) => EXIT_RESOURCE,
                Some(qift_core::Error::InvalidArgument(_)) => EXIT_USAGE,
                _ => EXIT_OTHER,
            };
            ExitCode::from(code)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    let pipe = Some(std::io::ErrorKind::BrokenPipe);
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>().map(|io| io.kind()) == pipe
            || c.downcast_ref::<serde_json::Error>()
                .and_then(|j| j.io_error_kind())
                == pipe
    })
}
