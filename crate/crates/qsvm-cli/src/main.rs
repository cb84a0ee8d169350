//! Command-line front end for the quantum feature-map benchmark pipeline.
//!
//! Flag precedence is CLI > environment (`QSVM_*`) > config file > default.
//! All reports are canonical JSON with CSV mirrors; a given command, seed
//! and config produce byte-identical reports at any thread count.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qsvm_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "qsvm",
    version,
    about = "Hardware-aware quantum feature-map search and benchmarks"
)]
struct Cli {
    /// JSON config for search runs (mirrors the NasConfig schema).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Run seed (env: QSVM_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker-thread cap (env: QSVM_THREADS). Zero means all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Output directory (env: QSVM_OUT_DIR).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,

    /// Dataset file in the `id,M|B,30 floats` layout (env: QSVM_DATA);
    /// defaults to the bundled benchmark.
    #[arg(long, global = true)]
    data: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Linear and RBF SVM baselines with grid search.
    BaselineClassical,
    /// QSVM with a hand-crafted feature map.
    BaselineQuantum {
        /// One of: z, zz, pauli, raw, efficient.
        #[arg(long)]
        map: String,
    },
    /// Genetic architecture search.
    Nas {
        #[command(subcommand)]
        action: NasAction,
    },
    /// Train and score a genome from a file; reports hardware stats too.
    EvalGenome {
        #[arg(long)]
        file: PathBuf,
        /// Prepend the fixed data-encoding RZ layer.
        #[arg(long)]
        fixed_rz: bool,
        /// Register size; defaults to the smallest register the genome fits.
        #[arg(long)]
        qubits: Option<usize>,
        /// Evaluate under the standard noise model.
        #[arg(long)]
        noisy: bool,
        /// Coupling map name (chain6, chain10, heavyhex27) or a map file.
        #[arg(long)]
        coupling: Option<String>,
    },
    /// Gate counts, native fraction and transpilation overhead per circuit.
    ReportHardware {
        /// Genome files to include (defaults to the bundled genomes).
        #[arg(long)]
        file: Vec<PathBuf>,
        /// Hand-crafted maps to include (defaults to all).
        #[arg(long)]
        map: Vec<String>,
    },
    /// Write a training-set Gram matrix as CSV.
    KernelDump {
        /// Map spec: z, zz, pauli, raw, efficient, or `genome:<path>`.
        #[arg(long)]
        map: String,
        #[arg(long)]
        out: PathBuf,
        /// Stratified subsample size; zero uses the full training set.
        #[arg(long, default_value_t = 0)]
        subsample: usize,
        #[arg(long)]
        noisy: bool,
        #[arg(long)]
        fixed_rz: bool,
        #[arg(long)]
        qubits: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum NasAction {
    /// Run one search variant end to end.
    Run {
        /// One of: hw-fixed-rz, hw-free, all-gates, noisy, sparse.
        #[arg(long)]
        variant: String,
    },
}

fn env_u64(name: &str) -> Option<u64> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn env_usize(name: &str) -> Option<usize> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        // Bad configuration or arguments.
        Error::InvalidParameter(_) => 2,
        // Broken input data.
        Error::Parse { .. } | Error::Io(_) | Error::Json(_) => 3,
        // Everything else is a runtime failure.
        _ => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let threads = cli
        .threads
        .or_else(|| env_usize("QSVM_THREADS"))
        .unwrap_or(0);
    if threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: could not size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }

    let seed = cli.seed.or_else(|| env_u64("QSVM_SEED"));
    let out_dir = cli
        .out_dir
        .or_else(|| std::env::var("QSVM_OUT_DIR").ok().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("qsvm-out"));
    let data = cli
        .data
        .or_else(|| std::env::var("QSVM_DATA").ok().map(PathBuf::from));

    let ctx = commands::Context {
        seed,
        out_dir,
        data,
        config: cli.config,
    };

    let outcome = match cli.command {
        Command::BaselineClassical => commands::baseline_classical(&ctx),
        Command::BaselineQuantum { map } => commands::baseline_quantum(&ctx, &map),
        Command::Nas {
            action: NasAction::Run { variant },
        } => commands::nas_run(&ctx, &variant),
        Command::EvalGenome {
            file,
            fixed_rz,
            qubits,
            noisy,
            coupling,
        } => commands::eval_genome(&ctx, &file, fixed_rz, qubits, noisy, coupling.as_deref()),
        Command::ReportHardware { file, map } => commands::report_hardware(&ctx, &file, &map),
        Command::KernelDump {
            map,
            out,
            subsample,
            noisy,
            fixed_rz,
            qubits,
        } => commands::kernel_dump(&ctx, &map, &out, subsample, noisy, fixed_rz, qubits),
    };

    match outcome {
        Ok(path) => {
            println!("report written to {}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
