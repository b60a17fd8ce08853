mod commands;
mod mapfile;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use posmap::{Execution, SearchConfig};

use commands::{CliError, Context, EXIT_PASS, EXIT_USAGE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Certify positivity, complete positivity and mapping-cone membership of
/// linear maps between matrix algebras.
#[derive(Debug, Parser)]
#[command(name = "posmap", version)]
struct Cli {
    /// Seed for every randomized search and sampler.
    #[arg(long, global = true, env = "POSMAP_SEED", default_value_t = 0)]
    seed: u64,
    /// Restarts per heuristic search.
    #[arg(long, global = true, default_value_t = 50)]
    restarts: usize,
    /// Iteration cap per restart.
    #[arg(long, global = true, default_value_t = 200)]
    max_iters: usize,
    /// Negativity tolerance for PSD tests.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Random PSD inputs tried by positivity checks.
    #[arg(long, global = true, default_value_t = 100)]
    psd_samples: usize,
    /// Run searches on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Complete positivity from the Choi spectrum.
    CheckCp { file: PathBuf },
    /// Positivity: structural certificates, then product-vector and PSD-input searches.
    CheckPositive { file: PathBuf },
    /// k-positivity via Schmidt-rank-k vectors.
    CheckKPositive {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// The pairing Tr(C_φ C_ψ).
    Pair { first: PathBuf, second: PathBuf },
    /// Dual-cone membership of a candidate against the symmetric cone of the generators.
    Dual {
        /// Cone generator; repeat for several.
        #[arg(long = "cone-gen", required = true)]
        cone_gen: Vec<PathBuf>,
        #[arg(long)]
        candidate: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Dual-cone membership through positivity of g⊗φ, for g = g* = g^t.
    Cor4 {
        #[arg(long)]
        gen: PathBuf,
        #[arg(long)]
        candidate: PathBuf,
    },
    /// Whether φ = φ* = φ^t, from the Choi matrix and from the map equalities.
    Prop5 { file: PathBuf },
    /// Run a seeded verification suite.
    Verify {
        #[arg(value_parser = ["eq1", "lemma1", "adjoint", "prop5", "thm2", "cor3", "cor4-demo", "cp-selfdual"])]
        suite: String,
        /// Dimension to test; repeat for several.
        #[arg(long = "dim")]
        dims: Vec<usize>,
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn run(cli: &Cli) -> Result<report::Report, CliError> {
    let cfg = SearchConfig {
        seed: cli.seed,
        restarts: cli.restarts,
        max_iters: cli.max_iters,
        psd_tol: cli.tol,
        psd_samples: cli.psd_samples,
        execution: if cli.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        ..SearchConfig::default()
    };
    cfg.validate()?;
    let ctx = Context { cfg };
    match &cli.command {
        Command::CheckCp { file } => commands::check_cp(&ctx, file),
        Command::CheckPositive { file } => commands::check_positive(&ctx, file),
        Command::CheckKPositive { file, k } => commands::check_k_positive(&ctx, file, *k),
        Command::Pair { first, second } => commands::pair_maps(&ctx, first, second),
        Command::Dual {
            cone_gen,
            candidate,
            trials,
        } => commands::dual(&ctx, cone_gen, candidate, *trials),
        Command::Cor4 { gen, candidate } => commands::cor4(&ctx, gen, candidate),
        Command::Prop5 { file } => commands::prop5(&ctx, file),
        Command::Verify {
            suite,
            dims,
            trials,
        } => commands::verify(&ctx, suite, dims, *trials),
    }
}

fn exit(code: i32) -> ExitCode {
    ExitCode::from(u8::try_from(code).unwrap_or(u8::MAX))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return exit(code);
        }
    };
    let start = Instant::now();
    match run(&cli) {
        Ok(mut report) => {
            report.wall_time = start.elapsed().as_secs_f64();
            let text = match cli.format {
                Format::Text => report.to_text(),
                Format::Json => {
                    serde_json::to_string_pretty(&report.to_json()).expect("report serializes")
                        + "\n"
                }
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            exit(report.exit_code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            exit(e.exit_code())
        }
    }
}
