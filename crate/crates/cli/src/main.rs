use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rho_lab::cache::SpectrumCache;
use rho_lab::commands::{self, ComputeOptions, Output, EXIT_FAILURE};
use rho_lab::verify::{VerifyOptions, SWEEP_LIMIT};
use rho_lab_core::recognize::DEFAULT_MAX_ORDER;
use rho_lab_core::{Builder, RecognizeOptions, DEFAULT_ENUMERATION_CAP};

/// Products of element orders of finite groups, and recognition from their exponent sets.
#[derive(Parser)]
#[command(name = "rho-lab", version)]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest group order the enumerator will build.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    /// Worker threads for catalog sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute rho(G), its exponent set and the order spectrum of a group spec.
    Compute {
        /// e.g. "PSL(2,5)", "C14 x (C13 : C3 @ 3)"
        spec: String,
        /// Cross-check against the applicable closed formula.
        #[arg(long)]
        closed_form: bool,
        /// Bypass the spectrum cache.
        #[arg(long)]
        no_cache: bool,
        /// Recompute on a cache hit and fail if the values differ.
        #[arg(long, conflicts_with = "no_cache")]
        compare_cache: bool,
    },
    /// Find the groups whose rho has the given exponent set, e.g. "{15,20,24}".
    Recognize {
        target: String,
        /// Known group order.
        #[arg(long)]
        order: Option<u64>,
        /// Largest candidate order resolved against catalogs.
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u64,
    },
    /// Run recognition for a family member: "PSL25xZp(7)" or "Z2qr(3, 5)".
    Family {
        family: String,
        #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
        max_order: u64,
    },
    /// List the catalog of groups of one order with their exponent sets.
    Catalog { order: u64 },
    /// Run a verification suite: exact, closed-form, lemmas, recognition, non-characterizable, catalog or all.
    Verify {
        suite: String,
        /// Largest order in the lemma sweep.
        #[arg(long, default_value_t = SWEEP_LIMIT)]
        sweep_limit: u64,
    },
}

fn run(cli: Cli) -> anyhow::Result<Output> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let builder = Builder::with_cap(cli.cap);
    match cli.command {
        Command::Compute { spec, closed_form, no_cache, compare_cache } => {
            let opts = ComputeOptions { json: cli.json, closed_form, no_cache, compare_cache };
            let cache = SpectrumCache::from_env();
            commands::compute(&builder, &spec, opts, cache.as_ref())
        }
        Command::Recognize { target, order, max_order } => {
            let opts = RecognizeOptions { known_order: order, max_order };
            commands::recognize(&builder, &target, opts, cli.json)
        }
        Command::Family { family, max_order } => {
            commands::family(&builder, &family, RecognizeOptions { known_order: None, max_order }, cli.json)
        }
        Command::Catalog { order } => commands::catalog(&builder, order, cli.json),
        Command::Verify { suite, sweep_limit } => {
            commands::verify(&suite, &VerifyOptions { builder, sweep_limit }, cli.json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_FAILURE as u8)
        }
    }
}
