//! `threefold`: command-line front end for the certificate toolkit.

mod report;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::{render, Format};

#[derive(Parser, Debug)]
#[command(name = "threefold", version, about = "Exact certificates for the resolution tower of z1^2 + z2^2 + z3^2 - z4^(2k) = 0")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    pub format: FormatArg,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build the k-step tower and run every level check.
    Tower {
        #[arg(long)]
        k: u32,
    },
    /// Singular-locus certificates for every level of the tower.
    Certify {
        #[arg(long)]
        k: u32,
    },
    /// Certify the perturbed hypersurface for one (k, N, eps).
    Perturb {
        #[arg(long)]
        k: u32,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, default_value = "1")]
        eps: String,
    },
    /// Search N = k+1..N_max and eps candidates for a certified perturbation.
    PerturbSearch {
        #[arg(long)]
        k: u32,
        /// Largest N tried (default k + 8).
        #[arg(long = "N-max")]
        n_max: Option<u32>,
        /// Comma-separated eps candidates.
        #[arg(long, default_value = "1,1/2,1/4")]
        eps: String,
    },
    /// Splitting types of the normal bundles of C_k, ..., C_1.
    NormalBundles {
        #[arg(long)]
        k: u32,
    },
    /// Splitting type of a 2x2 transition matrix read from a JSON file.
    Splitting {
        #[arg(long)]
        matrix: std::path::PathBuf,
    },
    /// Real points on sampled ruling lines of the exceptional quadric.
    Quadric {
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tower whose exceptional-divisor slice is checked.
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Boundedness of the real slice of the perturbed hypersurface.
    RealSlice {
        #[arg(long)]
        k: u32,
        #[arg(long = "N")]
        n: u32,
        #[arg(long, default_value = "1")]
        eps: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The commutative square of the blow-up lemma on the local model.
    SquareCheck,
    /// The full suite for one k.
    All {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = match cli.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let start = std::time::Instant::now();
    let report = match run::run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(run::exit_code_for(&e));
        }
    };
    let text = render(&report, format, start.elapsed());
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(3);
    }
    ExitCode::from(if report.passed() { 0 } else { 1 })
}
