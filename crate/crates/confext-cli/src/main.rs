mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{Failure, Report};

#[derive(Parser)]
#[command(name = "confext", version, about = "Exact Ext groups between finite conformal modules")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Verb {
    /// Solve one extension problem.
    Ext(ExtArgs),
    /// Degree-by-degree classification of density-module cocycles.
    Classify {
        /// Degree range `a..b` (inclusive), 3 ≤ a ≤ b.
        #[arg(long)]
        degrees: String,
        /// Keep only roots in ℚ(√d).
        #[arg(long)]
        sqrt: Option<u64>,
    },
    /// Recompute a published dimension table.
    Table {
        #[arg(long, value_parser = clap::value_parser!(u8).range(2..=5))]
        section: u8,
    },
    /// Check every table cocycle against the truncated mode algebra.
    Oracle {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(i64).range(1..))]
        window: i64,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(i64).range(0..))]
        guard: i64,
        /// Also run the single-coefficient mutation suite.
        #[arg(long)]
        mutate: bool,
    },
    /// Quick end-to-end check of the solver and the oracle.
    Selftest,
}

#[derive(Args)]
pub struct ExtArgs {
    /// `vir`, `virab`, `cur:<lie>` or `vircur:<lie>`, `<lie>` being sl2, sl3 or @structure.json.
    #[arg(long = "alg", required_unless_present = "file")]
    pub alg: Option<String>,
    /// Submodule descriptor.
    #[arg(long, required_unless_present = "file")]
    pub sub: Option<String>,
    /// Quotient descriptor.
    #[arg(long, required_unless_present = "file")]
    pub quot: Option<String>,
    /// JSON problem file instead of the three flags above.
    #[arg(long, conflicts_with_all = ["alg", "sub", "quot"])]
    pub file: Option<std::path::PathBuf>,
    /// Maximum ∂-degree of the correction terms.
    #[arg(long)]
    pub dpart: Option<u16>,
    /// Maximum λ-degree of the correction terms.
    #[arg(long)]
    pub dlam: Option<u16>,
    /// Skip the one-degree-higher saturation probe.
    #[arg(long)]
    pub no_probe: bool,
}

fn threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("CONFEXT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("CONFEXT_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<Report, Failure> {
    threads()?;
    let fmt = match (cli.json, cli.csv) {
        (true, _) => Format::Json,
        (_, true) => Format::Csv,
        _ => cli.format,
    };
    match cli.verb {
        Verb::Ext(a) => commands::ext(&a, fmt),
        Verb::Classify { degrees, sqrt } => commands::classify(&degrees, sqrt, fmt),
        Verb::Table { section } => commands::table(section, fmt),
        Verb::Oracle { window, guard, mutate } => commands::oracle(window, guard, mutate, fmt),
        Verb::Selftest => commands::selftest(fmt),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(r) => {
            print!("{}", r.out);
            ExitCode::from(if r.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("confext: {e}");
            ExitCode::from(e.code())
        }
    }
}
