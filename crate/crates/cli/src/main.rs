use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use imperfect::hyperkollar::DEFAULT_BUDGET;
use imperfect_cli::config::DEFAULT_POINT_DEGREE;
use imperfect_cli::{emit_report, run_suite, Format, SuiteConfig, SuiteId};

/// Run a suite of exact checks and print a report.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// Suite to run.
    #[arg(value_enum)]
    suite: SuiteId,
    /// Characteristic; defaults depend on the suite.
    #[arg(long)]
    p: Option<u32>,
    /// Number of scalars for the degree-p family (1 to 3).
    #[arg(long)]
    n: Option<usize>,
    /// Degree bound for the point and Laurent searches.
    #[arg(long, default_value_t = DEFAULT_POINT_DEGREE)]
    point_degree: u32,
    /// Maximum number of enumerated candidates per search.
    #[arg(long, env = "VERIFY_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated elements for the rank check, e.g. "t1, t2, t1*t2".
    #[arg(long)]
    elems: Option<String>,
    /// Field for --elems, e.g. "GF(4)(t1, t2)"; defaults to GF(p) with the
    /// identifiers of --elems as generators.
    #[arg(long)]
    field: Option<String>,
    /// Record wall time per check (makes reports non-reproducible).
    #[arg(long)]
    timings: bool,
    /// Write the report here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = SuiteConfig {
        suite: args.suite,
        p: args.p,
        n: args.n,
        point_degree: args.point_degree,
        budget: args.budget,
        seed: args.seed,
        elems: args.elems,
        field: args.field,
        timings: args.timings,
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    let text = emit_report(&report, args.format);
    match &args.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("verify: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.success() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
