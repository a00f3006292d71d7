//! swsplit: scenario runs and C-property verification from the command line.
//!
//! Exit codes: 0 on success (and, for `verify`, when the scheme meets its
//! expected classification), 1 on solver failures or missed expectations,
//! 2 on usage errors.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use config::{parse_config_file, resolve, RunRequest, UsageError};
use swsplit::domain::{BottomFn, Scheme};
use swsplit::driver::{run_simulation, CsvDirSink};
use swsplit::scenarios::scaled_bump;
use swsplit::verify::{check_c_property, Classification};
use swsplit::RunConfig64;

#[derive(Parser)]
#[command(
    name = "swsplit",
    about = "1D shallow water equations via time-splitting schemes (Q-tra1/2/3)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark scenario and write CSV snapshots.
    Run(RunArgs),
    /// Verification harnesses.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Args)]
struct RunArgs {
    /// Benchmark number: 1 dam break, 2 stationary, 3 tidal wave, 4 shoreline friction.
    #[arg(long)]
    test: Option<u8>,
    /// Splitting scheme: qtra1, qtra2 or qtra3.
    #[arg(long, value_parser = parse_scheme)]
    scheme: Option<Scheme>,
    /// Cell count (default: the scenario's).
    #[arg(long)]
    cells: Option<usize>,
    /// CFL number in (0, 1].
    #[arg(long)]
    cfl: Option<f64>,
    /// End time in seconds.
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Comma-separated snapshot times; defaults to the end time only.
    #[arg(long, value_delimiter = ',')]
    snapshots: Option<Vec<f64>>,
    /// Manning coefficient (required to run qtra3 on frictionless tests).
    #[arg(long)]
    manning: Option<f64>,
    /// Output directory for CSV snapshots.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Two-column x b profile replacing the built-in test 3 bathymetry.
    #[arg(long = "bottom-file")]
    bottom_file: Option<PathBuf>,
    /// Use the literal "+1" bump offset in tests 1 and 2.
    #[arg(long = "paper-literal-bump")]
    paper_literal_bump: bool,
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Check the C-property classification of a scheme on the lake-at-rest
    /// problem over the test 2 bump.
    #[command(name = "c-property")]
    CProperty(CPropertyArgs),
}

#[derive(Args)]
struct CPropertyArgs {
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    /// Comma-separated grid sizes.
    #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
    grids: Vec<usize>,
    /// Number of full splitting steps per grid.
    #[arg(long, default_value_t = 20)]
    steps: usize,
    /// Manning coefficient for qtra3.
    #[arg(long, default_value_t = 0.015)]
    manning: f64,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(VerifyCommand::CProperty(args)) => cmd_c_property(args),
    };
    match outcome {
        Ok(code) => code,
        Err(Outcome::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Outcome::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

enum Outcome {
    Usage(UsageError),
    Failure(String),
}

impl From<UsageError> for Outcome {
    fn from(e: UsageError) -> Self {
        Outcome::Usage(e)
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, Outcome> {
    let file = match &args.config {
        Some(path) => Some(parse_config_file(path)?),
        None => None,
    };
    let flags = RunRequest {
        test: args.test,
        scheme: args.scheme,
        cells: args.cells,
        cfl: args.cfl,
        t_end: args.t_end,
        snapshots: args.snapshots,
        manning: args.manning,
        out: args.out,
        bottom_file: args.bottom_file,
        paper_literal_bump: args.paper_literal_bump,
    };
    let resolved = resolve(flags, file)?;
    let mut sink = CsvDirSink::new(&resolved.out_dir)
        .map_err(|e| Outcome::Failure(e.to_string()))?;
    println!(
        "running {} with {} on {} cells (cfl {}, t_end {})",
        resolved.scenario.name,
        resolved.config.scheme,
        resolved.config.n_cells,
        resolved.config.cfl,
        resolved.config.t_end
    );
    let summary = run_simulation(&resolved.scenario, &resolved.config, &mut sink)
        .map_err(|e| Outcome::Failure(e.to_string()))?;
    println!("{summary}");
    println!("snapshots written to {}", resolved.out_dir.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_c_property(args: CPropertyArgs) -> Result<ExitCode, Outcome> {
    if args.grids.is_empty() {
        return Err(UsageError("need at least one grid size".into()).into());
    }
    let mut config = RunConfig64::new(args.scheme);
    config.manning = if args.scheme == Scheme::QTra3 { args.manning } else { 0.0 };
    let bottom: BottomFn<f64> = Arc::new(scaled_bump);
    let report = check_c_property(
        args.scheme,
        &bottom,
        (0.0, 1.0),
        1.0,
        &args.grids,
        args.steps,
        &config,
    )
    .map_err(|e| Outcome::Failure(e.to_string()))?;
    println!("{report}");
    println!();
    print!("{}", report.key_values());

    let expected_exact = matches!(args.scheme, Scheme::QTra2 | Scheme::QTra3);
    let met = matches!(
        (expected_exact, report.classification),
        (true, Classification::Exact) | (false, Classification::Approximate { .. })
    );
    if met {
        Ok(ExitCode::SUCCESS)
    } else {
        Err(Outcome::Failure(format!(
            "scheme {} expected {} but measured {}",
            args.scheme,
            if expected_exact { "Exact" } else { "Approximate" },
            report.classification
        )))
    }
}
