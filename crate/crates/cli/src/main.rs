use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvlqr::SolverOptions;
use cvlqr_cli::commands::{self, Flags, MethodChoice, Outcome};
use cvlqr_cli::error::{CliError, CliResult, EXIT_OK};
use cvlqr_cli::{bench, doc, write_file, write_sidecars};

#[derive(Parser)]
#[command(
    name = "cvlqr",
    version,
    about = "LQR for complex-valued linear, antilinear and time-delay systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Problem file (JSON).
    input: PathBuf,
    /// Result file; stdout if omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Relative convergence tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write the per-iteration residual trace as `<stem>_trace.csv`.
    #[arg(long)]
    trace: bool,
    /// Record the Riccati iterate with this index in the result.
    #[arg(long)]
    snapshot: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the bimatrix Riccati equation of a complex-valued linear system.
    SolveComplex(SolveArgs),
    /// Solve the LQR problem of an antilinear system.
    SolveAntilinear {
        #[command(flatten)]
        args: SolveArgs,
        /// Riccati route; `all` runs the three and reports their discrepancies.
        #[arg(long, value_enum)]
        method: Option<MethodChoice>,
    },
    /// Solve the LQR problem of a real system with one-step state delay.
    SolveDelay {
        #[command(flatten)]
        args: SolveArgs,
        /// Simulate this many steps and write `<stem>_trajectory.csv`.
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Run the rank test on a problem file.
    CheckStabilizability {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compare iteration counts of the Riccati routes.
    Bench {
        /// Directory of problem files.
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        dir: Option<PathBuf>,
        /// Random antilinear suite: N M COUNT SEED.
        #[arg(long, num_args = 4, value_names = ["N", "M", "COUNT", "SEED"])]
        random: Option<Vec<u64>>,
        /// CSV file; stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Check a result document against its embedded input.
    Verify { result: PathBuf },
}

fn flags(a: &SolveArgs) -> Flags {
    Flags {
        tol: a.tol,
        max_iter: a.max_iter,
        trace: a.trace,
        snapshot: a.snapshot,
        ..Default::default()
    }
}

fn emit(outcome: &Outcome, output: Option<&Path>, input: &Path, summary_to_stdout: bool) -> CliResult<()> {
    let json = serde_json::to_string_pretty(&outcome.document).expect("documents serialize") + "\n";
    match output {
        Some(path) => write_file(path, &json)?,
        None if !summary_to_stdout => print!("{json}"),
        None => {}
    }
    for path in write_sidecars(&outcome.sidecars, output, input)? {
        eprintln!("wrote {}", path.display());
    }
    for line in &outcome.summary {
        if summary_to_stdout {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
    Ok(())
}

fn solve(args: &SolveArgs, f: Flags, run: fn(&doc::InputDocument, &Flags) -> CliResult<Outcome>) -> CliResult<i32> {
    let input = doc::load(&args.input)?;
    let outcome = run(&input, &f)?;
    emit(&outcome, args.output.as_deref(), &args.input, false)?;
    Ok(outcome.exit_code)
}

fn run(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::SolveComplex(a) => solve(&a, flags(&a), commands::solve_complex),
        Command::SolveAntilinear { args, method } => {
            let f = Flags { method, ..flags(&args) };
            solve(&args, f, commands::solve_antilinear)
        }
        Command::SolveDelay { args, horizon } => {
            let f = Flags {
                horizon,
                ..flags(&args)
            };
            solve(&args, f, commands::solve_delay)
        }
        Command::CheckStabilizability { input, output } => {
            let doc = doc::load(&input)?;
            let outcome = commands::check_stabilizability(&doc)?;
            emit(&outcome, output.as_deref(), &input, true)?;
            Ok(outcome.exit_code)
        }
        Command::Verify { result } => {
            let outcome = commands::verify(&result)?;
            for line in &outcome.summary {
                println!("{line}");
            }
            Ok(outcome.exit_code)
        }
        Command::Bench {
            dir,
            random,
            output,
            tol,
            max_iter,
        } => {
            let mut opts = SolverOptions::default();
            if let Some(t) = tol {
                opts.tol = t;
            }
            if let Some(m) = max_iter {
                opts.max_iter = m;
            }
            opts.validate()?;
            let instances = match (dir, random) {
                (Some(d), _) => bench::directory_instances(&d)?,
                (None, Some(r)) => bench::random_instances(r[0] as usize, r[1] as usize, r[2] as usize, r[3]),
                (None, None) => unreachable!("clap requires one of dir/--random"),
            };
            let rows = bench::run(&instances, &opts);
            let csv = bench::table(&rows).to_csv()?;
            match output {
                Some(p) => write_file(&p, &csv)?,
                None => {
                    let mut out = std::io::stdout().lock();
                    out.write_all(csv.as_bytes()).map_err(|source| CliError::Write {
                        path: "<stdout>".into(),
                        source,
                    })?;
                }
            }
            for line in bench::summary(&rows) {
                eprintln!("{line}");
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.diagnostic());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
