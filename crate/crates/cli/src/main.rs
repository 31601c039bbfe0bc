use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wavefront::commands::{self, SolveRequest, SpeedArg};
use wavefront::sweep::{self, SweepSpec};
use wavefront::{CliError, EXIT_BAD_INPUT};
use wavefront_core::charroots::DEFAULT_BAND;
use wavefront_core::prelude::*;
use wavefront_core::profiles::DEFAULT_STEP;

/// Monotone traveling fronts of the delayed KPP-Fisher equation.
///
/// Verbosity is taken from WAVEFRONT_LOG (e.g. `WAVEFRONT_LOG=info`).
#[derive(Debug, Parser)]
#[command(name = "wavefront", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Existence verdict and tail regimes of (h, c), as JSON. Exit 3 if no front exists.
    Region {
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        /// Speed, or `critical` for c*(h).
        #[arg(long, allow_negative_numbers = true)]
        c: SpeedArg,
        /// Relative band in c for recognising c = 2 and c = c*(h).
        #[arg(long, default_value_t = DEFAULT_BAND)]
        band: f64,
    },
    /// Characteristic roots at both equilibria, as JSON.
    Roots {
        #[arg(long, allow_negative_numbers = true)]
        h: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: SpeedArg,
    },
    /// Critical curves ε*(h), c*(h), ε#(h), c#(h) as CSV.
    Curves {
        /// Evenly spaced delays on [0, h-max] (the curve breakpoints are added).
        #[arg(long, default_value_t = 200)]
        points: usize,
        #[arg(long, default_value_t = 0.6)]
        h_max: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Computes the front and writes profile, report and tail fits.
    Solve {
        #[arg(long, allow_negative_numbers = true, required_unless_present = "sweep")]
        h: Option<f64>,
        /// Speed, or `critical` for c*(h).
        #[arg(long, allow_negative_numbers = true, required_unless_present = "sweep")]
        c: Option<SpeedArg>,
        /// Grid step target.
        #[arg(long, default_value_t = DEFAULT_STEP)]
        delta: f64,
        /// Stop when the sup increment drops below this.
        #[arg(long, default_value_t = IterationOptions::default().tol)]
        tol: f64,
        #[arg(long, default_value_t = IterationOptions::default().max_iter)]
        max_iter: usize,
        /// Also write the first k iterates, starting with the lower solution.
        #[arg(long, default_value_t = 0)]
        emit_iterates: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Do not bound the iteration by the upper solution.
        #[arg(long)]
        no_upper: bool,
        /// Solve over a grid `h0:h1:n,c0:c1:m` instead of a single (h, c).
        #[arg(long, conflicts_with_all = ["h", "c"])]
        sweep: Option<SweepSpec>,
    },
    /// Checks the solver against the explicit front at ε = 0.24, h = 0. Exit 1 if a threshold is missed.
    Validate {
        #[arg(long, default_value_t = DEFAULT_STEP)]
        delta: f64,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let curves = CriticalCurves::new()?;
    match cli.command {
        Command::Region { h, c, band } => commands::region(&curves, h, c, band),
        Command::Roots { h, c } => commands::roots(&curves, h, c),
        Command::Curves { points, h_max, out } => {
            let rows = commands::curve_rows(&curves, points, h_max)?;
            match out {
                Some(path) => commands::write_curves(std::fs::File::create(path)?, &curves, &rows)?,
                None => commands::write_curves(io::stdout().lock(), &curves, &rows)?,
            }
            Ok(0)
        }
        Command::Solve {
            h,
            c,
            delta,
            tol,
            max_iter,
            emit_iterates,
            out_dir,
            no_upper,
            sweep,
        } => {
            let options = SolveOptions {
                delta,
                iteration: IterationOptions {
                    tol,
                    max_iter,
                    emit_iterates,
                    ..IterationOptions::default()
                },
                use_upper: !no_upper,
                ..SolveOptions::default()
            };
            match (sweep, h, c) {
                (Some(spec), _, _) => sweep::run(&curves, &spec, &options, &out_dir),
                (None, Some(h), Some(c)) => commands::solve(&curves, &SolveRequest { h, c, options, out_dir }),
                _ => Err(CliError::Usage("solve needs --h and --c, or --sweep".into())),
            }
        }
        Command::Validate { delta } => commands::validate(delta),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("WAVEFRONT_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            debug_assert!(code != 0);
            ExitCode::from(if code == 0 { EXIT_BAD_INPUT } else { code })
        }
    }
}
