use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use defcohom::scalars::{parse_rational, Rational};
use defcohom_cli::commands::{self, ComplexArgs, CoordSelection, InputError, LambdaChoice, Source};
use defcohom_cli::report::RunReport;

/// Deformed Lie algebra cohomology, covering and coordinate checks.
///
/// Exit codes: 0 pass, 1 verification failure, 2 input error.
#[derive(Parser, Debug)]
#[command(name = "defcohom", version)]
struct Cli {
    /// Seed for every randomized step (probes, random cochains, random algebras).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Include wall-clock time in the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct ComplexOpts {
    /// Presentation file (.alg) or embedded fixture name such as pkz.alg.
    file: String,
    #[arg(long)]
    degree: usize,
    /// Restrict cochains to the declared exterior ideal.
    #[arg(long)]
    restrict_ideal: bool,
    /// Closed mark to use as ζ (defaults to the first one declared).
    #[arg(long)]
    zeta: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Verify d(dω) = 0 for a presentation.
    Check { file: String },
    /// Deformed cohomology dimension and representatives in one degree.
    Cohomology {
        #[command(flatten)]
        opts: ComplexOpts,
        /// λ as an exact rational, e.g. -1/4.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "generic", required_unless_present = "generic")]
        lambda: Option<String>,
        /// Evaluate at a seeded random λ avoiding every resonance candidate.
        #[arg(long)]
        generic: bool,
    },
    /// All λ at which the cohomology dimension differs from the generic one.
    Resonances {
        #[command(flatten)]
        opts: ComplexOpts,
    },
    /// Check that a covering's extended total derivatives commute on the equation.
    VerifyCovering { file: String },
    /// Verify structure equations, closed forms and extensions in coordinates.
    VerifyCoords {
        /// Shipped fixture name (pkz, bf) or a .mcf file.
        fixture: String,
        /// Presentation file for algebras not shipped with the tool.
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, conflicts_with_all = ["equation", "extension", "closed"])]
        all: bool,
        #[arg(long, conflicts_with_all = ["extension", "closed"])]
        equation: Option<String>,
        #[arg(long, conflicts_with = "closed")]
        extension: Option<String>,
        #[arg(long)]
        closed: Option<String>,
    },
    /// Run every reproduction criterion and print one verdict per claim.
    ReproducePaper,
}

fn complex_args(opts: &ComplexOpts, seed: u64) -> ComplexArgs {
    ComplexArgs { degree: opts.degree, restrict_ideal: opts.restrict_ideal, zeta: opts.zeta.clone(), seed }
}

fn parse_lambda(text: &str) -> Result<Rational, InputError> {
    parse_rational(text).map_err(|e| InputError(format!("--lambda {text}: {e}")))
}

fn run(cli: &Cli, echo: Vec<String>) -> Result<RunReport, InputError> {
    match &cli.command {
        Command::Check { file } => commands::check(echo, &Source::load(file)?),
        Command::Cohomology { opts, lambda, generic } => {
            let choice = match (lambda, generic) {
                (Some(l), false) => LambdaChoice::At(parse_lambda(l)?),
                _ => LambdaChoice::Generic,
            };
            commands::cohomology(echo, &Source::load(&opts.file)?, &complex_args(opts, cli.seed), &choice)
        }
        Command::Resonances { opts } => commands::resonances(echo, &Source::load(&opts.file)?, &complex_args(opts, cli.seed)),
        Command::VerifyCovering { file } => commands::verify_covering(echo, &Source::load(file)?),
        Command::VerifyCoords { fixture, algebra, all: _, equation, extension, closed } => {
            let selection = match (equation, extension, closed) {
                (Some(e), _, _) => CoordSelection::Equation(e.clone()),
                (_, Some(e), _) => CoordSelection::Extension(e.clone()),
                (_, _, Some(c)) => CoordSelection::Closed(c.clone()),
                _ => CoordSelection::All,
            };
            let algebra = algebra.as_deref().map(Source::load).transpose()?;
            commands::verify_coords(echo, fixture, algebra.as_ref(), &selection)
        }
        Command::ReproducePaper => Ok(commands::reproduce(echo, cli.seed)),
    }
}

fn main() -> ExitCode {
    let echo: Vec<String> = std::iter::once("defcohom".to_string()).chain(std::env::args().skip(1)).collect();
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli, echo) {
        Ok(mut report) => {
            if cli.timing {
                report.timing_ms = Some(start.elapsed().as_millis());
            }
            match cli.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => print!("{}", report.to_json()),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
