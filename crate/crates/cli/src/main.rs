use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use k3verify_core::families::ParameterPoint;
use k3verify_core::verify::{run_suite, VerifyOptions};
use num_rational::BigRational;

/// Exact verification of the polynomial, lattice and fibration identities
/// of the K3 family over P(4,6,10,12,18).
#[derive(Parser, Debug)]
#[command(name = "k3verify", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Trials for the randomized identity test.
    #[arg(long, global = true, default_value_t = 100)]
    trials: u64,
    /// Coordinate bound for the norm -2 vector search.
    #[arg(long, global = true, default_value_t = 2)]
    bound: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// disc_x0(R) = c r^3 d90.
    DiscFactor {
        /// Randomized identity test instead of the symbolic computation.
        #[arg(long, conflicts_with = "symbolic")]
        pit: bool,
        #[arg(long)]
        symbolic: bool,
    },
    /// Derived d90 against the bundled printed polynomial.
    D90Check,
    /// Signatures, discriminant forms, Kneser conditions, complement of M.
    Lattices,
    /// Singular fibers, for one point or the sampled suite.
    Fibers {
        /// Comma-separated t4,t6,t10,t12,t18 (integers or fractions).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
    },
    /// The four-parameter family and its discriminant factorization.
    Cd,
    /// Irreducibility certificate for d90.
    Irreducible,
    /// Dimensions of graded pieces.
    Dims {
        #[arg(long, default_value_t = 60)]
        max_weight: u64,
    },
    /// Every suite.
    All,
}

fn parse_point(text: &str) -> Result<ParameterPoint> {
    let coords: Vec<BigRational> = text
        .split(',')
        .map(|s| s.trim().parse::<BigRational>().with_context(|| format!("bad coordinate `{}`", s.trim())))
        .collect::<Result<_>>()?;
    if coords.len() != 5 {
        bail!("expected 5 coordinates t4,t6,t10,t12,t18, got {}", coords.len());
    }
    Ok(ParameterPoint::new(coords)?)
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("K3VERIFY_THREADS") else { return Ok(()) };
    let n: usize = v.trim().parse().with_context(|| format!("K3VERIFY_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        bail!("K3VERIFY_THREADS must be at least 1");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn options(cli: &Cli) -> Result<(&'static str, VerifyOptions)> {
    let mut opts = VerifyOptions { seed: cli.global.seed, trials: cli.global.trials, bound: cli.global.bound, ..Default::default() };
    if opts.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let suite = match &cli.command {
        Command::DiscFactor { pit, .. } => {
            opts.pit = *pit;
            "disc-factor"
        }
        Command::D90Check => "d90-check",
        Command::Lattices => "lattices",
        Command::Fibers { t } => {
            opts.fiber_point = t.as_deref().map(parse_point).transpose()?;
            "fibers"
        }
        Command::Cd => "cd",
        Command::Irreducible => "irreducible",
        Command::Dims { max_weight } => {
            opts.max_weight = *max_weight;
            "dims"
        }
        Command::All => "all",
    };
    Ok((suite, opts))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let (suite, opts) = match configure_threads().and_then(|_| options(&cli)) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = run_suite(suite, &opts).expect("suite names come from the parser");
    let mut out = std::io::stdout().lock();
    // A closed pipe (e.g. `| head`) is not a verification failure.
    let _ = if cli.global.json { writeln!(out, "{}", report.to_json()) } else { write!(out, "{report}") };
    ExitCode::from(report.exit_code() as u8)
}
