use clap::{Parser, Subcommand, ValueEnum};
use lgvw::cli;
use lgvw::error::Error;
use std::process::ExitCode;
use std::time::Instant;

/// Exact-arithmetic workbench for Landau-Ginzburg pairs.
#[derive(Parser)]
#[command(name = "lgvw", version, about)]
struct Args {
    #[command(subcommand)]
    command: Command,

    /// Catalog pair or polynomial name
    #[arg(long, global = true)]
    pair: Option<String>,

    /// Polynomial text, e.g. "x1^3+x2^3+x3^3"
    #[arg(long, global = true)]
    poly: Option<String>,

    /// Group spec: "J", "max", "SL", or generator lists like [[1,3],[1,3],[1,3]]
    #[arg(long, global = true)]
    group: Option<String>,

    /// Largest Virasoro index to check
    #[arg(long, global = true, default_value_t = 3)]
    kmax: i64,

    /// Level truncation
    #[arg(short = 'M', long = "truncation", global = true, default_value_t = 8)]
    truncation: i64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Weights, central charge, atoms, group data
    Analyze,
    /// Basis, gradings, pairing, supertrace, Poincare cross-checks
    StateSpace,
    /// Commutation relations of the Virasoro operators
    Virasoro,
    /// Quantization identities and the cocycle
    Quantize,
    /// Krawitz mirror map verification
    Mirror,
    /// Quantum Euler determinant for x1^d + x2^d
    Semisimple {
        #[arg(long, short)]
        d: u32,
    },
    /// Census of invertible three-variable CY polynomials
    CyCensus,
    /// Degree criterion for CY pairs with large central charge
    DegreeCriterion,
    /// Elliptic-curve operator identification checks
    Elliptic,
    /// The full catalog battery
    All,
}

fn run(args: &Args) -> lgvw::Result<lgvw::report::Report> {
    if args.kmax < -1 {
        return Err(Error::Config("kmax must be at least -1".into()));
    }
    if args.truncation < 2 * args.kmax + 2 {
        return Err(Error::Config(format!(
            "truncation {} too small for kmax {} (need at least {})",
            args.truncation,
            args.kmax,
            2 * args.kmax + 2
        )));
    }
    let needs_pair = matches!(
        args.command,
        Command::Analyze
            | Command::StateSpace
            | Command::Virasoro
            | Command::Quantize
            | Command::Mirror
            | Command::DegreeCriterion
    );
    let input = if needs_pair {
        Some(cli::resolve_input(
            args.pair.as_deref(),
            args.poly.as_deref(),
            args.group.as_deref(),
        )?)
    } else {
        None
    };
    match &args.command {
        Command::Analyze => cli::cmd_analyze(input.as_ref().unwrap()),
        Command::StateSpace => cli::cmd_state_space(input.as_ref().unwrap()),
        Command::Virasoro => cli::cmd_virasoro(input.as_ref().unwrap(), args.kmax, args.truncation),
        Command::Quantize => cli::cmd_quantize(input.as_ref().unwrap(), args.kmax, args.truncation),
        Command::Mirror => cli::cmd_mirror(input.as_ref().unwrap()),
        Command::Semisimple { d } => cli::cmd_semisimple(*d),
        Command::CyCensus => cli::cmd_cy_census(),
        Command::DegreeCriterion => cli::cmd_degree_criterion(input.as_ref().unwrap()),
        Command::Elliptic => cli::cmd_elliptic(args.kmax, args.truncation),
        Command::All => cli::cmd_all(args.kmax, args.truncation),
    }
}

fn main() -> ExitCode {
    if let Ok(workers) = std::env::var("LGVW_WORKERS") {
        if let Ok(n) = workers.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let args = Args::parse();
    let start = Instant::now();
    match run(&args) {
        Ok(mut report) => {
            report.timing_ms = start.elapsed().as_millis();
            let body = match args.format {
                Format::Text => report.to_text(),
                Format::Json => report.to_json(),
            };
            if let Some(path) = &args.out {
                if let Err(e) = std::fs::write(path, &body) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{body}");
            }
            if report.any_failed() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::MapNotWellDefined(_) => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
