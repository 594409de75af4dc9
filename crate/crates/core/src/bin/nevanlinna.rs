use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nevanlinna::cli::{self, BuildKind, CliError, CliResult, GridSpec, DEFAULT_FLOOR};

#[derive(Parser)]
#[command(name = "nevanlinna", about = "Nevanlinna function transforms, Jacobi and canonical-system m-functions")]
struct Args {
    /// Write the data product here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// m-function of a Jacobi matrix on a grid (CSV)
    Mfun {
        jacobi: PathBuf,
        /// re0:re1:n,im0:im1:n
        #[arg(long, conflicts_with = "lambda", allow_hyphen_values = true)]
        grid: Option<String>,
        /// RE,IM
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = DEFAULT_FLOOR)]
        floor: f64,
    },
    /// Γ̂ iteration from a start file or "zero" (CSV)
    Iterate {
        start: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        n: usize,
        /// Dimension of the zero start.
        #[arg(long, default_value_t = 1)]
        dim: usize,
    },
    /// Kac algorithm on a scalar Jacobi matrix (JSON)
    Kac {
        jacobi: PathBuf,
        /// Number of intervals; defaults to the matrix size.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Weyl-disk m-function of a step Hamiltonian (JSON)
    Weyl {
        hamiltonian: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Model Jacobi matrices and seeded random functions (JSON)
    Build {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a named check suite ("all" for every suite)
    Verify { suite: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    J0,
    Jhat0,
    RandomNevanlinna,
    RandomInterval,
}

fn run(args: Args) -> CliResult {
    let mut out: Box<dyn Write> = match &args.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::parse(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    let log = &mut io::stderr();
    match args.command {
        Command::Mfun { jacobi, grid, lambda, floor } => {
            let grid = match (grid, lambda) {
                (Some(g), _) => GridSpec::parse(&g, floor)?,
                (None, Some(l)) => GridSpec::point(cli::parse_lambda(&l)?, floor),
                (None, None) => return Err(CliError::parse("give --grid or --lambda")),
            };
            cli::cmd_mfun(&cli::read_input(&jacobi)?, &grid, &mut out, log)?;
        }
        Command::Iterate { start, lambda, n, dim } => {
            let text = if start == "zero" { None } else { Some(cli::read_input(start.as_ref())?) };
            cli::cmd_iterate(text.as_deref(), dim, cli::parse_lambda(&lambda)?, n, &mut out, log)?;
        }
        Command::Kac { jacobi, n } => cli::cmd_kac(&cli::read_input(&jacobi)?, n, &mut out, log)?,
        Command::Weyl { hamiltonian, lambda, tol } => {
            cli::cmd_weyl(&cli::read_input(&hamiltonian)?, cli::parse_lambda(&lambda)?, tol, &mut out, log)?
        }
        Command::Build { kind, d, n, seed } => {
            let kind = match kind {
                Kind::J0 => BuildKind::J0,
                Kind::Jhat0 => BuildKind::Jhat0,
                Kind::RandomNevanlinna => BuildKind::RandomNevanlinna,
                Kind::RandomInterval => BuildKind::RandomInterval,
            };
            cli::cmd_build(kind, d, n, seed, &mut out)?;
        }
        Command::Verify { suite } => cli::cmd_verify(&suite, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
