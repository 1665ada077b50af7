//! `casim`: command-line front end for the casim library.

mod commands;
mod input;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] casim::Error),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Input(String),
}

#[derive(Parser, Debug)]
#[command(name = "casim", version, about = "Simulation theory of one-dimensional cellular automata")]
pub struct Cli {
    /// Print reports as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Multiply every work limit by this factor.
    #[arg(long, global = true, value_name = "FACTOR", default_value_t = 1)]
    cap: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct BoundArgs {
    /// Largest iterative power.
    #[arg(long, default_value_t = 2)]
    n_max: usize,
    /// Largest number of product factors.
    #[arg(long, default_value_t = 2)]
    k_max: usize,
    /// Largest product size.
    #[arg(long, default_value_t = 16)]
    size_cap: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Render {
    Text,
    Pgm,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Characterization,
    AffineClosure,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Summarize an algebra.
    Show { file: Option<PathBuf> },
    /// Elementary rule by Wolfram number.
    Eca { number: u8 },
    /// Linear rule x ↦ Σ a_i x_i over F_p.
    Canonical {
        #[arg(short, long)]
        p: u32,
        /// Coefficients a_{-r} .. a_r.
        #[arg(short, long, num_args = 1.., required = true)]
        a: Vec<u32>,
        /// Emit the AFFINE form instead of the table.
        #[arg(long)]
        affine: bool,
    },
    /// Iterative power B^[n].
    Power {
        #[arg(short, long)]
        n: usize,
        file: Option<PathBuf>,
    },
    /// Cartesian product of the given algebras (`-` reads standard input).
    Product {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Space-time diagram.
    Evolve {
        /// Digit string, comma list, or single:s.
        #[arg(long, default_value = "single:1")]
        init: String,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        /// background:b or cyclic:N.
        #[arg(long, default_value = "background:0")]
        boundary: String,
        #[arg(long, value_enum, default_value_t = Render::Text)]
        render: Render,
        /// Draw state 0 as a dot.
        #[arg(long)]
        dots: bool,
        file: Option<PathBuf>,
    },
    /// All subalgebra carriers.
    Subalgebras { file: Option<PathBuf> },
    /// All congruences.
    Congruences { file: Option<PathBuf> },
    /// Quotient by a congruence, or check that the input is a quotient of another algebra.
    Quotient {
        /// Blocks such as `0,2/1,3`.
        #[arg(long)]
        classes: Option<String>,
        /// Algebra to divide when checking.
        #[arg(long, requires = "check")]
        of: Option<PathBuf>,
        /// Check that the input is isomorphic to a quotient of --of.
        #[arg(long, requires = "of")]
        check: bool,
        file: Option<PathBuf>,
    },
    /// Isomorphism test.
    Iso { a: PathBuf, b: PathBuf },
    /// Affine form in the table's own encoding.
    FitAffine {
        #[arg(short, long)]
        p: Option<u32>,
        /// Relabel states if the encoding itself is not affine.
        #[arg(long)]
        relabel: bool,
        file: Option<PathBuf>,
    },
    /// F^n applied to the unit configuration.
    E0 {
        #[arg(short, long)]
        n: usize,
        file: Option<PathBuf>,
    },
    /// Component matrices, of the n-th power when -n is given.
    Matrices {
        #[arg(short, long)]
        n: Option<usize>,
        file: Option<PathBuf>,
    },
    /// Shape of the outermost component matrices of the n-th power.
    Structure {
        #[arg(short, long)]
        n: usize,
        file: Option<PathBuf>,
    },
    /// Common invariant subspaces of the component matrices.
    InvariantSubspaces {
        #[arg(short, long)]
        n: Option<usize>,
        file: Option<PathBuf>,
    },
    /// Whether the component matrices have no proper invariant subspace.
    Simple {
        #[arg(short, long)]
        n: Option<usize>,
        file: Option<PathBuf>,
    },
    /// Compare B^[p^k·l] with p^k copies of B^[l].
    Split {
        #[arg(short, long)]
        k: u32,
        #[arg(short, long)]
        l: usize,
        file: Option<PathBuf>,
    },
    /// Affine classification and simulation capacity.
    Classify { file: Option<PathBuf> },
    /// Whether B simulates A.
    Simulates {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Bounded check of a closure property of a rule.
    Verify {
        #[arg(value_enum)]
        check: Check,
        file: Option<PathBuf>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
}

/// What a command produced.
pub enum Output {
    File(String),
    Report(Report),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let caps = casim::Caps::default().scaled(cli.cap);
    let (text, code) = match commands::run(&cli.command, &caps) {
        Ok(Output::File(text)) => (text, 0),
        Ok(Output::Report(r)) => (r.render(cli.json), r.result.exit_code()),
        Err(e) => {
            eprintln!("casim: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("casim: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
