//! `glinear`: build, verify, trim and solve generalized linearizations from JSON files.
//!
//! Every command prints a JSON report on stdout. Exit status: 0 ok, 1 schema or
//! parse error, 2 precondition violation, 3 verification failure.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use glinear::{Error, Field, Tol};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "glinear", version, about = "Generalized linearizations of rectangular matrix polynomials")]
struct Cli {
    /// Scalar field; defaults to the field declared by the first input file.
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,

    /// Relative singular-value threshold for float rank decisions.
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    Rational,
    Float64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    L1,
    L2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BasisArg {
    Right,
    Left,
    Both,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sizes, grade, degree, normal rank and Frobenius norm of P.
    Info { poly: PathBuf },

    /// Builds a member of L1(P) or L2(P).
    Build {
        poly: PathBuf,
        #[arg(long, value_enum, default_value = "l1")]
        side: SideArg,
        /// Ansatz vector: a JSON array or {"vector": [...]}.
        #[arg(long, required_unless_present = "companion")]
        ansatz: Option<PathBuf>,
        /// Free block W (or Ŵ for l2): a JSON array of rows or {"matrix": [...]}.
        #[arg(long, required_unless_present = "companion")]
        w: Option<PathBuf>,
        /// The block companion form of the chosen side.
        #[arg(long, conflicts_with_all = ["ansatz", "w"])]
        companion: bool,
    },

    /// Verifies that L is a (strong) g-linearization or linearization of P.
    Check {
        pencil: PathBuf,
        poly: PathBuf,
        #[arg(long)]
        strong: bool,
        /// Compare against diag(P, I_{k−1} ⊗ I_{m,n}); the default for km×kn pencils.
        #[arg(long, conflicts_with = "lin")]
        glin: bool,
        /// Compare against diag(P, I_s).
        #[arg(long)]
        lin: bool,
    },

    /// Trims an ansatz pencil to a smaller strong linearization.
    Trim {
        pencil: PathBuf,
        /// Invertible D of order (k−1)·max(m, n); defaults to the identity.
        #[arg(long)]
        d: Option<PathBuf>,
    },

    /// Complete eigenstructure of P.
    Solve { poly: PathBuf },

    /// Minimal bases of P recovered from an ansatz pencil or trim result.
    Recover {
        pencil: PathBuf,
        poly: PathBuf,
        /// glin_l1, glin_l2, trimmed_l1 or trimmed_l2.
        #[arg(long)]
        mode: String,
        #[arg(long, value_enum, default_value = "both")]
        side: BasisArg,
    },

    /// Random perturbations of a trimmed pencil against the backward-error bound.
    Backward {
        poly: PathBuf,
        trim: PathBuf,
        /// Perturbation size as a fraction of the admissible radius, in (0, 1).
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Tolerance factor for the optimal-scaling conditions.
        #[arg(long, default_value_t = 2.0)]
        factor: f64,
    },

    /// Smallest singular value of the convolution matrices of H_{k−1} ⊗ I_n against the closed form.
    LemmaCheck {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },

    /// Regenerates a worked example and checks its documented outcome.
    Examples {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        id: u8,
    },
}

/// A command's stdout text and exit status.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn schema(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Dimension(_) | Error::FieldMismatch { .. } | Error::Parse(_) | Error::Json(_) => 1,
            Error::Unsupported(_) | Error::Invalid(_) | Error::Precondition(_) | Error::Structure(_) => 2,
            Error::Verification(_) => 3,
        };
        Failure { code, message: e.to_string() }
    }
}

pub struct Ctx {
    pub field: Option<Field>,
    pub tol: Tol,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let tol = match cli.tol {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            eprintln!("error: --tol must be a positive number");
            return ExitCode::from(1);
        }
        Some(t) => Tol::with_rank_rel(t),
        None => Tol::default(),
    };
    let ctx = Ctx {
        field: cli.field.map(|f| match f {
            FieldArg::Rational => Field::Rational,
            FieldArg::Float64 => Field::Float64,
        }),
        tol,
    };
    match commands::run(&cli.command, &ctx) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            let report = json!({ "kind": "error", "exit_code": f.code, "message": f.message });
            print!("{}", glinear::io::to_pretty(&report));
            ExitCode::from(f.code)
        }
    }
}
