//! `vinberg`: JSON in, JSON out. Indices are 1-based, label ∞ is written 0,
//! rationals are strings such as `"-3/2"`.
//!
//! Exit status: 0 positive result, 1 definitive negative verdict, 2 bad
//! input or usage, 3 indeterminate within the given caps.

mod commands;
mod input;

use std::fmt;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vinberg::forge::ForgeError;
use vinberg::integral::IntegralError;
use vinberg::wire::WireError;
use vinberg::{CartanError, CoxeterError, RepError};

#[derive(Parser)]
#[command(name = "vinberg", version, about = "Exact computations with linear reflection groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Check that the given matrices and representation are well formed.
    Validate,
    /// Spherical / affine / large classification and quasi-Lannér search.
    Classify,
    /// Check a Cartan matrix against a Coxeter matrix pair by pair.
    Compatible,
    /// Symmetrizing weights, or a cycle whose orientations disagree.
    Symmetrizable,
    /// Positive, zero or negative type of an indecomposable Cartan matrix.
    #[command(name = "type")]
    Type,
    /// Products of the Cartan matrix along simple cycles.
    Cycles,
    /// Reflection representation spanned by the roots of a Cartan matrix.
    BuildRep,
    /// Irreducible quotient of a reflection representation.
    Reduce,
    /// Orders of pairwise products of generators.
    Relations,
    /// Zariski closure of the image: orthogonal group or SL±.
    Closure,
    /// Conjugate an irreducible representation into GL_n(Z).
    Integralize,
    /// Construct an integral non-symmetrizable Cartan matrix, or check a bundle.
    Forge,
    /// Integral representations of reflection subgroups up to a target dimension.
    Pipeline,
    /// List or show the built-in examples.
    Corpus,
}

/// Every flag is accepted by every command; each command reads the ones it needs.
#[derive(Args, Default)]
pub struct Options {
    /// Coxeter matrix: inline JSON, a file, or corpus:NAME.
    #[arg(long, global = true)]
    pub coxeter: Option<String>,
    /// Cartan matrix: inline JSON, a file, or corpus:NAME.
    #[arg(long, global = true)]
    pub cartan: Option<String>,
    /// Reflection representation: inline JSON, a file, or corpus:NAME.
    #[arg(long, global = true)]
    pub rep: Option<String>,
    /// Longest cycle to enumerate (cycles).
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    /// Maximum number of simple cycles to enumerate.
    #[arg(long, global = true)]
    pub cycle_budget: Option<usize>,
    /// Largest order checked for a pairwise product (relations).
    #[arg(long, global = true)]
    pub order_cap: Option<u32>,
    /// Number of group elements tried when certifying irreducibility (closure).
    #[arg(long, global = true)]
    pub word_cap: Option<usize>,
    /// Lattice saturation rounds (integralize).
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// spanning-tree, rank-bump or general (forge).
    #[arg(long, global = true)]
    pub construction: Option<String>,
    /// Pairs with label ∞ to scale, e.g. 1-2,3-5 (forge --construction general).
    #[arg(long, global = true)]
    pub pairs: Option<String>,
    /// Re-check a certificate bundle written by forge.
    #[arg(long, global = true)]
    pub verify: Option<String>,
    /// Final dimension (pipeline).
    #[arg(long, global = true)]
    pub target_dim: Option<usize>,
    /// Corpus entry to show.
    #[arg(long, global = true)]
    pub name: Option<String>,
    /// List corpus entries (the default for `corpus`).
    #[arg(long, global = true)]
    pub list: bool,
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
}

/// Errors that end a command before it reaches a verdict.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Rep(RepError),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(s) => f.write_str(s),
            Failure::Rep(e) => f.write_str(&rep_message(e)),
        }
    }
}

// Library errors carry 0-based indices; messages shown to the user are 1-based.

fn coxeter_message(e: CoxeterError) -> String {
    use CoxeterError::*;
    match e {
        NonSymmetric { i, j } => NonSymmetric { i: i + 1, j: j + 1 },
        BadDiagonal { i } => BadDiagonal { i: i + 1 },
        BadOffDiagonal { i, j } => BadOffDiagonal { i: i + 1, j: j + 1 },
        UnsupportedLabel { i, j, label } => UnsupportedLabel { i: i + 1, j: j + 1, label },
        e => e,
    }
    .to_string()
}

fn cartan_message(e: CartanError) -> String {
    use CartanError::*;
    match e {
        BadDiagonal { i } => BadDiagonal { i: i + 1 },
        PositiveOffDiagonal { i, j } => PositiveOffDiagonal { i: i + 1, j: j + 1 },
        ZeroAsymmetry { i, j } => ZeroAsymmetry { i: i + 1, j: j + 1 },
        UnsupportedLabel { i, j, label } => UnsupportedLabel { i: i + 1, j: j + 1, label },
        e => e,
    }
    .to_string()
}

fn rep_message(e: &RepError) -> String {
    match e {
        RepError::RelationViolation { pair, power } => {
            format!("relation violated for pair ({}, {}) at power {power}", pair.0 + 1, pair.1 + 1)
        }
        RepError::BadLength { index, expected, got } => RepError::BadLength { index: index + 1, expected: *expected, got: *got }.to_string(),
        RepError::BadSelfPairing { index, value } => RepError::BadSelfPairing { index: index + 1, value: value.clone() }.to_string(),
        RepError::NotCartan(c) => format!("pairings do not form a Cartan matrix: {}", cartan_message(c.clone())),
        e => e.to_string(),
    }
}

impl From<RepError> for Failure {
    fn from(e: RepError) -> Self {
        Failure::Rep(e)
    }
}

impl From<CoxeterError> for Failure {
    fn from(e: CoxeterError) -> Self {
        Failure::Input(coxeter_message(e))
    }
}

impl From<CartanError> for Failure {
    fn from(e: CartanError) -> Self {
        Failure::Input(cartan_message(e))
    }
}

impl From<WireError> for Failure {
    fn from(e: WireError) -> Self {
        match e {
            WireError::Rep(e) => Failure::Rep(e),
            WireError::Coxeter(e) => e.into(),
            WireError::Cartan(e) => e.into(),
            WireError::GeneratorMismatch { index } => Failure::Input(WireError::GeneratorMismatch { index: index + 1 }.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<IntegralError> for Failure {
    fn from(e: IntegralError) -> Self {
        match e {
            IntegralError::Rep(e) => Failure::Rep(e),
            IntegralError::VerificationFailed { index, reason } => {
                Failure::Input(IntegralError::VerificationFailed { index: index + 1, reason }.to_string())
            }
            e => Failure::Input(e.to_string()),
        }
    }
}

impl From<ForgeError> for Failure {
    fn from(e: ForgeError) -> Self {
        match e {
            ForgeError::Coxeter(e) => e.into(),
            ForgeError::Cartan(e) => e.into(),
            ForgeError::Rep(e) => e.into(),
            ForgeError::Integral(e) => e.into(),
            ForgeError::BadLabels { i, j, label } => {
                Failure::Input(ForgeError::BadLabels { i: i + 1, j: j + 1, label }.to_string())
            }
            e => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = &cli.options;
    let result = match cli.command {
        Command::Validate => commands::validate(o),
        Command::Classify => commands::classify(o),
        Command::Compatible => commands::compatible(o),
        Command::Symmetrizable => commands::symmetrizable(o),
        Command::Type => commands::cartan_type(o),
        Command::Cycles => commands::cycles(o),
        Command::BuildRep => commands::build_rep(o),
        Command::Reduce => commands::reduce(o),
        Command::Relations => commands::relations(o),
        Command::Closure => commands::closure(o),
        Command::Integralize => commands::integralize(o),
        Command::Forge => commands::forge(o),
        Command::Pipeline => commands::pipeline(o),
        Command::Corpus => commands::corpus(o),
    };
    match result {
        Ok((value, verdict)) => {
            let text = if o.pretty {
                serde_json::to_string_pretty(&value)
            } else {
                serde_json::to_string(&value)
            };
            // A closed pipe downstream is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{}", text.expect("JSON values serialize"));
            ExitCode::from(verdict as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
