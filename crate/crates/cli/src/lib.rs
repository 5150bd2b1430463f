//! The `emt` command line: file I/O, deterministic reports and the check
//! suites.

pub mod acceptance;
pub mod checks;
mod commands;
mod input;
pub mod suite;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand};

pub use input::Failure;

/// Output format version printed in every header.
pub const VERSION: &str = "0.1";

/// Stage bound when neither `--stage` nor `EMT_STAGE_DEFAULT` is given.
pub const DEFAULT_STAGE: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "emt", version, about = "Enumeration operators, positive jumps and interpretations on finite structures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct StageArg {
    /// Stage bound for formula disjuncts [default: $EMT_STAGE_DEFAULT or 16]
    #[arg(long)]
    pub stage: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct FormulaArgs {
    /// Formula file (.spf)
    #[arg(long)]
    pub formula: String,
    /// Family name; may be omitted when the file holds one family
    #[arg(long)]
    pub family: Option<String>,
    /// Parameter values, space or comma separated
    #[arg(long, default_value = "")]
    pub params: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Stage-bounded truth of φ_{|ā|}(ā) (sat_stage).
    Eval {
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        formula: FormulaArgs,
        /// The tuple ā, space or comma separated
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        tuple: String,
        #[command(flatten)]
        stage: StageArg,
    },
    /// The relation a family defines, up to a tuple length (define_relation).
    Define {
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        formula: FormulaArgs,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[command(flatten)]
        stage: StageArg,
    },
    /// Compile a positive family to an enumeration operator (compile_family).
    Compile {
        /// Structure whose signature (and size, for the default bound) is used
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Witnesses range over 0..bound [default: structure size]
        #[arg(long)]
        element_bound: Option<usize>,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[command(flatten)]
        stage: StageArg,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Read a defining family off an unforceable operator (extract_definition).
    Extract {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        operator: String,
        /// Base tuple where the operator is unforceable
        #[arg(long, default_value = "")]
        base: String,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Operator stage; all axioms when omitted
        #[arg(long)]
        stage: Option<u64>,
    },
    /// Build a copy defeating every adversary that can be forced (diagonalize_copy).
    Diagonalize {
        #[arg(long)]
        structure: String,
        #[command(flatten)]
        formula: FormulaArgs,
        /// Adversary operator files (.eop), comma separated or repeated
        #[arg(long, value_delimiter = ',', required = true)]
        adversary: Vec<String>,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[command(flatten)]
        stage: StageArg,
    },
    /// Apply an operator to P(A) or to an explicit code set (apply).
    Apply {
        #[arg(long)]
        operator: String,
        #[arg(long, conflicts_with = "set", required_unless_present = "set")]
        structure: Option<String>,
        /// Input codes, space or comma separated
        #[arg(long)]
        set: Option<String>,
        /// Operator stage; all axioms when omitted
        #[arg(long)]
        stage: Option<u64>,
    },
    /// Catalog lookups (formula_catalog, catalog_operator, operator_index).
    Catalog {
        /// Structure supplying the signature for formula lookups
        #[arg(long)]
        structure: Option<String>,
        /// `i,j`: print φ_{i,j}
        #[arg(long)]
        index: Option<String>,
        /// Print catalog operator e as .eop
        #[arg(long)]
        operator: Option<u64>,
        /// Print the catalog index of an .eop file
        #[arg(long)]
        index_of: Option<String>,
    },
    /// Stage approximation of the positive jump PJ(A) (positive_jump_stage).
    Jump {
        #[arg(long)]
        structure: String,
        #[arg(long, default_value_t = 8)]
        depth: u64,
        #[command(flatten)]
        stage: StageArg,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Compare f⁻¹(PJ(A)) with PJ(f⁻¹(A)) (jump_commutes_check).
    CommuteCheck {
        #[arg(long)]
        structure: String,
        /// Enumeration `prefix` or `prefix | cycle`
        #[arg(long = "enum")]
        enumeration: String,
        #[arg(long, default_value_t = 8)]
        depth: u64,
        #[command(flatten)]
        stage: StageArg,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        /// Index window [default: prefix plus one cycle]
        #[arg(long)]
        window: Option<usize>,
    },
    /// The totalization A⁺ (totalize).
    Totalize {
        #[arg(long)]
        structure: String,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Translate between Σᶜ₁ over A and Σᵖ₁ over A⁺ (sigmac1_to_sigmap1, sigmap1_to_sigmac1).
    Translate {
        #[arg(long)]
        formula: String,
        #[arg(long, value_enum)]
        to: Direction,
        /// Base structure; needed for --to classical
        #[arg(long)]
        structure: Option<String>,
    },
    /// Build a generic enumeration meeting dense sets (build_generic).
    Generic {
        #[arg(long)]
        structure: String,
        /// Specs: file.spf, file.eop@code, builtin:D<k>, builtin:R<e>, builtin:empty
        #[arg(long, value_delimiter = ',', required = true)]
        dense: Vec<String>,
        #[arg(long)]
        steps: Option<usize>,
        #[command(flatten)]
        stage: StageArg,
    },
    /// Realize an interpretation in a structure (realize_interpretation).
    Interpret {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        interp: String,
        #[command(flatten)]
        stage: StageArg,
        #[arg(short = 'o', long)]
        output: Option<String>,
    },
    /// Extract an interpretation from a functor pair (extract_interpretation).
    FunctorExtract {
        #[arg(long)]
        structure: String,
        /// Interpretation to tabulate; the identity pair when omitted
        #[arg(long)]
        interp: Option<String>,
        #[arg(long)]
        tuple_bound: Option<usize>,
        #[arg(long)]
        pad_bound: Option<usize>,
        #[command(flatten)]
        stage: StageArg,
    },
    /// Run a seeded check suite (run_suite).
    Check {
        #[arg(value_enum)]
        suite: suite::SuiteName,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Positive,
    Classical,
}

/// Exit status plus what goes to stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `argv` (program name first) and run the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stage_default = std::env::var("EMT_STAGE_DEFAULT").ok();
    run_with(argv, stage_default.as_deref())
}

/// [`run`] with the stage default passed in instead of read from the
/// environment.
pub fn run_with<I, T>(argv: I, stage_default: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("usage error: {}", text.trim_start_matches("error: ")),
                },
            };
        }
    };
    let default = match stage_default.map(str::trim) {
        None | Some("") => Ok(DEFAULT_STAGE),
        Some(v) => v
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("EMT_STAGE_DEFAULT must be a number, got `{v}`"))),
    };
    let result = default.and_then(|d| commands::dispatch(cli.command, d));
    match result {
        Ok(r) => Outcome {
            code: if r.failed { 1 } else { 0 },
            stdout: r.text,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("{f}\n"),
        },
    }
}
