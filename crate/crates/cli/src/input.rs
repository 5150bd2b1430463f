//! Reading input files and flag values, with errors sorted by kind.

use std::fmt;
use std::io::ErrorKind;

use emt_core::formula::{parse_families, SigmaP1Family};
use emt_core::interp::{parse_interpretation, PositiveInterpretation};
use emt_core::operator::{parse_operator, EnumOperator};
use emt_core::structure::{parse_structure, FiniteStructure};
use emt_core::Error;

use crate::FormulaArgs;

/// Why a command could not run. Each kind prints with its own prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Missing { path: String, msg: String },
    Parse { path: String, msg: String },
    Bound(String),
    Input(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Missing { path, msg } => write!(f, "missing file: {path}: {msg}"),
            Failure::Parse { path, msg } => write!(f, "parse error: {path}: {msg}"),
            Failure::Bound(m) => write!(f, "bound violation: {m}"),
            Failure::Input(m) => write!(f, "input error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::OutOfUniverse { .. } | Error::Length { .. } | Error::Unbounded => {
                Failure::Bound(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

pub type Res<T> = Result<T, Failure>;

pub fn read(path: &str) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => Failure::Missing {
            path: path.into(),
            msg: "no such file".into(),
        },
        _ => Failure::Missing {
            path: path.into(),
            msg: e.to_string(),
        },
    })
}

fn parsed<T>(path: &str, r: emt_core::Result<T>) -> Res<T> {
    r.map_err(|e| Failure::Parse {
        path: path.into(),
        msg: e.to_string(),
    })
}

pub fn structure(path: &str, stage: usize) -> Res<FiniteStructure> {
    let text = read(path)?;
    Ok(parsed(path, parse_structure(&text))?.materialize(stage))
}

pub fn families(path: &str) -> Res<Vec<SigmaP1Family>> {
    let text = read(path)?;
    parsed(path, parse_families(&text))
}

/// The family named by `--family`, or the only one in the file.
pub fn family(args: &FormulaArgs) -> Res<SigmaP1Family> {
    let mut all = families(&args.formula)?;
    match &args.family {
        Some(name) => all
            .into_iter()
            .find(|f| &f.name == name)
            .ok_or_else(|| Failure::Input(format!("no family `{name}` in {}", args.formula))),
        None if all.len() == 1 => Ok(all.remove(0)),
        None => Err(Failure::Usage(format!(
            "{} holds {} families; pick one with --family",
            args.formula,
            all.len()
        ))),
    }
}

pub fn operator(path: &str) -> Res<EnumOperator> {
    let text = read(path)?;
    parsed(path, parse_operator(&text))
}

pub fn interpretation(path: &str) -> Res<PositiveInterpretation> {
    let text = read(path)?;
    parsed(path, parse_interpretation(&text))
}

/// Numbers separated by spaces or commas.
pub fn numbers<T: std::str::FromStr>(text: &str, flag: &str) -> Res<Vec<T>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| {
            w.parse()
                .map_err(|_| Failure::Usage(format!("--{flag}: `{w}` is not a natural number")))
        })
        .collect()
}

/// Output to a file, or back to the caller for stdout.
pub fn emit(output: Option<&str>, text: String) -> Res<String> {
    match output {
        None => Ok(text),
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::Missing {
                path: path.into(),
                msg: e.to_string(),
            })?;
            let header = text.lines().next().unwrap_or_default().to_string();
            Ok(format!("{header}\nwrote: {path}\n"))
        }
    }
}
