//! `emt check <suite>`: seeded property suites with byte-stable output.

use std::fmt::Write as _;

use crate::checks::{self, Scale, Tally};

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteName {
    Codings,
    Compiler,
    Jump,
    Generic,
    Interp,
    All,
    Naturality,
    Equivalence,
    Biinterp,
}

impl SuiteName {
    fn label(self) -> &'static str {
        match self {
            SuiteName::Codings => "codings",
            SuiteName::Compiler => "compiler",
            SuiteName::Jump => "jump",
            SuiteName::Generic => "generic",
            SuiteName::Interp => "interp",
            SuiteName::All => "all",
            SuiteName::Naturality => "naturality",
            SuiteName::Equivalence => "equivalence",
            SuiteName::Biinterp => "biinterp",
        }
    }
}

/// Seed for the `k`-th check of a run, so checks do not share streams.
fn sub(seed: u64, k: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k)
}

fn tallies(name: SuiteName, seed: u64, sc: &Scale) -> Vec<Tally> {
    match name {
        SuiteName::Codings => vec![
            checks::coding_round_trips(sc.coding_limit),
            checks::seq_round_trips(sub(seed, 1), sc.seq_random),
        ],
        SuiteName::Compiler => vec![
            checks::compile_forward(sub(seed, 2), sc.forward),
            checks::compile_reverse(sub(seed, 3), sc.reverse),
            checks::diagonalization(sub(seed, 4), sc.diagonal),
        ],
        SuiteName::Jump => vec![
            checks::jump_commutation(sub(seed, 5), sc.commute),
            checks::kleene_completeness(sub(seed, 6), sc.kleene),
        ],
        SuiteName::Generic => vec![checks::genericity(sub(seed, 7), sc.generic)],
        SuiteName::Equivalence => {
            let mut v = checks::interp_genuine(sub(seed, 8), sc.interp_random);
            v.truncate(2);
            v
        }
        SuiteName::Naturality => {
            let v = checks::interp_genuine(sub(seed, 8), sc.interp_random);
            v.into_iter().skip(2).collect()
        }
        SuiteName::Biinterp => vec![checks::interp_biinterp(sub(seed, 9), sc.interp_random)],
        SuiteName::Interp => {
            let mut v = checks::interp_genuine(sub(seed, 8), sc.interp_random);
            v.push(checks::interp_biinterp(sub(seed, 9), sc.interp_random));
            v.extend(checks::interp_faults(sub(seed, 10), sc.faults).into_iter().map(|(t, _)| t));
            v
        }
        SuiteName::All => [
            SuiteName::Codings,
            SuiteName::Compiler,
            SuiteName::Jump,
            SuiteName::Generic,
            SuiteName::Interp,
        ]
        .into_iter()
        .flat_map(|s| tallies(s, seed, sc))
        .collect(),
    }
}

/// Run a suite at the small scale. Returns the report and whether any
/// check failed.
pub fn run_suite(name: SuiteName, seed: u64) -> (String, bool) {
    let sc = Scale::suite();
    let ts = tallies(name, seed, &sc);
    let mut out = format!("suite: {}\nseed: {seed}\n", name.label());
    for t in &ts {
        writeln!(out, "{}", t.report()).unwrap();
    }
    let cases: usize = ts.iter().map(|t| t.cases).sum();
    let failed: usize = ts.iter().map(|t| t.failures.len()).sum();
    let bad = ts.iter().filter(|t| !t.ok()).count();
    writeln!(out, "summary: checks={} cases={cases} failed={failed}", ts.len()).unwrap();
    (out, bad > 0)
}
