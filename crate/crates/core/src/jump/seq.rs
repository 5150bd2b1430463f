//! Coding sequence-indexed relations and sets of numbers as relations on
//! `A^{<ω}`: `⟨i, ā⟩ ↦ { bⁱcā : b ≠ c }` and `X ↦ R_X = X × {()}`.

use std::collections::BTreeSet;

use crate::compiler::TupleSet;
use crate::error::CodingError;

/// A relation indexed by natural numbers: pairs `⟨i, ā⟩`.
pub type SeqRelation = BTreeSet<(usize, Vec<usize>)>;

fn fiber(i: usize, a: &[usize], n: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..n).flat_map(move |b| {
        (0..n).filter(move |&c| c != b).map(move |c| {
            let mut t = vec![b; i];
            t.push(c);
            t.extend_from_slice(a);
            t
        })
    })
}

/// Encode over a universe of `n ≥ 2` elements.
///
/// `⟨0, ā⟩` with `ā` nonempty is refused: `cā` is also `b¹c′ā′` whenever
/// `ā` starts with an element other than `c`, so the coding is not
/// injective there.
pub fn encode_seq_relation(r: &SeqRelation, n: usize) -> Result<TupleSet, CodingError> {
    if n < 2 {
        return Err(CodingError::UniverseTooSmall(n));
    }
    let mut out = TupleSet::new();
    for (i, a) in r {
        if *i == 0 && !a.is_empty() {
            return Err(CodingError::AmbiguousZeroRun(a.clone()));
        }
        out.extend(fiber(*i, a, n));
    }
    Ok(out)
}

/// Read `bⁱcā` back as `⟨i, ā⟩`: `i` is the length of the leading run
/// (0 for a single entry). A pair is kept only if its whole fiber is
/// present.
pub fn decode_seq_relation(r: &TupleSet, n: usize) -> SeqRelation {
    let mut out = SeqRelation::new();
    for t in r {
        let Some(&b) = t.first() else { continue };
        let (i, a) = if t.len() == 1 {
            (0, Vec::new())
        } else {
            let run = t.iter().take_while(|&&x| x == b).count();
            if run == t.len() {
                continue;
            }
            (run, t[run + 1..].to_vec())
        };
        if out.contains(&(i, a.clone())) {
            continue;
        }
        if fiber(i, &a, n).all(|u| r.contains(&u)) {
            out.insert((i, a));
        }
    }
    out
}

/// `R_X` coded over `n ≥ 2` elements: `{ bⁱc : i ∈ X, b ≠ c }`.
pub fn encode_set(x: &BTreeSet<usize>, n: usize) -> Result<TupleSet, CodingError> {
    encode_seq_relation(&x.iter().map(|&i| (i, Vec::new())).collect(), n)
}

/// Enumerate `i` whenever the full fiber of `bⁱc` is present.
pub fn decode_set(r: &TupleSet, n: usize) -> BTreeSet<usize> {
    decode_seq_relation(r, n)
        .into_iter()
        .filter(|(_, a)| a.is_empty())
        .map(|(i, _)| i)
        .collect()
}
