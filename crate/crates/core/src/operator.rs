//! Enumeration operators: axioms `⟨D, x⟩`, staged application, the
//! operator catalog `e ↦ Ψ_e`, `K_X` and the enumeration jump.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::coding::{checked_pair, checked_tuplecode, decode_tuple, join, tuplecode, unpair};
use crate::diagram::CodeSet;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Axiom {
    pub premises: BTreeSet<u64>,
    pub conclusion: u64,
}

impl Axiom {
    pub fn new(premises: impl IntoIterator<Item = u64>, conclusion: u64) -> Self {
        Axiom {
            premises: premises.into_iter().collect(),
            conclusion,
        }
    }

    /// `pair(conclusion, tuplecode(sorted premises))`, saturating at
    /// `u64::MAX` when the code does not fit.
    pub fn code(&self) -> u64 {
        raw_axiom_code(self.conclusion, &self.premises).unwrap_or(u64::MAX)
    }
}

fn raw_axiom_code(conclusion: u64, premises: &BTreeSet<u64>) -> Option<u64> {
    let p: Vec<u64> = premises.iter().copied().collect();
    checked_pair(conclusion, checked_tuplecode(&p)?)
}

/// A finite operator whose axioms carry the stage at which they appear.
///
/// Stage tags are never below the axiom's code, so stage `s` holds no
/// axiom with code above `s`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EnumOperator {
    axioms: Vec<(u64, Axiom)>,
}

impl EnumOperator {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Each axiom appears at the stage equal to its code.
    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        Self::from_staged(axioms.into_iter().map(|a| (0, a)))
    }

    /// Axioms with requested stages; stages are raised to the axiom code.
    pub fn from_staged(axioms: impl IntoIterator<Item = (u64, Axiom)>) -> Self {
        let mut axioms: Vec<(u64, Axiom)> = axioms
            .into_iter()
            .map(|(s, a)| (s.max(a.code()), a))
            .collect();
        axioms.sort();
        axioms.dedup_by(|b, a| a.1 == b.1);
        EnumOperator { axioms }
    }

    pub fn len(&self) -> usize {
        self.axioms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// Axioms visible at `stage` (all of them for `None`).
    pub fn axioms_at(&self, stage: Option<u64>) -> impl Iterator<Item = &Axiom> {
        self.axioms
            .iter()
            .filter(move |(s, _)| stage.is_none_or(|st| *s <= st))
            .map(|(_, a)| a)
    }

    pub fn staged_axioms(&self) -> &[(u64, Axiom)] {
        &self.axioms
    }

    /// Largest stage tag; stages at or above it expose every axiom.
    pub fn final_stage(&self) -> u64 {
        self.axioms.iter().map(|(s, _)| *s).max().unwrap_or(0)
    }

    /// Union of two operators.
    pub fn union(&self, other: &EnumOperator) -> EnumOperator {
        Self::from_staged(self.axioms.iter().chain(&other.axioms).cloned())
    }

    /// The same operator with one axiom removed (fault injection).
    pub fn without(&self, index: usize) -> EnumOperator {
        let mut axioms = self.axioms.clone();
        axioms.remove(index);
        EnumOperator { axioms }
    }

    /// `.eop` text: one `axiom <x> : <d1> <d2> ...` line per axiom.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (_, a) in &self.axioms {
            write!(out, "axiom {} :", a.conclusion).unwrap();
            for d in &a.premises {
                write!(out, " {d}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Where operator input comes from: a finite set or a stage-enumerable one.
pub enum Source<'a> {
    Finite(&'a CodeSet),
    Staged(&'a dyn Fn(u64) -> CodeSet),
}

/// `Ψ^X = { x : ⟨D, x⟩ ∈ Ψ_s, D ⊆ X }`.
pub fn apply(op: &EnumOperator, x: &CodeSet, stage: Option<u64>) -> CodeSet {
    let mut out = CodeSet::new();
    for a in op.axioms_at(stage) {
        if !out.contains(&a.conclusion) && a.premises.iter().all(|d| x.contains(d)) {
            out.insert(a.conclusion);
        }
    }
    out
}

/// [`apply`] on a possibly infinite source; staged sources need a stage,
/// which bounds both the operator and the source.
pub fn apply_source(op: &EnumOperator, src: Source<'_>, stage: Option<u64>) -> Result<CodeSet> {
    match src {
        Source::Finite(x) => Ok(apply(op, x, stage)),
        Source::Staged(f) => {
            let s = stage.ok_or(Error::Unbounded)?;
            Ok(apply(op, &f(s), Some(s)))
        }
    }
}

/// Raw axiom codes of catalog index `e`, sorted and deduplicated.
///
/// `e` is read as a tuple code of axiom codes `pair(c, tuplecode(D))` with
/// `D` strictly ascending. Entries that do not decode are skipped, so every
/// natural number names an operator.
pub fn catalog_axiom_codes(e: u64) -> Vec<u64> {
    let mut codes: Vec<u64> = decode_tuple(e)
        .unwrap_or_default()
        .into_iter()
        .filter(|&a| decode_raw_axiom(a).is_some())
        .collect();
    codes.sort_unstable();
    codes.dedup();
    codes
}

fn decode_raw_axiom(a: u64) -> Option<(u64, Vec<u64>)> {
    let (c, p) = unpair(a);
    let premises = decode_tuple(p)?;
    premises
        .windows(2)
        .all(|w| w[0] < w[1])
        .then_some((c, premises))
}

/// Canonical index of `e`: the tuple code of its sorted valid axiom codes.
pub fn canonical_index(e: u64) -> u64 {
    tuplecode(&catalog_axiom_codes(e))
}

/// `Ψ_e`. A raw conclusion field of 0 stands for the index `e` itself and
/// `c > 0` for `c − 1`; this lets an operator mention its own index, which
/// a literal coding cannot since every axiom code exceeds its conclusion.
pub fn catalog_operator(e: u64) -> EnumOperator {
    let axioms = catalog_axiom_codes(e).into_iter().map(|a| {
        let (c, premises) = decode_raw_axiom(a).expect("filtered above");
        let conclusion = if c == 0 { e } else { c - 1 };
        (a, Axiom::new(premises, conclusion))
    });
    EnumOperator {
        axioms: axioms.collect(),
    }
}

/// A catalog index naming exactly the axioms of `op`, if the codes fit.
pub fn operator_index(op: &EnumOperator) -> Option<u64> {
    let mut codes = op
        .axioms_at(None)
        .map(|a| raw_axiom_code(a.conclusion.checked_add(1)?, &a.premises))
        .collect::<Option<Vec<u64>>>()?;
    codes.sort_unstable();
    codes.dedup();
    checked_tuplecode(&codes)
}

/// Parse `.eop` text. An axiom's stage is the larger of its line position
/// and its code.
pub fn parse_operator(text: &str) -> Result<EnumOperator> {
    let mut axioms = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let rest = content
            .strip_prefix("axiom")
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| err("expected `axiom <x> : <d1> ...`".into()))?;
        let (x, ds) = rest
            .split_once(':')
            .ok_or_else(|| err("missing `:` after the conclusion".into()))?;
        let num = |w: &str| -> Result<u64> {
            w.parse()
                .map_err(|_| Error::Parse { line, msg: format!("bad number `{w}`") })
        };
        let x = num(x.trim())?;
        let premises = ds.split_whitespace().map(num).collect::<Result<Vec<u64>>>()?;
        axioms.push((axioms.len() as u64, Axiom::new(premises, x)));
    }
    Ok(EnumOperator::from_staged(axioms))
}

/// `K_X` at a stage: `{ x ≤ stage : x ∈ Ψ_{x,stage}^X }`.
///
/// Exact on `0..=stage` for finite `X`, since the axioms of `Ψ_x` all have
/// codes at most `x`.
pub fn kleene_set_stage(x: &CodeSet, stage: u64) -> CodeSet {
    (0..=stage)
        .filter(|&e| apply(&catalog_operator(e), x, Some(stage)).contains(&e))
        .collect()
}

/// Stage approximation of `J_e(X) = X ⊕ K̄_X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JumpSplit {
    pub stage: u64,
    /// Confirmed members of `K_X` up to the stage.
    pub lower: CodeSet,
    /// Numbers up to the stage not yet in `K_X`.
    pub upper_complement: CodeSet,
}

impl JumpSplit {
    /// `X ⊕ K̄_X` restricted to the stage window, even/odd interleaved.
    pub fn join(&self, x: &CodeSet) -> Vec<u64> {
        join(x.iter().copied(), self.upper_complement.iter().copied())
    }
}

pub fn enumeration_jump_stage(x: &CodeSet, stage: u64) -> JumpSplit {
    let lower = kleene_set_stage(x, stage);
    let upper_complement = (0..=stage).filter(|e| !lower.contains(e)).collect();
    JumpSplit {
        stage,
        lower,
        upper_complement,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::pair;
    use proptest::prelude::*;

    #[test]
    fn apply_examples() {
        let op = EnumOperator::from_axioms([Axiom::new([9], 117)]);
        assert_eq!(apply(&op, &CodeSet::from([9]), None), CodeSet::from([117]));
        assert!(apply(&op, &CodeSet::from([8]), None).is_empty());
        assert!(apply(&op, &CodeSet::new(), None).is_empty());
    }

    #[test]
    fn stage_convention_holds() {
        let op = EnumOperator::from_axioms([Axiom::new([9], 117), Axiom::new([], 5)]);
        for (s, a) in op.staged_axioms() {
            assert!(a.code() <= *s);
        }
        // ⟨∅,5⟩ has code pair(5,0) = 15.
        assert!(apply(&op, &CodeSet::new(), Some(14)).is_empty());
        assert_eq!(apply(&op, &CodeSet::new(), Some(15)), CodeSet::from([5]));
    }

    #[test]
    fn catalog_examples() {
        assert!(catalog_operator(0).is_empty());
        // ⟨∅,5⟩ is raw axiom pair(6, 0) = 21, so e = tuplecode(21) = 274.
        let e = tuplecode(&[pair(6, 0)]);
        assert_eq!(e, 274);
        let op = catalog_operator(e);
        assert_eq!(apply(&op, &CodeSet::new(), None), CodeSet::from([5]));
        assert_eq!(apply(&op, &CodeSet::from([1, 2]), None), CodeSet::from([5]));
        assert_eq!(operator_index(&op), Some(e));
    }

    #[test]
    fn self_producing_index() {
        // e = 1 = tuplecode(0): one raw axiom 0 = ⟨∅, self⟩.
        assert_eq!(catalog_operator(1).axioms_at(None).next(), Some(&Axiom::new([], 1)));
        assert!(kleene_set_stage(&CodeSet::new(), 0).is_empty());
        assert_eq!(kleene_set_stage(&CodeSet::new(), 1), CodeSet::from([1]));
    }

    #[test]
    fn catalog_round_trip_below_ten_thousand() {
        for e in 0..10_000 {
            let c = canonical_index(e);
            assert_eq!(catalog_axiom_codes(c), catalog_axiom_codes(e), "e = {e}");
            assert_eq!(canonical_index(c), c);
        }
    }

    #[test]
    fn eop_parse_and_stage() {
        let op = parse_operator("# demo\naxiom 117 : 9\naxiom 5 :\n").unwrap();
        assert_eq!(op.len(), 2);
        assert_eq!(apply(&op, &CodeSet::from([9]), None), CodeSet::from([5, 117]));
        assert_eq!(parse_operator(&op.to_text()).unwrap(), op);
        assert!(parse_operator("axiom x : 1\n").is_err());
        assert!(parse_operator("axim 1 : 1\n").is_err());
    }

    #[test]
    fn jump_split_is_partition() {
        let x = CodeSet::from([0, 3]);
        let split = enumeration_jump_stage(&x, 200);
        assert!(split.lower.is_disjoint(&split.upper_complement));
        assert_eq!(split.lower.len() + split.upper_complement.len(), 201);
        let j = split.join(&x);
        assert!(j.contains(&0) && j.contains(&6));
        assert!(j.iter().filter(|v| *v % 2 == 1).all(|v| !split.lower.contains(&(v / 2))));
    }

    #[test]
    fn unbounded_staged_source() {
        let f = |s: u64| CodeSet::from([s]);
        let op = EnumOperator::from_axioms([Axiom::new([3], 7)]);
        assert_eq!(apply_source(&op, Source::Staged(&f), None), Err(Error::Unbounded));
        assert_eq!(
            apply_source(&op, Source::Staged(&f), Some(3)).unwrap(),
            CodeSet::new()
        );
    }

    fn small_op() -> impl Strategy<Value = EnumOperator> {
        proptest::collection::vec(
            (proptest::collection::btree_set(0u64..12, 0..3), 0u64..12),
            0..8,
        )
        .prop_map(|v| EnumOperator::from_axioms(v.into_iter().map(|(d, x)| Axiom::new(d, x))))
    }

    proptest! {
        #[test]
        fn apply_is_monotone(op in small_op(),
                             x in proptest::collection::btree_set(0u64..12, 0..6),
                             extra in proptest::collection::btree_set(0u64..12, 0..6)) {
            let y: CodeSet = x.union(&extra).copied().collect();
            prop_assert!(apply(&op, &x, None).is_subset(&apply(&op, &y, None)));
        }

        #[test]
        fn apply_is_continuous(op in small_op(),
                               x in proptest::collection::btree_set(0u64..12, 0..6)) {
            let mut union = CodeSet::new();
            for a in op.axioms_at(None) {
                if a.premises.is_subset(&x) {
                    union.extend(apply(&op, &a.premises, None));
                }
            }
            prop_assert_eq!(union, apply(&op, &x, None));
        }

        #[test]
        fn kleene_monotone_in_x(x in proptest::collection::btree_set(0u64..40, 0..6),
                                extra in proptest::collection::btree_set(0u64..40, 0..4)) {
            let y: CodeSet = x.union(&extra).copied().collect();
            prop_assert!(kleene_set_stage(&x, 300).is_subset(&kleene_set_stage(&y, 300)));
        }
    }
}
