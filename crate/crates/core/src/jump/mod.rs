//! The positive Kleene predicate, the positive jump `PJ(A)` and the
//! identity `P(f⁻¹(PJ(A))) = P(PJ(f⁻¹(A)))`.

mod catalog;
mod seq;
mod totalize;

use std::collections::BTreeSet;
use std::fmt::Write as _;

pub use catalog::{catalog_index, formula_catalog, index_arity, join_index, split_index};
pub use seq::{decode_seq_relation, decode_set, encode_seq_relation, encode_set, SeqRelation};
pub use totalize::{sigmac1_to_sigmap1, sigmap1_to_sigmac1, totalize, totalized_signature, BAR};

use crate::coding::{pair, tuplecode_elems};
use crate::compiler::TupleSet;
use crate::diagram::{all_tuples, model_diagram, CodeSet};
use crate::enumeration::{pullback_structure, NumberedEnumeration};
use crate::error::Result;
use crate::formula::ResolvedFormula;
use crate::structure::{FiniteStructure, Model};

/// Default bound for the completeness scan: indices below `2^14` cover
/// every single-atom relation formula up to arity 3 over signatures with a
/// handful of relations.
pub const KLEENE_SCAN_BOUND: u64 = 1 << 14;

/// `K_i` at a stage: tuples of the slice's arity `t ≤ stage` satisfying
/// disjuncts `0..=stage` of `φ_{i,t}`.
pub fn kleene_slice_stage<M: Model + ?Sized>(m: &M, i: u64, stage: usize) -> Result<TupleSet> {
    let t = index_arity(i);
    if t > stage {
        return Ok(TupleSet::new());
    }
    let phi = ResolvedFormula::new(&formula_catalog(m.signature(), i, t), m.signature(), stage)?;
    if phi.disjuncts.is_empty() {
        return Ok(TupleSet::new());
    }
    Ok(all_tuples(m.size(), t).filter(|a| phi.holds(m, a, &[])).collect())
}

/// Catalog indices `i ≤ depth` whose formula holds of `ā`.
pub fn sigma1p_type<M: Model + ?Sized>(
    m: &M,
    a: &[usize],
    depth: u64,
    stage: usize,
) -> Result<BTreeSet<u64>> {
    let mut out = BTreeSet::new();
    for i in 0..=depth {
        if index_arity(i) != a.len() {
            continue;
        }
        let phi = ResolvedFormula::new(&formula_catalog(m.signature(), i, a.len()), m.signature(), stage)?;
        if phi.holds(m, a, &[]) {
            out.insert(i);
        }
    }
    Ok(out)
}

/// Stage approximation of `PJ(A) = (A, K̄_0, K̄_1, …, K̄_depth)`.
///
/// `pending[i]` holds every tuple of length at most `max_len` not yet in
/// `confirmed[i]`. Catalog formulas are finite, so once `stage` covers the
/// slice arity and the disjunct count, `pending[i]` is the complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveJumpApprox {
    pub depth: u64,
    pub stage: usize,
    pub max_len: usize,
    pub confirmed: Vec<TupleSet>,
    pub pending: Vec<TupleSet>,
}

pub fn positive_jump_stage<M: Model + ?Sized>(
    m: &M,
    depth: u64,
    stage: usize,
    max_len: usize,
) -> Result<PositiveJumpApprox> {
    let all: Vec<Vec<usize>> = (0..=max_len).flat_map(|l| all_tuples(m.size(), l)).collect();
    let mut confirmed = Vec::new();
    let mut pending = Vec::new();
    for i in 0..=depth {
        let k = kleene_slice_stage(m, i, stage)?;
        pending.push(all.iter().filter(|t| !k.contains(*t)).cloned().collect());
        confirmed.push(k);
    }
    Ok(PositiveJumpApprox {
        depth,
        stage,
        max_len,
        confirmed,
        pending,
    })
}

/// Fact kind of `coK_i` in a signature with `r` base relations.
pub fn cok_kind(r: usize, i: u64) -> u64 {
    2 + r as u64 + i
}

impl PositiveJumpApprox {
    /// `P(PJ(A))` at this stage: the base diagram plus
    /// `pair(2 + r + i, tuplecode(ā))` for every pending `ā` of slice `i`.
    pub fn diagram<M: Model + ?Sized>(&self, m: &M) -> CodeSet {
        let mut out = model_diagram(m);
        let r = m.signature().len();
        for (i, p) in self.pending.iter().enumerate() {
            out.extend(p.iter().map(|t| pair(cok_kind(r, i as u64), tuplecode_elems(t))));
        }
        out
    }

    /// `.pstruct` text with `coK<i>_<l>` relations for lengths `1..=max_len`.
    /// Length-0 memberships become comments since relations need arity ≥ 1.
    pub fn to_text(&self, s: &FiniteStructure) -> String {
        let mut sig = s.signature().to_string();
        for i in 0..=self.depth {
            for l in 1..=self.max_len {
                write!(sig, " coK{i}_{l}/{l}").unwrap();
            }
        }
        let mut out = format!("{sig}\nuniverse {}\n", s.size());
        let base = s.to_text();
        for line in base.lines().filter(|l| l.starts_with("fact ")) {
            out.push_str(line);
            out.push('\n');
        }
        for (i, p) in self.pending.iter().enumerate() {
            for t in p {
                if t.is_empty() {
                    writeln!(out, "# coK{i}_0 holds of ()").unwrap();
                    continue;
                }
                write!(out, "fact coK{i}_{}", t.len()).unwrap();
                for a in t {
                    write!(out, " {a}").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Both sides of the commutation identity and their difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommuteReport {
    pub lhs: CodeSet,
    pub rhs: CodeSet,
    pub lhs_only: CodeSet,
    pub rhs_only: CodeSet,
}

impl CommuteReport {
    pub fn equal(&self) -> bool {
        self.lhs_only.is_empty() && self.rhs_only.is_empty()
    }
}

/// Compare `P(f⁻¹(PJ(A)))` (pull back A's jump along `f`) with
/// `P(PJ(f⁻¹(A)))` (jump of the pulled-back copy, evaluated with
/// `f⁻¹(=)` as equality) on the index window `0..window`.
pub fn jump_commutes_check(
    s: &FiniteStructure,
    f: &NumberedEnumeration,
    window: usize,
    depth: u64,
    stage: usize,
    max_len: usize,
) -> Result<CommuteReport> {
    let pb = pullback_structure(f, s, window)?;
    let jump_a = positive_jump_stage(s, depth, stage, max_len)?;
    let r = s.signature().len();
    let map = pb.map().to_vec();
    let mut lhs = model_diagram(&pb);
    for l in 0..=max_len {
        for idx in all_tuples(window, l) {
            let image: Vec<usize> = idx.iter().map(|&j| map[j]).collect();
            for (i, p) in jump_a.pending.iter().enumerate() {
                if p.contains(&image) {
                    lhs.insert(pair(cok_kind(r, i as u64), tuplecode_elems(&idx)));
                }
            }
        }
    }
    let rhs = positive_jump_stage(&pb, depth, stage, max_len)?.diagram(&pb);
    Ok(CommuteReport {
        lhs_only: lhs.difference(&rhs).copied().collect(),
        rhs_only: rhs.difference(&lhs).copied().collect(),
        lhs,
        rhs,
    })
}

/// Least catalog index below `scan` whose slice equals `target`, where all
/// tuples of `target` have length `arity`.
pub fn kleene_witness<M: Model + ?Sized>(
    m: &M,
    target: &TupleSet,
    arity: usize,
    scan: u64,
) -> Result<Option<u64>> {
    // Indices tagged with `arity` are 2^arity (2k+1) - 1.
    for k in 0.. {
        let Some(i) = join_index(arity as u32, k) else { break };
        if i >= scan {
            break;
        }
        let phi = ResolvedFormula::new(&formula_catalog(m.signature(), i, arity), m.signature(), usize::MAX >> 1)?;
        let slice: TupleSet = all_tuples(m.size(), arity).filter(|a| phi.holds(m, a, &[])).collect();
        if &slice == target {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Atom, Disjunct, Pred, SigmaP1Formula, Term};
    use crate::iso::find_isomorphism;
    use crate::structure::{CycleGraph, Signature, StagedStructure};

    fn graph1() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            3,
            [("E", vec![0, 1]), ("E", vec![1, 2])],
        )
        .unwrap()
    }

    fn edge_index(sig: &Signature) -> u64 {
        let phi = SigmaP1Formula {
            free: 2,
            params: 0,
            disjuncts: vec![Disjunct {
                bound: vec![],
                atoms: vec![Atom {
                    pred: Pred::Rel("E".into()),
                    args: vec![Term::Free(0), Term::Free(1)],
                }],
            }],
            generators: vec![],
        };
        catalog_index(sig, &phi).unwrap()
    }

    #[test]
    fn edge_slice() {
        let g = graph1();
        let i = edge_index(g.signature());
        assert_eq!(
            kleene_slice_stage(&g, i, 8).unwrap(),
            TupleSet::from([vec![0, 1], vec![1, 2]])
        );
        assert!(kleene_slice_stage(&g, 0, 8).unwrap().is_empty());
    }

    #[test]
    fn completeness_witness_for_edges() {
        let g = graph1();
        let facts = g.facts(0).clone();
        let i = kleene_witness(&g, &facts, 2, KLEENE_SCAN_BOUND).unwrap().unwrap();
        assert!(i <= edge_index(g.signature()));
        let pj = positive_jump_stage(&g, i, 8, 2).unwrap();
        let co: TupleSet = pj.pending[i as usize].iter().filter(|t| t.len() == 2).cloned().collect();
        assert_eq!(co.len(), 7);
        assert!(co.is_disjoint(&facts));
    }

    #[test]
    fn types_separate_out_degree() {
        let g = graph1();
        assert!(sigma1p_type(&g, &[], 0, 4).unwrap().is_empty());
        let t0 = sigma1p_type(&g, &[0], 200, 8).unwrap();
        let t2 = sigma1p_type(&g, &[2], 200, 8).unwrap();
        assert_ne!(t0, t2);
    }

    #[test]
    fn slices_are_invariant_under_isomorphism() {
        let g = CycleGraph::from_bits("101").unwrap().at_stage(3);
        let perm: Vec<usize> = (0..g.size()).rev().collect();
        let h = g.relabel(&perm).unwrap();
        assert!(find_isomorphism(&g, &h).is_some());
        for i in 0..60 {
            let a = kleene_slice_stage(&g, i, 8).unwrap();
            let b = kleene_slice_stage(&h, i, 8).unwrap();
            let moved: TupleSet = a.iter().map(|t| t.iter().map(|&x| perm[x]).collect()).collect();
            assert_eq!(moved, b, "slice {i}");
        }
    }

    #[test]
    fn approximation_is_monotone_and_stabilizes() {
        let g = graph1();
        let mut prev: Option<PositiveJumpApprox> = None;
        for stage in 0..6 {
            let pj = positive_jump_stage(&g, 20, stage, 2).unwrap();
            for i in 0..=20 {
                assert!(pj.confirmed[i].is_disjoint(&pj.pending[i]));
                if let Some(p) = &prev {
                    assert!(p.confirmed[i].is_subset(&pj.confirmed[i]));
                    assert!(pj.pending[i].is_subset(&p.pending[i]));
                }
            }
            prev = Some(pj);
        }
        assert_eq!(
            positive_jump_stage(&g, 20, 6, 2).unwrap(),
            PositiveJumpApprox {
                stage: 6,
                ..positive_jump_stage(&g, 20, 106, 2).unwrap()
            }
        );
    }

    #[test]
    fn commutation_examples() {
        let g = graph1();
        for f in ["0 1 2", "1 0 2", "2 2 0 1 0"] {
            let f = NumberedEnumeration::parse(f).unwrap();
            let rep = jump_commutes_check(&g, &f, f.prefix().len(), 10, 16, 2).unwrap();
            assert!(rep.equal(), "{f}");
        }
        let c = CycleGraph::from_bits("1010").unwrap().at_stage(4);
        let f = NumberedEnumeration::with_cycle_tail((0..c.size()).rev().collect(), c.size());
        assert!(jump_commutes_check(&c, &f, c.size() + 2, 6, 32, 2).unwrap().equal());
    }

    #[test]
    fn pj_text_lists_cok_relations() {
        let g = graph1();
        let pj = positive_jump_stage(&g, 0, 4, 1).unwrap();
        let text = pj.to_text(&g);
        assert!(text.starts_with("signature E/2 coK0_1/1\nuniverse 3\n"));
        assert!(text.contains("# coK0_0 holds of ()"));
        assert!(crate::structure::parse_structure(&text).is_ok());
    }
}
