//! Σᵖ₁ families to enumeration operators and back: the compiler, the
//! forcing set `Q_e`, definition extraction and the diagonalizing copy.

use std::collections::BTreeSet;

use crate::coding::{decode_elems, decode_fact, fact_code, tuplecode_elems, FactKind};
use crate::diagram::{all_tuples, partial_pullback, positive_diagram};
use crate::enumeration::NumberedEnumeration;
use crate::error::{Error, Result};
use crate::formula::{
    resolve, ArityRule, Atom, Case, Disjunct, Lit, Pred, ResolvedDisjunct, SigmaP1Family, Term,
};
use crate::operator::{apply, Axiom, EnumOperator};
use crate::structure::{FiniteStructure, Signature};

/// A relation on tuples of elements.
pub type TupleSet = BTreeSet<Vec<usize>>;

/// Output of [`compile_family`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledOperator {
    pub family: SigmaP1Family,
    pub params: Vec<usize>,
    pub element_bound: usize,
    pub operator: EnumOperator,
}

fn instantiate(d: &ResolvedDisjunct, free: &[usize], bound: &[usize], params: &[usize]) -> Vec<u64> {
    d.atoms
        .iter()
        .map(|a| {
            let args: Vec<usize> = a
                .args
                .iter()
                .map(|t| match t {
                    Term::Free(k) => free[*k],
                    Term::Param(k) => params[*k],
                    Term::Bound(k) => bound[*k],
                })
                .collect();
            let kind = match a.lit {
                Lit::Eq => FactKind::Eq,
                Lit::Neq => FactKind::Neq,
                Lit::Rel(r) => FactKind::Rel(r),
                Lit::NotRel(_) => unreachable!("checked positive"),
            };
            fact_code(kind, &args)
        })
        .collect()
}

/// Emit `⟨X, tuplecode(ā)⟩` for every disjunct `0..=stage` of `φ_{|ā|}`,
/// every `ā` of length at most `max_len` and every witness tuple, all over
/// `{0..element_bound-1}`; `X` is the set of codes of the instantiated
/// atoms.
///
/// For a structure `B` with at most `element_bound` elements,
/// `Ψ^{P(B)}` is the relation the family defines in `B` with these
/// parameters, restricted to lengths up to `max_len`.
pub fn compile_family(
    sig: &Signature,
    fam: &SigmaP1Family,
    params: &[usize],
    element_bound: usize,
    max_len: usize,
    stage: usize,
) -> Result<CompiledOperator> {
    if !fam.is_positive() {
        return Err(Error::Precondition(format!(
            "family `{}` contains negated atoms",
            fam.name
        )));
    }
    if params.len() != fam.params {
        return Err(Error::Length {
            what: "parameters",
            expected: fam.params,
            found: params.len(),
        });
    }
    if let Some(&p) = params.iter().find(|&&p| p >= element_bound) {
        return Err(Error::OutOfUniverse {
            element: p,
            size: element_bound,
        });
    }
    let mut axioms = Vec::new();
    for len in 0..=max_len {
        let phi = fam.formula(len);
        for d in phi.disjuncts_upto(stage)? {
            let d = resolve(&d, sig)?;
            for free in all_tuples(element_bound, len) {
                let conclusion = tuplecode_elems(&free);
                for bound in all_tuples(element_bound, d.bound) {
                    axioms.push(Axiom::new(
                        instantiate(&d, &free, &bound, params),
                        conclusion,
                    ));
                }
            }
        }
    }
    Ok(CompiledOperator {
        family: fam.clone(),
        params: params.to_vec(),
        element_bound,
        operator: EnumOperator::from_axioms(axioms),
    })
}

/// Decode an operator's output into tuples, dropping malformed codes.
pub fn decode_outputs(codes: &BTreeSet<u64>) -> TupleSet {
    codes.iter().filter_map(|&c| decode_elems(c)).collect()
}

/// A member of `Q_e`: the indices `j̄` emitted on `P_A(q̄)` and the
/// tuple `q_{j̄}` outside `R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QWitness {
    pub q: Vec<usize>,
    pub indices: Vec<usize>,
    pub tuple: Vec<usize>,
}

/// Whether `q ∈ Q_e`, returning the least witness.
pub fn in_q_e(
    s: &FiniteStructure,
    op: &EnumOperator,
    r: &TupleSet,
    q: &[usize],
    stage: Option<u64>,
) -> Result<Option<QWitness>> {
    let out = apply(op, &partial_pullback(s, q)?, stage);
    for code in out {
        let Some(j) = decode_elems(code) else { continue };
        if j.iter().any(|&i| i >= q.len()) {
            continue;
        }
        let tuple: Vec<usize> = j.iter().map(|&i| q[i]).collect();
        if !r.contains(&tuple) {
            return Ok(Some(QWitness {
                q: q.to_vec(),
                indices: j,
                tuple,
            }));
        }
    }
    Ok(None)
}

fn check_injective(s: &FiniteStructure, t: &[usize]) -> Result<()> {
    let mut seen = vec![false; s.size()];
    for &x in t {
        if x >= s.size() {
            return Err(Error::OutOfUniverse {
                element: x,
                size: s.size(),
            });
        }
        if seen[x] {
            return Err(Error::NotInjective(t.to_vec()));
        }
        seen[x] = true;
    }
    Ok(())
}

/// Injective extensions of `base` (base included) in (length, lex) order.
pub fn injective_extensions(n: usize, base: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![base.to_vec()];
    let mut layer = vec![base.to_vec()];
    while let Some(first) = layer.first() {
        if first.len() >= n {
            break;
        }
        let mut next = Vec::new();
        for t in &layer {
            for x in 0..n {
                if !t.contains(&x) {
                    let mut u = t.clone();
                    u.push(x);
                    next.push(u);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Injective extensions of `base` covering the whole universe, in lex order.
pub fn maximal_extensions(n: usize, base: &[usize]) -> Vec<Vec<usize>> {
    let mut layer = vec![base.to_vec()];
    for _ in base.len()..n {
        let mut next = Vec::new();
        for t in &layer {
            for x in 0..n {
                if !t.contains(&x) {
                    let mut u = t.clone();
                    u.push(x);
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Result of a `Q_e` search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForcingCertificate {
    /// The least extension of the base in `Q_e`.
    Extension(QWitness),
    /// No extension lies in `Q_e`; lists every maximal extension checked.
    /// `Q_e` is closed upward, so these cover all extensions.
    Exhaustion { base: Vec<usize>, checked: Vec<Vec<usize>> },
}

impl ForcingCertificate {
    pub fn is_extension(&self) -> bool {
        matches!(self, ForcingCertificate::Extension(_))
    }
}

/// Search for `q̄ ⊇ base` in `Q_e`, least in (length, lex) order.
pub fn forcing_search(
    s: &FiniteStructure,
    op: &EnumOperator,
    r: &TupleSet,
    base: &[usize],
    stage: Option<u64>,
) -> Result<ForcingCertificate> {
    check_injective(s, base)?;
    let maximal = maximal_extensions(s.size(), base);
    let mut any = false;
    for q in &maximal {
        if in_q_e(s, op, r, q, stage)?.is_some() {
            any = true;
            break;
        }
    }
    if !any {
        return Ok(ForcingCertificate::Exhaustion {
            base: base.to_vec(),
            checked: maximal,
        });
    }
    for q in injective_extensions(s.size(), base) {
        if let Some(w) = in_q_e(s, op, r, &q, stage)? {
            return Ok(ForcingCertificate::Extension(w));
        }
    }
    unreachable!("a maximal extension lies in Q_e")
}

/// Re-check a certificate from scratch.
pub fn verify_certificate(
    s: &FiniteStructure,
    op: &EnumOperator,
    r: &TupleSet,
    base: &[usize],
    stage: Option<u64>,
    cert: &ForcingCertificate,
) -> Result<bool> {
    Ok(match cert {
        ForcingCertificate::Extension(w) => {
            check_injective(s, &w.q).is_ok()
                && w.q.starts_with(base)
                && in_q_e(s, op, r, &w.q, stage)?.is_some()
                && w.indices.iter().all(|&i| i < w.q.len())
                && w.indices.iter().map(|&i| w.q[i]).collect::<Vec<_>>() == w.tuple
                && !r.contains(&w.tuple)
                && apply(op, &partial_pullback(s, &w.q)?, stage)
                    .contains(&tuplecode_elems(&w.indices))
        }
        ForcingCertificate::Exhaustion { base: b, checked } => {
            b.as_slice() == base
                && *checked == maximal_extensions(s.size(), base)
                && checked
                    .iter()
                    .map(|q| in_q_e(s, op, r, q, stage))
                    .collect::<Result<Vec<_>>>()?
                    .iter()
                    .all(Option::is_none)
        }
    })
}

/// The family `S` read off an operator at a base where `Q_e` is empty.
///
/// Each axiom `⟨C, ⟨j̄⟩⟩` gives the disjunct
/// `∃q̄ (q̄ extends the base ∧ q_{j̄} = x̄ ∧ C ⊆ P_A(q̄))` with `q̄`
/// injective. Base entries are the parameters `z1..zk`.
pub fn extract_definition(
    s: &FiniteStructure,
    op: &EnumOperator,
    base: &[usize],
    max_len: usize,
    stage: Option<u64>,
) -> Result<SigmaP1Family> {
    let r = decode_outputs(&apply(op, &positive_diagram(s), stage));
    if forcing_search(s, op, &r, base, stage)?.is_extension() {
        return Err(Error::Precondition(
            "the base has an extension in Q_e; the operator is forceable there".into(),
        ));
    }
    let sig = s.signature();
    let mut by_len: Vec<Vec<Disjunct>> = vec![Vec::new(); max_len + 1];
    for a in op.axioms_at(stage) {
        let Some(j) = decode_elems(a.conclusion) else { continue };
        if j.len() > max_len {
            continue;
        }
        if let Some(d) = axiom_disjunct(sig, s.size(), base.len(), &j, &a.premises) {
            if !by_len[j.len()].contains(&d) {
                by_len[j.len()].push(d);
            }
        }
    }
    let cases = by_len
        .into_iter()
        .enumerate()
        .filter(|(_, ds)| !ds.is_empty())
        .map(|(len, disjuncts)| Case {
            arity: ArityRule::List(vec![len]),
            disjuncts,
            generators: Vec::new(),
        })
        .collect();
    Ok(SigmaP1Family {
        name: "extracted".into(),
        params: base.len(),
        cases,
    })
}

// None when the premise set can never hold in `P_A(q̄)` for an injective
// `q̄` over `n` elements.
fn axiom_disjunct(
    sig: &Signature,
    n: usize,
    base_len: usize,
    j: &[usize],
    premises: &BTreeSet<u64>,
) -> Option<Disjunct> {
    let mut facts = Vec::new();
    let mut width = base_len.max(j.iter().map(|&i| i + 1).max().unwrap_or(0));
    for &c in premises {
        let f = decode_fact(c)?;
        if !sig.check_fact(&f) {
            return None;
        }
        match f.kind {
            FactKind::Eq if f.args[0] != f.args[1] => return None,
            FactKind::Neq if f.args[0] == f.args[1] => return None,
            // Relation R_r only appears in P_A(q̄) once |q̄| > r.
            FactKind::Rel(r) => width = width.max(r + 1),
            _ => {}
        }
        width = width.max(f.args.iter().map(|&a| a + 1).max().unwrap_or(0));
        facts.push(f);
    }
    if width > n {
        return None;
    }
    let q = |i: usize| Term::Bound(i);
    let mut atoms = Vec::new();
    for k in 0..base_len {
        atoms.push(Atom {
            pred: Pred::Eq,
            args: vec![q(k), Term::Param(k)],
        });
    }
    for (t, &i) in j.iter().enumerate() {
        atoms.push(Atom {
            pred: Pred::Eq,
            args: vec![q(i), Term::Free(t)],
        });
    }
    for f in facts {
        let pred = match f.kind {
            FactKind::Eq => Pred::Eq,
            FactKind::Neq => Pred::Neq,
            FactKind::Rel(r) => Pred::Rel(sig.name(r).to_string()),
        };
        atoms.push(Atom {
            pred,
            args: f.args.iter().map(|&a| q(a)).collect(),
        });
    }
    for a in 0..width {
        for b in a + 1..width {
            atoms.push(Atom {
                pred: Pred::Neq,
                args: vec![q(a), q(b)],
            });
        }
    }
    Some(Disjunct {
        bound: (0..width).map(|i| format!("q{i}")).collect(),
        atoms,
    })
}

/// Per-adversary outcome of [`diagonalize_copy`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Defeated { step: usize, witness: QWitness },
    Unforceable { step: usize, base: Vec<usize>, checked: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalReport {
    /// `p̄_s` after every step `s = 1, 2, …`.
    pub prefixes: Vec<Vec<usize>>,
    pub verdicts: Vec<Verdict>,
}

/// Build `g = ⋃ p̄_s`: step `2e+1` appends element `e` if missing; step
/// `2(k+1)` adopts the least `Q_e` extension for adversary `k` when one
/// exists.
pub fn diagonalize_copy(
    s: &FiniteStructure,
    r: &TupleSet,
    adversaries: &[EnumOperator],
    stage: Option<u64>,
) -> Result<(NumberedEnumeration, DiagonalReport)> {
    let n = s.size();
    let steps = 2 * n.max(adversaries.len());
    let mut p: Vec<usize> = Vec::new();
    let mut report = DiagonalReport {
        prefixes: Vec::new(),
        verdicts: Vec::new(),
    };
    for step in 1..=steps {
        if step % 2 == 1 {
            let e = (step - 1) / 2;
            if e < n && !p.contains(&e) {
                p.push(e);
            }
        } else {
            let k = step / 2 - 1;
            if let Some(op) = adversaries.get(k) {
                match forcing_search(s, op, r, &p, stage)? {
                    ForcingCertificate::Extension(w) => {
                        p = w.q.clone();
                        report.verdicts.push(Verdict::Defeated { step, witness: w });
                    }
                    ForcingCertificate::Exhaustion { base, checked } => {
                        report.verdicts.push(Verdict::Unforceable {
                            step,
                            base,
                            checked: checked.len(),
                        });
                    }
                }
            }
        }
        report.prefixes.push(p.clone());
    }
    Ok((NumberedEnumeration::new(p.clone(), p), report))
}

/// Replay a DEFEATED verdict against the final copy `B = g⁻¹(A)`: the
/// indices are emitted on `P(B)` and their image is outside `R`.
pub fn replay_defeat(
    s: &FiniteStructure,
    op: &EnumOperator,
    r: &TupleSet,
    g: &NumberedEnumeration,
    witness: &QWitness,
    stage: Option<u64>,
) -> Result<bool> {
    let map = g.window(s.size())?;
    if !map.starts_with(&witness.q) {
        return Ok(false);
    }
    let copy = crate::enumeration::Pullback::new(s.clone(), map.clone())?;
    let out = apply(op, &crate::diagram::model_diagram(&copy), stage);
    let image: Vec<usize> = witness.indices.iter().map(|&i| map[i]).collect();
    Ok(out.contains(&tuplecode_elems(&witness.indices)) && !r.contains(&image))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{define_relation, parse_family};

    fn graph1() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            3,
            [("E", vec![0, 1]), ("E", vec![1, 2])],
        )
        .unwrap()
    }

    #[test]
    fn empty_family_compiles_to_empty_operator() {
        let c = compile_family(&Signature::default(), &SigmaP1Family::empty("f"), &[], 3, 3, 5)
            .unwrap();
        assert!(c.operator.is_empty());
    }

    #[test]
    fn loop_family_axioms() {
        let sig = Signature::new([("E", 2)]).unwrap();
        let fam = parse_family("family f\ndisjunct E(x1,x1)\n").unwrap();
        let c = compile_family(&sig, &fam, &[], 2, 1, 0).unwrap();
        let axioms: Vec<_> = c.operator.axioms_at(None).cloned().collect();
        let expect = [
            Axiom::new([fact_code(FactKind::Rel(0), &[0, 0])], tuplecode_elems(&[0])),
            Axiom::new([fact_code(FactKind::Rel(0), &[1, 1])], tuplecode_elems(&[1])),
        ];
        assert_eq!(axioms.len(), 2);
        assert!(expect.iter().all(|a| axioms.contains(a)));
    }

    #[test]
    fn compiled_out_degree_matches_definition() {
        let g = graph1();
        let fam = parse_family("family f\ndisjunct exists y . E(x1,y)\n").unwrap();
        let c = compile_family(g.signature(), &fam, &[], 3, 1, 0).unwrap();
        let out = apply(&c.operator, &positive_diagram(&g), None);
        assert_eq!(out, BTreeSet::from([tuplecode_elems(&[0]), tuplecode_elems(&[1])]));
        assert_eq!(decode_outputs(&out), define_relation(&g, &fam, &[], 1, 0).unwrap());
    }

    #[test]
    fn forcing_examples() {
        let g = graph1();
        let all: TupleSet = all_tuples(3, 2).collect();
        let emit01 = EnumOperator::from_axioms([Axiom::new([], tuplecode_elems(&[0, 1]))]);
        let cert = forcing_search(&g, &emit01, &all, &[], None).unwrap();
        assert!(!cert.is_extension());
        assert!(verify_certificate(&g, &emit01, &all, &[], None, &cert).unwrap());

        let cert = forcing_search(&g, &emit01, &TupleSet::new(), &[], None).unwrap();
        match &cert {
            ForcingCertificate::Extension(w) => {
                assert_eq!(w.q, vec![0, 1]);
                assert_eq!(w.tuple, vec![0, 1]);
            }
            _ => panic!("expected an extension"),
        }
        assert!(verify_certificate(&g, &emit01, &TupleSet::new(), &[], None, &cert).unwrap());

        let none = forcing_search(&g, &EnumOperator::empty(), &TupleSet::new(), &[2], None).unwrap();
        assert!(!none.is_extension());
        assert!(forcing_search(&g, &emit01, &all, &[1, 1], None).is_err());
    }

    #[test]
    fn extraction_round_trip() {
        let g = graph1();
        let fam = parse_family("family f\ndisjunct exists y . E(x1,y)\n").unwrap();
        let c = compile_family(g.signature(), &fam, &[], 3, 1, 0).unwrap();
        let base = vec![];
        let s = extract_definition(&g, &c.operator, &base, 1, None).unwrap();
        assert_eq!(s.params, 0);
        let stage = s.cases.iter().map(|c| c.disjuncts.len()).max().unwrap_or(0);
        assert_eq!(
            define_relation(&g, &s, &[], 1, stage).unwrap(),
            define_relation(&g, &fam, &[], 1, 0).unwrap()
        );
        let with_base = extract_definition(&g, &c.operator, &[2], 1, None).unwrap();
        assert_eq!(with_base.params, 1);
        assert!(with_base.cases[0].disjuncts[0].atoms[0].args.contains(&Term::Param(0)));
    }

    #[test]
    fn extraction_of_empty_operator_defines_nothing() {
        let g = graph1();
        let s = extract_definition(&g, &EnumOperator::empty(), &[], 3, None).unwrap();
        assert!(define_relation(&g, &s, &[], 3, 0).unwrap().is_empty());
    }

    #[test]
    fn extraction_requires_unforceable_base() {
        let g = graph1();
        let bad = EnumOperator::from_axioms([Axiom::new(
            [fact_code(FactKind::Rel(0), &[0, 1])],
            tuplecode_elems(&[0]),
        )]);
        assert!(matches!(
            extract_definition(&g, &bad, &[], 1, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn diagonalization_examples() {
        let g = graph1();
        let (gen, rep) = diagonalize_copy(&g, &TupleSet::new(), &[], None).unwrap();
        assert_eq!(gen.prefix(), &[0, 1, 2]);
        assert!(rep.verdicts.is_empty());

        let emit01 = EnumOperator::from_axioms([Axiom::new([], tuplecode_elems(&[0, 1]))]);
        let (gen, rep) = diagonalize_copy(&g, &TupleSet::new(), std::slice::from_ref(&emit01), None).unwrap();
        match &rep.verdicts[0] {
            Verdict::Defeated { witness, .. } => {
                assert!(replay_defeat(&g, &emit01, &TupleSet::new(), &gen, witness, None).unwrap())
            }
            v => panic!("unexpected {v:?}"),
        }

        let fam = parse_family("family f\ndisjunct exists y . E(x1,y)\n").unwrap();
        let c = compile_family(g.signature(), &fam, &[], 3, 1, 0).unwrap();
        let r = define_relation(&g, &fam, &[], 1, 0).unwrap();
        let (_, rep) = diagonalize_copy(&g, &r, &[c.operator], None).unwrap();
        assert!(matches!(rep.verdicts[0], Verdict::Unforceable { .. }));
    }
}
