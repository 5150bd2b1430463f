//! The injective-tuple space `A*`, dense-set specifications and the forcing
//! construction of generic enumerations.

use std::fmt;

use crate::compiler::{in_q_e, injective_extensions, maximal_extensions, TupleSet};
use crate::diagram::partial_pullback;
use crate::enumeration::NumberedEnumeration;
use crate::error::{Error, Result};
use crate::formula::{ResolvedFormula, SigmaP1Family};
use crate::operator::{apply, catalog_operator, EnumOperator};
use crate::structure::FiniteStructure;

/// A duplicate-free tuple of universe elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InjectiveTuple(Vec<usize>);

impl InjectiveTuple {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if !is_injective(&entries) {
            return Err(Error::NotInjective(entries));
        }
        Ok(InjectiveTuple(entries))
    }

    pub fn empty() -> Self {
        InjectiveTuple(Vec::new())
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for InjectiveTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// `(∀ i≠j < |σ|)[σ(i) ≠ σ(j)]`
pub fn is_injective(sigma: &[usize]) -> bool {
    (0..sigma.len()).all(|i| (0..sigma.len()).all(|j| i == j || sigma[i] != sigma[j]))
}

/// An upward-closed subset of `A*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DenseSetSpec {
    /// Tuples with a prefix `γ↾l` satisfying `φ_l` of a parameter-free family.
    Formula(SigmaP1Family),
    /// Tuples `γ` with `code ∈ Ψ^{P_A(γ)}`.
    OperatorEmits {
        op: EnumOperator,
        code: u64,
        stage: Option<u64>,
    },
    /// `D_n`: tuples containing `n`.
    Hits(usize),
    /// `R_e = {γ : e ∈ Ψ_e^{P_A(γ)}}`.
    Probe(u64),
    /// `Q_e` for an operator against the relation `R`.
    Forcing {
        op: EnumOperator,
        r: TupleSet,
        stage: Option<u64>,
    },
    Empty,
}

impl DenseSetSpec {
    pub fn label(&self) -> String {
        match self {
            DenseSetSpec::Formula(f) => format!("formula:{}", f.name),
            DenseSetSpec::OperatorEmits { code, .. } => format!("emits:{code}"),
            DenseSetSpec::Hits(n) => format!("D{n}"),
            DenseSetSpec::Probe(e) => format!("R{e}"),
            DenseSetSpec::Forcing { .. } => "Q".into(),
            DenseSetSpec::Empty => "empty".into(),
        }
    }
}

enum Prepared {
    Formula(Vec<ResolvedFormula>),
    Emits {
        op: EnumOperator,
        code: u64,
        stage: Option<u64>,
    },
    Hits(usize),
    Forcing {
        op: EnumOperator,
        r: TupleSet,
        stage: Option<u64>,
    },
    Empty,
}

struct Membership<'a> {
    s: &'a FiniteStructure,
    spec: Prepared,
}

impl<'a> Membership<'a> {
    fn new(s: &'a FiniteStructure, spec: &DenseSetSpec, stage: usize) -> Result<Self> {
        let spec = match spec {
            DenseSetSpec::Formula(fam) => {
                if fam.params != 0 {
                    return Err(Error::Precondition(format!(
                        "dense-set family `{}` must not take parameters",
                        fam.name
                    )));
                }
                let per_len = (0..=s.size())
                    .map(|l| ResolvedFormula::new(&fam.formula(l), s.signature(), stage))
                    .collect::<Result<_>>()?;
                Prepared::Formula(per_len)
            }
            DenseSetSpec::OperatorEmits { op, code, stage } => Prepared::Emits {
                op: op.clone(),
                code: *code,
                stage: *stage,
            },
            DenseSetSpec::Hits(n) => Prepared::Hits(*n),
            DenseSetSpec::Probe(e) => Prepared::Emits {
                op: catalog_operator(*e),
                code: *e,
                stage: None,
            },
            DenseSetSpec::Forcing { op, r, stage } => Prepared::Forcing {
                op: op.clone(),
                r: r.clone(),
                stage: *stage,
            },
            DenseSetSpec::Empty => Prepared::Empty,
        };
        Ok(Membership { s, spec })
    }

    /// Membership in the upward closure.
    fn contains(&self, g: &[usize]) -> Result<bool> {
        Ok(match &self.spec {
            Prepared::Formula(per_len) => (0..=g.len())
                .any(|l| per_len[l].holds(self.s, &g[..l], &[])),
            Prepared::Emits { op, code, stage } => {
                apply(op, &partial_pullback(self.s, g)?, *stage).contains(code)
            }
            Prepared::Hits(n) => g.contains(n),
            Prepared::Forcing { op, r, stage } => in_q_e(self.s, op, r, g, *stage)?.is_some(),
            Prepared::Empty => false,
        })
    }

    fn decide(&self, g: &[usize]) -> Result<Decision> {
        if self.contains(g)? {
            return Ok(Decision::In);
        }
        for q in maximal_extensions(self.s.size(), g) {
            if self.contains(&q)? {
                return Ok(Decision::Undecided);
            }
        }
        Ok(Decision::Avoided)
    }

    fn search(&self, p: &[usize]) -> Result<Extension> {
        for q in injective_extensions(self.s.size(), p).into_iter().skip(1) {
            if self.contains(&q)? {
                return Ok(Extension::Found(q));
            }
        }
        Ok(Extension::Exhausted {
            base: p.to_vec(),
            checked: maximal_extensions(self.s.size(), p),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    In,
    Avoided,
    Undecided,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::In => "IN",
            Decision::Avoided => "AVOIDED",
            Decision::Undecided => "UNDECIDED",
        })
    }
}

fn check_tuple(s: &FiniteStructure, g: &[usize]) -> Result<()> {
    if let Some(&x) = g.iter().find(|&&x| x >= s.size()) {
        return Err(Error::OutOfUniverse {
            element: x,
            size: s.size(),
        });
    }
    if !is_injective(g) {
        return Err(Error::NotInjective(g.to_vec()));
    }
    Ok(())
}

/// IN if `γ ∈ S`, AVOIDED if no injective extension of `γ` is in `S`.
pub fn decides(g: &[usize], spec: &DenseSetSpec, s: &FiniteStructure, stage: usize) -> Result<Decision> {
    check_tuple(s, g)?;
    Membership::new(s, spec, stage)?.decide(g)
}

/// Outcome of [`extension_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Found(Vec<usize>),
    /// Every maximal extension was checked; by upward closure these cover
    /// all extensions.
    Exhausted { base: Vec<usize>, checked: Vec<Vec<usize>> },
}

/// Least `q̄ ⊋ p̄` in `S`, ordered by (length, entries).
pub fn extension_search(
    p: &[usize],
    spec: &DenseSetSpec,
    s: &FiniteStructure,
    stage: usize,
) -> Result<Extension> {
    check_tuple(s, p)?;
    Membership::new(s, spec, stage)?.search(p)
}

/// Re-check an exhaustion certificate.
pub fn verify_exhaustion(
    s: &FiniteStructure,
    spec: &DenseSetSpec,
    stage: usize,
    ext: &Extension,
) -> Result<bool> {
    let m = Membership::new(s, spec, stage)?;
    match ext {
        Extension::Found(q) => m.contains(q),
        Extension::Exhausted { base, checked } => {
            if *checked != maximal_extensions(s.size(), base) {
                return Ok(false);
            }
            for q in checked {
                if m.contains(q)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Result of [`build_generic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericRun {
    pub prefix: Vec<usize>,
    pub enumeration: NumberedEnumeration,
    pub prefixes: Vec<Vec<usize>>,
    pub verdicts: Vec<Decision>,
    pub transcript: Vec<String>,
}

impl GenericRun {
    pub fn surjective(&self, n: usize) -> bool {
        (0..n).all(|x| self.prefix.contains(&x))
    }

    pub fn all_decided(&self) -> bool {
        self.verdicts.iter().all(|v| *v != Decision::Undecided)
    }
}

fn show(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(" "))
}

/// Step `2k+1` meets `D_k`; step `2(i+1)` meets spec `i`, moving to the
/// least extension in it unless the current prefix already decides it.
/// `steps` defaults to `2·max(n, #specs)`.
pub fn build_generic(
    s: &FiniteStructure,
    specs: &[DenseSetSpec],
    steps: Option<usize>,
    stage: usize,
) -> Result<GenericRun> {
    let n = s.size();
    let steps = steps.unwrap_or(2 * n.max(specs.len()));
    let members = specs
        .iter()
        .map(|sp| Membership::new(s, sp, stage))
        .collect::<Result<Vec<_>>>()?;
    let mut p: Vec<usize> = Vec::new();
    let mut prefixes = Vec::new();
    let mut transcript = Vec::new();
    for step in 1..=steps {
        if step % 2 == 1 {
            let k = (step - 1) / 2;
            if k < n {
                if p.contains(&k) {
                    transcript.push(format!("step {step} D{k} IN {}", show(&p)));
                } else {
                    p.push(k);
                    transcript.push(format!("step {step} D{k} extend {}", show(&p)));
                }
            } else {
                transcript.push(format!("step {step} idle {}", show(&p)));
            }
        } else {
            let i = step / 2 - 1;
            match members.get(i) {
                Some(m) => match m.decide(&p)? {
                    Decision::Undecided => match m.search(&p)? {
                        Extension::Found(q) => {
                            p = q;
                            transcript.push(format!("step {step} spec{i} extend {}", show(&p)));
                        }
                        Extension::Exhausted { .. } => {
                            unreachable!("an undecided prefix has an extension in the set")
                        }
                    },
                    d => transcript.push(format!("step {step} spec{i} {d} {}", show(&p))),
                },
                None => transcript.push(format!("step {step} idle {}", show(&p))),
            }
        }
        prefixes.push(p.clone());
    }
    let mut verdicts = Vec::new();
    for (i, m) in members.iter().enumerate() {
        let d = m.decide(&p)?;
        transcript.push(format!("verdict spec{i} {} {d}", specs[i].label()));
        verdicts.push(d);
    }
    let enumeration = if (0..n).all(|x| p.contains(&x)) && !p.is_empty() {
        NumberedEnumeration::new(p.clone(), p.clone())
    } else {
        NumberedEnumeration::with_cycle_tail(p.clone(), n)
    };
    transcript.push(format!("enumeration {enumeration}"));
    Ok(GenericRun {
        prefix: p,
        enumeration,
        prefixes,
        verdicts,
        transcript,
    })
}

/// Decide `e ∈ K` from a prefix of a presentation: IN when `Ψ_e` already
/// emits `e` on `P_A(p̄)`, AVOIDED when no extension does.
pub fn jump_probe(s: &FiniteStructure, e: u64, prefix: &[usize], stage: usize) -> Result<Decision> {
    decides(prefix, &DenseSetSpec::Probe(e), s, stage)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{compile_family, decode_outputs, extract_definition};
    use crate::diagram::positive_diagram;
    use crate::enumeration::pullback_structure;
    use crate::formula::{define_relation, parse_family};
    use crate::iso::find_isomorphism;
    use crate::operator::Axiom;
    use crate::structure::Signature;

    fn graph1() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            3,
            [("E", vec![0, 1]), ("E", vec![1, 2])],
        )
        .unwrap()
    }

    fn out_edge() -> DenseSetSpec {
        DenseSetSpec::Formula(
            parse_family(
                "family out\narity 1\ndisjunct exists y . E(x1,y)\narity 2\ndisjunct exists y . E(x2,y)\narity 3\ndisjunct exists y . E(x3,y)\n",
            )
            .unwrap(),
        )
    }

    #[test]
    fn injective_predicate() {
        assert!(is_injective(&[]));
        assert!(is_injective(&[2, 0, 1]));
        assert!(!is_injective(&[1, 0, 1]));
        assert!(InjectiveTuple::new(vec![0, 0]).is_err());
        assert_eq!(InjectiveTuple::new(vec![2, 0]).unwrap().to_string(), "(2 0)");
    }

    #[test]
    fn decides_examples() {
        let g = graph1();
        assert_eq!(decides(&[1, 2], &DenseSetSpec::Hits(2), &g, 4).unwrap(), Decision::In);
        for t in [vec![], vec![0], vec![2, 1, 0]] {
            assert_eq!(decides(&t, &DenseSetSpec::Empty, &g, 4).unwrap(), Decision::Avoided);
        }
        assert_eq!(decides(&[2], &out_edge(), &g, 4).unwrap(), Decision::Undecided);
        assert_eq!(decides(&[2, 0], &out_edge(), &g, 4).unwrap(), Decision::In);
        assert!(matches!(
            decides(&[1, 1], &DenseSetSpec::Hits(0), &g, 4),
            Err(Error::NotInjective(_))
        ));
    }

    #[test]
    fn search_examples() {
        let g = graph1();
        assert_eq!(
            extension_search(&[], &DenseSetSpec::Hits(0), &g, 4).unwrap(),
            Extension::Found(vec![0])
        );
        let ex = extension_search(&[1], &DenseSetSpec::Empty, &g, 4).unwrap();
        assert!(matches!(ex, Extension::Exhausted { .. }));
        assert!(verify_exhaustion(&g, &DenseSetSpec::Empty, 4, &ex).unwrap());
        // Already inside: the least one-step extension stays inside.
        assert_eq!(
            extension_search(&[0], &out_edge(), &g, 4).unwrap(),
            Extension::Found(vec![0, 1])
        );
    }

    #[test]
    fn decisions_are_stable_under_extension() {
        let g = graph1();
        let specs = [out_edge(), DenseSetSpec::Hits(1), DenseSetSpec::Probe(274), DenseSetSpec::Empty];
        for spec in &specs {
            for p in injective_extensions(3, &[]) {
                let d = decides(&p, spec, &g, 4).unwrap();
                if d == Decision::Undecided {
                    continue;
                }
                for q in injective_extensions(3, &p) {
                    assert_eq!(decides(&q, spec, &g, 4).unwrap(), d, "{p:?} -> {q:?}");
                }
            }
        }
    }

    #[test]
    fn builds_in_order_without_specs() {
        let run = build_generic(&graph1(), &[], None, 4).unwrap();
        assert_eq!(run.prefix, vec![0, 1, 2]);
        assert_eq!(run.transcript[0], "step 1 D0 extend (0)");
    }

    #[test]
    fn hitting_spec_pulls_element_forward() {
        let run = build_generic(&graph1(), &[DenseSetSpec::Hits(2)], None, 4).unwrap();
        assert_eq!(run.prefixes[1], vec![0, 2]);
        assert!(run.all_decided());
        assert_eq!(run.prefix, vec![0, 2, 1]);
    }

    #[test]
    fn generic_presentation_is_a_copy() {
        let g = graph1();
        let specs = vec![out_edge(), DenseSetSpec::Probe(274), DenseSetSpec::Hits(2)];
        let run = build_generic(&g, &specs, None, 4).unwrap();
        assert!(run.all_decided() && run.surjective(3));
        let pb = pullback_structure(&run.enumeration, &g, 3).unwrap().to_structure();
        assert!(find_isomorphism(&pb, &g).is_some());
        let again = build_generic(&g, &specs, None, 4).unwrap();
        assert_eq!(run.transcript, again.transcript);
    }

    #[test]
    fn probe_examples() {
        let g = graph1();
        for p in injective_extensions(3, &[]) {
            assert_eq!(jump_probe(&g, 0, &p, 4).unwrap(), Decision::Avoided);
        }
        // Index 1 is the single axiom ⟨∅, self⟩.
        assert_eq!(catalog_operator(1).staged_axioms()[0].1, Axiom::new([], 1));
        assert_eq!(jump_probe(&g, 1, &[], 4).unwrap(), Decision::In);
        for p in crate::compiler::maximal_extensions(3, &[]) {
            assert_ne!(jump_probe(&g, 1000, &p, 4).unwrap(), Decision::Undecided);
        }
    }

    #[test]
    fn forcing_spec_yields_definition() {
        let g = graph1();
        let fam = parse_family("family edge\narity 2\ndisjunct E(x1,x2)\n").unwrap();
        let c = compile_family(g.signature(), &fam, &[], 3, 2, 4).unwrap();
        let r = decode_outputs(&apply(&c.operator, &positive_diagram(&g), None));
        let spec = DenseSetSpec::Forcing {
            op: c.operator.clone(),
            r: r.clone(),
            stage: None,
        };
        let run = build_generic(&g, &[spec], None, 4).unwrap();
        assert_eq!(run.verdicts, vec![Decision::Avoided]);
        let base = &run.prefixes[1];
        let s = extract_definition(&g, &c.operator, base, 2, None).unwrap();
        let want = define_relation(&g, &fam, &[], 2, 4).unwrap();
        let base_params: Vec<usize> = base.clone();
        assert_eq!(define_relation(&g, &s, &base_params, 2, 64).unwrap(), want);
    }
}
