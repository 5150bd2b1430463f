//! From a functor pair back to an interpretation: `Dom`, `∼`, `≁` and the
//! relations by bounded search over padding tuples, then the equivalence,
//! naturality and coherence checks.

use std::collections::HashMap;
use std::fmt;

use crate::coding::{decode_fact, FactKind};
use crate::compiler::injective_extensions;
use crate::diagram::{partial_pullback, positive_diagram};
use crate::error::{Error, Result};
use crate::iso::{all_isomorphisms, is_isomorphism};
use crate::structure::FiniteStructure;

use super::functor::{decode_graph, FunctorPair};

/// `(b̄, i)`: output index `i` read off the tuple `b̄`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomElem {
    pub tuple: Vec<usize>,
    pub index: usize,
}

impl fmt::Display for DomElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.tuple.iter().map(|x| x.to_string()).collect();
        write!(f, "(({}),{})", parts.join(" "), self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractBounds {
    /// Longest `b̄` considered for `Dom`.
    pub tuple_bound: usize,
    /// Longest padding tuple `d̄`.
    pub pad_bound: usize,
}

impl ExtractBounds {
    pub fn full(n: usize) -> Self {
        ExtractBounds {
            tuple_bound: n,
            pad_bound: n,
        }
    }
}

/// Witnesses found for `x ∼ y` and `x ≁ y`. Both present contradicts
/// the complement claim; neither present means undecided within bounds.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimVerdict {
    pub sim: Option<Vec<usize>>,
    pub nsim: Option<Vec<usize>>,
}

/// Lazy evaluation of the extracted relations on one structure.
pub struct Extractor<'a> {
    fp: &'a FunctorPair,
    b: &'a FiniteStructure,
    bounds: ExtractBounds,
    stage: Option<u64>,
    index_bound: usize,
    star: HashMap<(Vec<usize>, Vec<usize>), Vec<(usize, usize)>>,
    /// Oracles on which `Ψ_*` produced a non-function.
    pub anomalies: Vec<String>,
}

impl<'a> Extractor<'a> {
    /// Output indices range over the universe of `Ψ^{P(B)}` (decoded
    /// leniently: the number of `i = i` facts).
    pub fn new(fp: &'a FunctorPair, b: &'a FiniteStructure, bounds: ExtractBounds, stage: Option<u64>) -> Self {
        let index_bound = fp
            .objects(&positive_diagram(b), stage)
            .iter()
            .filter_map(|&c| decode_fact(c))
            .filter(|f| f.kind == FactKind::Eq && f.args.len() == 2 && f.args[0] == f.args[1])
            .count();
        Extractor {
            fp,
            b,
            bounds,
            stage,
            index_bound,
            star: HashMap::new(),
            anomalies: Vec::new(),
        }
    }

    pub fn index_bound(&self) -> usize {
        self.index_bound
    }

    /// `Ψ_*^{P(left) ⊕ σ ⊕ P(right)}` with `σ = right⁻¹ ∘ left`.
    fn star(&mut self, left: &[usize], right: &[usize]) -> Result<&Vec<(usize, usize)>> {
        let key = (left.to_vec(), right.to_vec());
        if !self.star.contains_key(&key) {
            let sigma: Vec<usize> = left
                .iter()
                .map(|x| right.iter().position(|y| y == x).expect("same elements"))
                .collect();
            let out = decode_graph(&self.fp.morphisms(
                &partial_pullback(self.b, left)?,
                &sigma,
                &partial_pullback(self.b, right)?,
                self.stage,
            ));
            for w in out.windows(2) {
                if w[0].0 == w[1].0 {
                    self.anomalies.push(format!(
                        "Ψ_* is not a function on {left:?} → {right:?}: {} ↦ {}, {}",
                        w[0].0, w[0].1, w[1].1
                    ));
                }
            }
            self.star.insert(key.clone(), out);
        }
        Ok(&self.star[&key])
    }

    /// `(i,i) ∈ Ψ_*^{P(b̄) ⊕ λ↾|b̄| ⊕ P(b̄)}`
    pub fn in_dom(&mut self, x: &DomElem) -> Result<bool> {
        let i = x.index;
        Ok(self.star(&x.tuple, &x.tuple)?.contains(&(i, i)))
    }

    /// All of `Dom` within the tuple bound: tuples in (length, lex) order,
    /// then by index.
    pub fn dom(&mut self) -> Result<Vec<DomElem>> {
        let mut out = Vec::new();
        for t in injective_extensions(self.b.size(), &[]) {
            if t.len() > self.bounds.tuple_bound {
                break;
            }
            for index in 0..self.index_bound {
                let x = DomElem { tuple: t.clone(), index };
                if self.in_dom(&x)? {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }

    pub fn sim(&mut self, x: &DomElem, y: &DomElem) -> Result<SimVerdict> {
        let (b, c) = (&x.tuple, &y.tuple);
        let (i, j) = (x.index, y.index);
        let b_only: Vec<usize> = b.iter().copied().filter(|e| !c.contains(e)).collect();
        let c_only: Vec<usize> = c.iter().copied().filter(|e| !b.contains(e)).collect();
        let rest: Vec<usize> = (0..self.b.size()).filter(|e| !b.contains(e) && !c.contains(e)).collect();
        let mut verdict = SimVerdict::default();
        for pad in injective_extensions(rest.len(), &[]) {
            if pad.len() > self.bounds.pad_bound {
                break;
            }
            let d: Vec<usize> = pad.iter().map(|&k| rest[k]).collect();
            let left = [b.as_slice(), &c_only, &d].concat();
            let right = [c.as_slice(), &b_only, &d].concat();
            let o1 = self.star(&left, &right)?.clone();
            let o2 = self.star(&right, &left)?;
            if verdict.sim.is_none() && o1.contains(&(i, j)) && o2.contains(&(j, i)) {
                verdict.sim = Some(d.clone());
            }
            if verdict.nsim.is_none()
                && (o1.iter().any(|&(a, k)| a == i && k != j) || o2.iter().any(|&(a, l)| a == j && l != i))
            {
                verdict.nsim = Some(d);
            }
            if verdict.sim.is_some() && verdict.nsim.is_some() {
                break;
            }
        }
        Ok(verdict)
    }

    /// `𝔉(i) = (B↾m, i)` for the least `m` putting it in `Dom`.
    pub fn frak(&mut self, i: usize) -> Result<Option<DomElem>> {
        for m in 0..=self.b.size() {
            let x = DomElem {
                tuple: (0..m).collect(),
                index: i,
            };
            if self.in_dom(&x)? {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }

    /// `Dom/∼` with classes numbered by first appearance in [`Self::dom`]
    /// order, and relations read off initial segments: `R(x̄)` when some
    /// `B↾m` has `x_l ∼ (B↾m, j_l)` and `R(j̄) ∈ Ψ^{P(B↾m)}`.
    pub fn induced(&mut self) -> Result<InducedStructure> {
        let dom = self.dom()?;
        let mut reps: Vec<DomElem> = Vec::new();
        let mut unclassified = Vec::new();
        for x in &dom {
            let mut found = false;
            let mut open = false;
            for r in reps.clone() {
                let v = self.sim(x, &r)?;
                if v.sim.is_some() {
                    found = true;
                    break;
                }
                if v.nsim.is_none() {
                    open = true;
                }
            }
            if !found {
                if open {
                    unclassified.push(x.clone());
                } else {
                    reps.push(x.clone());
                }
            }
        }
        let sig = self.fp.target.clone();
        let mut facts = std::collections::BTreeSet::new();
        for m in 0..=self.b.size() {
            let seg: Vec<usize> = (0..m).collect();
            let out = self.fp.objects(&partial_pullback(self.b, &seg)?, self.stage);
            let mut label: HashMap<usize, usize> = HashMap::new();
            for (k, rep) in reps.clone().iter().enumerate() {
                for j in 0..self.index_bound {
                    let y = DomElem { tuple: seg.clone(), index: j };
                    if self.in_dom(&y)? && self.sim(rep, &y)?.sim.is_some() {
                        label.insert(j, k);
                        break;
                    }
                }
            }
            for c in out {
                let Some(f) = decode_fact(c) else { continue };
                let FactKind::Rel(r) = f.kind else { continue };
                if r >= sig.len() || sig.arity(r) != f.args.len() {
                    continue;
                }
                let classes: Option<Vec<usize>> = f.args.iter().map(|j| label.get(j).copied()).collect();
                if let Some(cl) = classes {
                    facts.insert((r, cl));
                }
            }
        }
        Ok(InducedStructure {
            structure: FiniteStructure::new(sig, reps.len(), facts)?,
            reps,
            unclassified,
        })
    }

    /// Class of `x` among the representatives, if `x` is in `Dom`.
    pub fn class_of(&mut self, induced: &InducedStructure, x: &DomElem) -> Result<Option<usize>> {
        if !self.in_dom(x)? {
            return Ok(None);
        }
        for (k, r) in induced.reps.iter().enumerate() {
            if self.sim(x, r)?.sim.is_some() {
                return Ok(Some(k));
            }
        }
        Ok(None)
    }
}

/// The structure `I^F(B)` realized from the extracted interpretation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedStructure {
    pub structure: FiniteStructure,
    /// `τ`: class `k` is the class of `reps[k]`.
    pub reps: Vec<DomElem>,
    /// Domain members whose class could not be decided within bounds.
    pub unclassified: Vec<DomElem>,
}

/// Materialized extraction: `Dom`, the `∼`/`≁` verdict on every pair and
/// the induced quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub index_bound: usize,
    pub bounds: ExtractBounds,
    pub dom: Vec<DomElem>,
    /// `verdicts[x][y]` for members of `dom`.
    pub verdicts: Vec<Vec<SimVerdict>>,
    /// `𝔉(i)` for `i < index_bound`.
    pub frak: Vec<Option<DomElem>>,
    pub induced: InducedStructure,
    pub anomalies: Vec<String>,
    /// Whether the padding search covered every extension to a full listing.
    pub exhaustive: bool,
}

impl Extraction {
    pub fn undecided(&self) -> Vec<(&DomElem, &DomElem)> {
        let mut out = Vec::new();
        for (x, row) in self.verdicts.iter().enumerate() {
            for (y, v) in row.iter().enumerate() {
                if v.sim.is_none() && v.nsim.is_none() {
                    out.push((&self.dom[x], &self.dom[y]));
                }
            }
        }
        out
    }
}

pub fn extract_interpretation(
    fp: &FunctorPair,
    b: &FiniteStructure,
    bounds: ExtractBounds,
    stage: Option<u64>,
) -> Result<Extraction> {
    let mut ex = Extractor::new(fp, b, bounds, stage);
    let dom = ex.dom()?;
    let mut verdicts = Vec::with_capacity(dom.len());
    for x in &dom {
        let mut row = Vec::with_capacity(dom.len());
        for y in &dom {
            row.push(ex.sim(x, y)?);
        }
        verdicts.push(row);
    }
    let frak = (0..ex.index_bound)
        .map(|i| ex.frak(i))
        .collect::<Result<Vec<_>>>()?;
    let induced = ex.induced()?;
    Ok(Extraction {
        index_bound: ex.index_bound,
        bounds,
        dom,
        verdicts,
        frak,
        induced,
        anomalies: ex.anomalies,
        exhaustive: bounds.pad_bound >= b.size(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EquivalenceReport {
    pub pairs: usize,
    pub undecided: usize,
    pub violations: Vec<String>,
}

impl EquivalenceReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reflexivity, symmetry and transitivity of `∼`, the `∼`/`≁` partition,
/// `Ψ_*` functionality, every index having an initial segment in `Dom`,
/// full listings carrying every index, and prefix coherence
/// (`b̄` a prefix of `c̄`: `(b̄,i) ∼ (c̄,j)` iff `i = j`).
///
/// Undecided pairs count as violations only when the padding search was
/// exhaustive.
pub fn check_equivalence_axioms(e: &Extraction, n: usize) -> EquivalenceReport {
    let mut rep = EquivalenceReport {
        pairs: e.dom.len() * e.dom.len(),
        ..Default::default()
    };
    let mut violations = e.anomalies.clone();
    let m = e.dom.len();
    let sim = |x: usize, y: usize| e.verdicts[x][y].sim.is_some();
    for x in 0..m {
        if !sim(x, x) {
            violations.push(format!("∼ not reflexive at {}", e.dom[x]));
        }
        for y in 0..m {
            let v = &e.verdicts[x][y];
            match (&v.sim, &v.nsim) {
                (Some(_), Some(_)) => violations.push(format!(
                    "both ∼ and ≁ hold for {} {}",
                    e.dom[x], e.dom[y]
                )),
                (None, None) => {
                    rep.undecided += 1;
                    if e.exhaustive {
                        violations.push(format!("neither ∼ nor ≁ holds for {} {}", e.dom[x], e.dom[y]));
                    }
                }
                _ => {}
            }
            if sim(x, y) != sim(y, x) {
                violations.push(format!("∼ not symmetric at {} {}", e.dom[x], e.dom[y]));
            }
            if sim(x, y) {
                if let Some(z) = (0..m).find(|&z| sim(y, z) && !sim(x, z)) {
                    violations.push(format!(
                        "∼ not transitive at {} {} {}",
                        e.dom[x], e.dom[y], e.dom[z]
                    ));
                }
            }
            let (bx, by) = (&e.dom[x], &e.dom[y]);
            if by.tuple.starts_with(&bx.tuple) && sim(x, y) != (bx.index == by.index) {
                violations.push(format!("prefix coherence fails for {bx} {by}"));
            }
        }
    }
    for (i, f) in e.frak.iter().enumerate() {
        if f.is_none() {
            violations.push(format!("no initial segment carries index {i}"));
        }
    }
    if e.bounds.tuple_bound >= n {
        let mut full: HashMap<&Vec<usize>, usize> = HashMap::new();
        for x in e.dom.iter().filter(|x| x.tuple.len() == n) {
            *full.entry(&x.tuple).or_default() += 1;
        }
        for t in injective_extensions(n, &[]).iter().filter(|t| t.len() == n) {
            let k = full.get(t).copied().unwrap_or(0);
            if k != e.index_bound {
                violations.push(format!("listing {t:?} carries {k} of {} indices", e.index_bound));
            }
        }
    }
    rep.violations = violations;
    rep
}

/// Perturbation of `Λ` on one structure: swap two output values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LambdaFault {
    pub structure: usize,
    pub a: usize,
    pub b: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NaturalityReport {
    pub structures: usize,
    pub morphisms: usize,
    pub squares: usize,
    pub violations: Vec<String>,
}

impl NaturalityReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `Λ^{P(B)} = τ⁻¹ ∘ 𝔉` must be an isomorphism `F(B) → I^F(B)`, and for
/// every isomorphism `h: B̃ → B̂` between listed structures
/// `Λ^{P(B̂)} ∘ F(h) = I^F(h) ∘ Λ^{P(B̃)}`.
pub fn check_naturality(
    fp: &FunctorPair,
    structures: &[FiniteStructure],
    bounds: ExtractBounds,
    stage: Option<u64>,
    fault: Option<LambdaFault>,
) -> Result<NaturalityReport> {
    let mut rep = NaturalityReport {
        structures: structures.len(),
        ..Default::default()
    };
    let mut extractors: Vec<Extractor> = structures
        .iter()
        .map(|b| Extractor::new(fp, b, bounds, stage))
        .collect();
    let mut induced = Vec::new();
    let mut lambdas = Vec::new();
    let mut objects = Vec::new();
    for (k, b) in structures.iter().enumerate() {
        let ex = &mut extractors[k];
        let ind = ex.induced()?;
        let fb = fp.object(b, stage)?;
        let mut lambda = Vec::new();
        for i in 0..fb.size() {
            let class = match ex.frak(i)? {
                Some(x) => ex.class_of(&ind, &x)?,
                None => None,
            };
            lambda.push(class.ok_or_else(|| {
                Error::Interpretation(format!("Λ undefined at {i} on structure {k}"))
            })?);
        }
        if let Some(f) = fault.filter(|f| f.structure == k) {
            if f.a < lambda.len() && f.b < lambda.len() {
                lambda.swap(f.a, f.b);
            }
        }
        if !is_isomorphism(&fb, &ind.structure, &lambda) {
            rep.violations.push(format!("Λ on structure {k} is not an isomorphism: {lambda:?}"));
        }
        for x in &ind.unclassified {
            rep.violations.push(format!("unclassified domain member {x} on structure {k}"));
        }
        induced.push(ind);
        lambdas.push(lambda);
        objects.push(fb);
    }
    for (k, b1) in structures.iter().enumerate() {
        for (l, b2) in structures.iter().enumerate() {
            for h in all_isomorphisms(b1, b2) {
                rep.morphisms += 1;
                let fh = fp.morphism(b1, &h, b2, stage)?;
                for i in 0..objects[k].size() {
                    rep.squares += 1;
                    let rep_x = &induced[k].reps[lambdas[k][i]];
                    let moved = DomElem {
                        tuple: rep_x.tuple.iter().map(|&x| h[x]).collect(),
                        index: rep_x.index,
                    };
                    let right = extractors[l].class_of(&induced[l], &moved)?;
                    let left = lambdas[l][fh[i]];
                    if right != Some(left) {
                        rep.violations.push(format!(
                            "square fails at {i} for {h:?} from structure {k} to {l}: Λ∘F(h) gives {left}, I^F(h)∘Λ gives {right:?}"
                        ));
                    }
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::tests::{graph1, reversal, two_loops};
    use crate::interp::realize_interpretation;
    use crate::iso::find_isomorphism;

    #[test]
    fn identity_pair_domain() {
        let g = graph1();
        let fp = FunctorPair::identity(g.signature(), 3);
        let e = extract_interpretation(&fp, &g, ExtractBounds::full(3), None).unwrap();
        for x in &e.dom {
            assert!(x.index < x.tuple.len());
        }
        assert!(e.dom.contains(&DomElem { tuple: vec![2, 0], index: 1 }));
        assert_eq!(e.dom.len(), 3 + 6 * 2 + 6 * 3);
        assert_eq!(e.frak[2], Some(DomElem { tuple: vec![0, 1, 2], index: 2 }));
        let rep = check_equivalence_axioms(&e, 3);
        assert!(rep.ok(), "{:?}", rep.violations);
        assert_eq!(e.induced.structure, g);
    }

    #[test]
    fn symmetric_witness_reuses_the_pad() {
        let g = graph1();
        let fp = FunctorPair::identity(g.signature(), 3);
        let mut ex = Extractor::new(&fp, &g, ExtractBounds::full(3), None);
        let x = DomElem { tuple: vec![0], index: 0 };
        let y = DomElem { tuple: vec![1, 0], index: 1 };
        let v = ex.sim(&x, &y).unwrap();
        assert_eq!(v.sim, Some(vec![]));
        assert_eq!(ex.sim(&y, &x).unwrap().sim, v.sim);
    }

    #[test]
    fn table_pair_round_trip() {
        let g = graph1();
        let i = reversal();
        let fp = FunctorPair::from_interpretation(&i, &g, 4).unwrap();
        let e = extract_interpretation(&fp, &g, ExtractBounds::full(3), None).unwrap();
        let rep = check_equivalence_axioms(&e, 3);
        assert!(rep.ok(), "{:?}", rep.violations);
        let realized = realize_interpretation(&i, &g, 4).unwrap().structure;
        assert!(find_isomorphism(&e.induced.structure, &realized).is_some());
    }

    #[test]
    fn dropped_psistar_axioms_are_detected() {
        let g = graph1();
        let fp = FunctorPair::from_interpretation(&reversal(), &g, 4).unwrap();
        let total = fp.psistar.len();
        for k in (0..total).step_by(7) {
            let bad = fp.drop_psistar(k);
            let e = extract_interpretation(&bad, &g, ExtractBounds::full(3), None).unwrap();
            assert!(!check_equivalence_axioms(&e, 3).ok(), "axiom {k}");
        }
    }

    #[test]
    fn naturality_examples() {
        let g = graph1();
        let fp = FunctorPair::identity(g.signature(), 3);
        let rep = check_naturality(&fp, std::slice::from_ref(&g), ExtractBounds::full(3), None, None).unwrap();
        assert!(rep.ok() && rep.morphisms == 1, "{:?}", rep);
        let c = two_loops();
        let fp = FunctorPair::from_interpretation(&reversal(), &c, 4).unwrap();
        let rep = check_naturality(&fp, std::slice::from_ref(&c), ExtractBounds::full(4), None, None).unwrap();
        assert!(rep.ok(), "{:?}", rep.violations);
        assert_eq!(rep.morphisms, 8);
        let fault = LambdaFault { structure: 0, a: 0, b: 2 };
        let rep = check_naturality(&fp, &[c], ExtractBounds::full(4), None, Some(fault)).unwrap();
        assert!(!rep.ok());
    }
}
