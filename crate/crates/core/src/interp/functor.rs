//! Functor pairs `(Ψ, Ψ_*)` and their table compilation from an
//! interpretation.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::coding::{decode_fact, graph_codes, join3, pair, unpair, FactKind};
use crate::diagram::{all_tuples, partial_pullback, positive_diagram, CodeSet};
use crate::error::{Error, Result};
use crate::iso::invert;
use crate::operator::{apply, Axiom, EnumOperator};
use crate::structure::{FiniteStructure, Signature};

use super::{induced_map, realize_interpretation, PositiveInterpretation, RealizedStructure};

/// `Ψ` maps `P(A)` to `P(F(A))`; `Ψ_*` maps `P(A) ⊕ Graph(f) ⊕ P(B)` to
/// `Graph(F(f))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorPair {
    pub target: Signature,
    pub psi: EnumOperator,
    pub psistar: EnumOperator,
}

fn star_oracle(x: &CodeSet, h: &[usize], y: &CodeSet) -> CodeSet {
    join3(x.iter().copied(), graph_codes(h), y.iter().copied())
        .into_iter()
        .collect()
}

/// Pairs `(i, j)` of a graph output.
pub(crate) fn decode_graph(codes: &CodeSet) -> Vec<(usize, usize)> {
    codes
        .iter()
        .map(|&c| {
            let (i, j) = unpair(c);
            (i as usize, j as usize)
        })
        .collect()
}

impl FunctorPair {
    /// The identity functor on structures of signature `sig` with at most
    /// `n` elements: single-premise copy axioms for every possible fact and
    /// every graph pair.
    pub fn identity(sig: &Signature, n: usize) -> Self {
        let mut psi = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let kind = if a == b { FactKind::Eq } else { FactKind::Neq };
                let c = crate::coding::fact_code(kind, &[a, b]);
                psi.push(Axiom::new([c], c));
            }
        }
        for r in 0..sig.len() {
            for t in all_tuples(n, sig.arity(r)) {
                let c = crate::coding::fact_code(FactKind::Rel(r), &t);
                psi.push(Axiom::new([c], c));
            }
        }
        let mut star = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let g = pair(i as u64, j as u64);
                star.push(Axiom::new([3 * g + 1], g));
            }
        }
        FunctorPair {
            target: sig.clone(),
            psi: EnumOperator::from_axioms(psi),
            psistar: EnumOperator::from_axioms(star),
        }
    }

    /// Tabulate the functor an interpretation induces on the copies of
    /// `B`: for every listing `π` of `B`, `⟨P_B(π), P(F(B_π))⟩`, and for
    /// every `π` and permutation `h`,
    /// `⟨P_B(π) ⊕ h ⊕ P_B(π∘h⁻¹), Graph(τ̂⁻¹ ∘ h ∘ τ̃)⟩`.
    pub fn from_interpretation(
        interp: &PositiveInterpretation,
        b: &FiniteStructure,
        stage: usize,
    ) -> Result<Self> {
        let n = b.size();
        let listings: Vec<Vec<usize>> = (0..n).permutations(n).collect();
        let mut copies: BTreeMap<Vec<usize>, (CodeSet, RealizedStructure)> = BTreeMap::new();
        for pi in &listings {
            let copy = b.relabel(&invert(pi))?;
            let real = realize_interpretation(interp, &copy, stage)?;
            copies.insert(pi.clone(), (partial_pullback(b, pi)?, real));
        }
        let mut psi = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (pre, real) in copies.values() {
            if !seen.insert(pre.clone()) {
                continue;
            }
            for c in positive_diagram(&real.structure) {
                psi.push(Axiom::new(pre.iter().copied(), c));
            }
        }
        let mut star = Vec::new();
        for pi in &listings {
            let (pre_pi, real_pi) = &copies[pi];
            for h in &listings {
                let hinv = invert(h);
                let rho: Vec<usize> = (0..n).map(|k| pi[hinv[k]]).collect();
                let (pre_rho, real_rho) = &copies[&rho];
                let fh = induced_map(real_pi, real_rho, h)?;
                let premises = star_oracle(pre_pi, h, pre_rho);
                for (i, j) in fh.into_iter().enumerate() {
                    star.push(Axiom::new(premises.iter().copied(), pair(i as u64, j as u64)));
                }
            }
        }
        Ok(FunctorPair {
            target: interp.target_signature()?,
            psi: EnumOperator::from_axioms(psi),
            psistar: EnumOperator::from_axioms(star),
        })
    }

    pub fn objects(&self, x: &CodeSet, stage: Option<u64>) -> CodeSet {
        apply(&self.psi, x, stage)
    }

    pub fn morphisms(&self, x: &CodeSet, h: &[usize], y: &CodeSet, stage: Option<u64>) -> CodeSet {
        apply(&self.psistar, &star_oracle(x, h, y), stage)
    }

    /// `F(B)` decoded from `Ψ^{P(B)}`.
    pub fn object(&self, b: &FiniteStructure, stage: Option<u64>) -> Result<FiniteStructure> {
        structure_from_diagram(&self.target, &self.objects(&positive_diagram(b), stage))
    }

    /// `F(h)` decoded from `Ψ_*`, checked to be a bijection of `F(B̃)` onto
    /// `F(B̂)`.
    pub fn morphism(
        &self,
        b1: &FiniteStructure,
        h: &[usize],
        b2: &FiniteStructure,
        stage: Option<u64>,
    ) -> Result<Vec<usize>> {
        let m1 = self.object(b1, stage)?.size();
        let m2 = self.object(b2, stage)?.size();
        let graph = decode_graph(&self.morphisms(&positive_diagram(b1), h, &positive_diagram(b2), stage));
        let mut map = vec![usize::MAX; m1];
        for (i, j) in graph {
            if i >= m1 || j >= m2 || (map[i] != usize::MAX && map[i] != j) {
                return Err(Error::Interpretation(format!("Ψ_* output is not a map at ({i},{j})")));
            }
            map[i] = j;
        }
        if let Some(i) = map.iter().position(|&j| j == usize::MAX) {
            return Err(Error::Interpretation(format!("Ψ_* output has no value at {i}")));
        }
        if m1 != m2 || !crate::generic::is_injective(&map) {
            return Err(Error::Interpretation("Ψ_* output is not a bijection".into()));
        }
        Ok(map)
    }

    /// Check functoriality on every copy of `B`: each `Ψ^{P(B_π)}` decodes
    /// to a structure and each `Ψ_*` output for `h: B_π → B_ρ` is an
    /// isomorphism between them, with identities going to identities.
    pub fn check_on_copies(&self, b: &FiniteStructure, stage: Option<u64>) -> Vec<String> {
        let n = b.size();
        let mut out = Vec::new();
        let copies: Vec<(Vec<usize>, FiniteStructure)> = (0..n)
            .permutations(n)
            .map(|pi| {
                let c = b.relabel(&invert(&pi)).expect("listing is a bijection");
                (pi, c)
            })
            .collect();
        let mut objects = BTreeMap::new();
        for (pi, c) in &copies {
            match self.object(c, stage) {
                Ok(s) => {
                    objects.insert(pi.clone(), s);
                }
                Err(e) => out.push(format!("copy {pi:?}: {e}")),
            }
        }
        for (pi, c1) in &copies {
            for h in (0..n).permutations(n) {
                let c2 = c1.relabel(&h).expect("permutation");
                let hinv = invert(&h);
                let rho: Vec<usize> = (0..n).map(|k| pi[hinv[k]]).collect();
                let (Some(f1), Some(f2)) = (objects.get(pi), objects.get(&rho)) else { continue };
                match self.morphism(c1, &h, &c2, stage) {
                    Ok(fh) => {
                        if !crate::iso::is_isomorphism(f1, f2, &fh) {
                            out.push(format!("F({h:?}) on copy {pi:?} is not an isomorphism"));
                        }
                        let id: Vec<usize> = (0..n).collect();
                        if h == id && fh != (0..fh.len()).collect::<Vec<_>>() {
                            out.push(format!("F(id) on copy {pi:?} is not the identity"));
                        }
                    }
                    Err(e) => out.push(format!("F({h:?}) on copy {pi:?}: {e}")),
                }
            }
        }
        out
    }

    /// Remove axiom `k` of `Ψ_*`.
    pub fn drop_psistar(&self, k: usize) -> Self {
        FunctorPair {
            psistar: self.psistar.without(k),
            ..self.clone()
        }
    }

    pub fn drop_psi(&self, k: usize) -> Self {
        FunctorPair {
            psi: self.psi.without(k),
            ..self.clone()
        }
    }
}

/// Read a finite structure back from a positive diagram. The universe is
/// the set of `i` with `i = i`; equality must be exactly the diagonal and
/// every other pair must be unequal.
pub fn structure_from_diagram(sig: &Signature, codes: &CodeSet) -> Result<FiniteStructure> {
    let facts: Vec<_> = codes
        .iter()
        .map(|&c| decode_fact(c).ok_or_else(|| Error::Interpretation(format!("code {c} is not a fact"))))
        .collect::<Result<_>>()?;
    let size = facts
        .iter()
        .filter(|f| f.kind == FactKind::Eq && f.args.len() == 2 && f.args[0] == f.args[1])
        .count();
    let bad = |msg: String| Err(Error::Interpretation(msg));
    let mut neq = 0;
    let mut rels = Vec::new();
    for f in &facts {
        if f.args.iter().any(|&a| a >= size) {
            return bad(format!("fact {f:?} mentions an element outside 0..{size}"));
        }
        match f.kind {
            FactKind::Eq if f.args.len() == 2 && f.args[0] == f.args[1] => {}
            FactKind::Neq if f.args.len() == 2 && f.args[0] != f.args[1] => neq += 1,
            FactKind::Rel(r) if r < sig.len() && sig.arity(r) == f.args.len() => {
                rels.push((r, f.args.clone()))
            }
            _ => return bad(format!("fact {f:?} does not fit the diagram of a structure")),
        }
    }
    if neq != size * size.saturating_sub(1) {
        return bad("inequality facts are incomplete".into());
    }
    FiniteStructure::new(sig.clone(), size, rels)
}
