//! Positive interpretations, their realization as functors, and the way
//! back from a functor pair to an interpretation.

mod extract;
mod functor;

use std::collections::BTreeMap;

pub use extract::{
    check_equivalence_axioms, check_naturality, extract_interpretation, EquivalenceReport,
    ExtractBounds, Extraction, Extractor, DomElem, InducedStructure, LambdaFault,
    NaturalityReport, SimVerdict,
};
pub use functor::{structure_from_diagram, FunctorPair};

use crate::diagram::all_tuples;
use crate::error::{Error, Result};
use crate::formula::{FamilyBuilder, Mode, ResolvedFormula, SigmaP1Family};
use crate::iso::{find_isomorphism, is_isomorphism};
use crate::structure::{FiniteStructure, Signature};

/// `(Dom, co-Dom, ∼, ≁, R_0, …)` over tuples of one fixed length `domlen`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveInterpretation {
    pub domlen: usize,
    pub dom: SigmaP1Family,
    pub codom: SigmaP1Family,
    pub sim: SigmaP1Family,
    pub nsim: SigmaP1Family,
    /// Target relation name, arity and defining family on `arity·domlen` variables.
    pub rels: Vec<(String, usize, SigmaP1Family)>,
}

impl PositiveInterpretation {
    pub fn target_signature(&self) -> Result<Signature> {
        Signature::new(self.rels.iter().map(|(n, a, _)| (n.clone(), *a)))
    }

    /// Elements are single elements, `∼` is equality, relations are copied.
    pub fn identity(sig: &Signature) -> Result<Self> {
        let mut text = String::from("domlen 1\ndom\narity 1\ndisjunct true\ncodom\nsim\ndisjunct x1 = x2\nnsim\ndisjunct x1 <> x2\n");
        for (name, arity) in sig.iter() {
            let args: Vec<String> = (1..=arity).map(|k| format!("x{k}")).collect();
            text.push_str(&format!("rel {name}/{arity}\narity {arity}\ndisjunct {name}({})\n", args.join(",")));
        }
        parse_interpretation(&text)
    }
}

/// Parse a `.spi` file: `domlen k`, then sections `dom`, `codom`, `sim`,
/// `nsim` and `rel <name>/<arity>`, each followed by `.spf` lines without a
/// `family` header. An empty section is the empty family.
pub fn parse_interpretation(text: &str) -> Result<PositiveInterpretation> {
    let mut domlen = None;
    let mut builder = FamilyBuilder::new(Mode::Positive);
    let mut order: Vec<(String, Option<usize>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap().trim();
        let mut words = content.split_whitespace();
        match words.next() {
            None => {}
            Some("domlen") => {
                let k = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .filter(|&k| k > 0)
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: "`domlen` needs a positive integer".into(),
                    })?;
                if domlen.replace(k).is_some() {
                    return Err(Error::Parse {
                        line,
                        msg: "duplicate `domlen`".into(),
                    });
                }
            }
            Some(s @ ("dom" | "codom" | "sim" | "nsim")) if words.clone().next().is_none() => {
                if order.iter().any(|(n, a)| n == s && a.is_none()) {
                    return Err(Error::Parse {
                        line,
                        msg: format!("duplicate section `{s}`"),
                    });
                }
                builder.start_family(s)?;
                order.push((s.to_string(), None));
            }
            Some("rel") => {
                let spec = words.next().unwrap_or("");
                let (name, arity) = spec
                    .split_once('/')
                    .and_then(|(n, a)| Some((n, a.parse::<usize>().ok()?)))
                    .filter(|(n, a)| !n.is_empty() && *a > 0)
                    .ok_or_else(|| Error::Parse {
                        line,
                        msg: "expected `rel <name>/<arity>`".into(),
                    })?;
                builder.start_family(name)?;
                order.push((name.to_string(), Some(arity)));
            }
            Some("family") => {
                return Err(Error::Parse {
                    line,
                    msg: "sections replace `family` headers in interpretation files".into(),
                })
            }
            Some(_) => {
                if order.is_empty() {
                    return Err(Error::Parse {
                        line,
                        msg: "formula line outside a section".into(),
                    });
                }
                builder.line(line, raw)?;
            }
        }
    }
    let domlen = domlen.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "missing `domlen`".into(),
    })?;
    let fams = builder.finish()?;
    let mut named: BTreeMap<String, SigmaP1Family> = BTreeMap::new();
    let mut rels = Vec::new();
    for ((name, arity), fam) in order.into_iter().zip(fams) {
        match arity {
            Some(a) => rels.push((name, a, fam)),
            None => {
                named.insert(name, fam);
            }
        }
    }
    let mut take = |s: &str| {
        named.remove(s).ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("missing section `{s}`"),
        })
    };
    Ok(PositiveInterpretation {
        domlen,
        dom: take("dom")?,
        codom: take("codom")?,
        sim: take("sim")?,
        nsim: take("nsim")?,
        rels,
    })
}

/// The quotient `(Dom, R_0, …)/∼` with `τ`: realized element `x` is the
/// `∼`-class `tau[x]` (members in canonical order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealizedStructure {
    pub structure: FiniteStructure,
    pub tau: Vec<Vec<Vec<usize>>>,
}

impl RealizedStructure {
    /// Realized element whose class contains `t`.
    pub fn class_of(&self, t: &[usize]) -> Option<usize> {
        self.tau.iter().position(|c| c.iter().any(|m| m == t))
    }
}

fn show(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(" "))
}

/// Evaluate every part of `I` on `B`, check the interpretation axioms and
/// build the quotient. Classes are numbered in order of first appearance
/// among `domlen`-tuples in lexicographic order.
pub fn realize_interpretation(
    interp: &PositiveInterpretation,
    b: &FiniteStructure,
    stage: usize,
) -> Result<RealizedStructure> {
    let k = interp.domlen;
    let sig = b.signature();
    let target = interp.target_signature()?;
    let formula = |fam: &SigmaP1Family, len: usize| ResolvedFormula::new(&fam.formula(len), sig, stage);
    let dom_f = formula(&interp.dom, k)?;
    let codom_f = formula(&interp.codom, k)?;
    let mut dom = Vec::new();
    for t in all_tuples(b.size(), k) {
        let d = dom_f.holds(b, &t, &[]);
        if d == codom_f.holds(b, &t, &[]) {
            return Err(Error::Interpretation(format!(
                "co-domain is not the complement of the domain at {}",
                show(&t)
            )));
        }
        if d {
            dom.push(t);
        }
    }
    let sim_f = formula(&interp.sim, 2 * k)?;
    let nsim_f = formula(&interp.nsim, 2 * k)?;
    let m = dom.len();
    let mut sim = vec![vec![false; m]; m];
    for x in 0..m {
        for y in 0..m {
            let joined = [dom[x].as_slice(), dom[y].as_slice()].concat();
            sim[x][y] = sim_f.holds(b, &joined, &[]);
            if sim[x][y] == nsim_f.holds(b, &joined, &[]) {
                return Err(Error::Interpretation(format!(
                    "≁ is not the complement of ∼ at {} {}",
                    show(&dom[x]),
                    show(&dom[y])
                )));
            }
        }
    }
    for x in 0..m {
        if !sim[x][x] {
            return Err(Error::Interpretation(format!("∼ is not reflexive at {}", show(&dom[x]))));
        }
        for y in 0..m {
            if sim[x][y] != sim[y][x] {
                return Err(Error::Interpretation(format!(
                    "∼ is not symmetric at {} {}",
                    show(&dom[x]),
                    show(&dom[y])
                )));
            }
            if sim[x][y] {
                if let Some(z) = (0..m).find(|&z| sim[y][z] && !sim[x][z]) {
                    return Err(Error::Interpretation(format!(
                        "∼ is not transitive at {} {} {}",
                        show(&dom[x]),
                        show(&dom[y]),
                        show(&dom[z])
                    )));
                }
            }
        }
    }
    let mut class = vec![usize::MAX; m];
    let mut tau: Vec<Vec<Vec<usize>>> = Vec::new();
    for x in 0..m {
        if class[x] != usize::MAX {
            continue;
        }
        let c = tau.len();
        let members: Vec<usize> = (x..m).filter(|&y| sim[x][y]).collect();
        for &y in &members {
            class[y] = c;
        }
        tau.push(members.iter().map(|&y| dom[y].clone()).collect());
    }
    let mut facts = Vec::new();
    for (r, (name, arity, fam)) in interp.rels.iter().enumerate() {
        let f = formula(fam, arity * k)?;
        let mut value: BTreeMap<Vec<usize>, (bool, Vec<usize>)> = BTreeMap::new();
        for idx in all_tuples(m, *arity) {
            let joined: Vec<usize> = idx.iter().flat_map(|&x| dom[x].iter().copied()).collect();
            let holds = f.holds(b, &joined, &[]);
            let classes: Vec<usize> = idx.iter().map(|&x| class[x]).collect();
            match value.get(&classes) {
                Some((v, first)) if *v != holds => {
                    return Err(Error::Interpretation(format!(
                        "relation {name} is not closed under ∼: {} and {}",
                        show(first),
                        show(&joined)
                    )));
                }
                Some(_) => {}
                None => {
                    value.insert(classes, (holds, joined));
                }
            }
        }
        facts.extend(value.into_iter().filter(|(_, (v, _))| *v).map(|(c, _)| (r, c)));
    }
    Ok(RealizedStructure {
        structure: FiniteStructure::new(target, tau.len(), facts)?,
        tau,
    })
}

/// `F(h) = τ̂⁻¹ ∘ h ∘ τ̃` on already realized copies.
pub fn induced_map(from: &RealizedStructure, to: &RealizedStructure, h: &[usize]) -> Result<Vec<usize>> {
    from.tau
        .iter()
        .map(|class| {
            let img: Vec<usize> = class[0].iter().map(|&x| h[x]).collect();
            to.class_of(&img).ok_or_else(|| {
                Error::Interpretation(format!("image {} of a domain tuple is not in the domain", show(&img)))
            })
        })
        .collect()
}

/// The realized functor on an isomorphism `h: B̃ → B̂`.
pub fn functor_on_morphism(
    interp: &PositiveInterpretation,
    b1: &FiniteStructure,
    b2: &FiniteStructure,
    h: &[usize],
    stage: usize,
) -> Result<Vec<usize>> {
    if !is_isomorphism(b1, b2, h) {
        return Err(Error::NotIsomorphism(h.to_vec()));
    }
    let r1 = realize_interpretation(interp, b1, stage)?;
    let r2 = realize_interpretation(interp, b2, stage)?;
    let map = induced_map(&r1, &r2, h)?;
    if !is_isomorphism(&r1.structure, &r2.structure, &map) {
        return Err(Error::Interpretation("induced map is not an isomorphism".into()));
    }
    Ok(map)
}

/// Outcome of composing two interpretations both ways.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiinterpReport {
    /// Isomorphism from `A` interpreted in (`B` interpreted in `A`) onto `A`.
    pub on_a: Option<Vec<usize>>,
    pub on_b: Option<Vec<usize>>,
    /// Whether the composite equals the original with the identity map.
    pub a_identity: bool,
    pub b_identity: bool,
}

impl BiinterpReport {
    pub fn ok(&self) -> bool {
        self.on_a.is_some() && self.on_b.is_some()
    }
}

/// `i_ab` interprets `A` in `B`, `i_ba` interprets `B` in `A`.
pub fn biinterp_compose_check(
    i_ab: &PositiveInterpretation,
    i_ba: &PositiveInterpretation,
    a: &FiniteStructure,
    b: &FiniteStructure,
    stage: usize,
) -> Result<BiinterpReport> {
    let b_in_a = realize_interpretation(i_ba, a, stage)?.structure;
    let a_in_b = realize_interpretation(i_ab, b, stage)?.structure;
    let aa = realize_interpretation(i_ab, &b_in_a, stage)?.structure;
    let bb = realize_interpretation(i_ba, &a_in_b, stage)?.structure;
    Ok(BiinterpReport {
        on_a: find_isomorphism(&aa, a),
        on_b: find_isomorphism(&bb, b),
        a_identity: &aa == a,
        b_identity: &bb == b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{all_isomorphisms, automorphisms, compose};

    pub(crate) fn graph1() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            3,
            [("E", vec![0, 1]), ("E", vec![1, 2])],
        )
        .unwrap()
    }

    pub(crate) fn two_loops() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            4,
            [("E", vec![0, 1]), ("E", vec![1, 0]), ("E", vec![2, 3]), ("E", vec![3, 2])],
        )
        .unwrap()
    }

    pub(crate) fn reversal() -> PositiveInterpretation {
        parse_interpretation(
            "domlen 1\ndom\narity 1\ndisjunct true\ncodom\nsim\ndisjunct x1 = x2\nnsim\ndisjunct x1 <> x2\nrel E/2\ndisjunct E(x2,x1)\n",
        )
        .unwrap()
    }

    #[test]
    fn identity_realizes_the_structure() {
        let g = graph1();
        let r = realize_interpretation(&PositiveInterpretation::identity(g.signature()).unwrap(), &g, 4).unwrap();
        assert_eq!(r.structure, g);
        assert_eq!(r.tau, vec![vec![vec![0]], vec![vec![1]], vec![vec![2]]]);
    }

    #[test]
    fn reversal_reverses_edges() {
        let g = graph1();
        let r = realize_interpretation(&reversal(), &g, 4).unwrap();
        let want = FiniteStructure::from_named(
            g.signature().clone(),
            3,
            [("E", vec![1, 0]), ("E", vec![2, 1])],
        )
        .unwrap();
        assert_eq!(r.structure, want);
    }

    #[test]
    fn injective_pairs_give_six_classes() {
        let i = parse_interpretation(
            "domlen 2\ndom\ndisjunct x1 <> x2\ncodom\ndisjunct x1 = x2\nsim\ndisjunct x1 = x3 & x2 = x4\nnsim\ndisjunct x1 <> x3\ndisjunct x2 <> x4\n",
        )
        .unwrap();
        let r = realize_interpretation(&i, &graph1(), 4).unwrap();
        assert_eq!(r.structure.size(), 6);
        assert_eq!(r.tau[0], vec![vec![0, 1]]);
    }

    #[test]
    fn violations_are_named() {
        let bad_sim = parse_interpretation(
            "domlen 1\ndom\narity 1\ndisjunct true\ncodom\nsim\ndisjunct E(x1,x2)\ndisjunct x1 = x2\nnsim\ndisjunct x1 <> x2\n",
        )
        .unwrap();
        let err = realize_interpretation(&bad_sim, &graph1(), 4).unwrap_err();
        assert!(matches!(err, Error::Interpretation(ref m) if m.contains("≁")), "{err}");
        let not_closed = parse_interpretation(
            "domlen 1\ndom\narity 1\ndisjunct true\ncodom\nsim\narity 2\ndisjunct true\nnsim\nrel P/1\ndisjunct exists y . E(x1,y)\n",
        )
        .unwrap();
        let err = realize_interpretation(&not_closed, &graph1(), 4).unwrap_err();
        assert!(matches!(err, Error::Interpretation(ref m) if m.contains("not closed")), "{err}");
        assert!(parse_interpretation("dom\n").is_err());
        assert!(parse_interpretation("domlen 1\nfamily f\n").is_err());
    }

    #[test]
    fn morphisms_are_functorial() {
        let c = two_loops();
        let i = reversal();
        let auts = automorphisms(&c);
        assert_eq!(auts.len(), 8);
        let swap = vec![2, 3, 0, 1];
        assert_eq!(functor_on_morphism(&i, &c, &c, &swap, 4).unwrap(), swap);
        assert_eq!(functor_on_morphism(&i, &c, &c, &[0, 1, 2, 3], 4).unwrap(), vec![0, 1, 2, 3]);
        for h1 in &auts {
            for h2 in &auts {
                let f1 = functor_on_morphism(&i, &c, &c, h1, 4).unwrap();
                let f2 = functor_on_morphism(&i, &c, &c, h2, 4).unwrap();
                let f12 = functor_on_morphism(&i, &c, &c, &compose(h1, h2), 4).unwrap();
                assert_eq!(f12, compose(&f1, &f2));
            }
        }
        assert!(functor_on_morphism(&i, &c, &c, &[1, 2, 0, 3], 4).is_err());
    }

    #[test]
    fn realization_is_isomorphism_natural() {
        let g = graph1();
        let i = reversal();
        let r = realize_interpretation(&i, &g, 4).unwrap();
        for p in [vec![2, 0, 1], vec![1, 2, 0], vec![2, 1, 0]] {
            let h = g.relabel(&p).unwrap();
            let rh = realize_interpretation(&i, &h, 4).unwrap();
            let f = functor_on_morphism(&i, &g, &h, &p, 4).unwrap();
            assert!(is_isomorphism(&r.structure, &rh.structure, &f));
            assert_eq!(all_isomorphisms(&g, &h).len(), 1);
        }
    }

    #[test]
    fn biinterpretation_examples() {
        let g = graph1();
        let id = PositiveInterpretation::identity(g.signature()).unwrap();
        let rep = biinterp_compose_check(&id, &id, &g, &g, 4).unwrap();
        assert!(rep.ok() && rep.a_identity && rep.b_identity);
        let rev = reversal();
        let rep = biinterp_compose_check(&rev, &rev, &g, &g, 4).unwrap();
        assert!(rep.ok() && rep.a_identity);
        let pairs = parse_interpretation(
            "domlen 2\ndom\ndisjunct x1 <> x2\ncodom\ndisjunct x1 = x2\nsim\ndisjunct x1 = x3 & x2 = x4\nnsim\ndisjunct x1 <> x3\ndisjunct x2 <> x4\nrel E/2\ndisjunct E(x1,x3) & E(x2,x4)\n",
        )
        .unwrap();
        let rep = biinterp_compose_check(&pairs, &id, &g, &g, 4).unwrap();
        assert!(!rep.ok());
    }
}
