//! Totalization `A⁺` and the Σᶜ₁ ↔ Σᵖ₁ translation.

use crate::diagram::all_tuples;
use crate::error::{Error, Result};
use crate::formula::{Pred, SigmaP1Family};
use crate::structure::{FiniteStructure, Signature};

/// Suffix naming the complement of a relation in `A⁺`.
pub const BAR: &str = "_bar";

/// `R, R_bar` for every `R`, interleaved in signature order.
pub fn totalized_signature(sig: &Signature) -> Result<Signature> {
    Signature::new(
        sig.iter()
            .flat_map(|(n, a)| [(n.to_string(), a), (format!("{n}{BAR}"), a)]),
    )
}

/// `A⁺ = (A, (R_i, R̄_i))` with complements taken literally.
pub fn totalize(s: &FiniteStructure) -> Result<FiniteStructure> {
    let sig = s.signature();
    let plus = totalized_signature(sig)?;
    let mut facts = Vec::new();
    for r in 0..sig.len() {
        for t in all_tuples(s.size(), sig.arity(r)) {
            let slot = if s.contains(r, &t) { 2 * r } else { 2 * r + 1 };
            facts.push((slot, t));
        }
    }
    FiniteStructure::new(plus, s.size(), facts)
}

/// Replace every `¬R(x̄)` by `R_bar(x̄)`. Negated equalities were already
/// normalized to `<>`/`=` by the parser.
pub fn sigmac1_to_sigmap1(fam: &SigmaP1Family) -> SigmaP1Family {
    fam.map_preds(&mut |p| match p {
        Pred::NotRel(r) => Pred::Rel(format!("{r}{BAR}")),
        other => other.clone(),
    })
}

/// Inverse of [`sigmac1_to_sigmap1`]: `R_bar` becomes `¬R` for every `R`
/// of the base signature.
pub fn sigmap1_to_sigmac1(fam: &SigmaP1Family, base: &Signature) -> Result<SigmaP1Family> {
    if !fam.is_positive() {
        return Err(Error::Precondition("input already contains negated atoms".into()));
    }
    Ok(fam.map_preds(&mut |p| match p {
        Pred::Rel(name) => match name.strip_suffix(BAR) {
            Some(r) if base.index_of(r).is_some() => Pred::NotRel(r.to_string()),
            _ => p.clone(),
        },
        other => other.clone(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{define_relation, parse_classical, parse_family};

    fn graph1() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            3,
            [("E", vec![0, 1]), ("E", vec![1, 2])],
        )
        .unwrap()
    }

    #[test]
    fn complement_counts() {
        let t = totalize(&graph1()).unwrap();
        assert_eq!(t.signature().to_string(), "signature E/2 E_bar/2");
        assert_eq!(t.facts(1).len(), 7);
        assert_eq!(t.facts(0).len() + t.facts(1).len(), 9);
        let full = FiniteStructure::new(
            Signature::new([("P", 1)]).unwrap(),
            2,
            [(0, vec![0]), (0, vec![1])],
        )
        .unwrap();
        assert!(totalize(&full).unwrap().facts(1).is_empty());
    }

    #[test]
    fn negated_edge_translates() {
        let g = graph1();
        let c = &parse_classical("family f\ndisjunct !E(x1,x2)\n").unwrap()[0];
        let p = sigmac1_to_sigmap1(c);
        assert!(p.is_positive());
        assert_eq!(p.to_string(), "family f\narity 2\ndisjunct E_bar(x1,x2)\n");
        let classical = define_relation(&g, c, &[], 2, 0).unwrap();
        let positive = define_relation(&totalize(&g).unwrap(), &p, &[], 2, 0).unwrap();
        assert_eq!(classical.len(), 7);
        assert_eq!(classical, positive);
        assert_eq!(&sigmap1_to_sigmac1(&p, g.signature()).unwrap(), c);
    }

    #[test]
    fn positive_input_is_unchanged() {
        let f = parse_family("family f\ndisjunct exists y . E(x1,y)\n").unwrap();
        assert_eq!(sigmac1_to_sigmap1(&f), f);
    }
}
