//! Positive diagrams, restricted diagrams and index pullbacks of tuples.

use std::collections::{BTreeMap, BTreeSet};

use crate::coding::{fact_code, FactKind};
use crate::error::{Error, Result};
use crate::structure::{FiniteStructure, Model};

/// A finite set of fact codes, ascending.
pub type CodeSet = BTreeSet<u64>;

/// `P(A)` for a finite structure: every equality, inequality and relation fact.
pub fn positive_diagram(s: &FiniteStructure) -> CodeSet {
    let n = s.size();
    let mut out = CodeSet::new();
    for a in 0..n {
        for b in 0..n {
            let kind = if a == b { FactKind::Eq } else { FactKind::Neq };
            out.insert(fact_code(kind, &[a, b]));
        }
    }
    for r in 0..s.signature().len() {
        out.extend(s.facts(r).iter().map(|t| fact_code(FactKind::Rel(r), t)));
    }
    out
}

/// Positive diagram of an arbitrary model, enumerating all tuples.
///
/// Equality facts follow [`Model::same`], so pullbacks along repeating
/// enumerations produce `f⁻¹(=)` and `f⁻¹(≠)`.
pub fn model_diagram<M: Model + ?Sized>(m: &M) -> CodeSet {
    let n = m.size();
    let mut out = CodeSet::new();
    for a in 0..n {
        for b in 0..n {
            let kind = if m.same(a, b) { FactKind::Eq } else { FactKind::Neq };
            out.insert(fact_code(kind, &[a, b]));
        }
    }
    for r in 0..m.signature().len() {
        for t in all_tuples(n, m.signature().arity(r)) {
            if m.holds(r, &t) {
                out.insert(fact_code(FactKind::Rel(r), &t));
            }
        }
    }
    out
}

/// All tuples of length `len` over `{0..n-1}` in lexicographic order.
pub fn all_tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 && len > 0 {
        0
    } else {
        n.checked_pow(len as u32).expect("tuple space too large")
    };
    (0..total).map(move |mut k| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = k % n;
            k /= n;
        }
        t
    })
}

fn check_range(s: &FiniteStructure, a: &[usize]) -> Result<()> {
    match a.iter().find(|&&x| x >= s.size()) {
        Some(&x) => Err(Error::OutOfUniverse {
            element: x,
            size: s.size(),
        }),
        None => Ok(()),
    }
}

/// Diagram of the substructure on the entries of `a`, using only the
/// relations with index below `a.len()`. Codes use the original elements.
pub fn restriction_diagram(s: &FiniteStructure, a: &[usize]) -> Result<CodeSet> {
    check_range(s, a)?;
    let elems: BTreeSet<usize> = a.iter().copied().collect();
    let mut out = CodeSet::new();
    for &x in &elems {
        for &y in &elems {
            let kind = if x == y { FactKind::Eq } else { FactKind::Neq };
            out.insert(fact_code(kind, &[x, y]));
        }
    }
    for r in 0..s.signature().len().min(a.len()) {
        for t in s.facts(r) {
            if t.iter().all(|x| elems.contains(x)) {
                out.insert(fact_code(FactKind::Rel(r), t));
            }
        }
    }
    Ok(out)
}

/// `P_A(ā)`: the restricted diagram pulled back along the index function of
/// `ā`, so a fact on `a_{n0}, a_{n1}, …` becomes the same fact on `n0, n1, …`.
pub fn partial_pullback(s: &FiniteStructure, a: &[usize]) -> Result<CodeSet> {
    check_range(s, a)?;
    let mut positions: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &x) in a.iter().enumerate() {
        positions.entry(x).or_default().push(i);
    }
    let mut out = CodeSet::new();
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in a.iter().enumerate() {
            let kind = if x == y { FactKind::Eq } else { FactKind::Neq };
            out.insert(fact_code(kind, &[i, j]));
        }
    }
    for r in 0..s.signature().len().min(a.len()) {
        for t in s.facts(r) {
            let choices: Option<Vec<&Vec<usize>>> =
                t.iter().map(|x| positions.get(x)).collect();
            let Some(choices) = choices else { continue };
            for idx in itertools::Itertools::multi_cartesian_product(
                choices.iter().map(|c| c.iter().copied()),
            ) {
                out.insert(fact_code(FactKind::Rel(r), &idx));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{pair, tuplecode};
    use crate::structure::Signature;

    fn graph1() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            3,
            [("E", vec![0, 1]), ("E", vec![1, 2])],
        )
        .unwrap()
    }

    #[test]
    fn diagram_examples() {
        let empty = FiniteStructure::new(Signature::default(), 0, []).unwrap();
        assert!(positive_diagram(&empty).is_empty());
        let one = FiniteStructure::new(Signature::default(), 1, []).unwrap();
        assert_eq!(positive_diagram(&one), CodeSet::from([9]));
        let d = positive_diagram(&graph1());
        assert!(d.contains(&117));
        assert_eq!(d.len(), 3 + 6 + 2);
    }

    #[test]
    fn model_diagram_matches_on_plain_structures() {
        assert_eq!(model_diagram(&graph1()), positive_diagram(&graph1()));
    }

    #[test]
    fn restriction_examples() {
        let g = graph1();
        assert!(restriction_diagram(&g, &[]).unwrap().is_empty());
        let d = restriction_diagram(&g, &[0, 1]).unwrap();
        assert_eq!(d.len(), 2 + 2 + 1);
        assert!(d.contains(&117));
        // One entry admits no relation symbols at all.
        assert_eq!(restriction_diagram(&g, &[0]).unwrap(), CodeSet::from([9]));
        assert!(restriction_diagram(&g, &[3]).is_err());
    }

    #[test]
    fn partial_pullback_examples() {
        let g = graph1();
        assert!(partial_pullback(&g, &[]).unwrap().is_empty());
        assert!(partial_pullback(&g, &[1, 2]).unwrap().contains(&117));
        let rev = partial_pullback(&g, &[2, 1]).unwrap();
        assert!(rev.contains(&pair(2, tuplecode(&[1, 0]))));
        assert!(!rev.contains(&117));
    }

    #[test]
    fn all_tuples_counts() {
        assert_eq!(all_tuples(3, 2).count(), 9);
        assert_eq!(all_tuples(0, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(all_tuples(0, 2).count(), 0);
    }
}
