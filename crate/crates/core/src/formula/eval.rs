//! Stage-bounded satisfaction by backtracking over bound variables.

use std::collections::BTreeSet;

use super::{Disjunct, Pred, SigmaP1Family, SigmaP1Formula, Term};
use crate::diagram::all_tuples;
use crate::error::{Error, Result};
use crate::structure::{Model, Signature};

/// A predicate resolved against a signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lit {
    Eq,
    Neq,
    Rel(usize),
    NotRel(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ResolvedAtom {
    pub lit: Lit,
    pub args: Vec<Term>,
}

/// A disjunct with relation names resolved and a fixed search plan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedDisjunct {
    pub bound: usize,
    pub atoms: Vec<ResolvedAtom>,
    // checks[0]: atoms without bound variables; checks[k + 1]: atoms whose
    // last bound variable is k.
    checks: Vec<Vec<usize>>,
    // An equality pinning bound variable k to an earlier term.
    forced: Vec<Option<Term>>,
}

pub fn resolve(d: &Disjunct, sig: &Signature) -> Result<ResolvedDisjunct> {
    let mut atoms = Vec::with_capacity(d.atoms.len());
    for a in &d.atoms {
        let (lit, arity) = match &a.pred {
            Pred::Eq => (Lit::Eq, 2),
            Pred::Neq => (Lit::Neq, 2),
            Pred::Rel(name) | Pred::NotRel(name) => {
                let i = sig
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownRelation(name.clone()))?;
                let lit = if matches!(a.pred, Pred::Rel(_)) {
                    Lit::Rel(i)
                } else {
                    Lit::NotRel(i)
                };
                (lit, sig.arity(i))
            }
        };
        if a.args.len() != arity {
            return Err(Error::ArityMismatch {
                name: match &a.pred {
                    Pred::Rel(n) | Pred::NotRel(n) => n.clone(),
                    _ => "=".into(),
                },
                expected: arity,
                found: a.args.len(),
            });
        }
        atoms.push(ResolvedAtom {
            lit,
            args: a.args.clone(),
        });
    }
    let bound = d.bound.len();
    let mut checks = vec![Vec::new(); bound + 1];
    let mut forced = vec![None; bound];
    for (i, a) in atoms.iter().enumerate() {
        let last = a
            .args
            .iter()
            .filter_map(|t| match t {
                Term::Bound(k) => Some(k + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        checks[last].push(i);
        if a.lit == Lit::Eq && last > 0 {
            let k = last - 1;
            let other = if a.args[0] == Term::Bound(k) {
                &a.args[1]
            } else {
                &a.args[0]
            };
            if other != &Term::Bound(k) && forced[k].is_none() {
                forced[k] = Some(other.clone());
            }
        }
    }
    Ok(ResolvedDisjunct {
        bound,
        atoms,
        checks,
        forced,
    })
}

struct Ctx<'a, M: ?Sized> {
    m: &'a M,
    free: &'a [usize],
    params: &'a [usize],
    exact_eq: bool,
}

impl<M: Model + ?Sized> Ctx<'_, M> {
    fn value(&self, t: &Term, bound: &[usize]) -> Option<usize> {
        match t {
            Term::Free(k) => self.free.get(*k).copied(),
            Term::Param(k) => self.params.get(*k).copied(),
            Term::Bound(k) => bound.get(*k).copied(),
        }
    }

    fn check(&self, a: &ResolvedAtom, bound: &[usize]) -> bool {
        let Some(vals) = a
            .args
            .iter()
            .map(|t| self.value(t, bound))
            .collect::<Option<Vec<usize>>>()
        else {
            return false;
        };
        if vals.iter().any(|&v| v >= self.m.size()) {
            return false;
        }
        match a.lit {
            Lit::Eq => self.m.same(vals[0], vals[1]),
            Lit::Neq => !self.m.same(vals[0], vals[1]),
            Lit::Rel(r) => self.m.holds(r, &vals),
            Lit::NotRel(r) => !self.m.holds(r, &vals),
        }
    }

    fn search(&self, d: &ResolvedDisjunct, bound: &mut Vec<usize>) -> bool {
        let k = bound.len();
        if k == d.bound {
            return true;
        }
        let candidates: Vec<usize> = match (&d.forced[k], self.exact_eq) {
            (Some(t), true) => match self.value(t, bound) {
                Some(v) if v < self.m.size() => vec![v],
                _ => Vec::new(),
            },
            _ => (0..self.m.size()).collect(),
        };
        for v in candidates {
            bound.push(v);
            if d.checks[k + 1].iter().all(|&i| self.check(&d.atoms[i], bound))
                && self.search(d, bound)
            {
                return true;
            }
            bound.pop();
        }
        false
    }
}

/// A satisfying assignment of the bound variables, if any.
pub fn witness<M: Model + ?Sized>(
    m: &M,
    d: &ResolvedDisjunct,
    free: &[usize],
    params: &[usize],
) -> Option<Vec<usize>> {
    let ctx = Ctx {
        m,
        free,
        params,
        exact_eq: m.exact_equality(),
    };
    if !d.checks[0].iter().all(|&i| ctx.check(&d.atoms[i], &[])) {
        return None;
    }
    let mut bound = Vec::with_capacity(d.bound);
    ctx.search(d, &mut bound).then_some(bound)
}

pub fn satisfies<M: Model + ?Sized>(
    m: &M,
    d: &ResolvedDisjunct,
    free: &[usize],
    params: &[usize],
) -> bool {
    witness(m, d, free, params).is_some()
}

/// The disjuncts `0..=stage` of a formula, resolved once for repeated use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedFormula {
    pub free: usize,
    pub params: usize,
    pub disjuncts: Vec<ResolvedDisjunct>,
}

impl ResolvedFormula {
    pub fn new(phi: &SigmaP1Formula, sig: &Signature, stage: usize) -> Result<Self> {
        let disjuncts = phi
            .disjuncts_upto(stage)?
            .iter()
            .map(|d| resolve(d, sig))
            .collect::<Result<_>>()?;
        Ok(ResolvedFormula {
            free: phi.free,
            params: phi.params,
            disjuncts,
        })
    }

    pub fn holds<M: Model + ?Sized>(&self, m: &M, free: &[usize], params: &[usize]) -> bool {
        self.disjuncts.iter().any(|d| satisfies(m, d, free, params))
    }
}

fn check_args<M: Model + ?Sized>(m: &M, what: &'static str, v: &[usize], len: usize) -> Result<()> {
    if v.len() != len {
        return Err(Error::Length {
            what,
            expected: len,
            found: v.len(),
        });
    }
    match v.iter().find(|&&a| a >= m.size()) {
        Some(&a) => Err(Error::OutOfUniverse {
            element: a,
            size: m.size(),
        }),
        None => Ok(()),
    }
}

/// Truth of `φ(ā, c̄)` using disjuncts `0..=stage`.
pub fn sat_stage<M: Model + ?Sized>(
    m: &M,
    phi: &SigmaP1Formula,
    assignment: &[usize],
    params: &[usize],
    stage: usize,
) -> Result<bool> {
    check_args(m, "free variable values", assignment, phi.free)?;
    check_args(m, "parameters", params, phi.params)?;
    for j in 0..=stage {
        let Some(d) = phi.disjunct(j) else { break };
        let d = resolve(&d?, m.signature())?;
        if satisfies(m, &d, assignment, params) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `{ ā : |ā| ≤ max_len, m ⊨ φ_{|ā|}(ā, c̄) }` at the given stage.
pub fn define_relation<M: Model + ?Sized>(
    m: &M,
    fam: &SigmaP1Family,
    params: &[usize],
    max_len: usize,
    stage: usize,
) -> Result<BTreeSet<Vec<usize>>> {
    check_args(m, "parameters", params, fam.params)?;
    let mut out = BTreeSet::new();
    for len in 0..=max_len {
        let phi = ResolvedFormula::new(&fam.formula(len), m.signature(), stage)?;
        if phi.disjuncts.is_empty() {
            continue;
        }
        for t in all_tuples(m.size(), len) {
            if phi.holds(m, &t, params) {
                out.insert(t);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_family;
    use crate::structure::FiniteStructure;

    fn graph1() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            3,
            [("E", vec![0, 1]), ("E", vec![1, 2])],
        )
        .unwrap()
    }

    #[test]
    fn out_degree() {
        let g = graph1();
        let fam = parse_family("family f\ndisjunct exists y . E(x1,y)\n").unwrap();
        let phi = fam.formula(1);
        assert!(sat_stage(&g, &phi, &[0], &[], 0).unwrap());
        assert!(!sat_stage(&g, &phi, &[2], &[], 5).unwrap());
        assert_eq!(
            define_relation(&g, &fam, &[], 3, 4).unwrap(),
            BTreeSet::from([vec![0], vec![1]])
        );
    }

    #[test]
    fn chain_needs_stage() {
        let g = graph1();
        let fam = parse_family(
            "family f\narity 1\ngenerator chain(n in 1..): exists y[1..n] . E(x1,y[1]) & rep i=1..n-1 : E(y[i],y[i+1]) & rep i=1..n-1 : y[i] <> y[i+1]\n",
        )
        .unwrap();
        let phi = fam.formula(1);
        assert!(sat_stage(&g, &phi, &[0], &[], 1).unwrap());
        // Paths of length 3 need a fourth distinct-step vertex; stage 2 is n = 3.
        let len3 = parse_family(
            "family f\narity 1\ngenerator chain(n in 2..): exists y[1..n] . E(x1,y[1]) & rep i=1..n-1 : E(y[i],y[i+1])\n",
        )
        .unwrap()
        .formula(1);
        assert!(sat_stage(&g, &len3, &[0], &[], 0).unwrap());
        assert!(!sat_stage(&g, &len3, &[1], &[], 3).unwrap());
    }

    #[test]
    fn zero_disjuncts_are_false() {
        let g = graph1();
        let phi = SigmaP1Formula::falsum(1);
        assert!(!sat_stage(&g, &phi, &[0], &[], 100).unwrap());
        assert!(define_relation(&g, &SigmaP1Family::empty("f"), &[], 3, 9)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn arity_and_name_errors() {
        let g = graph1();
        let fam = parse_family("family f\ndisjunct F(x1)\n").unwrap();
        assert_eq!(
            sat_stage(&g, &fam.formula(1), &[0], &[], 0),
            Err(Error::UnknownRelation("F".into()))
        );
        let fam = parse_family("family f\ndisjunct E(x1)\n").unwrap();
        assert!(matches!(
            sat_stage(&g, &fam.formula(1), &[0], &[], 0),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            sat_stage(&g, &SigmaP1Formula::falsum(1), &[], &[], 0),
            Err(Error::Length { .. })
        ));
    }

    #[test]
    fn forced_equalities_respect_congruence() {
        use crate::enumeration::{NumberedEnumeration, Pullback};
        let g = graph1();
        let pb = Pullback::new(g, NumberedEnumeration::parse("0 0 1 2").unwrap().window(4).unwrap())
            .unwrap();
        let fam = parse_family("family f\ndisjunct exists y . y = x1 & E(y,x2)\n").unwrap();
        // y must range over the class of x1 = 0, i.e. both indices 0 and 1.
        let rel = define_relation(&pb, &fam, &[], 2, 0).unwrap();
        assert!(rel.contains(&vec![1, 2]) && rel.contains(&vec![0, 2]));
    }
}
