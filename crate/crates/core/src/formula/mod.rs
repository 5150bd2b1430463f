//! The Σᵖ₁ formula language: c.e. disjunctions of existentially quantified
//! conjunctions of atoms, written in the `.spf` DSL.
//!
//! A formula is a stream of disjuncts: an explicit finite list followed by
//! template generators, each producing one disjunct per integer `n`.
//! Generators are dovetailed, so the stream is total whenever at least one
//! generator is present.

mod eval;
mod parse;
mod print;

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub use eval::{
    define_relation, resolve, sat_stage, satisfies, witness, Lit, ResolvedAtom, ResolvedDisjunct,
    ResolvedFormula,
};
pub use parse::{parse_classical, parse_families, parse_family, FamilyBuilder, Mode};

/// A variable reference. Indices are 0-based; the DSL writes `x1`, `z1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Free(usize),
    Param(usize),
    Bound(usize),
}

/// Predicate of an atom. `NotRel` only occurs in Σᶜ₁ formulas parsed with
/// [`parse_classical`]; Σᵖ₁ families never contain it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pred {
    Eq,
    Neq,
    Rel(String),
    NotRel(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: Pred,
    pub args: Vec<Term>,
}

/// `∃ȳ (θ₁ ∧ … ∧ θ_k)`. An empty conjunction is true.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disjunct {
    pub bound: Vec<String>,
    pub atoms: Vec<Atom>,
}

impl Disjunct {
    pub fn bound_count(&self) -> usize {
        self.bound.len()
    }

    pub(crate) fn max_free(&self) -> usize {
        self.atoms
            .iter()
            .flat_map(|a| &a.args)
            .filter_map(|t| match t {
                Term::Free(k) => Some(k + 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// Integer expression used in generator templates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IExpr {
    Lit(i64),
    Var(String),
    Add(Box<IExpr>, Box<IExpr>),
    Sub(Box<IExpr>, Box<IExpr>),
}

impl IExpr {
    fn eval(&self, env: &BTreeMap<String, i64>) -> Result<i64> {
        Ok(match self {
            IExpr::Lit(v) => *v,
            IExpr::Var(v) => *env
                .get(v)
                .ok_or_else(|| Error::Precondition(format!("unbound index variable `{v}`")))?,
            IExpr::Add(a, b) => a.eval(env)? + b.eval(env)?,
            IExpr::Sub(a, b) => a.eval(env)? - b.eval(env)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TTerm {
    Free(usize),
    Param(usize),
    Plain(String),
    Indexed(String, IExpr),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TAtom {
    pub pred: Pred,
    pub args: Vec<TTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TItem {
    Atom(TAtom),
    Rep {
        var: String,
        lo: IExpr,
        hi: IExpr,
        body: Vec<TItem>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoundDecl {
    Plain(String),
    Indexed { name: String, lo: IExpr, hi: IExpr },
}

/// `generator name(n in start..): exists decls . body`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub var: String,
    pub start: u64,
    pub bound: Vec<BoundDecl>,
    pub body: Vec<TItem>,
}

impl Generator {
    /// The disjunct for parameter value `n`.
    pub fn expand(&self, n: u64) -> Result<Disjunct> {
        let mut env = BTreeMap::new();
        env.insert(self.var.clone(), n as i64);
        let mut slots: BTreeMap<(String, Option<i64>), usize> = BTreeMap::new();
        let mut names = Vec::new();
        for d in &self.bound {
            match d {
                BoundDecl::Plain(name) => {
                    slots.insert((name.clone(), None), names.len());
                    names.push(name.clone());
                }
                BoundDecl::Indexed { name, lo, hi } => {
                    for k in lo.eval(&env)?..=hi.eval(&env)? {
                        slots.insert((name.clone(), Some(k)), names.len());
                        names.push(format!("{name}_{k}"));
                    }
                }
            }
        }
        let mut atoms = Vec::new();
        expand_items(&self.body, &mut env, &slots, &mut atoms)?;
        Ok(Disjunct {
            bound: names,
            atoms,
        })
    }

    pub(crate) fn max_free(&self) -> usize {
        fn walk(items: &[TItem], acc: &mut usize) {
            for it in items {
                match it {
                    TItem::Atom(a) => {
                        for t in &a.args {
                            if let TTerm::Free(k) = t {
                                *acc = (*acc).max(k + 1);
                            }
                        }
                    }
                    TItem::Rep { body, .. } => walk(body, acc),
                }
            }
        }
        let mut acc = 0;
        walk(&self.body, &mut acc);
        acc
    }
}

fn expand_items(
    items: &[TItem],
    env: &mut BTreeMap<String, i64>,
    slots: &BTreeMap<(String, Option<i64>), usize>,
    out: &mut Vec<Atom>,
) -> Result<()> {
    for it in items {
        match it {
            TItem::Atom(a) => {
                let args = a
                    .args
                    .iter()
                    .map(|t| {
                        Ok(match t {
                            TTerm::Free(k) => Term::Free(*k),
                            TTerm::Param(k) => Term::Param(*k),
                            TTerm::Plain(name) => Term::Bound(slots[&(name.clone(), None)]),
                            TTerm::Indexed(name, e) => {
                                let k = e.eval(env)?;
                                let slot = slots.get(&(name.clone(), Some(k))).ok_or_else(|| {
                                    Error::Precondition(format!(
                                        "{name}[{k}] is outside its declared range"
                                    ))
                                })?;
                                Term::Bound(*slot)
                            }
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(Atom {
                    pred: a.pred.clone(),
                    args,
                });
            }
            TItem::Rep { var, lo, hi, body } => {
                let (lo, hi) = (lo.eval(env)?, hi.eval(env)?);
                let saved = env.get(var).copied();
                for i in lo..=hi {
                    env.insert(var.clone(), i);
                    expand_items(body, env, slots, out)?;
                }
                match saved {
                    Some(v) => env.insert(var.clone(), v),
                    None => env.remove(var),
                };
            }
        }
    }
    Ok(())
}

/// A single Σᵖ₁ formula with `free` free variables and `params` parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SigmaP1Formula {
    pub free: usize,
    pub params: usize,
    pub disjuncts: Vec<Disjunct>,
    pub generators: Vec<Generator>,
}

impl SigmaP1Formula {
    /// The empty disjunction.
    pub fn falsum(free: usize) -> Self {
        SigmaP1Formula {
            free,
            ..Default::default()
        }
    }

    /// Disjunct number `j` of the stream, `None` past the end of a finite
    /// stream. Explicit disjuncts come first; generators are then visited
    /// round-robin with increasing `n`.
    pub fn disjunct(&self, j: usize) -> Option<Result<Disjunct>> {
        if j < self.disjuncts.len() {
            return Some(Ok(self.disjuncts[j].clone()));
        }
        let g = self.generators.len();
        if g == 0 {
            return None;
        }
        let q = j - self.disjuncts.len();
        let gen = &self.generators[q % g];
        Some(gen.expand(gen.start + (q / g) as u64))
    }

    /// Disjuncts with index `0..=stage`.
    pub fn disjuncts_upto(&self, stage: usize) -> Result<Vec<Disjunct>> {
        (0..=stage).map_while(|j| self.disjunct(j)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        fn items_positive(items: &[TItem]) -> bool {
            items.iter().all(|it| match it {
                TItem::Atom(a) => !matches!(a.pred, Pred::NotRel(_)),
                TItem::Rep { body, .. } => items_positive(body),
            })
        }
        self.disjuncts
            .iter()
            .all(|d| d.atoms.iter().all(|a| !matches!(a.pred, Pred::NotRel(_))))
            && self.generators.iter().all(|g| items_positive(&g.body))
    }
}

/// Which tuple lengths a case of a family applies to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ArityRule {
    /// Every length at least the largest free variable index.
    Uniform,
    List(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Case {
    pub arity: ArityRule,
    pub disjuncts: Vec<Disjunct>,
    pub generators: Vec<Generator>,
}

impl Case {
    pub fn max_free(&self) -> usize {
        self.disjuncts
            .iter()
            .map(Disjunct::max_free)
            .chain(self.generators.iter().map(Generator::max_free))
            .max()
            .unwrap_or(0)
    }

    pub fn applies_to(&self, len: usize) -> bool {
        match &self.arity {
            ArityRule::Uniform => len >= self.max_free(),
            ArityRule::List(l) => l.contains(&len),
        }
    }
}

/// An arity-indexed family `(φ_i)_{i∈ω}` sharing one parameter tuple.
/// Lengths covered by no case get the empty disjunction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaP1Family {
    pub name: String,
    pub params: usize,
    pub cases: Vec<Case>,
}

impl SigmaP1Family {
    pub fn empty(name: &str) -> Self {
        SigmaP1Family {
            name: name.to_string(),
            params: 0,
            cases: Vec::new(),
        }
    }

    /// A family with one finite case at a single arity.
    pub fn single(name: &str, arity: usize, params: usize, disjuncts: Vec<Disjunct>) -> Self {
        SigmaP1Family {
            name: name.to_string(),
            params,
            cases: vec![Case {
                arity: ArityRule::List(vec![arity]),
                disjuncts,
                generators: Vec::new(),
            }],
        }
    }

    /// `φ_len`: the disjuncts of every case covering `len`, in case order.
    pub fn formula(&self, len: usize) -> SigmaP1Formula {
        let mut f = SigmaP1Formula {
            free: len,
            params: self.params,
            ..Default::default()
        };
        for c in self.cases.iter().filter(|c| c.applies_to(len)) {
            f.disjuncts.extend(c.disjuncts.iter().cloned());
            f.generators.extend(c.generators.iter().cloned());
        }
        f
    }

    pub fn is_finite(&self) -> bool {
        self.cases.iter().all(|c| c.generators.is_empty())
    }

    pub fn is_positive(&self) -> bool {
        self.cases.iter().all(|c| {
            SigmaP1Formula {
                disjuncts: c.disjuncts.clone(),
                generators: c.generators.clone(),
                ..Default::default()
            }
            .is_positive()
        })
    }

    /// Apply `f` to every predicate, including generator templates.
    pub fn map_preds(&self, f: &mut dyn FnMut(&Pred) -> Pred) -> SigmaP1Family {
        fn items(it: &[TItem], f: &mut dyn FnMut(&Pred) -> Pred) -> Vec<TItem> {
            it.iter()
                .map(|i| match i {
                    TItem::Atom(a) => TItem::Atom(TAtom {
                        pred: f(&a.pred),
                        args: a.args.clone(),
                    }),
                    TItem::Rep { var, lo, hi, body } => TItem::Rep {
                        var: var.clone(),
                        lo: lo.clone(),
                        hi: hi.clone(),
                        body: items(body, f),
                    },
                })
                .collect()
        }
        let mut out = self.clone();
        for c in &mut out.cases {
            for d in &mut c.disjuncts {
                for a in &mut d.atoms {
                    a.pred = f(&a.pred);
                }
            }
            for g in &mut c.generators {
                g.body = items(&g.body, f);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_generator_expands() {
        let fam = parse_family(
            "family reach\ngenerator chain(n in 1..): exists y[1..n] . E(x1,y[1]) & rep i=1..n-1 : E(y[i],y[i+1])\n",
        )
        .unwrap();
        let phi = fam.formula(1);
        let d = phi.disjunct(1).unwrap().unwrap();
        assert_eq!(d.bound_count(), 2);
        assert_eq!(d.atoms.len(), 2);
        assert_eq!(d.atoms[1].args, vec![Term::Bound(0), Term::Bound(1)]);
        let d0 = phi.disjunct(0).unwrap().unwrap();
        assert_eq!((d0.bound_count(), d0.atoms.len()), (1, 1));
    }

    #[test]
    fn streams_dovetail_generators() {
        let fam = parse_family(
            "family f\narity 1\ndisjunct E(x1,x1)\ngenerator a(n in 0..): exists y[1..n] . true\ngenerator b(n in 5..): exists y[1..n] . true\n",
        )
        .unwrap();
        let phi = fam.formula(1);
        let sizes: Vec<usize> = (0..6)
            .map(|j| phi.disjunct(j).unwrap().unwrap().bound_count())
            .collect();
        assert_eq!(sizes, vec![0, 0, 5, 1, 6, 2]);
    }

    #[test]
    fn uncovered_lengths_are_false() {
        let fam = parse_family("family f\narity 2\ndisjunct E(x1,x2)\n").unwrap();
        assert!(fam.formula(1).disjunct(0).is_none());
        assert_eq!(fam.formula(2).disjuncts.len(), 1);
    }

    #[test]
    fn out_of_range_index_is_reported() {
        let fam = parse_family("family f\ngenerator g(n in 1..): exists y[1..n] . E(x1,y[n+1])\n")
            .unwrap();
        assert!(fam.formula(1).disjunct(0).unwrap().is_err());
    }
}
