//! Seeded generators for structures, families, enumerations and operators,
//! plus the fixed fixtures the suites run on. Every draw comes from one
//! ChaCha8 stream, so a seed fixes the whole corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coding::{fact_code, tuplecode_elems, FactKind};
use crate::diagram::all_tuples;
use crate::enumeration::NumberedEnumeration;
use crate::formula::{Atom, Disjunct, Pred, SigmaP1Family, Term};
use crate::operator::{Axiom, EnumOperator};
use crate::structure::{CycleGraph, FiniteStructure, Signature, StagedStructure};

pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// One of a few small signatures.
    pub fn signature(&mut self) -> Signature {
        let pool: [&[(&str, usize)]; 4] = [
            &[("E", 2)],
            &[("E", 2), ("P", 1)],
            &[("P", 1), ("Q", 1)],
            &[("E", 2), ("F", 2)],
        ];
        Signature::new(pool[self.below(pool.len())].iter().copied()).unwrap()
    }

    /// Every possible fact present independently with probability `density`.
    pub fn structure(&mut self, sig: &Signature, n: usize, density: f64) -> FiniteStructure {
        let mut facts = Vec::new();
        for r in 0..sig.len() {
            for t in all_tuples(n, sig.arity(r)) {
                if self.chance(density) {
                    facts.push((r, t));
                }
            }
        }
        FiniteStructure::new(sig.clone(), n, facts).unwrap()
    }

    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }

    /// A surjective enumeration of `{0..n-1}`: a shuffled prefix holding
    /// every element plus up to `extra` repeats, then the cycle `0..n`.
    pub fn surjection(&mut self, n: usize, extra: usize) -> NumberedEnumeration {
        let mut prefix: Vec<usize> = (0..n).collect();
        for _ in 0..self.range(0, extra) {
            let x = self.below(n);
            prefix.push(x);
        }
        prefix.shuffle(&mut self.rng);
        NumberedEnumeration::with_cycle_tail(prefix, n)
    }

    fn term(&mut self, free: usize, bound: usize, params: usize) -> Term {
        let total = free + bound + params;
        let k = self.below(total);
        if k < free {
            Term::Free(k)
        } else if k < free + bound {
            Term::Bound(k - free)
        } else {
            Term::Param(k - free - bound)
        }
    }

    pub fn disjunct(&mut self, sig: &Signature, free: usize, max_bound: usize, max_atoms: usize, params: usize) -> Disjunct {
        let bound = self.range(0, max_bound);
        let mut atoms = Vec::new();
        if free + bound + params > 0 {
            for _ in 0..self.range(1, max_atoms.max(1)) {
                let pick = self.below(sig.len() + 2);
                let (pred, arity) = match pick {
                    0 => (Pred::Eq, 2),
                    1 => (Pred::Neq, 2),
                    r => (Pred::Rel(sig.name(r - 2).to_string()), sig.arity(r - 2)),
                };
                let args = (0..arity).map(|_| self.term(free, bound, params)).collect();
                atoms.push(Atom { pred, args });
            }
        }
        Disjunct {
            bound: (1..=bound).map(|k| format!("y{k}")).collect(),
            atoms,
        }
    }

    /// A single-arity family with up to `max_disjuncts` disjuncts.
    pub fn family(
        &mut self,
        sig: &Signature,
        arity: usize,
        max_disjuncts: usize,
        max_bound: usize,
        max_atoms: usize,
        params: usize,
    ) -> SigmaP1Family {
        let count = self.range(1, max_disjuncts.max(1));
        let disjuncts = (0..count)
            .map(|_| self.disjunct(sig, arity, max_bound, max_atoms, params))
            .collect();
        SigmaP1Family::single("phi", arity, params, disjuncts)
    }

    /// Axioms with random premise facts over `n` elements and random index
    /// tuples as conclusions.
    pub fn raw_operator(&mut self, sig: &Signature, n: usize, axioms: usize, max_premises: usize, max_len: usize) -> EnumOperator {
        let mut out = Vec::new();
        for _ in 0..axioms {
            let mut premises = Vec::new();
            for _ in 0..self.range(0, max_premises) {
                let pick = self.below(sig.len() + 2);
                let (kind, arity) = match pick {
                    0 => (FactKind::Eq, 2),
                    1 => (FactKind::Neq, 2),
                    r => (FactKind::Rel(r - 2), sig.arity(r - 2)),
                };
                let args: Vec<usize> = (0..arity).map(|_| self.below(n)).collect();
                let args = match kind {
                    FactKind::Eq => vec![args[0], args[0]],
                    FactKind::Neq if args[0] == args[1] => vec![args[0], (args[0] + 1) % n],
                    _ => args,
                };
                premises.push(fact_code(kind, &args));
            }
            let len = self.range(0, max_len);
            let j: Vec<usize> = (0..len).map(|_| self.below(n)).collect();
            out.push(Axiom::new(premises, tuplecode_elems(&j)));
        }
        EnumOperator::from_axioms(out)
    }
}

/// GRAPH1: the path `0 → 1 → 2`.
pub fn graph1() -> FiniteStructure {
    FiniteStructure::from_named(
        Signature::new([("E", 2)]).unwrap(),
        3,
        [("E", vec![0, 1]), ("E", vec![1, 2])],
    )
    .unwrap()
}

/// Two disjoint symmetric edges `0 – 1`, `2 – 3`.
pub fn two_edges() -> FiniteStructure {
    FiniteStructure::from_named(
        Signature::new([("E", 2)]).unwrap(),
        4,
        [("E", vec![0, 1]), ("E", vec![1, 0]), ("E", vec![2, 3]), ("E", vec![3, 2])],
    )
    .unwrap()
}

/// The cycle-graph coding of `{0, 2}` truncated at `stage`.
pub fn cycles_fixture(stage: usize) -> FiniteStructure {
    CycleGraph::from_bits("101").unwrap().at_stage(stage)
}

/// Named fixed structures.
pub fn fixtures() -> Vec<(&'static str, FiniteStructure)> {
    let colored = FiniteStructure::from_named(
        Signature::new([("E", 2), ("P", 1)]).unwrap(),
        4,
        [("E", vec![0, 1]), ("E", vec![1, 2]), ("E", vec![2, 0]), ("P", vec![3]), ("P", vec![0])],
    )
    .unwrap();
    vec![
        ("graph1", graph1()),
        ("two-edges", two_edges()),
        ("colored", colored),
        ("cycles-3", cycles_fixture(3)),
    ]
}
