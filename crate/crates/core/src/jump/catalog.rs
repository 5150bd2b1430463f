//! The formula catalog `(i, j) ↦ φ_{i,j}`.
//!
//! Index `i` splits as `i + 1 = 2^t (2k + 1)`. `φ_{i,j}` is false unless
//! `t = j`, in which case it is formula `k` of the walk over finite
//! Σᵖ₁ formulas in `j` free variables. Each slice of the Kleene predicate
//! therefore lives at a single tuple length.
//!
//! The walk, version 1:
//! - a formula is a finite sequence of disjuncts, its size the sum of the
//!   disjunct sizes; the empty sequence (false) is the only formula of size 0;
//! - a disjunct with `b` bound variables and `m ≥ 1` atoms has size `b + m`;
//! - formulas are ordered by size, then by first disjunct (size, rank),
//!   then by the rest;
//! - disjuncts of one size are ordered by `b`, then by their atom sequence
//!   read as a base-`A(V)` numeral, most significant atom first, where
//!   `V = j + b` and `A(V)` counts the atoms over `V` variables;
//! - atoms are ordered by kind (`=`, `<>`, then relations in signature
//!   order) and then by argument tuple read in base `V`; variable `v < j`
//!   is `x(v+1)`, variable `v ≥ j` is bound variable `y(v-j+1)`.

use crate::formula::{Atom, Disjunct, Pred, SigmaP1Formula, Term};
use crate::structure::Signature;

/// Split `i + 1 = 2^t (2k + 1)`.
pub fn split_index(i: u64) -> (u32, u128) {
    let v = i as u128 + 1;
    let t = v.trailing_zeros();
    (t, (v >> t) / 2)
}

/// Inverse of [`split_index`], if the index fits in 64 bits.
pub fn join_index(t: u32, k: u128) -> Option<u64> {
    let v = (2 * k + 1).checked_shl(t)?;
    u64::try_from(v - 1).ok()
}

struct Walk<'a> {
    sig: &'a Signature,
    j: usize,
}

fn pow(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

impl Walk<'_> {
    fn atom_count(&self, v: usize) -> u128 {
        let v = v as u128;
        let mut total = 2 * v * v;
        for (_, a) in self.sig.iter() {
            total = total.saturating_add(pow(v, a));
        }
        total
    }

    fn disjunct_count(&self, size: usize) -> u128 {
        (0..size)
            .map(|b| pow(self.atom_count(self.j + b), size - b))
            .fold(0u128, |a, c| a.saturating_add(c))
    }

    fn formula_count(&self, size: usize, memo: &mut Vec<u128>) -> u128 {
        while memo.len() <= size {
            let s = memo.len();
            let f = if s == 0 {
                1
            } else {
                (1..=s)
                    .map(|d| self.disjunct_count(d).saturating_mul(memo[s - d]))
                    .fold(0u128, |a, c| a.saturating_add(c))
            };
            memo.push(f);
        }
        memo[size]
    }

    fn unrank_atom(&self, v: usize, mut r: u128) -> Atom {
        let term = |x: usize| {
            if x < self.j {
                Term::Free(x)
            } else {
                Term::Bound(x - self.j)
            }
        };
        let args = |r: u128, arity: usize| -> Vec<Term> {
            let mut out = vec![Term::Free(0); arity];
            let mut r = r;
            for slot in out.iter_mut().rev() {
                *slot = term((r % v as u128) as usize);
                r /= v as u128;
            }
            out
        };
        let sq = (v * v) as u128;
        if r < sq {
            return Atom {
                pred: Pred::Eq,
                args: args(r, 2),
            };
        }
        r -= sq;
        if r < sq {
            return Atom {
                pred: Pred::Neq,
                args: args(r, 2),
            };
        }
        r -= sq;
        for (name, a) in self.sig.iter() {
            let c = pow(v as u128, a);
            if r < c {
                return Atom {
                    pred: Pred::Rel(name.to_string()),
                    args: args(r, a),
                };
            }
            r -= c;
        }
        unreachable!("atom rank out of range")
    }

    fn unrank_disjunct(&self, size: usize, mut r: u128) -> Disjunct {
        for b in 0..size {
            let m = size - b;
            let v = self.j + b;
            let base = self.atom_count(v);
            let c = pow(base, m);
            if r < c {
                let mut digits = vec![0u128; m];
                for d in digits.iter_mut().rev() {
                    *d = r % base;
                    r /= base;
                }
                return Disjunct {
                    bound: (1..=b).map(|k| format!("y{k}")).collect(),
                    atoms: digits.iter().map(|&d| self.unrank_atom(v, d)).collect(),
                };
            }
            r -= c;
        }
        unreachable!("disjunct rank out of range")
    }

    fn unrank_formula(&self, size: usize, mut r: u128, memo: &mut Vec<u128>) -> Vec<Disjunct> {
        if size == 0 {
            return Vec::new();
        }
        for first in 1..=size {
            let rest = self.formula_count(size - first, memo);
            let block = self.disjunct_count(first).saturating_mul(rest);
            if r < block {
                let mut out = vec![self.unrank_disjunct(first, r / rest)];
                out.extend(self.unrank_formula(size - first, r % rest, memo));
                return out;
            }
            r -= block;
        }
        unreachable!("formula rank out of range")
    }

    fn nth(&self, mut k: u128) -> Vec<Disjunct> {
        let mut memo = Vec::new();
        let mut size = 0;
        loop {
            let c = self.formula_count(size, &mut memo);
            if k < c {
                return self.unrank_formula(size, k, &mut memo);
            }
            k -= c;
            size += 1;
        }
    }

    fn rank_atom(&self, v: usize, a: &Atom) -> Option<u128> {
        let num = |args: &[Term]| -> Option<u128> {
            args.iter().try_fold(0u128, |acc, t| {
                let x = match t {
                    Term::Free(k) if *k < self.j => *k,
                    Term::Bound(k) if self.j + k < v => self.j + k,
                    _ => return None,
                };
                Some(acc * v as u128 + x as u128)
            })
        };
        let sq = (v * v) as u128;
        match &a.pred {
            Pred::Eq if a.args.len() == 2 => num(&a.args),
            Pred::Neq if a.args.len() == 2 => Some(sq + num(&a.args)?),
            Pred::Rel(name) => {
                let mut offset = 2 * sq;
                for (n, ar) in self.sig.iter() {
                    if n == name {
                        return (ar == a.args.len()).then(|| num(&a.args)).flatten().map(|x| offset + x);
                    }
                    offset += pow(v as u128, ar);
                }
                None
            }
            _ => None,
        }
    }

    fn rank_disjunct(&self, d: &Disjunct) -> Option<(usize, u128)> {
        let b = d.bound.len();
        let m = d.atoms.len();
        if m == 0 {
            return None;
        }
        let size = b + m;
        let v = self.j + b;
        let mut r: u128 = (0..b).map(|bb| pow(self.atom_count(self.j + bb), size - bb)).sum();
        let base = self.atom_count(v);
        let mut digits: u128 = 0;
        for a in &d.atoms {
            digits = digits * base + self.rank_atom(v, a)?;
        }
        r += digits;
        Some((size, r))
    }

    fn rank(&self, ds: &[Disjunct]) -> Option<u128> {
        let sizes: Vec<(usize, u128)> = ds.iter().map(|d| self.rank_disjunct(d)).collect::<Option<_>>()?;
        let total: usize = sizes.iter().map(|s| s.0).sum();
        let mut memo = Vec::new();
        let mut k: u128 = (0..total).map(|s| self.formula_count(s, &mut memo)).sum();
        let mut remaining = total;
        for &(size, dr) in &sizes {
            for first in 1..size {
                k += self.disjunct_count(first) * self.formula_count(remaining - first, &mut memo);
            }
            let rest_count = self.formula_count(remaining - size, &mut memo);
            k += dr * rest_count;
            remaining -= size;
        }
        Some(k)
    }
}

/// `φ_{i,j}` over the given signature.
pub fn formula_catalog(sig: &Signature, i: u64, j: usize) -> SigmaP1Formula {
    let (t, k) = split_index(i);
    if t as usize != j {
        return SigmaP1Formula::falsum(j);
    }
    SigmaP1Formula {
        free: j,
        params: 0,
        disjuncts: Walk { sig, j }.nth(k),
        generators: Vec::new(),
    }
}

/// The catalog index of a finite formula in walk normal form (bound
/// variables named `y1, y2, …` in order, every disjunct nonempty).
pub fn catalog_index(sig: &Signature, phi: &SigmaP1Formula) -> Option<u64> {
    if !phi.generators.is_empty() || phi.params != 0 {
        return None;
    }
    for d in &phi.disjuncts {
        if d.bound.iter().enumerate().any(|(k, n)| *n != format!("y{}", k + 1)) {
            return None;
        }
    }
    let k = Walk { sig, j: phi.free }.rank(&phi.disjuncts)?;
    join_index(u32::try_from(phi.free).ok()?, k)
}

/// The arity a catalog index is tagged with.
pub fn index_arity(i: u64) -> usize {
    split_index(i).0 as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e2() -> Signature {
        Signature::new([("E", 2)]).unwrap()
    }

    #[test]
    fn index_split() {
        assert_eq!(split_index(0), (0, 0));
        assert_eq!(split_index(1), (1, 0));
        assert_eq!(split_index(5), (1, 1));
        assert_eq!(join_index(1, 1), Some(5));
        for i in 0..2000 {
            let (t, k) = split_index(i);
            assert_eq!(join_index(t, k), Some(i));
        }
    }

    #[test]
    fn first_formulas_by_hand() {
        let sig = e2();
        // Arity-tagged: index 0 is tagged 0, so φ_{0,1} is false.
        assert!(formula_catalog(&sig, 0, 1).disjuncts.is_empty());
        // k = 0 is the empty disjunction at every arity.
        assert!(formula_catalog(&sig, 1, 1).disjuncts.is_empty());
        // k = 1, 2, 3: the size-1 disjuncts over x1 are x1 = x1, x1 <> x1, E(x1,x1).
        assert_eq!(formula_catalog(&sig, 5, 1).to_string(), "(x1 = x1)");
        assert_eq!(formula_catalog(&sig, 9, 1).to_string(), "(x1 <> x1)");
        assert_eq!(formula_catalog(&sig, 13, 1).to_string(), "(E(x1,x1))");
        // Size 2 starts after false and the three size-1 formulas.
        assert_eq!(formula_catalog(&sig, 17, 1).to_string(), "(x1 = x1) | (x1 = x1)");
    }

    #[test]
    fn free_count_is_exact() {
        let sig = e2();
        for i in 0..300 {
            for j in 0..4 {
                assert_eq!(formula_catalog(&sig, i, j).free, j);
            }
        }
    }

    #[test]
    fn rank_inverts_unrank() {
        let sig = Signature::new([("E", 2), ("P", 1)]).unwrap();
        for j in 0..3 {
            for k in 0..3000u128 {
                let Some(i) = join_index(j as u32, k) else { continue };
                let phi = formula_catalog(&sig, i, j);
                assert_eq!(catalog_index(&sig, &phi), Some(i), "j={j} k={k}");
            }
        }
    }
}
