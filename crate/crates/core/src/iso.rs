//! Brute-force isomorphism search for small finite structures.

use crate::structure::FiniteStructure;

/// True if `map` (an `a`-element ↦ `b`-element table) is an isomorphism.
pub fn is_isomorphism(a: &FiniteStructure, b: &FiniteStructure, map: &[usize]) -> bool {
    if a.signature() != b.signature() || a.size() != b.size() || map.len() != a.size() {
        return false;
    }
    let mut seen = vec![false; b.size()];
    for &v in map {
        if v >= b.size() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..a.signature().len()).all(|r| {
        a.facts(r).len() == b.facts(r).len()
            && a.facts(r).iter().all(|t| {
                let img: Vec<usize> = t.iter().map(|&x| map[x]).collect();
                b.contains(r, &img)
            })
    })
}

struct Search<'a> {
    a: &'a FiniteStructure,
    b: &'a FiniteStructure,
    // Facts of `a` grouped by their largest entry.
    by_max: Vec<Vec<(usize, &'a Vec<usize>)>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(a: &'a FiniteStructure, b: &'a FiniteStructure) -> Option<Self> {
        if a.signature() != b.signature() || a.size() != b.size() {
            return None;
        }
        let sig = a.signature();
        if (0..sig.len()).any(|r| a.facts(r).len() != b.facts(r).len()) {
            return None;
        }
        let mut by_max = vec![Vec::new(); a.size()];
        for r in 0..sig.len() {
            for t in a.facts(r) {
                by_max[*t.iter().max().unwrap()].push((r, t));
            }
        }
        Some(Search {
            a,
            b,
            by_max,
            map: Vec::with_capacity(a.size()),
            used: vec![false; b.size()],
        })
    }

    fn consistent(&self, k: usize) -> bool {
        self.by_max[k].iter().all(|(r, t)| {
            let img: Vec<usize> = t.iter().map(|&x| self.map[x]).collect();
            self.b.contains(*r, &img)
        })
    }

    // Visits every isomorphism in lexicographic order; stops when `visit`
    // returns false.
    fn run(&mut self, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let k = self.map.len();
        if k == self.a.size() {
            return visit(&self.map);
        }
        for v in 0..self.b.size() {
            if self.used[v] {
                continue;
            }
            self.map.push(v);
            self.used[v] = true;
            let go_on = !self.consistent(k) || self.run(visit);
            self.used[v] = false;
            self.map.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
}

/// Lexicographically least isomorphism `a → b`, if any.
pub fn find_isomorphism(a: &FiniteStructure, b: &FiniteStructure) -> Option<Vec<usize>> {
    let mut search = Search::new(a, b)?;
    let mut found = None;
    search.run(&mut |m| {
        found = Some(m.to_vec());
        false
    });
    found
}

/// Every isomorphism `a → b` in lexicographic order.
pub fn all_isomorphisms(a: &FiniteStructure, b: &FiniteStructure) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if let Some(mut search) = Search::new(a, b) {
        search.run(&mut |m| {
            out.push(m.to_vec());
            true
        });
    }
    out
}

pub fn automorphisms(a: &FiniteStructure) -> Vec<Vec<usize>> {
    all_isomorphisms(a, a)
}

/// `g ∘ f` as tables.
pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

pub fn invert(f: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; f.len()];
    for (i, &v) in f.iter().enumerate() {
        inv[v] = i;
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Signature;

    fn edges(n: usize, es: &[(usize, usize)]) -> FiniteStructure {
        FiniteStructure::new(
            Signature::new([("E", 2)]).unwrap(),
            n,
            es.iter().map(|&(u, v)| (0, vec![u, v])),
        )
        .unwrap()
    }

    #[test]
    fn path_has_only_identity() {
        let g = edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(automorphisms(&g), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn two_two_cycles_have_eight_automorphisms() {
        let g = edges(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]);
        let auts = automorphisms(&g);
        assert_eq!(auts.len(), 8);
        assert!(auts.contains(&vec![2, 3, 0, 1]));
        assert!(auts.iter().all(|m| is_isomorphism(&g, &g, m)));
    }

    #[test]
    fn relabelled_copy_is_found() {
        let g = edges(4, &[(0, 1), (1, 2), (2, 0), (3, 3)]);
        let h = g.relabel(&[3, 0, 2, 1]).unwrap();
        let m = find_isomorphism(&g, &h).unwrap();
        assert!(is_isomorphism(&g, &h, &m));
        assert!(find_isomorphism(&g, &edges(4, &[(0, 1)])).is_none());
    }

    #[test]
    fn compose_and_invert() {
        let f = vec![1, 2, 0];
        assert_eq!(compose(&f, &invert(&f)), vec![0, 1, 2]);
    }
}
