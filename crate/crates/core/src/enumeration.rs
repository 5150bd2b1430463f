//! Enumerations `f: ω → A`, pullbacks `f⁻¹(A)` and their canonical quotients.

use std::fmt;

use crate::diagram::all_tuples;
use crate::error::{Error, Result};
use crate::structure::{FiniteStructure, Model, Signature};

/// A total map `ω → ω` given by a finite prefix followed by a repeating cycle.
///
/// An empty cycle leaves the map undefined past the prefix; such maps are
/// only usable with windows inside the prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberedEnumeration {
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

impl NumberedEnumeration {
    pub fn new(prefix: Vec<usize>, cycle: Vec<usize>) -> Self {
        NumberedEnumeration { prefix, cycle }
    }

    /// `0, 1, …, n-1` repeated forever.
    pub fn identity(n: usize) -> Self {
        Self::new((0..n).collect(), (0..n).collect())
    }

    /// The prefix followed by cycling through `{0..n-1}`.
    pub fn with_cycle_tail(prefix: Vec<usize>, n: usize) -> Self {
        Self::new(prefix, (0..n).collect())
    }

    /// Parse `"1 0 2"` or `"1 0 2 | 0 1 2"` (prefix, then cycle).
    pub fn parse(text: &str) -> Result<Self> {
        let parse_list = |s: &str| -> Result<Vec<usize>> {
            s.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|w| !w.is_empty())
                .map(|w| {
                    w.parse().map_err(|_| Error::Parse {
                        line: 1,
                        msg: format!("bad enumeration entry `{w}`"),
                    })
                })
                .collect()
        };
        match text.split_once('|') {
            Some((p, c)) => Ok(Self::new(parse_list(p)?, parse_list(c)?)),
            None => Ok(Self::new(parse_list(text)?, Vec::new())),
        }
    }

    pub fn prefix(&self) -> &[usize] {
        &self.prefix
    }

    pub fn at(&self, i: usize) -> Option<usize> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.cycle.is_empty() {
            None
        } else {
            Some(self.cycle[(i - self.prefix.len()) % self.cycle.len()])
        }
    }

    /// `f(0..m)`, failing if the map is undefined somewhere in the window.
    pub fn window(&self, m: usize) -> Result<Vec<usize>> {
        (0..m)
            .map(|i| {
                self.at(i).ok_or(Error::Length {
                    what: "enumeration entries",
                    expected: m,
                    found: self.prefix.len(),
                })
            })
            .collect()
    }

    /// Default window: the prefix plus one full cycle.
    pub fn default_window(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }
}

impl fmt::Display for NumberedEnumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        if self.cycle.is_empty() {
            write!(f, "{}", join(&self.prefix))
        } else {
            write!(f, "{} | {}", join(&self.prefix), join(&self.cycle))
        }
    }
}

/// `f⁻¹(A)` on the index window `{0..m-1}`, with `f⁻¹(=)` as its equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    source: FiniteStructure,
    map: Vec<usize>,
}

/// Pull `s` back along the first `m` values of `f`.
pub fn pullback_structure(
    f: &NumberedEnumeration,
    s: &FiniteStructure,
    m: usize,
) -> Result<Pullback> {
    let map = f.window(m)?;
    Pullback::new(s.clone(), map)
}

impl Pullback {
    pub fn new(source: FiniteStructure, map: Vec<usize>) -> Result<Self> {
        let mut hit = vec![false; source.size()];
        for &v in &map {
            if v >= source.size() {
                return Err(Error::OutOfUniverse {
                    element: v,
                    size: source.size(),
                });
            }
            hit[v] = true;
        }
        if let Some(missed) = hit.iter().position(|h| !h) {
            return Err(Error::NotSurjective {
                len: map.len(),
                missed,
            });
        }
        Ok(Pullback { source, map })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn source(&self) -> &FiniteStructure {
        &self.source
    }

    /// Relation facts of the pullback (equality excluded).
    pub fn to_structure(&self) -> FiniteStructure {
        let sig = self.source.signature().clone();
        let n = self.map.len();
        let mut facts = Vec::new();
        for r in 0..sig.len() {
            for t in all_tuples(n, sig.arity(r)) {
                if self.holds(r, &t) {
                    facts.push((r, t));
                }
            }
        }
        FiniteStructure::new(sig, n, facts).expect("pullback facts are in range")
    }

    /// Congruence classes, each listed ascending, ordered by least member.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; self.source.size()];
        for (i, &v) in self.map.iter().enumerate() {
            if slot[v] == usize::MAX {
                slot[v] = classes.len();
                classes.push(Vec::new());
            }
            classes[slot[v]].push(i);
        }
        classes
    }
}

impl Model for Pullback {
    fn signature(&self) -> &Signature {
        self.source.signature()
    }

    fn size(&self) -> usize {
        self.map.len()
    }

    fn same(&self, a: usize, b: usize) -> bool {
        self.map[a] == self.map[b]
    }

    fn holds(&self, rel: usize, args: &[usize]) -> bool {
        let image: Vec<usize> = args.iter().map(|&a| self.map[a]).collect();
        self.source.contains(rel, &image)
    }
}

/// The quotient of a model by its equality on least representatives.
///
/// Fails if some relation is not closed under the model's equality.
pub fn canonical_copy<M: Model + ?Sized>(m: &M) -> Result<FiniteStructure> {
    let n = m.size();
    let rep: Vec<usize> = (0..n)
        .map(|i| (0..=i).find(|&j| m.same(i, j)).unwrap())
        .collect();
    let reps: Vec<usize> = (0..n).filter(|&i| rep[i] == i).collect();
    let mut index = vec![usize::MAX; n];
    for (k, &r) in reps.iter().enumerate() {
        index[r] = k;
    }
    let sig = m.signature().clone();
    let mut facts = Vec::new();
    for r in 0..sig.len() {
        for t in all_tuples(n, sig.arity(r)) {
            let norm: Vec<usize> = t.iter().map(|&a| rep[a]).collect();
            let here = m.holds(r, &t);
            if here != m.holds(r, &norm) {
                return Err(Error::NotCongruence {
                    relation: sig.name(r).to_string(),
                    tuple: t,
                });
            }
            if here && norm == t {
                facts.push((r, t.iter().map(|&a| index[a]).collect()));
            }
        }
    }
    FiniteStructure::new(sig, reps.len(), facts)
}
