//! Signatures, finite relational structures and the `.pstruct` text format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

use crate::coding::{Fact, FactKind};
use crate::error::{Error, Result};

/// Ordered list of relation symbols with their arities.
///
/// Order is significant: the relation at index `i` has fact kind `i + 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    relations: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<S: Into<String>>(relations: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let relations: Vec<(String, usize)> =
            relations.into_iter().map(|(n, a)| (n.into(), a)).collect();
        let mut seen = BTreeSet::new();
        for (name, arity) in &relations {
            if !is_identifier(name) {
                return Err(Error::Signature(format!("`{name}` is not an identifier")));
            }
            if *arity == 0 {
                return Err(Error::Signature(format!("relation `{name}` has arity 0")));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::Signature(format!("relation `{name}` declared twice")));
            }
        }
        Ok(Signature { relations })
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.relations[i].0
    }

    pub fn arity(&self, i: usize) -> usize {
        self.relations[i].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|(n, _)| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, a)| (n.as_str(), *a))
    }

    /// Arity of a fact kind: 2 for equality and inequality.
    pub fn kind_arity(&self, kind: FactKind) -> Option<usize> {
        match kind {
            FactKind::Eq | FactKind::Neq => Some(2),
            FactKind::Rel(i) => self.relations.get(i).map(|r| r.1),
        }
    }

    /// True if the decoded fact is well-formed for this signature.
    pub fn check_fact(&self, fact: &Fact) -> bool {
        self.kind_arity(fact.kind) == Some(fact.args.len())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("signature")?;
        for (n, a) in &self.relations {
            write!(f, " {n}/{a}")?;
        }
        Ok(())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Read access to a relational structure on the universe `{0..size-1}`.
///
/// `same` interprets the equality symbol. For ordinary structures it is true
/// equality; pullbacks along non-injective enumerations interpret it as the
/// induced congruence.
pub trait Model {
    fn signature(&self) -> &Signature;
    fn size(&self) -> usize;
    fn same(&self, a: usize, b: usize) -> bool;
    fn holds(&self, rel: usize, args: &[usize]) -> bool;

    /// True when `same` is literal equality, letting searches substitute
    /// equals instead of scanning the universe.
    fn exact_equality(&self) -> bool {
        false
    }
}

const DENSE_LIMIT: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
struct RelationTable {
    tuples: BTreeSet<Vec<usize>>,
    dense: Option<Vec<bool>>,
}

impl RelationTable {
    fn new(tuples: BTreeSet<Vec<usize>>, size: usize, arity: usize) -> Self {
        let cells = size.checked_pow(arity as u32).filter(|&c| c <= DENSE_LIMIT);
        let dense = cells.map(|cells| {
            let mut d = vec![false; cells];
            for t in &tuples {
                d[dense_index(t, size)] = true;
            }
            d
        });
        RelationTable { tuples, dense }
    }

    fn contains(&self, args: &[usize], size: usize) -> bool {
        match &self.dense {
            Some(d) => args.iter().all(|&a| a < size) && d[dense_index(args, size)],
            None => self.tuples.contains(args),
        }
    }
}

fn dense_index(t: &[usize], size: usize) -> usize {
    t.iter().fold(0, |acc, &a| acc * size + a)
}

/// A relational structure with universe `{0..n-1}` given by explicit fact sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    signature: Signature,
    size: usize,
    relations: Vec<RelationTable>,
}

impl FiniteStructure {
    /// Build a structure, validating tuple lengths and ranges.
    pub fn new(
        signature: Signature,
        size: usize,
        facts: impl IntoIterator<Item = (usize, Vec<usize>)>,
    ) -> Result<Self> {
        let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); signature.len()];
        for (rel, args) in facts {
            if rel >= signature.len() {
                return Err(Error::Signature(format!("no relation with index {rel}")));
            }
            let arity = signature.arity(rel);
            if args.len() != arity {
                return Err(Error::ArityMismatch {
                    name: signature.name(rel).to_string(),
                    expected: arity,
                    found: args.len(),
                });
            }
            if let Some(&bad) = args.iter().find(|&&a| a >= size) {
                return Err(Error::OutOfUniverse { element: bad, size });
            }
            sets[rel].insert(args);
        }
        Ok(Self::from_sets(signature, size, sets))
    }

    /// Build from named facts, e.g. `[("E", vec![0, 1])]`.
    pub fn from_named<'a>(
        signature: Signature,
        size: usize,
        facts: impl IntoIterator<Item = (&'a str, Vec<usize>)>,
    ) -> Result<Self> {
        let mut indexed = Vec::new();
        for (name, args) in facts {
            let rel = signature
                .index_of(name)
                .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
            indexed.push((rel, args));
        }
        Self::new(signature, size, indexed)
    }

    fn from_sets(signature: Signature, size: usize, sets: Vec<BTreeSet<Vec<usize>>>) -> Self {
        let relations = sets
            .into_iter()
            .enumerate()
            .map(|(i, s)| RelationTable::new(s, size, signature.arity(i)))
            .collect();
        FiniteStructure {
            signature,
            size,
            relations,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn facts(&self, rel: usize) -> &BTreeSet<Vec<usize>> {
        &self.relations[rel].tuples
    }

    pub fn fact_count(&self) -> usize {
        self.relations.iter().map(|r| r.tuples.len()).sum()
    }

    pub fn contains(&self, rel: usize, args: &[usize]) -> bool {
        self.relations[rel].contains(args, self.size)
    }

    /// Induced substructure on `elements`, renumbered in the given order.
    pub fn induced(&self, elements: &[usize]) -> Result<FiniteStructure> {
        let mut pos = BTreeMap::new();
        for (i, &e) in elements.iter().enumerate() {
            if e >= self.size {
                return Err(Error::OutOfUniverse {
                    element: e,
                    size: self.size,
                });
            }
            if pos.insert(e, i).is_some() {
                return Err(Error::NotInjective(elements.to_vec()));
            }
        }
        let sets = self
            .relations
            .iter()
            .map(|r| {
                r.tuples
                    .iter()
                    .filter_map(|t| t.iter().map(|a| pos.get(a).copied()).collect())
                    .collect()
            })
            .collect();
        Ok(Self::from_sets(self.signature.clone(), elements.len(), sets))
    }

    /// Image of the structure under a bijection `map: A → {0..n-1}`.
    pub fn relabel(&self, map: &[usize]) -> Result<FiniteStructure> {
        let mut inverse = vec![usize::MAX; self.size];
        for (a, &b) in map.iter().enumerate() {
            if map.len() != self.size || b >= self.size || inverse[b] != usize::MAX {
                return Err(Error::NotIsomorphism(map.to_vec()));
            }
            inverse[b] = a;
        }
        let sets = self
            .relations
            .iter()
            .map(|r| {
                r.tuples
                    .iter()
                    .map(|t| t.iter().map(|&a| map[a]).collect())
                    .collect()
            })
            .collect();
        Ok(Self::from_sets(self.signature.clone(), self.size, sets))
    }

    /// Same universe and facts in an extended signature (new relations empty).
    pub fn with_signature(&self, signature: Signature) -> Result<FiniteStructure> {
        let mut facts = Vec::new();
        for (i, r) in self.relations.iter().enumerate() {
            let name = self.signature.name(i);
            let j = signature
                .index_of(name)
                .ok_or_else(|| Error::UnknownRelation(name.to_string()))?;
            facts.extend(r.tuples.iter().map(|t| (j, t.clone())));
        }
        FiniteStructure::new(signature, self.size, facts)
    }

    /// Canonical `.pstruct` text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.signature).unwrap();
        writeln!(out, "universe {}", self.size).unwrap();
        for (i, r) in self.relations.iter().enumerate() {
            for t in &r.tuples {
                write!(out, "fact {}", self.signature.name(i)).unwrap();
                for a in t {
                    write!(out, " {a}").unwrap();
                }
                out.push('\n');
            }
        }
        out
    }
}

impl Model for FiniteStructure {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn size(&self) -> usize {
        self.size
    }

    fn same(&self, a: usize, b: usize) -> bool {
        a == b
    }

    fn exact_equality(&self) -> bool {
        true
    }

    fn holds(&self, rel: usize, args: &[usize]) -> bool {
        self.contains(rel, args)
    }
}

/// A countable structure given as a monotone chain of finite stages, each an
/// induced substructure of the next.
pub trait StagedStructure {
    fn at_stage(&self, stage: usize) -> FiniteStructure;
}

/// The cycle graph coding a set `X`: one looped element `a`, one cycle of
/// length `n + 1` for every `n`, and an edge between `a` and the least
/// element of the `n`-th cycle when `n ∈ X`. Edges are symmetric.
///
/// Stage `s` holds `a` and the cycles for `n < s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleGraph {
    pub set: BTreeSet<usize>,
}

impl CycleGraph {
    /// `bits[n] == '1'` puts `n` into the coded set.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (n, c) in bits.chars().enumerate() {
            match c {
                '1' => {
                    set.insert(n);
                }
                '0' => {}
                _ => return Err(Error::Parse { line: 0, msg: format!("bad bit `{c}` in cycle set") }),
            }
        }
        Ok(CycleGraph { set })
    }

    pub fn signature() -> Signature {
        Signature::new([("E", 2)]).unwrap()
    }
}

impl StagedStructure for CycleGraph {
    fn at_stage(&self, stage: usize) -> FiniteStructure {
        let mut edges = vec![vec![0, 0]];
        let mut next = 1;
        for n in 0..stage {
            let len = n + 1;
            let first = next;
            for k in 0..len {
                let u = first + k;
                let v = first + (k + 1) % len;
                edges.push(vec![u, v]);
                edges.push(vec![v, u]);
            }
            if self.set.contains(&n) {
                edges.push(vec![0, first]);
                edges.push(vec![first, 0]);
            }
            next += len;
        }
        FiniteStructure::new(Self::signature(), next, edges.into_iter().map(|e| (0, e)))
            .expect("cycle graph facts are in range")
    }
}

/// Parsed `.pstruct` contents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureFile {
    Finite(FiniteStructure),
    Cycles(CycleGraph),
}

impl StructureFile {
    /// The finite structure, truncating staged structures at `stage`.
    pub fn materialize(&self, stage: usize) -> FiniteStructure {
        match self {
            StructureFile::Finite(s) => s.clone(),
            StructureFile::Cycles(c) => c.at_stage(stage),
        }
    }
}

/// Parse the `.pstruct` format: `signature <name>/<arity> ...`,
/// `universe <n>`, `fact <name> <a1> ... <ak>`, `builtin cycles <bits>`,
/// with `#` comments.
pub fn parse_structure(text: &str) -> Result<StructureFile> {
    let mut signature: Option<Signature> = None;
    let mut size: Option<usize> = None;
    let mut facts: Vec<(usize, &str, Vec<usize>)> = Vec::new();
    let mut builtin = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line, msg };
        let mut words = content.split_whitespace();
        match words.next().unwrap() {
            "signature" => {
                if signature.is_some() {
                    return Err(err("duplicate signature line".into()));
                }
                let mut rels = Vec::new();
                for w in words {
                    let (name, arity) = w
                        .split_once('/')
                        .ok_or_else(|| err(format!("expected <name>/<arity>, got `{w}`")))?;
                    let arity: usize = arity
                        .parse()
                        .map_err(|_| err(format!("bad arity in `{w}`")))?;
                    rels.push((name.to_string(), arity));
                }
                signature = Some(Signature::new(rels).map_err(|e| err(e.to_string()))?);
            }
            "universe" => {
                let n = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("expected `universe <n>`".into()))?;
                if words.next().is_some() {
                    return Err(err("trailing input after universe size".into()));
                }
                size = Some(n);
            }
            "fact" => {
                let name = words.next().ok_or_else(|| err("fact needs a relation name".into()))?;
                let args = words
                    .map(|w| w.parse().map_err(|_| err(format!("bad element `{w}`"))))
                    .collect::<Result<Vec<usize>>>()?;
                facts.push((line, name, args));
            }
            "builtin" => match (words.next(), words.next(), words.next()) {
                (Some("cycles"), Some(bits), None) => {
                    builtin = Some(CycleGraph::from_bits(bits).map_err(|e| err(e.to_string()))?);
                }
                _ => return Err(err("expected `builtin cycles <bits>`".into())),
            },
            other => return Err(err(format!("unknown directive `{other}`"))),
        }
    }
    if let Some(c) = builtin {
        if size.is_some() || !facts.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "builtin structures take no universe or facts".into(),
            });
        }
        return Ok(StructureFile::Cycles(c));
    }
    let signature = signature.unwrap_or_default();
    let size = size.ok_or(Error::Parse {
        line: 0,
        msg: "missing `universe` line".into(),
    })?;
    let mut indexed = Vec::new();
    for (line, name, args) in facts {
        let rel = signature.index_of(name).ok_or_else(|| Error::Parse {
            line,
            msg: format!("unknown relation `{name}`"),
        })?;
        indexed.push((rel, args));
    }
    // Report range and arity errors against the offending line.
    let s = FiniteStructure::new(signature, size, indexed)?;
    Ok(StructureFile::Finite(s))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn graph1() -> FiniteStructure {
        FiniteStructure::from_named(
            Signature::new([("E", 2)]).unwrap(),
            3,
            [("E", vec![0, 1]), ("E", vec![1, 2])],
        )
        .unwrap()
    }

    #[test]
    fn signature_rejects_zero_arity_and_duplicates() {
        assert!(Signature::new([("E", 0)]).is_err());
        assert!(Signature::new([("E", 2), ("E", 1)]).is_err());
        assert!(Signature::new([("2x", 1)]).is_err());
    }

    #[test]
    fn structure_validates_tuples() {
        let sig = Signature::new([("E", 2)]).unwrap();
        assert!(matches!(
            FiniteStructure::new(sig.clone(), 2, [(0, vec![0, 2])]),
            Err(Error::OutOfUniverse { element: 2, size: 2 })
        ));
        assert!(matches!(
            FiniteStructure::new(sig, 2, [(0, vec![0])]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn parse_and_print_round_trip() {
        let text = "signature E/2\nuniverse 3\nfact E 0 1\nfact E 1 2\n";
        let parsed = parse_structure(text).unwrap();
        assert_eq!(parsed, StructureFile::Finite(graph1()));
        assert_eq!(graph1().to_text(), text);
    }

    #[test]
    fn parse_reports_line_numbers() {
        let err = parse_structure("signature E/2\nuniverse 2\n# c\nfact F 0 1\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 4,
                msg: "unknown relation `F`".into()
            }
        );
        assert!(parse_structure("signature E/0\nuniverse 1\n").is_err());
    }

    #[test]
    fn induced_and_relabel() {
        let g = graph1();
        let sub = g.induced(&[2, 1]).unwrap();
        assert_eq!(sub.facts(0).iter().cloned().collect::<Vec<_>>(), vec![vec![1, 0]]);
        let r = g.relabel(&[2, 1, 0]).unwrap();
        assert!(r.contains(0, &[2, 1]) && r.contains(0, &[1, 0]));
        assert!(g.relabel(&[0, 0, 1]).is_err());
    }

    #[test]
    fn cycle_graph_stages_are_induced_chain() {
        let c = CycleGraph::from_bits("1011").unwrap();
        let s2 = c.at_stage(2);
        let s4 = c.at_stage(4);
        assert_eq!(s2.size(), 1 + 1 + 2);
        assert_eq!(s4.size(), 1 + 1 + 2 + 3 + 4);
        let prefix: Vec<usize> = (0..s2.size()).collect();
        assert_eq!(s4.induced(&prefix).unwrap(), s2);
        // a loops; cycle 0 is a single looped element joined to a.
        assert!(s4.contains(0, &[0, 0]) && s4.contains(0, &[1, 1]) && s4.contains(0, &[0, 1]));
        // 1 is not in X: no edge from a to the 2-cycle at {2,3}.
        assert!(!s4.contains(0, &[0, 2]));
        // 2 ∈ X: edge from a to the 3-cycle starting at 4.
        assert!(s4.contains(0, &[0, 4]));
    }

    #[test]
    fn parse_builtin_cycles() {
        let f = parse_structure("# fixture\nsignature E/2\nbuiltin cycles 1011\n").unwrap();
        assert_eq!(f.materialize(4).size(), 11);
    }
}
