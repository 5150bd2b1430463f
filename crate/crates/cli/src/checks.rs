//! Property checks over seeded corpora. The `check` suites run them at a
//! small scale; the acceptance target runs them at full scale.

use std::collections::BTreeSet;

use itertools::Itertools;

use emt_core::coding::{
    decode_fact, decode_tuple, encode_fact, fact_code, pair, tuplecode, unpair, FactKind,
};
use emt_core::compiler::{
    compile_family, decode_outputs, diagonalize_copy, extract_definition, replay_defeat, TupleSet,
    Verdict,
};
use emt_core::corpus::{self, Corpus};
use emt_core::diagram::{all_tuples, positive_diagram, CodeSet};
use emt_core::enumeration::Pullback;
use emt_core::formula::{define_relation, SigmaP1Family};
use emt_core::generic::{build_generic, DenseSetSpec};
use emt_core::interp::{
    biinterp_compose_check, check_equivalence_axioms, check_naturality, extract_interpretation,
    parse_interpretation, realize_interpretation, ExtractBounds, FunctorPair, LambdaFault,
    PositiveInterpretation,
};
use emt_core::iso::find_isomorphism;
use emt_core::jump::{
    decode_seq_relation, decode_set, encode_set, formula_catalog, index_arity, jump_commutes_check,
    kleene_slice_stage, kleene_witness, KLEENE_SCAN_BOUND,
};
use emt_core::operator::{apply, EnumOperator};
use emt_core::structure::{FiniteStructure, Signature};

/// Outcome of one property check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tally {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, what: String, e: emt_core::Error) {
        self.cases += 1;
        self.failures.push(format!("{what}: {e}"));
    }

    /// `name: cases=N failed=M` followed by the first few failures.
    pub fn report(&self) -> String {
        let mut out = format!(
            "{}: {} cases={} failed={}",
            self.name,
            if self.ok() { "PASS" } else { "FAIL" },
            self.cases,
            self.failures.len()
        );
        for n in &self.notes {
            out.push_str(&format!("\n  note: {n}"));
        }
        for f in self.failures.iter().take(5) {
            out.push_str(&format!("\n  failure: {f}"));
        }
        out
    }
}

/// Case counts and bounds for one run.
#[derive(Clone, Copy, Debug)]
pub struct Scale {
    pub coding_limit: u64,
    pub forward: usize,
    pub reverse: usize,
    pub diagonal: usize,
    pub commute: usize,
    pub kleene: usize,
    pub generic: usize,
    pub seq_random: usize,
    pub interp_random: usize,
    pub faults: usize,
}

impl Scale {
    pub fn suite() -> Self {
        Scale {
            coding_limit: 20_000,
            forward: 12,
            reverse: 4,
            diagonal: 4,
            commute: 12,
            kleene: 4,
            generic: 6,
            seq_random: 200,
            interp_random: 1,
            faults: 6,
        }
    }

    pub fn acceptance() -> Self {
        Scale {
            coding_limit: 1_000_000,
            forward: 120,
            reverse: 24,
            diagonal: 20,
            commute: 200,
            kleene: 40,
            generic: 60,
            seq_random: 10_000,
            interp_random: 6,
            faults: 40,
        }
    }
}

fn show(t: &[usize]) -> String {
    format!("({})", t.iter().join(" "))
}

// ---------------------------------------------------------------------------
// Codings

fn oracle_pair(x: u128, y: u128) -> u128 {
    (x + y) * (x + y + 1) / 2 + y
}

fn oracle_unpair(z: u128) -> (u128, u128) {
    let mut w = 0u128;
    let mut step = 1u128 << 40;
    // Largest w with w(w+1)/2 <= z, by binary descent.
    while step > 0 {
        if (w + step) * (w + step + 1) / 2 <= z {
            w += step;
        }
        step /= 2;
    }
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}

fn oracle_tuplecode(t: &[u64]) -> u128 {
    let payload = match t {
        [] => 0,
        [x] => *x as u128,
        _ => {
            let mut acc = *t.last().unwrap() as u128;
            for &x in t[..t.len() - 1].iter().rev() {
                acc = oracle_pair(x as u128, acc);
            }
            acc
        }
    };
    oracle_pair(t.len() as u128, payload)
}

/// Pairing, tuple and fact codes against an independent `u128` model for
/// every code below `limit`.
pub fn coding_round_trips(limit: u64) -> Tally {
    let mut t = Tally::new("codings.round-trip");
    let mut mismatches = 0usize;
    for z in 0..limit {
        let (x, y) = unpair(z);
        let (ox, oy) = oracle_unpair(z as u128);
        let mut ok = (x as u128, y as u128) == (ox, oy) && pair(x, y) == z;
        match decode_tuple(z) {
            Some(v) => ok &= tuplecode(&v) == z && oracle_tuplecode(&v) == z as u128,
            None => ok &= ox == 0 && oy != 0,
        }
        if let Some(f) = decode_fact(z) {
            ok &= fact_code(f.kind, &f.args) == z;
        }
        if !ok {
            mismatches += 1;
            if mismatches <= 5 {
                t.failures.push(format!("code {z}"));
            }
        }
    }
    t.cases += limit as usize;
    if mismatches > 5 {
        t.failures.push(format!("{} more codes", mismatches - 5));
    }
    // R_i(a3, a5) is <i+2, <a3, a5>> with the length-tagged tuple code.
    for i in 0..6usize {
        for a3 in 0..24usize {
            for a5 in 0..24usize {
                let want = oracle_pair(i as u128 + 2, oracle_pair(2, oracle_pair(a3 as u128, a5 as u128)));
                let got = encode_fact(FactKind::Rel(i), &[a3, a5], 2).map(|c| c as u128);
                t.check(got == Ok(want), || format!("R{i}({a3},{a5})"));
            }
        }
    }
    t.check(encode_fact(FactKind::Eq, &[0, 0], 2) == Ok(9), || "Eq(0,0) != 9".into());
    t.check(encode_fact(FactKind::Rel(0), &[0, 1], 2) == Ok(117), || "E(0,1) != 117".into());
    t
}

/// `decode_set ∘ encode_set` on subsets of `{0..63}`.
///
/// Each `i` contributes the fiber of `bⁱc` tuples, all of length `i + 1`,
/// and decoding reads each length separately. So checking that every
/// single fiber decodes to exactly its index and that fibers never share a
/// length settles every subset; exhaustive and random subsets are checked
/// directly on top.
pub fn seq_round_trips(seed: u64, random: usize) -> Tally {
    let mut t = Tally::new("codings.seq-sets");
    for n in [2usize, 3] {
        let mut lengths = BTreeSet::new();
        for i in 0..64usize {
            let fiber = encode_set(&BTreeSet::from([i]), n).unwrap();
            let uniform = fiber.iter().all(|u| u.len() == i + 1);
            // bⁱc with i = 0 is just c, so b drops out.
            let size = if i == 0 { n } else { n * (n - 1) };
            t.check(uniform && fiber.len() == size, || format!("fiber {i} over {n} has wrong shape"));
            t.check(
                decode_seq_relation(&fiber, n) == BTreeSet::from([(i, Vec::new())]),
                || format!("fiber {i} over {n} does not decode to itself"),
            );
            lengths.insert(i + 1);
        }
        t.check(lengths.len() == 64, || format!("fibers over {n} share a length"));
        for bits in 0u32..1 << 16 {
            let x: BTreeSet<usize> = (0..16).filter(|i| bits >> i & 1 == 1).collect();
            let ok = decode_set(&encode_set(&x, n).unwrap(), n) == x;
            t.check(ok, || format!("X = {x:?} over {n}"));
        }
        let full: BTreeSet<usize> = (0..64).collect();
        t.check(decode_set(&encode_set(&full, n).unwrap(), n) == full, || format!("{{0..63}} over {n}"));
    }
    let mut c = Corpus::new(seed);
    for _ in 0..random {
        let mask: u64 = rand::Rng::gen(c.rng());
        let x: BTreeSet<usize> = (0..64).filter(|i| mask >> i & 1 == 1).collect();
        let n = c.range(2, 3);
        let ok = decode_set(&encode_set(&x, n).unwrap(), n) == x;
        t.check(ok, || format!("mask {mask:#x} over {n}"));
    }
    t
}

// ---------------------------------------------------------------------------
// Compiler

const FULL: usize = usize::MAX >> 1;

fn param_values(c: &mut Corpus, k: usize, n: usize) -> Vec<usize> {
    (0..k).map(|_| c.below(n)).collect()
}

/// `Ψ^{P(A)}` of the compiled operator equals the relation the family
/// defines.
pub fn compile_forward(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("compiler.forward");
    let mut c = Corpus::new(seed);
    for case in 0..cases {
        let sig = c.signature();
        let n = c.range(2, 6);
        let density = [0.2, 0.35, 0.5][c.below(3)];
        let s = c.structure(&sig, n, density);
        let arity = c.range(0, 3);
        let params = c.range(0, 1);
        // Wide disjuncts over six elements make large tables; keep the
        // witness count down on big universes.
        let max_bound = if n >= 5 && arity >= 2 { 1 } else { 2 };
        let fam = c.family(&sig, arity, 8, max_bound, 3, params);
        let pv = param_values(&mut c, params, n);
        let want = match define_relation(&s, &fam, &pv, 3, FULL) {
            Ok(r) => r,
            Err(e) => {
                t.error(format!("case {case} define"), e);
                continue;
            }
        };
        match compile_family(&sig, &fam, &pv, n, 3, FULL) {
            Ok(op) => {
                let got = decode_outputs(&apply(&op.operator, &positive_diagram(&s), None));
                t.check(got == want, || {
                    format!("case {case}: n={n} arity={arity} compiled {} tuples, defined {}", got.len(), want.len())
                });
            }
            Err(e) => t.error(format!("case {case} compile"), e),
        }
    }
    t
}

/// A compiled correct operator is unforceable; the family extracted at
/// the base defines the operator's relation.
pub fn compile_reverse(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("compiler.reverse");
    let mut c = Corpus::new(seed);
    for case in 0..cases {
        let sig = c.signature();
        let n = c.range(3, 4);
        let s = c.structure(&sig, n, 0.4);
        let arity = c.range(0, 2);
        let fam = c.family(&sig, arity, 3, 1, 2, 0);
        let result = (|| -> emt_core::Result<Option<String>> {
            let op = compile_family(&sig, &fam, &[], n, 3, FULL)?.operator;
            let r = decode_outputs(&apply(&op, &positive_diagram(&s), None));
            let (_, rep) = diagonalize_copy(&s, &r, std::slice::from_ref(&op), None)?;
            let base = match rep.verdicts.first() {
                Some(Verdict::Unforceable { base, .. }) => base.clone(),
                other => return Ok(Some(format!("expected UNFORCEABLE, got {other:?}"))),
            };
            let sfam = extract_definition(&s, &op, &base, 3, None)?;
            let got = define_relation(&s, &sfam, &base, 3, FULL)?;
            Ok((got != r).then(|| format!("extracted {} tuples, operator {}", got.len(), r.len())))
        })();
        match result {
            Ok(None) => t.check(true, String::new),
            Ok(Some(msg)) => t.check(false, || format!("case {case}: {msg}")),
            Err(e) => t.error(format!("case {case}"), e),
        }
    }
    t
}

/// `P(B)` for the copy listing `pi`, built straight from the definition:
/// index `j` names `pi[j]`.
fn copy_diagram(s: &FiniteStructure, pi: &[usize]) -> CodeSet {
    let n = pi.len();
    let mut out = CodeSet::new();
    for i in 0..n {
        for j in 0..n {
            let kind = if i == j { FactKind::Eq } else { FactKind::Neq };
            out.insert(fact_code(kind, &[i, j]));
        }
    }
    for r in 0..s.signature().len().min(n) {
        for idx in all_tuples(n, s.signature().arity(r)) {
            let img: Vec<usize> = idx.iter().map(|&j| pi[j]).collect();
            if s.contains(r, &img) {
                out.insert(fact_code(FactKind::Rel(r), &idx));
            }
        }
    }
    out
}

/// Whether `op` emits, on some copy listed by a bijection extending
/// `base`, an index tuple whose image is outside `r`.
fn disagrees(s: &FiniteStructure, op: &EnumOperator, r: &TupleSet, base: &[usize]) -> bool {
    let n = s.size();
    (0..n).permutations(n).filter(|pi| pi.starts_with(base)).any(|pi| {
        apply(op, &copy_diagram(s, &pi), None).iter().any(|&code| {
            decode_tuple(code)
                .map(|j| {
                    j.iter().all(|&x| (x as usize) < n)
                        && !r.contains(&j.iter().map(|&x| pi[x as usize]).collect::<Vec<_>>())
                })
                .unwrap_or(false)
        })
    })
}

/// DEFEATED exactly when an adversary disagrees with `R` on a copy
/// extending the base it faced, with a replayable witness; compiled
/// correct operators are UNFORCEABLE.
pub fn diagonalization(seed: u64, structures: usize) -> Tally {
    let mut t = Tally::new("compiler.diagonalize");
    let mut c = Corpus::new(seed);
    let mut defeated = 0;
    for case in 0..structures {
        let sig = c.signature();
        let n = c.range(3, 4);
        let s = c.structure(&sig, n, 0.4);
        let arity = c.range(1, 2);
        let fam = c.family(&sig, arity, 3, 1, 2, 0);
        let other = c.family(&sig, arity, 3, 1, 2, 0);
        let raw = c.raw_operator(&sig, n, 6, 2, 2);
        let result = (|| -> emt_core::Result<()> {
            let r = define_relation(&s, &fam, &[], 3, FULL)?;
            let correct = compile_family(&sig, &fam, &[], n, 3, FULL)?.operator;
            let wrong = compile_family(&sig, &other, &[], n, 3, FULL)?.operator;
            let adversaries = [correct, wrong, raw.clone()];
            let (g, rep) = diagonalize_copy(&s, &r, &adversaries, None)?;
            for (k, v) in rep.verdicts.iter().enumerate() {
                let base = &rep.prefixes[2 * k];
                let truth = disagrees(&s, &adversaries[k], &r, base);
                match v {
                    Verdict::Defeated { witness, .. } => {
                        defeated += 1;
                        let replay = replay_defeat(&s, &adversaries[k], &r, &g, witness, None)?;
                        t.check(truth && replay, || {
                            format!("case {case} adversary {k}: DEFEATED, oracle={truth} replay={replay}")
                        });
                    }
                    Verdict::Unforceable { .. } => {
                        t.check(!truth, || format!("case {case} adversary {k}: UNFORCEABLE but oracle disagrees"));
                    }
                }
                if k == 0 {
                    t.check(matches!(v, Verdict::Unforceable { .. }), || {
                        format!("case {case}: compiled correct operator was defeated")
                    });
                }
            }
            Ok(())
        })();
        if let Err(e) = result {
            t.error(format!("case {case}"), e);
        }
    }
    t.notes.push(format!("{defeated} adversaries defeated"));
    t
}

// ---------------------------------------------------------------------------
// Jump

/// Pulling `PJ(A)` back along `f` agrees with the jump of `f⁻¹(A)`.
pub fn jump_commutation(seed: u64, cases: usize) -> Tally {
    let mut t = Tally::new("jump.commute");
    let mut c = Corpus::new(seed);
    let cycles = corpus::cycles_fixture(3);
    for case in 0..cases {
        let (s, extra) = if case % 10 == 0 {
            (cycles.clone(), c.range(0, 2))
        } else {
            let sig = c.signature();
            let n = c.range(2, 5);
            (c.structure(&sig, n, 0.4), c.range(0, 3))
        };
        let f = c.surjection(s.size(), extra);
        let depth = c.range(0, 20) as u64;
        let stage = c.range(8, 128);
        match jump_commutes_check(&s, &f, f.default_window(), depth, stage, 2) {
            Ok(rep) => t.check(rep.equal(), || {
                format!(
                    "case {case}: f = {f}, depth {depth}, stage {stage}: {} lhs-only, {} rhs-only",
                    rep.lhs_only.len(),
                    rep.rhs_only.len()
                )
            }),
            Err(e) => t.error(format!("case {case}"), e),
        }
    }
    t
}

/// Every signature relation is a catalog slice within the scan bound.
pub fn kleene_completeness(seed: u64, random: usize) -> Tally {
    let mut t = Tally::new("jump.kleene");
    let mut c = Corpus::new(seed);
    let mut structures: Vec<(String, FiniteStructure)> = corpus::fixtures()
        .into_iter()
        .map(|(n, s)| (n.to_string(), s))
        .collect();
    for k in 0..random {
        let sig = c.signature();
        let n = c.range(1, 5);
        let density = [0.0, 0.3, 0.6, 1.0][c.below(4)];
        structures.push((format!("seeded-{k}"), c.structure(&sig, n, density)));
    }
    let mut max_index = 0;
    for (name, s) in &structures {
        for r in 0..s.signature().len() {
            let target = s.facts(r).clone();
            let arity = s.signature().arity(r);
            match kleene_witness(s, &target, arity, KLEENE_SCAN_BOUND) {
                Ok(Some(i)) => {
                    max_index = max_index.max(i);
                    let slice = kleene_slice_stage(s, i, FULL);
                    let direct = define_relation(
                        s,
                        &SigmaP1Family::single("k", arity, 0, formula_catalog(s.signature(), i, arity).disjuncts),
                        &[],
                        arity,
                        FULL,
                    );
                    let ok = index_arity(i) == arity
                        && slice.as_ref() == Ok(&target)
                        && direct.map(|d| d == target).unwrap_or(false);
                    t.check(ok, || format!("{name} {}: index {i} does not reproduce it", s.signature().name(r)));
                }
                Ok(None) => t.check(false, || {
                    format!("{name} {}: no slice below {KLEENE_SCAN_BOUND}", s.signature().name(r))
                }),
                Err(e) => t.error(name.to_string(), e),
            }
        }
    }
    t.notes.push(format!("largest witness index {max_index}"));
    t
}

// ---------------------------------------------------------------------------
// Generic

fn random_specs(c: &mut Corpus, s: &FiniteStructure) -> Vec<DenseSetSpec> {
    let sig = s.signature().clone();
    let n = s.size();
    let count = c.range(1, 20);
    (0..count)
        .map(|_| match c.below(7) {
            0 => DenseSetSpec::Hits(c.below(n + 1)),
            1 => DenseSetSpec::Probe(c.below(64) as u64),
            2 | 3 => {
                let arity = c.range(1, 2);
                DenseSetSpec::Formula(c.family(&sig, arity, 3, 1, 2, 0))
            }
            4 => {
                let fam = c.family(&sig, 1, 2, 1, 2, 0);
                let r = define_relation(s, &fam, &[], 2, FULL).unwrap_or_default();
                DenseSetSpec::Forcing {
                    op: c.raw_operator(&sig, n, 4, 2, 1),
                    r,
                    stage: None,
                }
            }
            5 => {
                let code = emt_core::coding::tuplecode_elems(&[c.below(n)]);
                DenseSetSpec::OperatorEmits {
                    op: c.raw_operator(&sig, n, 4, 2, 1),
                    code,
                    stage: None,
                }
            }
            _ => DenseSetSpec::Empty,
        })
        .collect()
}

/// Every spec decided, the enumeration onto, and the pulled-back copy
/// isomorphic to the source.
pub fn genericity(seed: u64, runs: usize) -> Tally {
    let mut t = Tally::new("generic.build");
    let mut c = Corpus::new(seed);
    for run in 0..runs {
        let sig = c.signature();
        let n = c.range(3, 6);
        let s = c.structure(&sig, n, 0.4);
        let specs = random_specs(&mut c, &s);
        let result = (|| -> emt_core::Result<Option<String>> {
            let g = build_generic(&s, &specs, None, 16)?;
            if !g.all_decided() {
                return Ok(Some("a spec is UNDECIDED".into()));
            }
            if !g.surjective(n) {
                return Ok(Some(format!("prefix {} misses an element", show(&g.prefix))));
            }
            let copy = Pullback::new(s.clone(), g.enumeration.window(n)?)?.to_structure();
            if find_isomorphism(&copy, &s).is_none() {
                return Ok(Some("pullback is not isomorphic to the source".into()));
            }
            Ok(None)
        })();
        match result {
            Ok(None) => t.check(true, String::new),
            Ok(Some(msg)) => t.check(false, || format!("run {run} ({} specs): {msg}", specs.len())),
            Err(e) => t.error(format!("run {run}"), e),
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Interpretations

fn reversal() -> PositiveInterpretation {
    parse_interpretation(
        "domlen 1\ndom\narity 1\ndisjunct true\ncodom\nsim\ndisjunct x1 = x2\nnsim\ndisjunct x1 <> x2\nrel E/2\ndisjunct E(x2,x1)\n",
    )
    .expect("reversal parses")
}

fn injective_pairs(sig: &Signature) -> PositiveInterpretation {
    let mut text = String::from(
        "domlen 2\ndom\ndisjunct x1 <> x2\ncodom\ndisjunct x1 = x2\nsim\ndisjunct x1 = x3 & x2 = x4\nnsim\ndisjunct x1 <> x3\ndisjunct x2 <> x4\n",
    );
    for (name, arity) in sig.iter() {
        let args: Vec<String> = (0..arity).map(|k| format!("x{}", 2 * k + 1)).collect();
        text.push_str(&format!("rel {name}/{arity}\ndisjunct {name}({})\n", args.join(",")));
    }
    parse_interpretation(&text).expect("pair interpretation parses")
}

/// Element-wise interpretation with random positive relation definitions.
fn random_interpretation(c: &mut Corpus, sig: &Signature) -> PositiveInterpretation {
    let mut i = PositiveInterpretation::identity(sig).expect("identity");
    for (name, arity, fam) in i.rels.iter_mut() {
        let mut f = c.family(sig, *arity, 2, 1, 2, 0);
        f.name = name.clone();
        *fam = f;
    }
    i
}

struct PairCase {
    label: String,
    fp: FunctorPair,
    realized: FiniteStructure,
    b: FiniteStructure,
    bounds: ExtractBounds,
}

fn interp_cases(seed: u64, random: usize) -> emt_core::Result<Vec<PairCase>> {
    let mut c = Corpus::new(seed);
    let mut out = Vec::new();
    let mut bases: Vec<(String, FiniteStructure)> = corpus::fixtures()
        .into_iter()
        .filter(|(_, s)| s.size() <= 4)
        .map(|(n, s)| (n.to_string(), s))
        .collect();
    for k in 0..random {
        let sig = c.signature();
        let n = c.range(2, 4);
        bases.push((format!("seeded-{k}"), c.structure(&sig, n, 0.4)));
    }
    for (name, b) in &bases {
        let n = b.size();
        let sig = b.signature();
        let tuple_bound = n.min(3);
        out.push(PairCase {
            label: format!("{name} identity-pair"),
            fp: FunctorPair::identity(sig, n),
            realized: b.clone(),
            b: b.clone(),
            bounds: ExtractBounds { tuple_bound, pad_bound: n },
        });
        let mut interps = vec![("identity".to_string(), PositiveInterpretation::identity(sig)?)];
        if sig.iter().eq([("E", 2)]) {
            interps.push(("reversal".into(), reversal()));
        }
        interps.push(("random".into(), random_interpretation(&mut c, sig)));
        for (iname, i) in interps {
            let realized = realize_interpretation(&i, b, FULL)?.structure;
            out.push(PairCase {
                label: format!("{name} {iname}-table"),
                fp: FunctorPair::from_interpretation(&i, b, FULL)?,
                realized,
                b: b.clone(),
                // Table pairs only answer on full listings.
                bounds: ExtractBounds::full(n),
            });
        }
    }
    // A five-element structure under the identity pair, with short
    // domain tuples.
    let b5 = c.structure(&Signature::new([("E", 2)])?, 5, 0.3);
    out.push(PairCase {
        label: "seeded-5 identity-pair".into(),
        fp: FunctorPair::identity(b5.signature(), 5),
        realized: b5.clone(),
        b: b5,
        bounds: ExtractBounds { tuple_bound: 2, pad_bound: 5 },
    });
    Ok(out)
}

/// Extraction on genuine functor pairs: equivalence axioms, the
/// realize/extract round trip, `Ψ` against the realized structure, and
/// naturality over two copies.
pub fn interp_genuine(seed: u64, random: usize) -> Vec<Tally> {
    let mut eq = Tally::new("interp.equivalence");
    let mut rt = Tally::new("interp.round-trip");
    let mut nat = Tally::new("interp.naturality");
    let cases = match interp_cases(seed, random) {
        Ok(c) => c,
        Err(e) => {
            eq.error("building cases".into(), e);
            return vec![eq, rt, nat];
        }
    };
    let mut c = Corpus::new(seed ^ 0x5eed);
    let mut undecided = 0;
    for pc in &cases {
        let n = pc.b.size();
        let result = (|| -> emt_core::Result<()> {
            let e = extract_interpretation(&pc.fp, &pc.b, pc.bounds, None)?;
            let rep = check_equivalence_axioms(&e, n);
            undecided += rep.undecided;
            eq.check(rep.ok(), || format!("{}: {}", pc.label, rep.violations.iter().take(2).join("; ")));
            let object = pc.fp.object(&pc.b, None)?;
            rt.check(
                find_isomorphism(&e.induced.structure, &pc.realized).is_some() && object == pc.realized,
                || format!("{}: induced or Ψ object differs from the realized structure", pc.label),
            );
            let relabeled = pc.b.relabel(&c.permutation(n))?;
            let nrep = check_naturality(&pc.fp, &[pc.b.clone(), relabeled], pc.bounds, None, None)?;
            nat.check(nrep.ok(), || format!("{}: {}", pc.label, nrep.violations.iter().take(2).join("; ")));
            Ok(())
        })();
        if let Err(e) = result {
            eq.error(pc.label.clone(), e);
        }
    }
    eq.notes.push(format!("{} functor pairs, {undecided} pairs undecided within bounds", cases.len()));
    vec![eq, rt, nat]
}

/// Composition of interpretations both ways returns the original.
pub fn interp_biinterp(seed: u64, random: usize) -> Tally {
    let mut t = Tally::new("interp.biinterp");
    let mut c = Corpus::new(seed);
    let mut bases: Vec<FiniteStructure> = corpus::fixtures().into_iter().map(|(_, s)| s).collect();
    for _ in 0..random {
        let sig = c.signature();
        let n = c.range(2, 5);
        bases.push(c.structure(&sig, n, 0.4));
    }
    for b in &bases {
        let mut pairs = vec![PositiveInterpretation::identity(b.signature()).expect("identity")];
        if b.signature().iter().eq([("E", 2)]) {
            pairs.push(reversal());
        }
        for i in pairs {
            match biinterp_compose_check(&i, &i, b, b, FULL) {
                Ok(rep) => t.check(rep.ok(), || format!("size {} composite not isomorphic", b.size())),
                Err(e) => t.error("biinterp".into(), e),
            }
        }
    }
    t
}

/// Fraction of injected faults caught, per fault class.
pub fn interp_faults(seed: u64, per_class: usize) -> Vec<(Tally, usize)> {
    let mut c = Corpus::new(seed);
    let g = corpus::graph1();
    let two = corpus::two_edges();
    let mut out = Vec::new();

    let mut star = Tally::new("fault.psistar-drop");
    let mut caught = 0;
    match FunctorPair::from_interpretation(&reversal(), &g, FULL) {
        Ok(fp) => {
            for _ in 0..per_class {
                let k = c.below(fp.psistar.len());
                let bad = fp.drop_psistar(k);
                let hit = extract_interpretation(&bad, &g, ExtractBounds::full(3), None)
                    .map(|e| !check_equivalence_axioms(&e, 3).ok())
                    .unwrap_or(true);
                caught += hit as usize;
                star.check(hit, || format!("Ψ_* axiom {k} dropped unnoticed"));
            }
        }
        Err(e) => star.error("table pair".into(), e),
    }
    out.push((star, caught));

    let mut psi = Tally::new("fault.psi-drop");
    let mut caught = 0;
    match FunctorPair::from_interpretation(&reversal(), &g, FULL) {
        Ok(fp) => {
            for _ in 0..per_class {
                let k = c.below(fp.psi.len());
                let hit = !fp.drop_psi(k).check_on_copies(&g, None).is_empty();
                caught += hit as usize;
                psi.check(hit, || format!("Ψ axiom {k} dropped unnoticed"));
            }
        }
        Err(e) => psi.error("table pair".into(), e),
    }
    out.push((psi, caught));

    let mut lambda = Tally::new("fault.lambda-swap");
    let mut caught = 0;
    let fp = FunctorPair::identity(two.signature(), 4);
    let copy = two.relabel(&[1, 3, 0, 2]).expect("permutation");
    for _ in 0..per_class {
        let a = c.below(4);
        let b = (a + 1 + c.below(3)) % 4;
        let fault = LambdaFault { structure: 1, a, b };
        let hit = check_naturality(&fp, &[two.clone(), copy.clone()], ExtractBounds { tuple_bound: 3, pad_bound: 4 }, None, Some(fault))
            .map(|r| !r.ok())
            .unwrap_or(true);
        caught += hit as usize;
        lambda.check(hit, || format!("Λ swap {a} <-> {b} unnoticed"));
    }
    out.push((lambda, caught));

    let mut size = Tally::new("fault.biinterp-size");
    let mut caught = 0;
    for _ in 0..per_class {
        let sig = c.signature();
        let n = c.range(3, 5);
        let b = c.structure(&sig, n, 0.4);
        let pairs = injective_pairs(&sig);
        let id = PositiveInterpretation::identity(&sig).expect("identity");
        let hit = biinterp_compose_check(&pairs, &id, &b, &b, FULL)
            .map(|r| !r.ok())
            .unwrap_or(true);
        caught += hit as usize;
        size.check(hit, || format!("pair interpretation on {n} elements passed"));
    }
    out.push((size, caught));
    out
}
