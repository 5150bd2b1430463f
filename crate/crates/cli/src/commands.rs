//! One function per subcommand. Each returns the report text and whether
//! the command's own check failed.

use std::fmt::Write as _;

use itertools::Itertools;

use emt_core::coding::decode_elems;
use emt_core::compiler::{compile_family, diagonalize_copy, extract_definition, Verdict};
use emt_core::diagram::{positive_diagram, CodeSet};
use emt_core::enumeration::NumberedEnumeration;
use emt_core::formula::{define_relation, parse_classical, sat_stage, SigmaP1Family};
use emt_core::generic::{build_generic, DenseSetSpec};
use emt_core::interp::{
    check_equivalence_axioms, extract_interpretation, realize_interpretation, ExtractBounds,
    FunctorPair,
};
use emt_core::jump::{
    formula_catalog, jump_commutes_check, positive_jump_stage, sigmac1_to_sigmap1,
    sigmap1_to_sigmac1, totalize,
};
use emt_core::operator::{apply, catalog_operator, operator_index};
use emt_core::structure::Signature;

pub use crate::input::Failure;
use crate::input::{self, numbers, Res};
use crate::suite;
use crate::{Command, Direction, VERSION};

pub struct Report {
    pub text: String,
    pub failed: bool,
}

fn header(cmd: &str) -> String {
    format!("# emt {VERSION} {cmd}\n")
}

fn ok(text: String) -> Res<Report> {
    Ok(Report { text, failed: false })
}

fn show(t: &[usize]) -> String {
    format!("({})", t.iter().join(" "))
}

pub fn dispatch(cmd: Command, stage_default: usize) -> Res<Report> {
    let st = |s: Option<usize>| s.unwrap_or(stage_default);
    match cmd {
        Command::Eval {
            structure,
            formula,
            tuple,
            stage,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let fam = input::family(&formula)?;
            let t: Vec<usize> = numbers(&tuple, "tuple")?;
            let params: Vec<usize> = numbers(&formula.params, "params")?;
            let truth = sat_stage(&s, &fam.formula(t.len()), &t, &params, stage)?;
            ok(format!("{}{}\n", header("eval"), if truth { "TRUE" } else { "FALSE" }))
        }
        Command::Define {
            structure,
            formula,
            max_len,
            stage,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let fam = input::family(&formula)?;
            let params: Vec<usize> = numbers(&formula.params, "params")?;
            let rel = define_relation(&s, &fam, &params, max_len, stage)?;
            let mut out = header("define");
            writeln!(out, "family: {}\ncount: {}", fam.name, rel.len()).unwrap();
            for t in &rel {
                writeln!(out, "{}", show(t)).unwrap();
            }
            ok(out)
        }
        Command::Compile {
            structure,
            formula,
            element_bound,
            max_len,
            stage,
            output,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let fam = input::family(&formula)?;
            let params: Vec<usize> = numbers(&formula.params, "params")?;
            let bound = element_bound.unwrap_or(s.size());
            let c = compile_family(s.signature(), &fam, &params, bound, max_len, stage)?;
            let mut out = header("compile");
            writeln!(
                out,
                "# family: {}\n# element-bound: {bound}\n# max-len: {max_len}\n# stage: {stage}\n# axioms: {}",
                fam.name,
                c.operator.len()
            )
            .unwrap();
            out.push_str(&c.operator.to_text());
            ok(input::emit(output.as_deref(), out)?)
        }
        Command::Extract {
            structure,
            operator,
            base,
            max_len,
            stage,
        } => {
            let s = input::structure(&structure, stage.unwrap_or(stage_default as u64) as usize)?;
            let op = input::operator(&operator)?;
            let base: Vec<usize> = numbers(&base, "base")?;
            let fam = extract_definition(&s, &op, &base, max_len, stage)?;
            let mut out = header("extract");
            writeln!(out, "# base: {}\n# params: {}", show(&base), base.len()).unwrap();
            write!(out, "{fam}").unwrap();
            ok(out)
        }
        Command::Diagonalize {
            structure,
            formula,
            adversary,
            max_len,
            stage,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let fam = input::family(&formula)?;
            let params: Vec<usize> = numbers(&formula.params, "params")?;
            let r = define_relation(&s, &fam, &params, max_len, stage)?;
            let ops = adversary
                .iter()
                .map(|p| input::operator(p))
                .collect::<Res<Vec<_>>>()?;
            let (g, rep) = diagonalize_copy(&s, &r, &ops, None)?;
            let mut out = header("diagonalize");
            writeln!(out, "relation: {} tuples", r.len()).unwrap();
            for (k, v) in rep.verdicts.iter().enumerate() {
                match v {
                    Verdict::Defeated { step, witness } => writeln!(
                        out,
                        "adversary {k}: DEFEATED step: {step} q: {} indices: {} tuple: {}",
                        show(&witness.q),
                        show(&witness.indices),
                        show(&witness.tuple)
                    ),
                    Verdict::Unforceable { step, base, checked } => writeln!(
                        out,
                        "adversary {k}: UNFORCEABLE step: {step} base: {} checked: {checked}",
                        show(base)
                    ),
                }
                .unwrap();
            }
            writeln!(out, "copy: {g}").unwrap();
            ok(out)
        }
        Command::Apply {
            operator,
            structure,
            set,
            stage,
        } => {
            let op = input::operator(&operator)?;
            let x: CodeSet = match (structure, set) {
                (Some(p), _) => positive_diagram(&input::structure(&p, stage_default)?),
                (None, Some(s)) => numbers::<u64>(&s, "set")?.into_iter().collect(),
                (None, None) => return Err(Failure::Usage("give --structure or --set".into())),
            };
            let y = apply(&op, &x, stage);
            let mut out = header("apply");
            writeln!(out, "count: {}", y.len()).unwrap();
            for c in &y {
                match decode_elems(*c) {
                    Some(t) => writeln!(out, "{c} {}", show(&t)),
                    None => writeln!(out, "{c}"),
                }
                .unwrap();
            }
            ok(out)
        }
        Command::Catalog {
            structure,
            index,
            operator,
            index_of,
        } => {
            let mut out = header("catalog");
            if let Some(ij) = index {
                let v: Vec<u64> = numbers(&ij, "index")?;
                let [i, j] = v[..] else {
                    return Err(Failure::Usage("--index takes `i,j`".into()));
                };
                let sig = match structure {
                    Some(p) => input::structure(&p, stage_default)?.signature().clone(),
                    None => Signature::new([("E", 2)])?,
                };
                writeln!(out, "# {sig}\nphi[{i},{j}] = {}", formula_catalog(&sig, i, j as usize)).unwrap();
            }
            if let Some(e) = operator {
                writeln!(out, "# operator {e}").unwrap();
                out.push_str(&catalog_operator(e).to_text());
            }
            if let Some(p) = index_of {
                let op = input::operator(&p)?;
                match operator_index(&op) {
                    Some(e) => writeln!(out, "index: {e}"),
                    None => writeln!(out, "index: none (codes exceed 64 bits)"),
                }
                .unwrap();
            }
            if out.lines().count() == 1 {
                return Err(Failure::Usage("give --index, --operator or --index-of".into()));
            }
            ok(out)
        }
        Command::Jump {
            structure,
            depth,
            stage,
            max_len,
            output,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let pj = positive_jump_stage(&s, depth, stage, max_len)?;
            let mut out = header("jump");
            writeln!(out, "# depth: {depth}\n# stage: {stage}\n# max-len: {max_len}").unwrap();
            out.push_str(&pj.to_text(&s));
            ok(input::emit(output.as_deref(), out)?)
        }
        Command::CommuteCheck {
            structure,
            enumeration,
            depth,
            stage,
            max_len,
            window,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let f = NumberedEnumeration::parse(&enumeration)
                .map_err(|e| Failure::Usage(format!("--enum: {e}")))?;
            let window = window.unwrap_or(f.default_window());
            let rep = jump_commutes_check(&s, &f, window, depth, stage, max_len)?;
            let mut out = header("commute-check");
            if rep.equal() {
                writeln!(out, "EQUAL").unwrap();
                return ok(out);
            }
            writeln!(out, "DIFF").unwrap();
            for c in &rep.lhs_only {
                writeln!(out, "lhs-only: {c}").unwrap();
            }
            for c in &rep.rhs_only {
                writeln!(out, "rhs-only: {c}").unwrap();
            }
            Ok(Report { text: out, failed: true })
        }
        Command::Totalize { structure, output } => {
            let s = input::structure(&structure, stage_default)?;
            let out = format!("{}{}", header("totalize"), totalize(&s)?.to_text());
            ok(input::emit(output.as_deref(), out)?)
        }
        Command::Translate {
            formula,
            to,
            structure,
        } => {
            let text = input::read(&formula)?;
            let mut out = header("translate");
            match to {
                Direction::Positive => {
                    let fams = parse_classical(&text).map_err(|e| Failure::Parse {
                        path: formula.clone(),
                        msg: e.to_string(),
                    })?;
                    for f in &fams {
                        write!(out, "{}", sigmac1_to_sigmap1(f)).unwrap();
                    }
                }
                Direction::Classical => {
                    let Some(p) = structure else {
                        return Err(Failure::Usage("--to classical needs --structure for the base signature".into()));
                    };
                    let base = input::structure(&p, stage_default)?;
                    for f in &input::families(&formula)? {
                        write!(out, "{}", sigmap1_to_sigmac1(f, base.signature())?).unwrap();
                    }
                }
            }
            ok(out)
        }
        Command::Generic {
            structure,
            dense,
            steps,
            stage,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let mut specs = Vec::new();
            for d in &dense {
                specs.extend(dense_spec(d)?);
            }
            let run = build_generic(&s, &specs, steps, stage)?;
            let mut out = header("generic");
            for line in &run.transcript {
                writeln!(out, "{line}").unwrap();
            }
            let failed = !run.all_decided();
            Ok(Report { text: out, failed })
        }
        Command::Interpret {
            structure,
            interp,
            stage,
            output,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let i = input::interpretation(&interp)?;
            let r = realize_interpretation(&i, &s, stage)?;
            let mut out = header("interpret");
            for (k, class) in r.tau.iter().enumerate() {
                writeln!(out, "# tau {k} = {{{}}}", class.iter().map(|t| show(t)).join(" ")).unwrap();
            }
            out.push_str(&r.structure.to_text());
            ok(input::emit(output.as_deref(), out)?)
        }
        Command::FunctorExtract {
            structure,
            interp,
            tuple_bound,
            pad_bound,
            stage,
        } => {
            let stage = st(stage.stage);
            let s = input::structure(&structure, stage)?;
            let n = s.size();
            let fp = match interp {
                Some(p) => FunctorPair::from_interpretation(&input::interpretation(&p)?, &s, stage)?,
                None => FunctorPair::identity(s.signature(), n),
            };
            let bounds = ExtractBounds {
                tuple_bound: tuple_bound.unwrap_or(n.min(3)),
                pad_bound: pad_bound.unwrap_or(n),
            };
            let e = extract_interpretation(&fp, &s, bounds, None)?;
            let rep = check_equivalence_axioms(&e, n);
            let mut out = header("functor-extract");
            writeln!(
                out,
                "index-bound: {}\ndom: {}\nclasses: {}\nunclassified: {}\nundecided-pairs: {}\nviolations: {}",
                e.index_bound,
                e.dom.len(),
                e.induced.structure.size(),
                e.induced.unclassified.len(),
                rep.undecided,
                rep.violations.len()
            )
            .unwrap();
            for v in &rep.violations {
                writeln!(out, "violation: {v}").unwrap();
            }
            for (k, r) in e.induced.reps.iter().enumerate() {
                writeln!(out, "# class {k} = {r}").unwrap();
            }
            out.push_str(&e.induced.structure.to_text());
            Ok(Report {
                text: out,
                failed: !rep.ok(),
            })
        }
        Command::Check { suite: name, seed } => {
            let (text, failed) = suite::run_suite(name, seed);
            Ok(Report {
                text: format!("{}{text}", header("check")),
                failed,
            })
        }
    }
}

/// Parse one `--dense` entry. A formula file gives one spec per family.
fn dense_spec(d: &str) -> Res<Vec<DenseSetSpec>> {
    if let Some(b) = d.strip_prefix("builtin:") {
        let bad = || Failure::Usage(format!("unknown builtin dense set `{d}`"));
        return Ok(vec![match b {
            "empty" => DenseSetSpec::Empty,
            _ if b.starts_with('D') => DenseSetSpec::Hits(b[1..].parse().map_err(|_| bad())?),
            _ if b.starts_with('R') => DenseSetSpec::Probe(b[1..].parse().map_err(|_| bad())?),
            _ => return Err(bad()),
        }]);
    }
    if let Some((path, code)) = d.split_once('@') {
        let code = code
            .parse()
            .map_err(|_| Failure::Usage(format!("`{d}`: expected file.eop@<code>")))?;
        return Ok(vec![DenseSetSpec::OperatorEmits {
            op: input::operator(path)?,
            code,
            stage: None,
        }]);
    }
    let fams: Vec<SigmaP1Family> = input::families(d)?;
    Ok(fams.into_iter().map(DenseSetSpec::Formula).collect())
}
