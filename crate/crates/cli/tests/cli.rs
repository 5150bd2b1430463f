use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;

use emt_cli::{run_with, Outcome};
use emt_core::formula::{define_relation, parse_families, sat_stage};
use emt_core::structure::parse_structure;

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("emt-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

fn emt(args: &[&str]) -> Outcome {
    let mut argv = vec!["emt"];
    argv.extend_from_slice(args);
    run_with(argv, None)
}

fn body(o: &Outcome) -> Vec<&str> {
    o.stdout.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn eval_matches_sat_stage() {
    let g = parse_structure(&std::fs::read_to_string(data("graph1.pstruct")).unwrap())
        .unwrap()
        .materialize(8);
    let fams = parse_families(&std::fs::read_to_string(data("out.spf")).unwrap()).unwrap();
    let phi = fams[0].formula(1);
    for a in 0..3 {
        let want = sat_stage(&g, &phi, &[a], &[], 8).unwrap();
        let o = emt(&[
            "eval", "--structure", &data("graph1.pstruct"), "--formula", &data("out.spf"),
            "--family", "phi", "--tuple", &a.to_string(), "--stage", "8",
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        assert!(o.stdout.starts_with("# emt 0.1 eval\n"));
        assert_eq!(body(&o), vec![if want { "TRUE" } else { "FALSE" }]);
    }
}

#[test]
fn commute_check_on_graph1() {
    let o = emt(&[
        "commute-check", "--structure", &data("graph1.pstruct"), "--enum", "1 0 2",
        "--depth", "5", "--stage", "64",
    ]);
    assert_eq!((o.code, body(&o)), (0, vec!["EQUAL"]));
}

#[test]
fn error_kinds_have_distinct_prefixes() {
    let o = emt(&["eval", "--bogus"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("usage error:"), "{}", o.stderr);

    let o = emt(&["eval", "--structure", "/nonexistent/g.pstruct", "--formula", &data("out.spf"), "--tuple", "0"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("missing file:"), "{}", o.stderr);

    let o = emt(&["eval", "--structure", &data("graph1.pstruct"), "--formula", &data("bad.spf"), "--tuple", "0"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("parse error:"), "{}", o.stderr);

    let o = emt(&[
        "eval", "--structure", &data("graph1.pstruct"), "--formula", &data("out.spf"),
        "--family", "phi", "--tuple", "7",
    ]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.starts_with("bound violation:"), "{}", o.stderr);
}

#[test]
fn unknown_flag_exits_2_from_the_binary() {
    let out = Command::new(env!("CARGO_BIN_EXE_emt")).args(["check", "--nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stage_default_comes_from_the_environment_value() {
    let args = [
        "emt", "eval", "--structure", &data("graph1.pstruct"), "--formula", &data("out.spf"),
        "--family", "phi", "--tuple", "0",
    ];
    assert_eq!(run_with(args, Some("3")).code, 0);
    let o = run_with(args, Some("many"));
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("EMT_STAGE_DEFAULT"));
}

#[test]
fn compile_then_apply_gives_the_defined_relation() {
    let op = scratch("edge.eop");
    let o = emt(&[
        "compile", "--structure", &data("graph1.pstruct"), "--formula", &data("out.spf"),
        "--family", "edge", "--max-len", "2", "-o", &op,
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let applied = emt(&["apply", "--operator", &op, "--structure", &data("graph1.pstruct")]);
    let got: BTreeSet<&str> = body(&applied)
        .into_iter()
        .filter(|l| !l.starts_with("count"))
        .map(|l| l.split_once(' ').unwrap().1)
        .collect();
    assert_eq!(got, BTreeSet::from(["(0 1)", "(1 2)"]));

    let defined = emt(&[
        "define", "--structure", &data("graph1.pstruct"), "--formula", &data("out.spf"),
        "--family", "edge", "--max-len", "2",
    ]);
    assert_eq!(body(&defined), vec!["family: edge", "count: 2", "(0 1)", "(1 2)"]);
}

#[test]
fn compiled_operator_is_unforceable_and_extracts() {
    let op = scratch("phi.eop");
    let o = emt(&[
        "compile", "--structure", &data("graph1.pstruct"), "--formula", &data("out.spf"),
        "--family", "phi", "-o", &op,
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let d = emt(&[
        "diagonalize", "--structure", &data("graph1.pstruct"), "--formula", &data("out.spf"),
        "--family", "phi", "--adversary", &op,
    ]);
    assert_eq!(d.code, 0, "{}", d.stderr);
    assert!(d.stdout.contains("adversary 0: UNFORCEABLE"), "{}", d.stdout);

    let fam_path = scratch("extracted.spf");
    let e = emt(&["extract", "--structure", &data("graph1.pstruct"), "--operator", &op, "--base", ""]);
    assert_eq!(e.code, 0, "{}", e.stderr);
    std::fs::write(&fam_path, &e.stdout).unwrap();
    let g = parse_structure(&std::fs::read_to_string(data("graph1.pstruct")).unwrap())
        .unwrap()
        .materialize(0);
    let fam = &parse_families(&e.stdout).unwrap()[0];
    let rel = define_relation(&g, fam, &[], 3, usize::MAX >> 1).unwrap();
    assert_eq!(rel, BTreeSet::from([vec![0], vec![1]]));
}

#[test]
fn the_wrong_adversary_is_defeated() {
    let d = emt(&[
        "diagonalize", "--structure", &data("graph1.pstruct"), "--formula", &data("out.spf"),
        "--family", "edge", "--adversary", &data("emit1.eop"),
    ]);
    assert_eq!(d.code, 0, "{}", d.stderr);
    assert!(d.stdout.contains("adversary 0: DEFEATED"), "{}", d.stdout);
}

#[test]
fn catalog_operator_round_trips_through_index_of() {
    let o = emt(&["catalog", "--operator", "1"]);
    assert_eq!(body(&o), vec!["axiom 1 :"]);
    let path = scratch("cat1.eop");
    std::fs::write(&path, &o.stdout).unwrap();
    let back = emt(&["catalog", "--index-of", &path]);
    let idx = body(&back)[0].strip_prefix("index: ").unwrap().to_string();
    assert_eq!(body(&emt(&["catalog", "--operator", &idx])), vec!["axiom 1 :"]);
    let f = emt(&["catalog", "--index", "5,1"]);
    assert_eq!(body(&f), vec!["phi[5,1] = (x1 = x1)"]);
    assert_eq!(emt(&["catalog"]).code, 2);
}

#[test]
fn jump_file_parses_as_a_structure() {
    let path = scratch("pj.pstruct");
    let o = emt(&[
        "jump", "--structure", &data("cycles.pstruct"), "--depth", "3", "--stage", "3",
        "--max-len", "2", "-o", &path,
    ]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let s = parse_structure(&std::fs::read_to_string(&path).unwrap()).unwrap().materialize(0);
    assert_eq!(s.size(), 7);
    assert_eq!(s.signature().len(), 1 + 4 * 2);
}

#[test]
fn totalize_and_translate() {
    let t = emt(&["totalize", "--structure", &data("graph1.pstruct")]);
    assert!(t.stdout.contains("signature E/2 E_bar/2"));
    assert_eq!(t.stdout.lines().filter(|l| l.starts_with("fact ")).count(), 9);

    let p = emt(&["translate", "--formula", &data("sink.spf"), "--to", "positive"]);
    assert_eq!(p.code, 0, "{}", p.stderr);
    assert!(p.stdout.contains("disjunct E_bar(x1,x1)"));
    let path = scratch("sink_plus.spf");
    std::fs::write(&path, &p.stdout).unwrap();
    let c = emt(&["translate", "--formula", &path, "--to", "classical", "--structure", &data("graph1.pstruct")]);
    assert!(c.stdout.contains("disjunct not E(x1,x1)") || c.stdout.contains("disjunct !E(x1,x1)"), "{}", c.stdout);
    assert_eq!(emt(&["translate", "--formula", &path, "--to", "classical"]).code, 2);
}

#[test]
fn generic_transcript_and_undecided_exit() {
    let dense = format!("builtin:D2,builtin:empty,{},{}@4,builtin:R1", data("out.spf"), data("emit1.eop"));
    let o = emt(&["generic", "--structure", &data("graph1.pstruct"), "--dense", &dense]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("verdict spec0 D2 IN"));
    assert!(o.stdout.contains("verdict spec1 empty AVOIDED"));
    let last = o.stdout.lines().last().unwrap();
    assert!(last.starts_with("enumeration "));

    let o = emt(&["generic", "--structure", &data("graph1.pstruct"), "--dense", "builtin:D2", "--steps", "0"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("UNDECIDED"));
    assert_eq!(emt(&["generic", "--structure", &data("graph1.pstruct"), "--dense", "builtin:X"]).code, 2);
}

#[test]
fn interpret_and_extract_reversal() {
    let i = emt(&["interpret", "--structure", &data("graph1.pstruct"), "--interp", &data("reversal.spi")]);
    assert_eq!(i.code, 0, "{}", i.stderr);
    assert_eq!(body(&i), vec!["signature E/2", "universe 3", "fact E 1 0", "fact E 2 1"]);

    let e = emt(&["functor-extract", "--structure", &data("graph1.pstruct"), "--interp", &data("reversal.spi")]);
    assert_eq!(e.code, 0, "{}", e.stdout);
    assert!(e.stdout.contains("violations: 0"));
    assert!(e.stdout.ends_with("fact E 1 0\nfact E 2 1\n"));

    let id = emt(&["functor-extract", "--structure", &data("graph1.pstruct")]);
    assert!(id.stdout.contains("classes: 3"));
}

#[test]
fn check_codings_passes() {
    let o = emt(&["check", "codings", "--seed", "7"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("codings.round-trip: PASS"));
    assert!(o.stdout.contains("codings.seq-sets: PASS"));
}

#[test]
fn check_suites_are_deterministic() {
    for suite in ["interp", "generic", "jump"] {
        let a = emt(&["check", suite, "--seed", "3"]);
        let b = emt(&["check", suite, "--seed", "3"]);
        assert_eq!(a, b);
        assert_eq!(a.code, 0, "{}", a.stdout);
    }
    assert_ne!(emt(&["check", "generic", "--seed", "3"]).stdout, emt(&["check", "generic", "--seed", "4"]).stdout);
}

#[test]
fn help_lists_every_command() {
    let o = emt(&["--help"]);
    assert_eq!(o.code, 0);
    for c in [
        "eval", "define", "compile", "extract", "diagonalize", "apply", "catalog", "jump",
        "commute-check", "totalize", "translate", "generic", "interpret", "functor-extract", "check",
    ] {
        assert!(o.stdout.contains(&format!("  {c} ")), "{c}");
    }
}
