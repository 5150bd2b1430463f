//! Parse and print round trips over a small corpus of family files.

use emt_core::formula::{define_relation, parse_classical, parse_families, parse_family};
use emt_core::structure::{FiniteStructure, Signature};
use emt_core::Error;

const CORPUS: &[&str] = &[
    "family out\narity 1\ndisjunct exists y . E(x1,y)\n",
    "family loopfree\narity 2\ndisjunct x1 <> x2 & E(x1,x2)\ndisjunct x1 = x2\n",
    "family reach\narity 2\ngenerator path(n in 1..): exists y[1..n] . E(x1,y[1]) & rep i=1..n-1 : E(y[i],y[i+1]) & y[n] = x2\n",
    "family anchored\nparams 1\narity 1\ndisjunct E(z1,x1)\n",
    "family any\narity uniform\ndisjunct true\n",
    "family empty\n",
];

fn path4() -> FiniteStructure {
    FiniteStructure::from_named(
        Signature::new([("E", 2)]).unwrap(),
        4,
        [("E", vec![0, 1]), ("E", vec![1, 2]), ("E", vec![2, 3])],
    )
    .unwrap()
}

#[test]
fn print_then_parse_is_the_identity() {
    for text in CORPUS {
        let fam = parse_family(text).unwrap();
        let again = parse_family(&fam.to_string()).unwrap();
        assert_eq!(again, fam, "{text}");
        assert_eq!(again.to_string(), fam.to_string());
    }
}

#[test]
fn canonical_text() {
    let fam = parse_family("family out\n  disjunct   exists y .E(x1, y)   # comment\n").unwrap();
    assert_eq!(fam.to_string(), "family out\narity 1\ndisjunct exists y . E(x1,y)\n");
}

#[test]
fn multi_family_files() {
    let all = parse_families(&CORPUS.concat()).unwrap();
    let names: Vec<&str> = all.iter().map(|f| f.name.as_str()).collect();
    assert_eq!(names, ["out", "loopfree", "reach", "anchored", "any", "empty"]);
}

#[test]
fn relations_on_a_path() {
    let g = path4();
    let reach = parse_family(CORPUS[2]).unwrap();
    // Stage j holds paths of length at most j + 1.
    let short = define_relation(&g, &reach, &[], 2, 0).unwrap();
    assert_eq!(short.len(), 3);
    let all = define_relation(&g, &reach, &[], 2, 4).unwrap();
    assert_eq!(all.len(), 6);
    let anchored = parse_family(CORPUS[3]).unwrap();
    assert_eq!(
        define_relation(&g, &anchored, &[1], 1, 0).unwrap(),
        [vec![2]].into_iter().collect()
    );
    let any = parse_family(CORPUS[4]).unwrap();
    assert_eq!(define_relation(&g, &any, &[], 2, 0).unwrap().len(), 1 + 4 + 16);
}

#[test]
fn negation_is_only_classical() {
    let text = "family f\narity 1\ndisjunct not E(x1,x1)\n";
    assert!(matches!(parse_family(text), Err(Error::Positivity { .. })));
    let c = parse_classical(text).unwrap();
    assert!(!c[0].is_positive());
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_family("family f\narity 1\ndisjunct E(x1,\n") {
        Err(Error::Syntax { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
}
