//! Catalog entries worked out by hand from the walk order: formula 0 is
//! false, then single atoms ordered `=`, `<>`, relations, each by argument
//! tuple in base `V`.

use emt_core::jump::{catalog_index, formula_catalog, index_arity, join_index, split_index};
use emt_core::structure::Signature;

fn e2() -> Signature {
    Signature::new([("E", 2)]).unwrap()
}

#[test]
fn index_split() {
    assert_eq!(split_index(0), (0, 0));
    assert_eq!(split_index(5), (1, 1));
    assert_eq!(split_index(11), (2, 1));
    assert_eq!(join_index(2, 10), Some(83));
    assert_eq!(join_index(64, 0), Some(u64::MAX));
    assert_eq!(join_index(64, 1), None);
    for i in 0..2000 {
        let (t, k) = split_index(i);
        assert_eq!(join_index(t, k), Some(i));
        assert_eq!(index_arity(i), t as usize);
    }
}

#[test]
fn unary_slices_of_a_graph() {
    let sig = e2();
    let want = [(1, "false"), (5, "(x1 = x1)"), (9, "(x1 <> x1)"), (13, "(E(x1,x1))")];
    for (i, text) in want {
        assert_eq!(formula_catalog(&sig, i, 1).to_string(), text, "index {i}");
    }
}

#[test]
fn binary_slices_of_a_graph() {
    let sig = e2();
    let want = [
        (3, "false"),
        (11, "(x1 = x1)"),
        (19, "(x1 = x2)"),
        (27, "(x2 = x1)"),
        (35, "(x2 = x2)"),
        (43, "(x1 <> x1)"),
        (75, "(E(x1,x1))"),
        (83, "(E(x1,x2))"),
        (91, "(E(x2,x1))"),
    ];
    for (i, text) in want {
        assert_eq!(formula_catalog(&sig, i, 2).to_string(), text, "index {i}");
    }
}

#[test]
fn second_relation_follows_the_first() {
    let sig = Signature::new([("E", 2), ("P", 1)]).unwrap();
    assert_eq!(formula_catalog(&sig, 17, 1).to_string(), "(P(x1))");
}

#[test]
fn off_arity_entries_are_false() {
    let sig = e2();
    assert_eq!(formula_catalog(&sig, 83, 1).to_string(), "false");
    assert_eq!(formula_catalog(&sig, 5, 2).to_string(), "false");
}

#[test]
fn index_lookup_inverts_the_catalog() {
    let sig = Signature::new([("E", 2), ("P", 1)]).unwrap();
    for j in 0..3usize {
        for k in 0..200u128 {
            let i = join_index(j as u32, k).unwrap();
            let phi = formula_catalog(&sig, i, j);
            assert_eq!(catalog_index(&sig, &phi), Some(i), "index {i}");
        }
    }
}
