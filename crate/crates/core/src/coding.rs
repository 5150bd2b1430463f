//! Number-theoretic codings: Cantor pairing, length-tagged tuple codes, and
//! fact codes for positive diagrams.
//!
//! A fact code is `pair(kind, tuplecode(args))` where kind 0 is equality,
//! kind 1 is inequality and kind `i + 2` is the relation with signature
//! index `i`.

use crate::error::CodingError;

/// Kind tag of equality facts.
pub const KIND_EQ: u64 = 0;
/// Kind tag of inequality facts.
pub const KIND_NEQ: u64 = 1;

/// Cantor pairing `(x + y)(x + y + 1)/2 + y`.
///
/// Panics on overflow; use [`checked_pair`] when the inputs are not known to
/// be small.
pub fn pair(x: u64, y: u64) -> u64 {
    checked_pair(x, y).expect("pair code overflows u64")
}

pub fn checked_pair(x: u64, y: u64) -> Option<u64> {
    let s = x.checked_add(y)?;
    // s * (s + 1) is always even, so halve whichever factor is even first.
    let tri = if s % 2 == 0 {
        (s / 2).checked_mul(s.checked_add(1)?)?
    } else {
        s.checked_mul((s + 1) / 2)?
    };
    tri.checked_add(y)
}

/// Inverse of [`pair`]. Total on `u64`.
pub fn unpair(z: u64) -> (u64, u64) {
    // w is the largest integer with w(w+1)/2 <= z.
    let mut w = ((((8.0 * z as f64) + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while tri(w + 1).is_some_and(|t| t <= z) {
        w += 1;
    }
    while tri(w).is_none_or(|t| t > z) {
        w -= 1;
    }
    let y = z - tri(w).unwrap();
    (w - y, y)
}

fn tri(w: u64) -> Option<u64> {
    if w % 2 == 0 {
        (w / 2).checked_mul(w.checked_add(1)?)
    } else {
        w.checked_mul((w + 1) / 2)
    }
}

/// Length-tagged tuple code: `pair(len, payload)` with payload 0 for the
/// empty tuple, the sole entry for length one, and right-nested pairs
/// otherwise.
pub fn tuplecode(t: &[u64]) -> u64 {
    checked_tuplecode(t).expect("tuple code overflows u64")
}

pub fn checked_tuplecode(t: &[u64]) -> Option<u64> {
    let payload = match t {
        [] => 0,
        [x] => *x,
        _ => {
            let mut acc = *t.last().unwrap();
            for &x in t[..t.len() - 1].iter().rev() {
                acc = checked_pair(x, acc)?;
            }
            acc
        }
    };
    checked_pair(t.len() as u64, payload)
}

/// Tuple code of a tuple of elements.
pub fn tuplecode_elems(t: &[usize]) -> u64 {
    let v: Vec<u64> = t.iter().map(|&x| x as u64).collect();
    tuplecode(&v)
}

/// Longest tuple [`decode_tuple`] will materialize.
///
/// Right-nested payloads reach 0 after a few steps, so longer tuples are
/// zero-padded; this caps memory on adversarial codes.
pub const MAX_DECODED_LEN: u64 = 1 << 16;

/// Inverse of [`tuplecode`]. Returns `None` for codes outside its image
/// (empty length with a nonzero payload) and for lengths beyond
/// [`MAX_DECODED_LEN`].
pub fn decode_tuple(code: u64) -> Option<Vec<u64>> {
    let (len, payload) = unpair(code);
    match len {
        0 => (payload == 0).then(Vec::new),
        1 => Some(vec![payload]),
        _ if len > MAX_DECODED_LEN => None,
        _ => {
            let mut out = Vec::with_capacity(len as usize);
            let mut rest = payload;
            for _ in 0..len - 1 {
                if rest == 0 {
                    // unpair(0) = (0, 0): the rest is all zeros.
                    out.resize(len as usize, 0);
                    return Some(out);
                }
                let (head, tail) = unpair(rest);
                out.push(head);
                rest = tail;
            }
            out.push(rest);
            Some(out)
        }
    }
}

/// Decode a tuple code into elements, rejecting entries that do not fit.
pub fn decode_elems(code: u64) -> Option<Vec<usize>> {
    decode_tuple(code)?
        .into_iter()
        .map(|x| usize::try_from(x).ok())
        .collect()
}

/// The kind of a positive-diagram fact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactKind {
    Eq,
    Neq,
    Rel(usize),
}

impl FactKind {
    pub fn tag(self) -> u64 {
        match self {
            FactKind::Eq => KIND_EQ,
            FactKind::Neq => KIND_NEQ,
            FactKind::Rel(i) => i as u64 + 2,
        }
    }

    pub fn from_tag(tag: u64) -> FactKind {
        match tag {
            KIND_EQ => FactKind::Eq,
            KIND_NEQ => FactKind::Neq,
            t => FactKind::Rel((t - 2) as usize),
        }
    }
}

/// A decoded fact: kind plus argument tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    pub kind: FactKind,
    pub args: Vec<usize>,
}

/// Encode a fact, checking the argument count against `arity` (2 for
/// equality and inequality).
pub fn encode_fact(kind: FactKind, args: &[usize], arity: usize) -> Result<u64, CodingError> {
    if args.len() != arity {
        return Err(CodingError::ArityMismatch {
            kind: kind.tag(),
            expected: arity,
            found: args.len(),
        });
    }
    let v: Vec<u64> = args.iter().map(|&a| a as u64).collect();
    checked_tuplecode(&v)
        .and_then(|t| checked_pair(kind.tag(), t))
        .ok_or(CodingError::Overflow)
}

/// Fact code without an arity check; for internal callers that build
/// arguments from a signature.
pub fn fact_code(kind: FactKind, args: &[usize]) -> u64 {
    pair(kind.tag(), tuplecode_elems(args))
}

/// Decode a fact code. Any code with a well-formed tuple payload decodes;
/// arity against a signature is checked by [`crate::structure::Signature::check_fact`].
pub fn decode_fact(code: u64) -> Option<Fact> {
    let (tag, t) = unpair(code);
    Some(Fact {
        kind: FactKind::from_tag(tag),
        args: decode_elems(t)?,
    })
}

/// Even/odd join `X ⊕ Y`.
pub fn join(x: impl IntoIterator<Item = u64>, y: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut out: Vec<u64> = x.into_iter().map(|a| 2 * a).collect();
    out.extend(y.into_iter().map(|b| 2 * b + 1));
    out.sort_unstable();
    out
}

/// Three-way join `X ⊕ G ⊕ Y` used for functor oracles `P(A) ⊕ Graph(f) ⊕ P(B)`.
pub fn join3(
    x: impl IntoIterator<Item = u64>,
    g: impl IntoIterator<Item = u64>,
    y: impl IntoIterator<Item = u64>,
) -> Vec<u64> {
    let mut out: Vec<u64> = x.into_iter().map(|a| 3 * a).collect();
    out.extend(g.into_iter().map(|b| 3 * b + 1));
    out.extend(y.into_iter().map(|c| 3 * c + 2));
    out.sort_unstable();
    out
}

/// Graph of a finite map `i ↦ f[i]` as pair codes.
pub fn graph_codes(f: &[usize]) -> Vec<u64> {
    f.iter()
        .enumerate()
        .map(|(i, &v)| pair(i as u64, v as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Hand-evaluated Cantor values.
    #[test]
    fn pair_examples() {
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(0, 1), 2);
        assert_eq!(pair(2, 12), 117);
    }

    #[test]
    fn tuplecode_examples() {
        assert_eq!(tuplecode(&[]), 0);
        assert_eq!(tuplecode(&[0, 1]), 12);
        assert_eq!(tuplecode(&[0, 0]), 3);
    }

    #[test]
    fn fact_examples() {
        // E = R_0 on (0,1) is <0+2, <0,1>>.
        assert_eq!(encode_fact(FactKind::Rel(0), &[0, 1], 2).unwrap(), 117);
        assert_eq!(encode_fact(FactKind::Eq, &[0, 0], 2).unwrap(), 9);
        // R_i(a3, a5) is <i+2, <a3, a5>>.
        for i in 0..5 {
            assert_eq!(
                encode_fact(FactKind::Rel(i), &[3, 5], 2).unwrap(),
                pair(i as u64 + 2, tuplecode(&[3, 5]))
            );
        }
    }

    #[test]
    fn fact_arity_mismatch() {
        let err = encode_fact(FactKind::Rel(0), &[1], 2).unwrap_err();
        assert!(matches!(err, CodingError::ArityMismatch { expected: 2, found: 1, .. }));
    }

    #[test]
    fn malformed_tuple_codes() {
        // pair(0, p) with p > 0 lies outside the image of tuplecode.
        assert_eq!(decode_tuple(pair(0, 5)), None);
        assert_eq!(decode_tuple(0), Some(vec![]));
    }

    #[test]
    fn unpair_extremes() {
        for z in [u64::MAX, u64::MAX - 1, 1 << 63, (1 << 32) + 7] {
            let (x, y) = unpair(z);
            assert_eq!(checked_pair(x, y), Some(z));
        }
    }

    #[test]
    fn checked_pair_overflow() {
        assert_eq!(checked_pair(u64::MAX, 1), None);
        assert_eq!(checked_pair(1 << 33, 0), None);
    }

    #[test]
    fn join_layout() {
        assert_eq!(join([0, 2], [1]), vec![0, 3, 4]);
        assert_eq!(join3([1], [1], [1]), vec![3, 4, 5]);
    }

    proptest! {
        #[test]
        fn pair_round_trip(z in 0u64..1_000_000) {
            let (x, y) = unpair(z);
            prop_assert_eq!(pair(x, y), z);
        }

        #[test]
        fn tuple_round_trip(t in proptest::collection::vec(0u64..40, 0..5)) {
            let code = checked_tuplecode(&t);
            prop_assume!(code.is_some());
            prop_assert_eq!(decode_tuple(code.unwrap()), Some(t));
        }

        #[test]
        fn fact_round_trip(kind in 0u64..6, args in proptest::collection::vec(0usize..12, 1..4)) {
            let k = FactKind::from_tag(kind);
            let code = encode_fact(k, &args, args.len()).unwrap();
            prop_assert_eq!(decode_fact(code), Some(Fact { kind: k, args }));
        }
    }
}
