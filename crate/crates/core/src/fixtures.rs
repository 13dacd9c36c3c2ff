//! Standard small transducers and exchanges used by tests, benches and docs.

use crate::transducer::{FiniteTransducer, RawTransducer};
use crate::vgroup::PrefixExchange;
use crate::words::{Gen, Letter, MultiWord, Params};

fn w(s: &str) -> MultiWord {
    s.parse().expect("fixture literal")
}

/// The four-state transducer over `{0,1}` that swaps the words `0` and `00`
/// at the start of each maximal block of zeros. States `A` (initial), `B`,
/// `C`, `D`.
pub fn swap_zero_double_zero() -> FiniteTransducer {
    let p = Params::new(2, 1).expect("valid params");
    let mut raw = RawTransducer::with_state_names(p, &["A", "B", "C", "D"]);
    let rows = [
        ("A", "B", "0", "A", "1"),
        ("B", "C", "-", "A", "01"),
        ("C", "D", "00", "A", "1"),
        ("D", "D", "0", "A", "1"),
    ];
    for (q, t0, o0, t1, o1) in rows {
        raw.set_named(q, 0, 0, t0, o0).expect("fixture");
        raw.set_named(q, 0, 1, t1, o1).expect("fixture");
    }
    raw.set_initial("A").expect("fixture");
    raw.validate().expect("fixture is valid")
}

/// The same construction over three letters, where `2` behaves like `1`.
pub fn swap_zero_double_zero_ternary() -> FiniteTransducer {
    let p = Params::new(3, 1).expect("valid params");
    let mut raw = RawTransducer::with_state_names(p, &["A", "B", "C", "D"]);
    let rows = [("A", "B", "0", ""), ("B", "C", "-", "0"), ("C", "D", "00", ""), ("D", "D", "0", "")];
    for (q, t0, o0, lead) in rows {
        raw.set_named(q, 0, 0, t0, o0).expect("fixture");
        for a in 1..3 {
            raw.set_named(q, 0, a, "A", &format!("{lead}{a}")).expect("fixture");
        }
    }
    raw.set_initial("A").expect("fixture");
    raw.validate().expect("fixture is valid")
}

/// The two-dimensional product of the swap transducer (coordinate 0) with
/// the identity (coordinate 1), written out directly rather than through
/// `algebra::product`.
pub fn product_figure() -> FiniteTransducer {
    let p = Params::new(2, 2).expect("valid params");
    let mut raw = RawTransducer::with_state_names(p, &["A", "B", "C", "D"]);
    let rows = [
        ("A", "B", "0|-", "A", "1|-"),
        ("B", "C", "-|-", "A", "01|-"),
        ("C", "D", "00|-", "A", "1|-"),
        ("D", "D", "0|-", "A", "1|-"),
    ];
    for (q, t0, o0, t1, o1) in rows {
        raw.set_named(q, 0, 0, t0, o0).expect("fixture");
        raw.set_named(q, 0, 1, t1, o1).expect("fixture");
        raw.set_named(q, 1, 0, q, "-|0").expect("fixture");
        raw.set_named(q, 1, 1, q, "-|1").expect("fixture");
    }
    raw.set_initial("A").expect("fixture");
    raw.validate().expect("fixture is valid")
}

/// The diagonal presentation of the baker's map: reads letter pairs `(a,b)`
/// coded as `2a+b`.
pub fn diagonal_baker() -> FiniteTransducer {
    let domain = Params::new(4, 1).expect("valid params");
    let range = Params::new(2, 2).expect("valid params");
    let mut raw = RawTransducer::new(domain, range, vec!["q0".into(), "Core".into()]);
    for c in 0..4u8 {
        let (a, b) = (c / 2, c % 2);
        let g = Gen { coord: 0, letter: c };
        raw.set(0, g, 1, MultiWord::from_coords(vec![vec![], vec![a, b]])).expect("fixture");
        raw.set(1, g, 1, MultiWord::from_coords(vec![vec![a], vec![b]])).expect("fixture");
    }
    raw.set_initial("q0").expect("fixture");
    raw.validate().expect("fixture is valid")
}

/// The baker's map `(a x, y) ↦ (x, a y)` on binary pairs.
pub fn baker() -> PrefixExchange {
    let p = Params::new(2, 2).expect("valid params");
    PrefixExchange::new(p, vec![(w("0|-"), w("-|0")), (w("1|-"), w("-|1"))]).expect("baker is valid")
}

/// One state permuting letters in every coordinate: `a@i ↦ perm[a]@i`.
pub fn letter_permutation(p: Params, perm: &[Letter]) -> FiniteTransducer {
    let mut raw = RawTransducer::with_state_names(p, &["q"]);
    for g in p.generators() {
        let out = MultiWord::letter(p.d, g.coord, perm[g.letter as usize]);
        raw.set(0, g, 0, out).expect("fixture");
    }
    raw.validate().expect("permutation transducer is valid")
}

/// One state moving each letter to the other coordinate (`d = 2`).
pub fn coordinate_swap(n: usize) -> FiniteTransducer {
    let p = Params::new(n, 2).expect("valid params");
    let mut raw = RawTransducer::with_state_names(p, &["q"]);
    for g in p.generators() {
        raw.set(0, g, 0, MultiWord::letter(2, 1 - g.coord, g.letter)).expect("fixture");
    }
    raw.validate().expect("swap is valid")
}

/// Unvalidated two-state transducer breaking coherence at `q`: reading
/// `0@0` then `0@1` writes `0|0`, the other order writes `0|00`.
pub fn incoherent_example() -> RawTransducer {
    let p = Params::new(2, 2).expect("valid params");
    let mut raw = RawTransducer::with_state_names(p, &["q", "r"]);
    for q in ["q", "r"] {
        raw.set_named(q, 0, 0, q, if q == "q" { "-|0" } else { "-|00" }).expect("fixture");
        raw.set_named(q, 0, 1, q, "-|1").expect("fixture");
        raw.set_named(q, 1, 0, "r", "0|-").expect("fixture");
        raw.set_named(q, 1, 1, "r", "1|-").expect("fixture");
    }
    raw
}
