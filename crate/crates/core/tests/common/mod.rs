#![allow(dead_code)]

use dn_core::algebra::{compose, core, product, sync_length};
use dn_core::{fixtures, CoreTransducer, FiniteTransducer, Gen, MultiWord, Params, PrefixCode, PrefixExchange, RawTransducer};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn w(s: &str) -> MultiWord {
    s.parse().unwrap()
}

fn random_word(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> Vec<u8> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..n) as u8).collect()
}

/// Random one-dimensional transducer with no initial state.
pub fn random_line(rng: &mut ChaCha8Rng, n: usize, states: usize, max_out: usize) -> FiniteTransducer {
    let p = Params::new(n, 1).unwrap();
    let names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
    let mut raw = RawTransducer::square(p, names);
    for q in 0..states {
        for a in 0..n as u8 {
            let out = MultiWord::from_coords(vec![random_word(rng, n, max_out)]);
            raw.set(q, Gen { coord: 0, letter: a }, rng.gen_range(0..states), out).unwrap();
        }
    }
    raw.validate().unwrap()
}

/// Random coherent transducer with at most five states, `n ∈ {2,3}` and
/// `d ∈ {1,2}`. Two-dimensional samples are products of lines, sometimes
/// followed by the coordinate swap so that outputs cross coordinates.
pub fn random_coherent(rng: &mut ChaCha8Rng) -> FiniteTransducer {
    let n = rng.gen_range(2..=3);
    if rng.gen_bool(0.5) {
        let states = rng.gen_range(1..=5);
        return random_line(rng, n, states, 2);
    }
    let (a, b) = *[(1, 1), (1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (1, 4), (5, 1)].choose(rng).unwrap();
    let t = product(&[random_line(rng, n, a, 2), random_line(rng, n, b, 2)]).unwrap();
    if rng.gen_bool(0.5) {
        compose(&t, &fixtures::coordinate_swap(n)).unwrap()
    } else {
        t
    }
}

/// Random synchronizing one-dimensional transducer.
pub fn random_synchronizing(rng: &mut ChaCha8Rng, n: usize, kmax: usize) -> FiniteTransducer {
    loop {
        let states = rng.gen_range(1..=4);
        let t = random_line(rng, n, states, 2);
        if sync_length(&t, kmax).is_ok() {
            return t;
        }
    }
}

/// Complete prefix code grown by `splits` random cone splittings.
pub fn random_code(rng: &mut ChaCha8Rng, p: Params, splits: usize) -> PrefixCode {
    let mut members = vec![MultiWord::empty(p.d)];
    for _ in 0..splits {
        let k = rng.gen_range(0..members.len());
        let base = members.swap_remove(k);
        let coord = rng.gen_range(0..p.d);
        for a in 0..p.n as u8 {
            let mut c = base.clone();
            c.push(coord, a);
            members.push(c);
        }
    }
    PrefixCode::validate(members, p).unwrap()
}

pub fn random_exchange(rng: &mut ChaCha8Rng, p: Params, splits: usize) -> PrefixExchange {
    let dom = random_code(rng, p, splits).members().to_vec();
    let mut ran = random_code(rng, p, splits).members().to_vec();
    ran.shuffle(rng);
    PrefixExchange::new(p, dom.into_iter().zip(ran).collect()).unwrap()
}

pub fn swap_core() -> CoreTransducer {
    core(&fixtures::swap_zero_double_zero(), 8).unwrap()
}

/// One-dimensional cores used as factors: the swap, identities and the
/// ternary letter permutations.
pub fn line_cores(n: usize) -> Vec<CoreTransducer> {
    let p = Params::new(n, 1).unwrap();
    let mut out = vec![CoreTransducer::identity(p)];
    if n == 2 {
        out.push(swap_core());
        out.push(core(&fixtures::letter_permutation(p, &[1, 0]), 8).unwrap());
    } else {
        out.push(core(&fixtures::swap_zero_double_zero_ternary(), 8).unwrap());
        for perm in [[1, 2, 0], [1, 0, 2], [0, 2, 1]] {
            out.push(core(&fixtures::letter_permutation(p, &perm), 8).unwrap());
        }
    }
    out
}

/// All words with every coordinate of length at most `depth`.
pub fn inputs(p: Params, depth: usize) -> Vec<MultiWord> {
    p.words_up_to_depth(depth)
}
