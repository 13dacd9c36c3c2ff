mod common;

use common::*;
use dn_core::algebra::{compose, core, is_state_injective, product, state_images, sync_length};
use dn_core::outer::{decompose, invert_core, kernel_test, multiply_cores, psi, sig};
use dn_core::vgroup::interleave::{deinterleave, interleave};
use dn_core::vgroup::{diagonal_restrict, lazy_core, to_lazy_transducer};
use dn_core::{
    canonical_form, format, strongly_isomorphic, Budget, ConeSet, FiniteTransducer, Gen, MultiWord, Params, RawTransducer,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn params() -> impl Strategy<Value = Params> {
    (2usize..=3, 1usize..=3).prop_map(|(n, d)| Params::new(n, d).unwrap())
}

fn word_in(p: Params, max: usize) -> impl Strategy<Value = MultiWord> {
    proptest::collection::vec(proptest::collection::vec(0..p.n as u8, 0..=max), p.d).prop_map(MultiWord::from_coords)
}

fn params_and_words(k: usize) -> impl Strategy<Value = (Params, Vec<MultiWord>)> {
    params().prop_flat_map(move |p| (Just(p), proptest::collection::vec(word_in(p, 4), k)))
}

/// The same transducer with its states listed in another order.
fn shuffled(t: &FiniteTransducer, r: &mut ChaCha8Rng) -> FiniteTransducer {
    let mut order: Vec<usize> = (0..t.state_count()).collect();
    order.shuffle(r);
    let mut pos = vec![0; order.len()];
    for (i, &q) in order.iter().enumerate() {
        pos[q] = i;
    }
    let names: Vec<String> = order.iter().map(|&q| t.name(q).to_string()).collect();
    let mut raw = RawTransducer::new(t.domain(), t.range(), names);
    for (i, &q) in order.iter().enumerate() {
        for g in t.domain().generators() {
            let e = t.edge(q, g);
            raw.set(i, g, pos[e.target], e.output.clone()).unwrap();
        }
    }
    if let Some(q) = t.initial() {
        raw.set_initial_index(Some(pos[q]));
    }
    raw.validate().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subtract_undoes_concat((_, v) in params_and_words(2)) {
        let (x, z) = (&v[0], &v[1]);
        prop_assert_eq!(&x.concat(z).unwrap().subtract(x).unwrap(), z);
    }

    #[test]
    fn lcp_is_idempotent_and_symmetric((_, mut v) in params_and_words(4), seed in any::<u64>()) {
        let x = &v[0];
        prop_assert_eq!(&x.lcp_pair(x), x);
        prop_assert_eq!(v[0].lcp_pair(&v[1]), v[1].lcp_pair(&v[0]));
        let l = MultiWord::lcp(v.iter()).unwrap();
        v.shuffle(&mut rng(seed));
        prop_assert_eq!(MultiWord::lcp(v.iter()).unwrap(), l);
    }

    #[test]
    fn split_codes_have_sizes_one_mod_n_minus_one(p in params(), splits in 0usize..6, seed in any::<u64>()) {
        let code = random_code(&mut rng(seed), p, splits);
        prop_assert_eq!(code.len(), 1 + splits * (p.n - 1));
        prop_assert_eq!((code.len() - 1) % (p.n - 1), 0);
        let again = dn_core::PrefixCode::validate(code.members().to_vec(), p).unwrap();
        prop_assert_eq!(again, code);
    }

    #[test]
    fn interleave_round_trip(p in params(), seed in any::<u64>(), len in 0usize..6) {
        let mut r = rng(seed);
        let letters: Vec<u8> = (0..len).map(|_| r.gen_range(0..p.grid_count()) as u8).collect();
        let x = deinterleave(&letters, p).unwrap();
        prop_assert_eq!(interleave(&x, p), letters);
    }

    #[test]
    fn cone_set_union_is_commutative(p in params(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_code(&mut r, p, 3).members()[..2].to_vec();
        let b = random_code(&mut r, p, 3).members()[..3].to_vec();
        let x = ConeSet::from_cones(p, &a).unwrap();
        let y = ConeSet::from_cones(p, &b).unwrap();
        let xy = x.union(&y).unwrap();
        prop_assert_eq!(&xy, &y.union(&x).unwrap());
        for c in a.iter().chain(&b) {
            prop_assert!(xy.contains_cone(c).unwrap());
        }
        let back = ConeSet::from_cones(p, &xy.cones()).unwrap();
        prop_assert_eq!(back, xy);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn read_respects_the_output_law(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_coherent(&mut r);
        let p = t.domain();
        let words = inputs(p, 2);
        for _ in 0..40 {
            let s = words.choose(&mut r).unwrap();
            let u = words.choose(&mut r).unwrap();
            let q = r.gen_range(0..t.state_count());
            let (e1, o1) = t.read(q, s).unwrap();
            let (e2, o2) = t.read(e1, u).unwrap();
            let (e, o) = t.read(q, &s.concat(u).unwrap()).unwrap();
            prop_assert_eq!(e, e2);
            prop_assert_eq!(o, o1.concat(&o2).unwrap());
        }
    }

    #[test]
    fn reading_order_does_not_matter(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_coherent(&mut r);
        let p = t.domain();
        for _ in 0..20 {
            let w: MultiWord = MultiWord::from_coords(
                (0..p.d).map(|_| (0..r.gen_range(0..5)).map(|_| r.gen_range(0..p.n) as u8).collect()).collect(),
            );
            let mut gens: Vec<Gen> = (0..p.d)
                .flat_map(|i| w.coord(i).iter().map(move |&a| Gen { coord: i, letter: a }))
                .collect();
            // Shuffle while keeping each coordinate's letters in order.
            let mut slots: Vec<usize> = gens.iter().map(|g| g.coord).collect();
            slots.shuffle(&mut r);
            let mut next = vec![0; p.d];
            let by_coord: Vec<Vec<Gen>> = (0..p.d).map(|i| gens.iter().copied().filter(|g| g.coord == i).collect()).collect();
            gens = slots.iter().map(|&i| { next[i] += 1; by_coord[i][next[i] - 1] }).collect();
            let q = r.gen_range(0..t.state_count());
            let mut s = q;
            let mut out = MultiWord::empty(t.range().d);
            for g in &gens {
                let e = t.edge(s, *g);
                out = out.concat(&e.output).unwrap();
                s = e.target;
            }
            prop_assert_eq!((s, out), t.read(q, &w).unwrap());
        }
    }

    #[test]
    fn minimize_is_idempotent_and_preserves_reads(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_coherent(&mut r);
        let m = t.minimize();
        prop_assert_eq!(&m.minimize(), &m);
        let class = t.equivalence_classes();
        for u in inputs(t.domain(), if t.domain().d == 1 { 6 } else { 3 }) {
            for q in 0..t.state_count() {
                let (e, o) = t.read(q, &u).unwrap();
                prop_assert_eq!(m.read(class[q], &u).unwrap(), (class[e], o));
            }
        }
    }

    #[test]
    fn removing_incomplete_response_leaves_empty_offsets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_coherent(&mut r);
        if let Ok(c) = t.remove_incomplete_response() {
            let offsets = c.response_offsets(10_000).unwrap();
            prop_assert!(offsets.iter().all(MultiWord::is_empty), "{:?}", offsets);
        }
    }

    #[test]
    fn format_round_trip(seed in any::<u64>()) {
        let t = random_coherent(&mut rng(seed));
        let s = format::write_transducer(&t);
        let back = format::parse_transducer(&s).unwrap();
        prop_assert_eq!(format::write_transducer(&back), s);
        prop_assert_eq!(back, t);
    }

    #[test]
    fn canonical_form_ignores_state_order(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_coherent(&mut r).minimize();
        let u = shuffled(&t, &mut r);
        match (canonical_form(&t), canonical_form(&u)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.err(), b.err()),
        }
        prop_assert!(strongly_isomorphic(&u, &t).unwrap_or(true));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn synchronizing_transducers_compose_to_synchronizing(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3);
        let a = loop {
            let t = random_synchronizing(&mut r, n, 4);
            if !t.is_degenerate() {
                break t;
            }
        };
        let c = random_synchronizing(&mut r, n, 4);
        let (sa, sc) = (sync_length(&a, 4).unwrap(), sync_length(&c, 4).unwrap());
        // Past `sa` letters every `|Q_A|` more write at least one.
        let bound = sa + a.state_count() * sc;
        let ac = compose(&a, &c).unwrap();
        let k = sync_length(&ac, bound).unwrap();
        prop_assert!(k <= bound);
    }

    #[test]
    fn composite_core_is_the_core_of_composed_cores(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3);
        let a = random_synchronizing(&mut r, n, 4);
        let c = random_synchronizing(&mut r, n, 4);
        let (Ok(ca), Ok(cc)) = (core(&a, 8), core(&c, 8)) else { return Ok(()) };
        let whole = compose(&a, &c).and_then(|x| core(&x, 16));
        let parts = compose(ca.inner(), cc.inner()).and_then(|x| core(&x, 16));
        if let (Ok(x), Ok(y)) = (whole, parts) {
            prop_assert_eq!(x, y);
        }
    }

    #[test]
    fn product_then_decompose_returns_the_factors(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3);
        let pool = line_cores(n);
        let a = pool.choose(&mut r).unwrap();
        let c = pool.choose(&mut r).unwrap();
        let t = core(&product(&[a.inner().clone(), c.inner().clone()]).unwrap(), 8).unwrap();
        let f = decompose(&t, Budget::default()).unwrap();
        prop_assert_eq!(&f[0], a);
        prop_assert_eq!(&f[1], c);
    }

    #[test]
    fn image_counts_add_up_over_letters(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=3);
        let pool = line_cores(n);
        let (a, c) = (pool.choose(&mut r).unwrap(), pool.choose(&mut r).unwrap());
        let t = multiply_cores(a, c, Budget::default()).unwrap();
        let t = t.inner();
        for q in 0..t.state_count() {
            prop_assert!(is_state_injective(t, q, 10_000).unwrap().is_injective());
        }
        let images = state_images(t, 8).unwrap();
        for q in 0..t.state_count() {
            let total: usize = (0..n as u8).map(|a| images[t.edge(q, Gen { coord: 0, letter: a }).target].cone_count()).sum();
            prop_assert_eq!(images[q].cone_count() % (n - 1), total % (n - 1));
        }
    }

    #[test]
    fn exchange_composition_is_associative_with_inverses(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = Params::new(2, 2).unwrap();
        let splits = r.gen_range(1..=3);
        let (f, g, h) = (random_exchange(&mut r, p, splits), random_exchange(&mut r, p, 2), random_exchange(&mut r, p, 1));
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        let inv = f.invert();
        prop_assert!(f.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(&f).unwrap().is_identity());
        for x in inputs(p, 4) {
            prop_assert_eq!(left.eval(&x).unwrap(), right.eval(&x).unwrap());
            let fx = f.eval(&x).unwrap();
            let y = inv.eval(&fx).unwrap();
            prop_assert!(y.is_prefix_of(&x), "{} -> {} -> {}", x, fx, y);
        }
    }

    #[test]
    fn lazy_exploration_matches_evaluation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = Params::new(2, 2).unwrap();
        let splits = r.gen_range(1..=3);
        let f = random_exchange(&mut r, p, splits);
        let mut lazy = to_lazy_transducer(&f, 20_000).unwrap();
        for x in inputs(p, 4) {
            prop_assert_eq!(lazy.determined(&x).unwrap(), f.eval(&x).unwrap());
        }
        if splits < 3 {
            prop_assert!(lazy_core(&mut lazy, Budget::default()).unwrap().is_identity());
        }
    }

    #[test]
    fn diagonal_restriction_matches_evaluation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = Params::new(2, 2).unwrap();
        let splits = r.gen_range(1..=3);
        let f = random_exchange(&mut r, p, splits);
        let mut lazy = to_lazy_transducer(&f, 20_000).unwrap();
        let d = diagonal_restrict(&mut lazy, 20_000).unwrap();
        let grid = Params::new(p.grid_count(), 1).unwrap();
        for len in 0..=4 {
            for x in p.words_of_shape(&vec![len; p.d]) {
                let codes = MultiWord::from_coords(vec![interleave(&x, p)]);
                codes.check(grid).unwrap();
                let (_, out) = d.read(d.initial().unwrap(), &codes).unwrap();
                let determined = f.eval(&x).unwrap();
                prop_assert!(out.is_prefix_of(&determined), "{} wrote {} of {}", x, out, determined);
                let (_, lazy_out) = lazy.read(0, &x).unwrap();
                prop_assert_eq!(lazy.start_output().concat(&lazy_out).unwrap(), out);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn psi_and_sig_are_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = Budget::default();
        let pool = line_cores(3);
        let (s, t) = (pool.choose(&mut r).unwrap(), pool.choose(&mut r).unwrap());
        let st = multiply_cores(s, t, b).unwrap();
        prop_assert_eq!(sig(&st, b).unwrap(), sig(s, b).unwrap() * sig(t, b).unwrap());
        let cs = core(&dn_core::fixtures::coordinate_swap(2), 8).unwrap();
        let lines = line_cores(2);
        let x = core(&product(&[lines.choose(&mut r).unwrap().inner().clone(), lines.choose(&mut r).unwrap().inner().clone()]).unwrap(), 8).unwrap();
        let y = if r.gen_bool(0.5) { cs.clone() } else { multiply_cores(&cs, &x, b).unwrap() };
        let xy = multiply_cores(&x, &y, b).unwrap();
        prop_assert_eq!(psi(&xy).unwrap(), psi(&x).unwrap().then(&psi(&y).unwrap()));
    }

    #[test]
    fn kernel_is_closed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b = Budget::default();
        let n = r.gen_range(2..=3);
        let pool = line_cores(n);
        let pick = |r: &mut ChaCha8Rng| vec![pool.choose(r).unwrap().clone(), pool.choose(r).unwrap().clone()];
        let (s, t) = (pick(&mut r), pick(&mut r));
        prop_assert!(kernel_test(&s, b).unwrap() && kernel_test(&t, b).unwrap());
        let st: Vec<_> = s.iter().zip(&t).map(|(x, y)| multiply_cores(x, y, b).unwrap()).collect();
        prop_assert!(kernel_test(&st, b).unwrap());
        let inv: Vec<_> = s.iter().map(|x| invert_core(x, b).unwrap()).collect();
        prop_assert!(kernel_test(&inv, b).unwrap());
    }
}
