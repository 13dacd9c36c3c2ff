use criterion::{criterion_group, criterion_main, Criterion};
use dn_bench::{crossed_product, five_cone_exchange, ternary_square};
use dn_core::algebra::{compose, core, sync_length};
use dn_core::vgroup::{lazy_core, to_lazy_transducer};
use dn_core::{canonical_form, fixtures, Budget};
use std::hint::black_box;

fn algebra(c: &mut Criterion) {
    let square = ternary_square();
    c.bench_function("minimize ternary square", |b| b.iter(|| black_box(&square).minimize()));
    let fig = fixtures::product_figure();
    let swap = fixtures::coordinate_swap(2);
    c.bench_function("compose product with swap", |b| b.iter(|| compose(black_box(&fig), &swap).unwrap()));
    let crossed = crossed_product();
    c.bench_function("canonical form", |b| b.iter(|| canonical_form(black_box(&crossed)).unwrap()));
    c.bench_function("sync length", |b| b.iter(|| sync_length(black_box(&square), 12).unwrap()));
    c.bench_function("core of product", |b| b.iter(|| core(black_box(&crossed), 12).unwrap()));
}

fn exchanges(c: &mut Criterion) {
    let f = five_cone_exchange();
    c.bench_function("lazy core of exchange", |b| {
        b.iter(|| {
            let mut l = to_lazy_transducer(black_box(&f), 20_000).unwrap();
            lazy_core(&mut l, Budget::default()).unwrap()
        })
    });
}

criterion_group!(benches, algebra, exchanges);
criterion_main!(benches);
