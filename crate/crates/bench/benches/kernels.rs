use chabauty_core::cartan::{check_family, table_instances, verify_table, TableOptions};
use chabauty_core::laurent::{conjugate_family, grassmann_limit};
use chabauty_core::linalg::{echelonize, Ambient, PMatrix, Subspace};
use chabauty_core::padic::{count_power_classes, kth_root};
use chabauty_core::tree::{translation_length, translation_length_by_ball};
use chabauty_core::PrimeContext;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn padic(c: &mut Criterion) {
    let ctx = PrimeContext::new(5, 32).unwrap();
    c.bench_function("count_power_classes p=2 k=8", |b| {
        let two = PrimeContext::new(2, 32).unwrap();
        b.iter(|| count_power_classes(black_box(two), 8).unwrap())
    });
    let x = ctx.rational(11, 3).pow(4);
    c.bench_function("kth_root k=4 p=5", |b| b.iter(|| kth_root(black_box(&x), 4).unwrap()));
}

fn linalg(c: &mut Criterion) {
    let ctx = PrimeContext::new(5, 32).unwrap();
    let rows: Vec<Vec<_>> = (0..6)
        .map(|i| (0..8).map(|j| ctx.rational((i * 7 + j * 3) % 11 - 5, 1 + (i + j) % 4)).collect())
        .collect();
    c.bench_function("echelonize 6x8", |b| b.iter(|| echelonize(ctx, Ambient::Plain(8), black_box(&rows)).unwrap()));
}

fn limits(c: &mut Criterion) {
    let ctx = PrimeContext::new(5, 32).unwrap();
    let specs = table_instances(4, ctx).unwrap();
    let spec = specs.iter().find(|s| s.stem == "N4").unwrap().clone();
    let fam = spec.conjugator(ctx).unwrap();
    let base = Subspace::cartan(ctx, 4);
    c.bench_function("grassmann_limit SL4 N4", |b| {
        b.iter(|| grassmann_limit(&conjugate_family(&base, black_box(&fam)).unwrap()).unwrap())
    });
    let opts = TableOptions::default();
    c.bench_function("check_family SL4 N4", |b| b.iter(|| check_family(ctx, black_box(&spec), &opts).unwrap()));
    let mut group = c.benchmark_group("tables");
    group.sample_size(10);
    group.bench_function("verify_table n=3 p=7", |b| {
        let seven = PrimeContext::new(7, 32).unwrap();
        b.iter(|| verify_table(3, seven, &opts).unwrap())
    });
    group.finish();
}

fn tree(c: &mut Criterion) {
    let ctx = PrimeContext::new(5, 32).unwrap();
    let u = PMatrix::new(ctx, 2, vec![ctx.one(), ctx.rational(3, 25), ctx.zero(), ctx.one()]);
    let l = PMatrix::new(ctx, 2, vec![ctx.one(), ctx.zero(), ctx.integer(5), ctx.one()]);
    let d = PMatrix::diagonal(ctx, &[ctx.p_power(2), ctx.p_power(-2)]);
    let g = &(&u * &l) * &d;
    c.bench_function("translation_length newton", |b| b.iter(|| translation_length(black_box(&g)).unwrap()));
    c.bench_function("translation_length ball", |b| b.iter(|| translation_length_by_ball(black_box(&g)).unwrap()));
}

criterion_group!(benches, padic, linalg, limits, tree);
criterion_main!(benches);
