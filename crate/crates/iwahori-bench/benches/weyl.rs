//! Benchmarks for the enumeration-heavy code paths: element streams,
//! admissible sets, B(G,{μ}), the stratification poset, and the loop-group
//! sweeps.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use iwahori::admissible::{admissible_set, admissible_set_j, kr_poset_very_special};
use iwahori::affine_weyl::{enumerate_up_to_length, ExtendedAffineElement, ParahoricType};
use iwahori::datum::unitary_twist;
use iwahori::frobenius::FrobeniusTwist;
use iwahori::loop_group::check_case_all;
use iwahori::root_system::vectors_in_box;
use iwahori::sigma_conjugacy::b_of_g_mu;
use iwahori::standard_datum;

fn bench_translation_lengths(c: &mut Criterion) {
    let d = standard_datum("gl4").unwrap();
    let box4 = vectors_in_box(-3, 3, 4);
    c.bench_function("length of t_lambda on gl4 box", |b| {
        b.iter(|| {
            let mut acc = 0i64;
            for v in &box4 {
                acc += ExtendedAffineElement::translation_element(d.clone(), black_box(v)).length();
            }
            acc
        })
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let d = standard_datum("gl3").unwrap();
    let id = ExtendedAffineElement::identity(d.clone());
    c.bench_function("enumerate gl3 up to length 6", |b| {
        b.iter(|| enumerate_up_to_length(&d, black_box(6), std::slice::from_ref(&id)).count())
    });
}

fn bench_admissible(c: &mut Criterion) {
    let d = standard_datum("gl3").unwrap();
    let tw = FrobeniusTwist::split(d.clone());
    c.bench_function("admissible set gl3 mu=(2,1,0)", |b| {
        b.iter(|| admissible_set(&tw, black_box(&[2, 1, 0])).unwrap().len())
    });
    let j = ParahoricType::very_special(&d);
    c.bench_function("admissible set_J gl3 mu=(2,1,0)", |b| {
        b.iter(|| admissible_set_j(&tw, black_box(&[2, 1, 0]), &j).unwrap().len())
    });
}

fn bench_b_of_g_mu(c: &mut Criterion) {
    let d = standard_datum("gl3").unwrap();
    let tw = unitary_twist(&d).unwrap();
    c.bench_function("B(G,mu) unitary gl3 mu=(1,0,0)", |b| {
        b.iter(|| b_of_g_mu(&tw, black_box(&[1, 0, 0])).unwrap().len())
    });
}

fn bench_kr_poset(c: &mut Criterion) {
    let d = standard_datum("gsp4").unwrap();
    let tw = FrobeniusTwist::split(d);
    c.bench_function("kr poset gsp4 mu=(3,2,1)", |b| {
        b.iter(|| kr_poset_very_special(&tw, black_box(&[3, 2, 1])).unwrap().nodes.len())
    });
}

fn bench_loop_sweep(c: &mut Criterion) {
    c.bench_function("loop case 3 sweep over F_7", |b| {
        b.iter(|| check_case_all(3, black_box(7), false).unwrap().all_pass)
    });
}

criterion_group!(
    benches,
    bench_translation_lengths,
    bench_enumeration,
    bench_admissible,
    bench_b_of_g_mu,
    bench_kr_poset,
    bench_loop_sweep
);
criterion_main!(benches);
