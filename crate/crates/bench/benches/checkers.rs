use asm_core::harness::{generate_algorithm_suite, verify_equivalence_in, GeneratorConfig};
use asm_core::postulates::{full_ground_terms, logical_constants, new_be, old_be, Explorer};
use asm_core::scenarios::{example_algorithm, remark_states};
use asm_core::similarity::{check_partial_isomorphism, t_similar};
use asm_core::Universe;
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn example(c: &mut Criterion) {
    let a = example_algorithm();
    let ex = Explorer::new(&a, Universe::new(7).unwrap()).unwrap();
    let terms = full_ground_terms(a.vocabulary(), 1);
    c.bench_function("example/closure", |b| {
        b.iter(|| {
            Explorer::new(black_box(&a), Universe::new(7).unwrap())
                .unwrap()
                .len()
        })
    });
    c.bench_function("example/old-be", |b| {
        b.iter(|| old_be(&ex, black_box(&terms)).unwrap())
    });
    c.bench_function("example/new-be", |b| {
        b.iter(|| new_be(&ex, black_box(&terms)).unwrap())
    });
}

fn remark(c: &mut Criterion) {
    let (x, y, terms) = remark_states();
    c.bench_function("remark/t-similar", |b| {
        b.iter(|| t_similar(&x, &y, black_box(&terms)).unwrap())
    });
    c.bench_function("remark/partial-isomorphism", |b| {
        b.iter(|| check_partial_isomorphism(&x, &y, black_box(&terms)).unwrap())
    });
}

/// The largest closure among the first suite instances, with its full
/// ground witness set.
fn suite_instance(c: &mut Criterion) {
    let cfg = GeneratorConfig {
        instances: 20,
        ..GeneratorConfig::default()
    };
    let suite = generate_algorithm_suite(&cfg).unwrap();
    let inst = suite
        .iter()
        .max_by_key(|i| Explorer::new(&i.algorithm, cfg.universe()).map_or(0, |e| e.len()))
        .unwrap();
    let a = &inst.algorithm;
    let ex = Explorer::new(a, cfg.universe()).unwrap();
    let full = full_ground_terms(a.vocabulary(), cfg.max_term_depth);
    let logical = logical_constants(a.vocabulary());
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    group.bench_function("closure", |b| {
        b.iter(|| Explorer::new(a, cfg.universe()).unwrap().len())
    });
    group.bench_function("equivalence/full-ground", |b| {
        b.iter(|| verify_equivalence_in(&ex, black_box(&full)).unwrap())
    });
    group.bench_function("equivalence/logical", |b| {
        b.iter(|| verify_equivalence_in(&ex, black_box(&logical)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, example, remark, suite_instance);
criterion_main!(benches);
