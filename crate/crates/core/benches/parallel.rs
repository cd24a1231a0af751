use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fpdual::enumerate::{any, connected_flat, EnumSpec};
use fpdual::hom::DEFAULT_BUDGET;
use fpdual::par::Exec;
use fpdual::patterns::builtin;
use fpdual::products::{truncated_product_with, ProductCaps};
use fpdual::relstruct::{ColouredStructure, Palettes, Signature, Structure};
use fpdual::universal::{bounded_degree_universal, verify_duality_with, BoundedOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn duality_harness(c: &mut Criterion) {
    let p = builtin("tri-free-tri").unwrap();
    let t = bounded_degree_universal(&p, 2, &BoundedOptions::default()).unwrap();
    let inputs = connected_flat(&EnumSpec::graphs(7, Some(2)), &any, Exec::Parallel).unwrap();
    let mut g = c.benchmark_group("verify_duality");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| verify_duality_with(&t, &p, &inputs, DEFAULT_BUDGET, exec).unwrap())
        });
    }
    g.finish();
}

fn random_coloured(n: usize, seed: u64) -> ColouredStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Vec::new();
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            if a != b && rng.gen_bool(0.3) {
                t.push((0, vec![a, b]));
            }
        }
    }
    let s = Structure::from_tuples(Arc::new(Signature::graph()), n, &t).unwrap();
    let vcol = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let ecol = vec![0; s.tuple_count()];
    ColouredStructure::new(s, vcol, ecol, Arc::new(Palettes::numbered(2, 1))).unwrap()
}

fn truncated(c: &mut Criterion) {
    let cs = random_coloured(14, 3);
    let mut g = c.benchmark_group("truncated_product");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| truncated_product_with(&cs, 4, ProductCaps::default(), exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, duality_harness, truncated);
criterion_main!(benches);
