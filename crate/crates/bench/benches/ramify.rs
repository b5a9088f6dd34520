use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use ramify::chartheory::representation::{regular_character, Representation};
use ramify::decide::{Analysis, CompletenessOptions, Property};
use ramify::freegroup::{fold, kernel_generators, AbelianGroup, AbelianMap};
use ramify::group::DEFAULT_BUDGET;
use ramify::invariants::{invariant_generators, verify_invariance, FieldMode, InvariantOptions, VerifyOptions};
use ramify::{catalog, CharacterTable, FiniteGroup};

fn group(name: &str) -> Arc<FiniteGroup> {
    Arc::new(catalog::get(name).unwrap().build(DEFAULT_BUDGET).unwrap())
}

fn character_tables(c: &mut Criterion) {
    let mut g = c.benchmark_group("character_table");
    for name in ["S4", "SL2F3", "D24", "Phi5"] {
        let grp = group(name);
        g.bench_function(name, |b| b.iter(|| CharacterTable::compute(black_box(grp.clone())).unwrap()));
    }
    g.finish();
}

fn decisions(c: &mut Criterion) {
    let mut g = c.benchmark_group("decide");
    g.sample_size(10);
    for name in ["S4", "SL2F3", "Phi5", "Phi10"] {
        let a = Analysis::new(group(name)).unwrap();
        g.bench_function(format!("{name}/totally"), |b| b.iter(|| a.decide(Property::Unramified).unwrap()));
        g.bench_function(format!("{name}/totally-pseudo"), |b| {
            b.iter(|| a.decide(Property::PseudoUnramified).unwrap())
        });
    }
    g.finish();
}

fn completeness(c: &mut Criterion) {
    let mut g = c.benchmark_group("complete");
    g.sample_size(10);
    for name in ["S4", "D24", "Phi4"] {
        let a = Analysis::new(group(name)).unwrap();
        let chi = regular_character(a.table());
        let opts = CompletenessOptions::default();
        g.bench_function(format!("{name}/regular"), |b| b.iter(|| a.is_complete_character(&chi, &opts).unwrap()));
    }
    g.finish();
}

fn invariants(c: &mut Criterion) {
    let mut g = c.benchmark_group("invariants");
    g.sample_size(10);
    let s3 = group("S3");
    let rep = Representation::permutation(&s3).unwrap();
    for (label, field) in [("S3/complex", FieldMode::Complex), ("S3/real", FieldMode::Real)] {
        let opts = InvariantOptions { field, ..Default::default() };
        g.bench_function(label, |b| b.iter(|| invariant_generators(&s3, &rep, &opts).unwrap()));
    }
    let set = invariant_generators(&s3, &rep, &InvariantOptions::default()).unwrap();
    let gens = set.generators();
    let vopts = VerifyOptions { trials: 3, dim: 4, seed: 0x5eed };
    g.bench_function("S3/verify", |b| b.iter(|| verify_invariance(&gens, &rep, &vopts).unwrap()));
    g.finish();
}

fn free_groups(c: &mut Criterion) {
    let target = AbelianGroup::new(vec![3, 4]).unwrap();
    let phi = AbelianMap::new(target, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 3]]).unwrap();
    c.bench_function("schreier/Z3xZ4 rank 4", |b| b.iter(|| kernel_generators(black_box(&phi)).unwrap()));
    let words = kernel_generators(&phi).unwrap().generators;
    c.bench_function("fold/Z3xZ4 rank 4", |b| b.iter(|| fold(black_box(&words), 4)));
}

criterion_group!(benches, character_tables, decisions, completeness, invariants, free_groups);
criterion_main!(benches);
