use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use xqkp_core::classical::{anneal_protocol, AnnealKind, ProtocolConfig};
use xqkp_core::xqaoa::{grid_search, RingCopula};
use xqkp_core::{
    brute_force_opt, dp_opt, sample_corpus, DistributionKind, Gate2Q, GeneratorConfig, KnapsackInstance, Mixer,
    Objective, QkpCircuit, RandomStream, StateVector,
};

fn instance() -> KnapsackInstance {
    sample_corpus(&GeneratorConfig::new(DistributionKind::Profit, 10, 1), 1)
        .unwrap()
        .remove(0)
}

fn exact(c: &mut Criterion) {
    let inst = instance();
    c.bench_function("dp_opt n=10", |b| b.iter(|| dp_opt(black_box(&inst)).unwrap()));
    c.bench_function("brute_force_opt n=10", |b| b.iter(|| brute_force_opt(black_box(&inst)).unwrap()));
}

fn simulator(c: &mut Criterion) {
    let p = vec![0.3; 10];
    let mut state = StateVector::biased(&p).unwrap();
    let gate = xqkp_core::xqaoa::copula_unitary(0.3, 0.7, -1.0, 0.4).unwrap();
    c.bench_function("apply_2q n=10", |b| b.iter(|| state.apply_2q(3, 4, black_box(&gate)).unwrap()));
    let ring = RingCopula::uniform(10, -1.0).unwrap();
    c.bench_function("ring copula n=10", |b| b.iter(|| ring.apply(&mut state, &p, black_box(0.4)).unwrap()));
    let id = Gate2Q::identity();
    c.bench_function("apply_2q identity n=10", |b| b.iter(|| state.apply_2q(0, 9, black_box(&id)).unwrap()));
}

fn landscape(c: &mut Criterion) {
    let inst = instance();
    let circuit = QkpCircuit::new(&inst).unwrap();
    for (name, mixer) in [("hourglass", Mixer::Hourglass), ("copula", Mixer::Copula { theta: -1.0 })] {
        let mut land = circuit.landscape(15.0, mixer).unwrap();
        c.bench_function(&format!("landscape eval {name}"), |b| {
            b.iter(|| land.objective(black_box(0.7), black_box(0.02), 10, Objective::Expectation))
        });
    }
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let mut land = circuit.landscape(15.0, Mixer::Copula { theta: -1.0 }).unwrap();
    group.bench_function("grid 20x20 copula", |b| {
        b.iter(|| grid_search(&mut land, 20, 20, 10, Objective::Expectation).unwrap())
    });
    group.bench_function("sa protocol", |b| {
        b.iter(|| anneal_protocol(&inst, AnnealKind::Local, &ProtocolConfig::default(), &RandomStream::new(3)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, exact, simulator, landscape);
criterion_main!(benches);
