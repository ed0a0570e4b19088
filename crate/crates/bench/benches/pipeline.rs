use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use keymine_core::corpus::count_ngraphs;
use keymine_core::{
    assign_hands, default_geometry, evaluate, mine_frequent, place_keys, synth, MiningParams,
    TiePolicy,
};
use keymine_bench::workload;

fn bench_counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_ngraphs");
    for size in [10_000usize, 100_000] {
        let w = workload(size);
        group.throughput(Throughput::Elements(size as u64));
        for n in 1..=3 {
            group.bench_with_input(BenchmarkId::new(format!("n{n}"), size), &w, |b, w| {
                b.iter(|| count_ngraphs(&w.stream, n, &w.alphabet).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_mining(c: &mut Criterion) {
    let w = workload(100_000);
    let params = MiningParams::new(w.transactions.len() as u64 / 200, 0.0).unwrap();
    c.bench_function("apriori/digraph_db_100k", |b| {
        b.iter(|| mine_frequent(&w.transactions, &params).unwrap())
    });
    let db = synth::random_db(3, 16, 2_000);
    let params = MiningParams::new(200, 0.0).unwrap();
    c.bench_function("apriori/random_16x2000", |b| b.iter(|| mine_frequent(&db, &params).unwrap()));
}

fn bench_design(c: &mut Criterion) {
    let w = workload(100_000);
    let geometry = default_geometry();
    c.bench_function("assign_hands/100k", |b| {
        b.iter(|| assign_hands(&w.monographs, &w.transactions, TiePolicy::PaperLiteral).unwrap())
    });
    let partition = assign_hands(&w.monographs, &w.transactions, TiePolicy::PaperLiteral).unwrap();
    let layout = place_keys(&partition, &w.monographs, &geometry, "bench").unwrap();
    let mut group = c.benchmark_group("evaluate");
    group.throughput(Throughput::Elements(w.stream.len() as u64));
    group.bench_function("100k", |b| b.iter(|| evaluate(&w.stream, &layout)));
    group.finish();
}

criterion_group!(benches, bench_counting, bench_mining, bench_design);
criterion_main!(benches);
