use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;
use toxspan::crf::{forward_backward, viterbi};
use toxspan_bench::random_lattice;

fn inference(c: &mut Criterion) {
    let mut group = c.benchmark_group("inference");
    for n in [8, 64, 512] {
        let lattice = random_lattice(n, n as u64);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::new("viterbi", n), &lattice, |b, l| {
            b.iter(|| viterbi(black_box(l)))
        });
        group.bench_with_input(BenchmarkId::new("forward_backward", n), &lattice, |b, l| {
            b.iter(|| forward_backward(black_box(l)))
        });
    }
    group.finish();
}

criterion_group!(benches, inference);
criterion_main!(benches);
