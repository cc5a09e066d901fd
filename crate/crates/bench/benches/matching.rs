use criterion::{criterion_group, criterion_main, Criterion, Throughput};
use std::hint::black_box;
use toxspan::lexicon::LexiconTagger;
use toxspan::{SpanTagger, Tokenizer};
use toxspan_bench::texts_and_lexicon;

fn matching(c: &mut Criterion) {
    let (texts, lexicon) = texts_and_lexicon(500, 0.3);
    let chars: usize = texts.iter().map(|t| t.chars().count()).sum();
    let tokenizer = Tokenizer::default();
    let plain = LexiconTagger::new(&lexicon);
    let censored = LexiconTagger::new(&lexicon).with_censored_matching(true);

    let mut group = c.benchmark_group("matching");
    group.throughput(Throughput::Elements(chars as u64));
    group.bench_function("tokenize", |b| {
        b.iter(|| {
            texts
                .iter()
                .map(|t| tokenizer.tokenize(black_box(t)).len())
                .sum::<usize>()
        })
    });
    group.bench_function("lexicon", |b| {
        b.iter(|| {
            texts
                .iter()
                .map(|t| plain.tag(black_box(t)).len())
                .sum::<usize>()
        })
    });
    group.bench_function("lexicon_censored", |b| {
        b.iter(|| {
            texts
                .iter()
                .map(|t| censored.tag(black_box(t)).len())
                .sum::<usize>()
        })
    });
    group.finish();
}

criterion_group!(benches, matching);
criterion_main!(benches);
