use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use monoidlab_core::monoids::classify;
use monoidlab_core::oracle::gn_oracle;
use monoidlab_core::{fiber_profile, suite, RationalFn};

fn bench_classify(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for s in suite::load().unwrap() {
        group.bench_with_input(BenchmarkId::from_parameter(s.f.label()), &s.f, |b, f| {
            b.iter(|| classify(&fiber_profile(black_box(f)).unwrap()))
        });
    }
    group.finish();
}

fn bench_composite(c: &mut Criterion) {
    let get = |n: &str| suite::get(n).unwrap();
    let chain = [get("sep3"), get("drop_odd_sq"), get("hilbert_sq")];
    c.bench_function("compose_and_profile/sep3∘drop_odd_sq∘hilbert_sq", |b| {
        b.iter(|| {
            let refs: Vec<&RationalFn> = chain.iter().collect();
            fiber_profile(&RationalFn::compose_all(black_box(&refs))).unwrap()
        })
    });
}

fn bench_oracle(c: &mut Criterion) {
    let f = suite::get("sep2").unwrap();
    let p = fiber_profile(&f).unwrap();
    c.bench_function("gn_oracle/sep2/n=3", |b| b.iter(|| gn_oracle(black_box(&f), &p, 3)));
}

criterion_group!(benches, bench_classify, bench_composite, bench_oracle);
criterion_main!(benches);
