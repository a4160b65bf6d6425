use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mtt_core::laws::{run, Execution, LawConfig};

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("laws");
    group.sample_size(10);
    for filter in ["groupoid", "bounded", "tap", "funext"] {
        for (name, execution) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
            let config = LawConfig { count: 200, filter: Some(filter.into()), execution, ..LawConfig::default() };
            group.bench_with_input(BenchmarkId::new(name, filter), &config, |b, config| b.iter(|| run(config)));
        }
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
