use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use archlens_bench::synthetic_system;
use archlens_core::{analyze, compute_report, merge_system, resolve_system, AnalysisOptions, LanguageProfile, MergeThresholds};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn analyze_fixtures(c: &mut Criterion) {
    let options = AnalysisOptions::default();
    for name in ["demo", "corpus"] {
        let root = fixture(name);
        c.bench_function(&format!("analyze/{name}"), |b| {
            b.iter(|| analyze(black_box(&root), &options).unwrap())
        });
    }
}

fn synthetic(c: &mut Criterion) {
    let canon = LanguageProfile::spring_java().type_canon();
    let mut group = c.benchmark_group("synthetic");
    for services in [10, 40] {
        let system = synthetic_system(services, 6);
        group.bench_with_input(BenchmarkId::new("match", services), &system, |b, s| {
            b.iter(|| resolve_system(s.clone()))
        });
        group.bench_with_input(BenchmarkId::new("merge+metrics", services), &system, |b, s| {
            b.iter(|| {
                let (_, resolution) = merge_system(s, MergeThresholds::default(), &canon);
                compute_report(s, &resolution)
            })
        });
    }
    group.finish();
}

criterion_group!(benches, analyze_fixtures, synthetic);
criterion_main!(benches);
