use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use curclust::rng::from_seed;
use curclust::{
    generate_union, pseudoinverse, rcur, spectral_clustering, svd_compact, DenseMatrix, Kappa,
    LabeledDataset, RcurConfig, SamplingMethod, SyntheticConfig,
};

fn dataset(ambient: usize, dims: &[usize], per: usize, sigma: f64) -> LabeledDataset {
    let cfg = SyntheticConfig {
        ambient_dim: ambient,
        subspace_dims: dims.to_vec(),
        points_per_subspace: vec![per; dims.len()],
        noise_sigma: sigma,
    };
    generate_union(&cfg, &mut from_seed(7)).unwrap()
}

fn linalg(c: &mut Criterion) {
    let mut group = c.benchmark_group("linalg");
    for n in [20, 60, 150] {
        let x = dataset(n, &[3, 3, 3], n, 0.01).data;
        group.bench_with_input(BenchmarkId::new("svd", n), &x, |b, x| {
            b.iter(|| svd_compact(black_box(x)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pinv", n), &x, |b, x| {
            b.iter(|| pseudoinverse(black_box(x), None).unwrap())
        });
    }
    group.finish();
}

fn block_graph(blocks: usize, size: usize) -> DenseMatrix {
    let n = blocks * size;
    DenseMatrix::from_fn(n, n, |i, j| if i / size == j / size { 1.0 } else { 0.01 })
}

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    for (blocks, size) in [(2, 50), (3, 100), (5, 60)] {
        let w = block_graph(blocks, size);
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{blocks}x{size}")),
            &w,
            |b, w| b.iter(|| spectral_clustering(black_box(w), blocks, &mut from_seed(1)).unwrap()),
        );
    }
    group.finish();
}

fn clustering(c: &mut Criterion) {
    let mut group = c.benchmark_group("rcur");
    group.sample_size(10);
    let lines = dataset(2, &[1, 1], 100, 0.1);
    let cfg = RcurConfig::new(2, 1, 2);
    group.bench_function("two_lines", |b| b.iter(|| rcur(black_box(&lines.data), &cfg).unwrap()));

    let motion = dataset(12, &[4, 4], 120, 0.01);
    for method in SamplingMethod::ALL {
        for kappa in [Kappa::Factor(2.0), Kappa::All] {
            let cfg = RcurConfig::new(2, 4, 8)
                .with_sampling(method)
                .with_kappa(kappa)
                .with_trials(10);
            group.bench_function(BenchmarkId::new(method.name(), kappa), |b| {
                b.iter(|| rcur(black_box(&motion.data), &cfg))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, linalg, spectral, clustering);
criterion_main!(benches);
