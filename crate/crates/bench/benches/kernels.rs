use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::{Matrix4, Matrix5};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use pentavec::bases::lemma2_construct;
use pentavec::connection::{connection_transform, flat_h, p_from_o, ConnectionField};
use pentavec::pentaspace::{directional_vector, wedge};
use pentavec::stress_energy::{assemble_m_p, conservation_check, null_wave_vector, plane_wave_theta};
use pentavec::{
    sample, Basis5, Bivector5, FiveVector, Grid, MetricH, Scheme, SigmaField, ThetaField, Tolerance, FIFTH,
};

fn bench_directional(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = sample::invertible5(&mut rng);
    let w = FiveVector::new(a.column(FIFTH).into_owned());
    let space: Vec<Bivector5> =
        (0..4).map(|mu| wedge(&FiveVector::new(a.column(mu).into_owned()), &w).unwrap()).collect();
    let tol = Tolerance::default();
    c.bench_function("directional_vector", |b| b.iter(|| directional_vector(black_box(&space), tol).unwrap()));
}

fn bench_lemma2(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let e = Basis5::new(sample::o32(&mut rng)).unwrap().associated();
    let h = MetricH::eta();
    let tol = Tolerance::default();
    c.bench_function("lemma2_construct", |b| b.iter(|| lemma2_construct(black_box(&e), &h, tol).unwrap()));
}

fn bench_conservation(c: &mut Criterion) {
    let mut group = c.benchmark_group("conservation_check");
    group.sample_size(20);
    for n in [9usize, 17] {
        let grid = Grid::cube(0.0, 1.0, n, [true, true, true, false]).unwrap();
        let k = null_wave_vector(2.0, 0.4);
        let theta = ThetaField::from_fn(grid, |x| plane_wave_theta(&k, x));
        let m = assemble_m_p(&theta, &SigmaField::zero(grid), 1.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            b.iter(|| conservation_check(black_box(m), Scheme::Central2).unwrap())
        });
    }
    group.finish();
}

fn bench_connection_transform(c: &mut Criterion) {
    let mut group = c.benchmark_group("connection_transform");
    group.sample_size(20);
    for n in [5usize, 9] {
        let grid = Grid::new([-0.5; 4], [1.0 / (n - 1) as f64; 4], [n; 4]).unwrap();
        let field = ConnectionField::uniform(grid, flat_h(1.0));
        let l: Vec<Matrix5<f64>> = (0..grid.len()).map(|s| *p_from_o(&grid.coords(s), 1.0).matrix()).collect();
        let lambda = [Matrix4::identity()];
        group.bench_with_input(BenchmarkId::from_parameter(n), &l, |b, l| {
            b.iter(|| connection_transform(black_box(&field), l, &lambda, Scheme::Central2, f64::INFINITY).unwrap())
        });
    }
    group.finish();
}

criterion_group!(kernels, bench_directional, bench_lemma2, bench_conservation, bench_connection_transform);
criterion_main!(kernels);
