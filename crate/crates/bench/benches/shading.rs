use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rbsm::scene::BUILTIN_SCENES;
use rbsm::{rasterize_depth, shade_image, Algorithm};
use rbsm_bench::Fixture;

fn shading(c: &mut Criterion) {
    let mut group = c.benchmark_group("shade");
    group.sample_size(10);
    for name in BUILTIN_SCENES {
        let f = Fixture::builtin(name, 1024, (1280, 720)).unwrap();
        for a in Algorithm::ALL {
            group.bench_with_input(BenchmarkId::new(a.name(), name), &a, |b, &a| {
                b.iter(|| shade_image(&f.gbuffer, &f.shadow_map, a, &f.scene.params).unwrap())
            });
        }
    }
    group.finish();
}

fn shadow_pass(c: &mut Criterion) {
    let mut group = c.benchmark_group("shadow_map");
    group.sample_size(10);
    for size in [512u32, 1024, 2048] {
        let f = Fixture::builtin("fence-like", size, (64, 64)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(size), &size, |b, &size| {
            b.iter(|| rasterize_depth(&f.scene, size, size).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, shading, shadow_pass);
criterion_main!(benches);
