use confalg::growth::gk_profile;
use confalg::*;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn cend1_profile(c: &mut Criterion) {
    let alg = make_cend(1).unwrap();
    let gens = GeneratorSet::new(
        ["L0", "L1"]
            .iter()
            .map(|n| (n.to_string(), cend_generator(&alg, n).unwrap()))
            .collect(),
    )
    .unwrap();
    let mut group = c.benchmark_group("gk_profile/cend1");
    for rmax in [6u32, 10] {
        group.bench_with_input(BenchmarkId::from_parameter(rmax), &rmax, |b, &r| {
            b.iter(|| gk_profile(&alg, &gens, r, 64).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cend1_profile);
criterion_main!(benches);
