use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use flagqk::cartan::build_root_system;
use flagqk::kgkm::KClass;
use flagqk::lines::{kgw_line, line_parabolic};
use flagqk::qkbig::QuantumK;
use flagqk::{CartanType, Limits, WeylGroup};
use flagqk_bench::{space, SPACES};

fn weyl(c: &mut Criterion) {
    let mut g = c.benchmark_group("weyl_enumeration");
    for t in ["A4", "B4", "F4"] {
        let ct: CartanType = t.parse().unwrap();
        let rs = Arc::new(build_root_system(ct.family, ct.rank).unwrap());
        g.bench_function(t, |b| {
            b.iter(|| WeylGroup::enumerate(black_box(rs.clone()), Limits::default()).unwrap())
        });
    }
    g.finish();
}

fn k_products(c: &mut Criterion) {
    let mut g = c.benchmark_group("k_product_and_chi");
    for (t, dp) in SPACES {
        let x = space(t, dp);
        let n = x.num_points();
        let (u, v) = (
            KClass::schubert_at(&x, 1).unwrap(),
            KClass::schubert_at(&x, n / 2).unwrap(),
        );
        g.bench_with_input(
            BenchmarkId::from_parameter(x.label()),
            &(u, v),
            |b, (u, v)| b.iter(|| (u * v).integrate().unwrap()),
        );
    }
    g.finish();
}

fn line_invariants(c: &mut Criterion) {
    let x = space("A3", "1,3");
    let line = line_parabolic(&x, 1).unwrap();
    let ins: Vec<KClass> = (1..4)
        .map(|k| KClass::schubert_at(&x, k).unwrap())
        .collect();
    c.bench_function("kgw_line Gr(2,4), 3 insertions", |b| {
        b.iter(|| kgw_line(&line, black_box(&ins)).unwrap())
    });
}

fn quantum(c: &mut Criterion) {
    let mut g = c.benchmark_group("big_qk_product");
    g.sample_size(10);
    for (t, dp, order) in [("A1", "", 6), ("A2", "2", 4), ("A3", "1,3", 2)] {
        let x = space(t, dp);
        let n = x.num_points();
        g.bench_function(format!("{} N={order}", x.label()), |b| {
            b.iter(|| {
                let qk = QuantumK::nonequivariant(&x, order).unwrap();
                qk.basis_product(1, n - 1).unwrap()
            })
        });
    }
    g.finish();
}

criterion_group!(benches, weyl, k_products, line_invariants, quantum);
criterion_main!(benches);
