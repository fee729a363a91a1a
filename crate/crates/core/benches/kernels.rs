use bflab_core::crossratio::cross_ratio_set;
use bflab_core::equations::count_teq;
use bflab_core::formstats::{form_energy, pinned_form_energy};
use bflab_core::generators::{random_pencil_points, random_points, random_set};
use bflab_core::setops::{additive_energy, combine, SetOp};
use bflab_core::{BilinearForm, Ctx, Exec, ScalarSet};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("form_energy");
    g.sample_size(10);
    for n in [200usize, 800] {
        let p = random_points(1, n, 1000).unwrap();
        for (name, exec) in EXECS {
            let ctx = Ctx::default().with_exec(exec);
            g.bench_with_input(BenchmarkId::new(name, n), &p, |b, p| {
                b.iter(|| form_energy(black_box(p), &BilinearForm::cross(), &ctx).unwrap())
            });
        }
    }
    g.finish();

    let mut g = c.benchmark_group("pinned_form_energy");
    g.sample_size(10);
    let p = random_pencil_points(2, 4, 40, 3, 300, 500).unwrap();
    for (name, exec) in EXECS {
        let ctx = Ctx::default().with_exec(exec);
        g.bench_function(name, |b| b.iter(|| pinned_form_energy(black_box(&p), &BilinearForm::dot(), &ctx).unwrap()));
    }
    g.finish();
}

fn sets(c: &mut Criterion) {
    let a = random_set(3, 256, 1024).unwrap();
    let mut g = c.benchmark_group("combine");
    g.sample_size(10);
    for op in [SetOp::Sum, SetOp::Product, SetOp::Ratio] {
        for (name, exec) in EXECS {
            let ctx = Ctx::default().with_exec(exec);
            g.bench_function(BenchmarkId::new(name, op.name()), |b| {
                b.iter(|| combine(black_box(&a), &a, op, &ctx).unwrap())
            });
        }
    }
    g.finish();

    let mut g = c.benchmark_group("additive_energy");
    let wide = ScalarSet::from_vec(a.iter().map(|x| x * x).collect());
    for (name, exec) in EXECS {
        let ctx = Ctx::default().with_exec(exec);
        g.bench_function(name, |b| b.iter(|| additive_energy(black_box(&wide), &wide, &ctx).unwrap()));
    }
    g.finish();
}

fn equations(c: &mut Criterion) {
    let mut g = c.benchmark_group("cross_ratio_set");
    g.sample_size(10);
    let a = ScalarSet::from_ints(1..=24);
    for (name, exec) in EXECS {
        let ctx = Ctx::default().with_exec(exec);
        g.bench_function(name, |b| b.iter(|| cross_ratio_set(black_box(&a), &ctx).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("count_teq");
    g.sample_size(10);
    let t = random_set(4, 40, 60).unwrap();
    for (name, exec) in EXECS {
        let ctx = Ctx::default().with_exec(exec);
        g.bench_function(name, |b| b.iter(|| count_teq(black_box(&t), &ctx).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, forms, sets, equations);
criterion_main!(benches);
