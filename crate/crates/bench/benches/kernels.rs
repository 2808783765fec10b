use bethegeom::bethe::{solve_all, BetheInstance, HomotopyConfig};
use bethegeom::c64;
use bethegeom::qq::{qq_from_bethe, qq_relative_residual};
use bethegeom::spinchain::{block_basis, q_operator, transfer, QSign};
use bethegeom::vertex::{eigenvalue_limit, vertex_series, FixedPoint, SchurInsertion};
use bethegeom_bench::chain;
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn transfer_matrix(c: &mut Criterion) {
    let mut g = c.benchmark_group("transfer");
    for n in [4, 6, 8] {
        let spec = chain(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, s| {
            b.iter(|| transfer(s, black_box(c64(0.7, 0.3))).unwrap())
        });
    }
    g.finish();
}

fn baxter_operator(c: &mut Criterion) {
    let mut g = c.benchmark_group("q_operator");
    for n in [3, 5] {
        let spec = chain(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &spec, |b, s| {
            b.iter(|| q_operator(s, s.z(), black_box(c64(0.4, 0.1)), QSign::Plus).unwrap())
        });
    }
    g.finish();
}

fn bethe_solve_all(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_all");
    g.sample_size(10);
    for (n, k) in [(4, 2), (6, 3)] {
        let inst = BetheInstance::aba(&chain(n), k).unwrap();
        let cfg = HomotopyConfig::default();
        g.bench_function(format!("n={n},k={k}"), |b| b.iter(|| solve_all(&inst, &cfg)));
    }
    g.finish();
}

fn vertex(c: &mut Criterion) {
    let spec = chain(4);
    let p = block_basis(4, 2).remove(0);
    let pt = FixedPoint::new(&spec, p).unwrap();
    let tau = SchurInsertion::Elementary(1);
    let mut g = c.benchmark_group("vertex");
    g.sample_size(10);
    g.bench_function("series n=4,k=2,D=6", |b| {
        b.iter(|| vertex_series(&spec, &pt, &tau, black_box(c64(0.95, 0.0)), 6).unwrap())
    });
    g.bench_function("limit n=4,k=2,D=3", |b| {
        b.iter(|| eigenvalue_limit(&spec, &pt, &tau, 3).unwrap())
    });
    g.finish();
}

fn qq_system(c: &mut Criterion) {
    let spec = chain(5);
    let sol = solve_all(&BetheInstance::aba(&spec, 2).unwrap(), &HomotopyConfig::default())
        .solutions
        .remove(0);
    c.bench_function("qq_from_bethe n=5,k=2", |b| {
        b.iter(|| {
            let (inst, hbar) = qq_from_bethe(&spec, &sol.roots).unwrap();
            qq_relative_residual(&inst, hbar).unwrap()
        })
    });
}

criterion_group!(
    benches,
    transfer_matrix,
    baxter_operator,
    bethe_solve_all,
    vertex,
    qq_system
);
criterion_main!(benches);
