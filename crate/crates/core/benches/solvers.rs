use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use affvir::affine::{AffineVirasoro, Selector, TruncationWindow};
use affvir::biderivation::{BiderivationProblem, BiderivationSolver, Symmetry};
use affvir::derivation::{DerivationProblem, DerivationSolver};

#[cfg(feature = "parallel")]
fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let all = rayon::ThreadPoolBuilder::new().build().unwrap();
    vec![("sequential", one), ("parallel", all)]
}

#[cfg(feature = "parallel")]
fn run_in<R: Send>(pool: &rayon::ThreadPool, f: impl FnOnce() -> R + Send) -> R {
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn pools() -> Vec<(&'static str, ())> {
    vec![("sequential", ())]
}

#[cfg(not(feature = "parallel"))]
fn run_in<R>(_: &(), f: impl FnOnce() -> R) -> R {
    f()
}

fn derivations(c: &mut Criterion) {
    let alg = AffineVirasoro::from_type("A1").unwrap();
    let p = DerivationProblem::new(Selector::Full, Selector::Full, TruncationWindow::new(6).unwrap(), 0).unwrap();
    let mut group = c.benchmark_group("derivations_A1_N6");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_in(&pool, || DerivationSolver::new(&alg, p).derivation_space().dim()))
        });
    }
    group.finish();
}

fn biderivations(c: &mut Criterion) {
    let alg = AffineVirasoro::from_type("A1").unwrap();
    let window = TruncationWindow::new(4).unwrap();
    let t = alg.truncate(window, Selector::Full);
    let p = BiderivationProblem::new(Selector::Full, window, 0, Symmetry::Skew).unwrap();
    let mut group = c.benchmark_group("skew_biderivations_A1_N4");
    group.sample_size(10);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_in(&pool, || BiderivationSolver::new(&t, p).unwrap().solution_space().dim()))
        });
    }
    group.finish();
}

criterion_group!(benches, derivations, biderivations);
criterion_main!(benches);
