use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use tilework::catalog::catalog;
use tilework::decompose::decompose;
use tilework::engine::{black_set, run, OrderPolicy};
use tilework::pump::pump_check;
use tilework::Window;

fn sierpinski(c: &mut Criterion) {
    let sys = catalog("sierpinski2").unwrap().system();
    let w = Window::square(64);
    c.bench_function("run sierpinski2 64x64", |b| {
        b.iter(|| run(black_box(&sys), &w, OrderPolicy::Canonical, w.area()).unwrap())
    });
    c.bench_function("run sierpinski2 64x64 random order", |b| {
        b.iter(|| run(black_box(&sys), &w, OrderPolicy::Random(7), w.area()).unwrap())
    });
}

fn decomposition(c: &mut Criterion) {
    let sys = catalog("stripes").unwrap().system();
    let w = Window::square(128);
    let grown = run(&sys, &w, OrderPolicy::Canonical, w.area()).unwrap().assembly;
    let black = black_set(&sys, &grown);
    c.bench_function("decompose stripes 128x128", |b| b.iter(|| decompose(black_box(&black), &w, 42, 2).unwrap()));
}

fn pumping(c: &mut Criterion) {
    let e = catalog("blocked-pump").unwrap();
    let ex = e.pump.clone().unwrap();
    let path = ex.tile_path();
    c.bench_function("pump_check blocked-pump", |b| {
        b.iter(|| pump_check(black_box(&path), ex.i, ex.j).unwrap())
    });
}

criterion_group!(benches, sierpinski, decomposition, pumping);
criterion_main!(benches);
