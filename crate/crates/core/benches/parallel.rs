use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nplift::{parse, Exec, NewtonPolyhedron, RingDescriptor, SparsePoly, VarTable};
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

// (1 + x + y + z + w)^k, dense enough to keep every core busy.
fn dense(k: u32) -> SparsePoly {
    let vars = VarTable::new(&["x", "y", "z", "w"]).unwrap();
    parse(&format!("(1 + x + 2*y + 3*z + 5*w)^{k}"), &vars, RingDescriptor::Rationals).unwrap()
}

fn bench_multiply(c: &mut Criterion) {
    let mut group = c.benchmark_group("multiply");
    for k in [4u32, 8] {
        let f = dense(k);
        let g = dense(k - 1);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, k), &k, |b, _| {
                b.iter(|| black_box(f.multiply_with(&g, None, exec).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_polyhedron(c: &mut Criterion) {
    let mut group = c.benchmark_group("polyhedron");
    group.sample_size(20);
    let vars = VarTable::new(&["x", "y", "z", "w"]).unwrap();
    // Many support points but few vertices: most LP calls reject.
    let f = parse(
        "x^9 + y^9 + z^9 + w^9 + x^3*y^3*z^3 + (x*y*z*w)^2 + (1 + x + y + z + w)^3*x*y*z*w",
        &vars,
        RingDescriptor::Rationals,
    )
    .unwrap();
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| black_box(NewtonPolyhedron::build_with(&f, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_multiply, bench_polyhedron);
criterion_main!(benches);
