use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use num::{BigInt, BigRational};
use quasipoly::abelian::IntMatrix;
use quasipoly::deformation::to_orbifold_pipeline;
use quasipoly::delzant::{compile, sample_level_set};
use quasipoly::fixtures;
use quasipoly::isomorphism::are_isomorphic;
use quasipoly::linalg::FieldMatrix;
use quasipoly::quasilattice::Quasilattice;
use quasipoly::scalar::RealAlgebraicField;

fn bench_snf(c: &mut Criterion) {
    let a = IntMatrix::from_rows(&[
        vec![6, -2, 8, 3, 0, 5],
        vec![3, 9, 1, -7, 2, 2],
        vec![4, 4, 4, 4, -4, 4],
        vec![0, 1, -1, 10, 6, -3],
        vec![7, 0, 5, 2, 8, 1],
        vec![-2, 3, 0, 6, 1, 9],
    ]);
    c.bench_function("snf 6x6", |b| b.iter(|| black_box(&a).snf()));
}

fn bench_vertices(c: &mut Criterion) {
    // regular-ish hexagon in H-representation
    let f = RealAlgebraicField::rationals();
    let normals = [(1i64, 0i64), (1, 2), (-1, 2), (-1, 0), (-1, -2), (1, -2)];
    let facets = normals
        .iter()
        .map(|&(x, y)| quasipoly::polytope::Halfspace {
            normal: vec![f.from_int(x), f.from_int(y)],
            offset: f.from_int(3),
        })
        .collect();
    let hexagon = quasipoly::polytope::HPolytope::new(&f, 2, facets);
    c.bench_function("vertex enumeration hexagon", |b| {
        b.iter(|| black_box(&hexagon).vertices().unwrap())
    });
}

fn bench_isotropy(c: &mut Criterion) {
    let d = fixtures::generic_irrational_triangle();
    let faces = d.face_lattice().unwrap();
    let vertex = faces.iter().find(|f| f.dim == 0).unwrap().clone();
    c.bench_function("face isotropy over Q(sqrt2)", |b| {
        b.iter(|| black_box(&d).face_isotropy(black_box(&vertex)))
    });
}

fn bench_isomorphism(c: &mut Criterion) {
    let t = fixtures::standard_triangle();
    let f = t.field().clone();
    // shear the data
    let p = FieldMatrix::from_rows(
        &f,
        vec![
            vec![f.from_int(1), f.from_int(2)],
            vec![f.from_int(1), f.from_int(1)],
        ],
    );
    let cols: Vec<Vec<_>> = (0..2)
        .map(|j| p.mul_vec(&t.lattice().generator_matrix().column(j)))
        .collect();
    let lattice = Quasilattice::new(FieldMatrix::from_columns(&f, 2, &cols), vec![]).unwrap();
    let image = quasipoly::decorated::DecoratedPolytope::new(lattice, t.facets().to_vec()).unwrap();
    c.bench_function("isomorphism search triangle", |b| {
        b.iter(|| are_isomorphic(black_box(&t), black_box(&image)).unwrap())
    });
}

fn bench_sampler(c: &mut Criterion) {
    let t = fixtures::standard_triangle();
    let data = compile(&t).unwrap();
    c.bench_function("level-set sampling 100 points", |b| {
        b.iter(|| sample_level_set(black_box(&data), 100, 42).unwrap())
    });
}

fn bench_orbifoldize(c: &mut Criterion) {
    let d = fixtures::irrational_triangle();
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("orbifoldize irrational triangle", |b| {
        b.iter(|| to_orbifold_pipeline(black_box(&d)).unwrap())
    });
    group.finish();
}

fn bench_scalar_sign(c: &mut Criterion) {
    let f = RealAlgebraicField::quadratic(2).unwrap();
    let r2 = f.generator();
    let close = f.from_rational(BigRational::new(BigInt::from(577), BigInt::from(408)));
    let x = &r2 - &close;
    c.bench_function("sign near a good approximation", |b| {
        b.iter(|| black_box(&x).sign())
    });
}

criterion_group!(
    benches,
    bench_snf,
    bench_vertices,
    bench_isotropy,
    bench_isomorphism,
    bench_sampler,
    bench_orbifoldize,
    bench_scalar_sign
);
criterion_main!(benches);
