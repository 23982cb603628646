//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Oracles here are deliberately independent re-derivations
//! (coset enumeration, adjugate arithmetic over i128, boxed searches over
//! field coordinates) of what the library computes by normal forms.

#![allow(clippy::needless_range_loop)]

use std::time::{Duration, Instant};

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasipoly::abelian::IntMatrix;
use quasipoly::decorated::{Classification, DecoratedFacet, DecoratedPolytope};
use quasipoly::deformation::{to_orbifold_pipeline, RATIONALIZE_SAMPLES};
use quasipoly::delzant::{compile, sample_level_set, verify_vertex_lattices};
use quasipoly::fixtures;
use quasipoly::isomorphism::{are_isomorphic, verify_witness};
use quasipoly::linalg::FieldMatrix;
use quasipoly::polytope::dot_product;
use quasipoly::quasilattice::Quasilattice;
use quasipoly::scalar::{FieldElement, RealAlgebraicField};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn report(criterion: &str, start: Instant, budget: Option<Duration>) {
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        assert!(
            elapsed < b,
            "{criterion} exceeded its runtime budget: {elapsed:?} >= {b:?}"
        );
    }
    println!("PASS {criterion} ({elapsed:?})");
}

/// Criterion 1: the standard triangle validates, classifies as a smooth
/// manifold, and has trivial isotropy at every face, in under a second.
#[test]
fn criterion_1_smooth_recognition() {
    let start = Instant::now();
    let t = fixtures::standard_triangle();
    let report_v = t.validate();
    assert!(report_v.is_valid(), "{report_v}");
    assert_eq!(t.classify().unwrap(), Classification::SmoothManifold);
    for face in t.face_lattice().unwrap() {
        assert!(
            t.face_isotropy(&face).is_trivial(),
            "face {:?}",
            face.active_set
        );
    }
    report(
        "criterion 1: smooth recognition",
        start,
        Some(Duration::from_secs(1)),
    );
}

/// Criterion 2: the weighted triangle recovers the facet labels (1, 1, 2)
/// and hypotenuse isotropy Z/2, confirmed by explicit coset enumeration.
#[test]
fn criterion_2_facet_label_recovery() {
    let start = Instant::now();
    let t2 = fixtures::weighted_triangle();
    assert!(t2.is_valid());
    assert_eq!(
        t2.lt_labels().unwrap(),
        vec![BigInt::one(), BigInt::one(), BigInt::from(2)]
    );
    let faces = t2.face_lattice().unwrap();
    let hyp = faces.iter().find(|f| f.active_set == vec![2]).unwrap();
    let iso = t2.face_isotropy(hyp);
    assert_eq!(iso.free_rank(), 0);
    assert_eq!(iso.torsion(), &[BigInt::from(2)]);

    // oracle: the group Z(1,1) / Z(2,2) by enumeration: k(1,1) ~ j(1,1)
    // iff (k-j)(1,1) = m(2,2) for an integer m, i.e. k = j (mod 2)
    let mut reps: Vec<i64> = Vec::new();
    for k in -20i64..=20 {
        let mut found = false;
        for r in &reps {
            let diff = k - r;
            if diff % 2 == 0 {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(k);
        }
    }
    assert_eq!(reps.len(), 2);
    report("criterion 2: facet label recovery", start, None);
}

/// Criterion 3: the irrational triangle over Q(sqrt2) has trivial
/// facet-interior isotropy and isotropy of free rank one at the vertex on
/// facets 0 and 2, confirmed by an integer-linear-algebra oracle over field
/// coordinates.
#[test]
fn criterion_3_quasifold_isotropy() {
    let start = Instant::now();
    let d = fixtures::generic_irrational_triangle();
    assert!(d.is_valid());
    let faces = d.face_lattice().unwrap();
    for face in faces.iter().filter(|f| f.dim == 1) {
        assert!(
            d.face_isotropy(face).is_trivial(),
            "edge {:?}",
            face.active_set
        );
    }
    let vertex = faces
        .iter()
        .find(|f| f.dim == 0 && f.active_set == vec![0, 2])
        .expect("vertex on facets 0 and 2");
    let iso = d.face_isotropy(vertex);
    assert_eq!(iso.free_rank(), 1);
    assert!(iso.torsion().is_empty());

    // Oracle, over field coordinates with generators
    // l1 = (-1,0), l2 = (0,-1), l3 = (s, 1+s) where s = sqrt2.
    let f = d.field().clone();
    let s = f.generator();
    let l = [
        vec![f.from_int(-1), f.zero()],
        vec![f.zero(), f.from_int(-1)],
        vec![s.clone(), &f.one() + &s],
    ];
    let apply = |a: i64, b: i64, c: i64| -> Vec<FieldElement> {
        (0..2)
            .map(|i| {
                let mut acc = f.zero();
                for (j, coef) in [a, b, c].iter().enumerate() {
                    acc = &acc + &l[j][i].scale_rat(&q(*coef, 1));
                }
                acc
            })
            .collect()
    };
    // (a) every small q with image parallel to an edge normal is a multiple
    //     of that edge's marker, so edge isotropies are trivial
    for (edge, normal) in [(0usize, &l[0]), (1, &l[1]), (2, &l[2])] {
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    let image = apply(a, b, c);
                    // image parallel to normal: 2x2 determinant vanishes
                    let det = &(&image[0] * &normal[1]) - &(&image[1] * &normal[0]);
                    if det.is_zero() {
                        let mut coords = [a, b, c];
                        coords[edge] = 0;
                        assert_eq!(coords, [0, 0, 0], "edge {edge} at q=({a},{b},{c})");
                    }
                }
            }
        }
    }
    // (b) at the vertex on facets 0 and 2 the vertex label is
    //     Z*l1 + Z*l3; no nonzero multiple of l2 lies in it, because the
    //     first coordinate of alpha*l1 + gamma*l3 is -alpha + gamma*sqrt2,
    //     which vanishes over the integers only for alpha = gamma = 0. So
    //     the image classes of k*e2 are pairwise distinct and the quotient
    //     contains Z: free rank at least 1. Checked exhaustively on a box.
    for k in 1i64..=10 {
        let target = apply(0, k, 0);
        for alpha in -40i64..=40 {
            for gamma in -40i64..=40 {
                let combo: Vec<FieldElement> = (0..2)
                    .map(|i| &l[0][i].scale_rat(&q(alpha, 1)) + &l[2][i].scale_rat(&q(gamma, 1)))
                    .collect();
                assert!(
                    combo != target,
                    "k*l2 unexpectedly in the vertex label for k={k}"
                );
            }
        }
    }
    // and the rank cannot exceed 1: Z^3 modulo (Z e1 + Z e3) is generated
    // by the class of e2 alone
    report("criterion 3: quasifold isotropy", start, None);
}

/// Criterion 4: construction data for the standard triangle (kernel (1,1,1),
/// quadric sum t = 1), 1000 exactly-verified samples at a fixed seed, and
/// the per-vertex lattice cross-check, in under five seconds.
#[test]
fn criterion_4_construction_data_and_harness() {
    let start = Instant::now();
    let t = fixtures::standard_triangle();
    let data = compile(&t).unwrap();
    let f = t.field();
    assert_eq!(data.kernel_basis(), &[vec![f.one(), f.one(), f.one()]]);
    assert_eq!(data.quadrics().len(), 1);
    assert_eq!(data.quadrics()[0].coeffs, vec![f.one(), f.one(), f.one()]);
    assert_eq!(data.quadrics()[0].rhs, f.one());

    let samples = sample_level_set(&data, 1000, 20240601).unwrap();
    assert_eq!(samples.len(), 1000);
    let polytope = t.polytope();
    for s in &samples {
        assert!(s.exact);
        let xi: Vec<FieldElement> = s.xi.iter().map(|r| f.from_rational(r.clone())).collect();
        assert!(polytope.contains(&xi));
        // the quadric holds with exact equality
        let total = s.t.iter().fold(f.zero(), |acc, x| &acc + x);
        assert_eq!(total, f.one());
    }

    let checks = verify_vertex_lattices(&t, &data).unwrap();
    assert_eq!(checks.len(), 3);
    assert!(checks.iter().all(|c| c.pass));
    report(
        "criterion 4: construction data and harness",
        start,
        Some(Duration::from_secs(5)),
    );
}

/// Criterion 5: the orbifold pipeline on the irrational triangle produces a
/// family that validates at 101 samples with a constant face lattice, an
/// endpoint whose image lattice is exactly the standard one, and endpoint
/// classification ineffective-orbifold with global isotropy Z, in under ten
/// seconds.
#[test]
fn criterion_5_orbifold_pipeline() {
    let start = Instant::now();
    for d in [
        fixtures::generic_irrational_triangle(),
        fixtures::irrational_triangle(),
    ] {
        let report_p = to_orbifold_pipeline(&d).unwrap();
        let fam_report = report_p
            .family
            .validate_family(RATIONALIZE_SAMPLES)
            .unwrap();
        assert_eq!(fam_report.samples, 101);
        assert_eq!(fam_report.vertex_sets.len(), 3);

        // endpoint image lattice in HNF must be the identity
        let gen = report_p.endpoint.lattice().generator_matrix();
        let cols: Vec<Vec<BigInt>> = (0..gen.cols())
            .map(|j| {
                (0..gen.rows())
                    .map(|i| gen.get(i, j).as_integer().expect("integral endpoint"))
                    .collect()
            })
            .collect();
        let (h, _) = IntMatrix::from_columns(gen.rows(), &cols).transpose().hnf();
        let basis: Vec<Vec<BigInt>> = (0..h.rows())
            .map(|r| (0..h.cols()).map(|c| h.get(r, c).clone()).collect())
            .filter(|row: &Vec<BigInt>| row.iter().any(|v| !v.is_zero()))
            .collect();
        assert_eq!(basis.len(), gen.rows());
        for (i, row) in basis.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(*v == BigInt::one(), i == j);
                assert!(*v == BigInt::one() || v.is_zero());
            }
        }

        match &report_p.endpoint_classification {
            Classification::IneffectiveOrbifold(g) => {
                assert_eq!(g.free_rank(), 1);
                assert!(g.torsion().is_empty());
            }
            other => panic!("expected an ineffective orbifold endpoint, got {other}"),
        }
        assert_eq!(report_p.endpoint_global_isotropy.free_rank(), 1);
    }
    report(
        "criterion 5: orbifold pipeline",
        start,
        Some(Duration::from_secs(10)),
    );
}

/// Criterion 6: twenty random integral affine images of the triangle are
/// recognized as isomorphic with verifiable witnesses, the weighted triangle
/// is not, and each decision stays under five seconds.
#[test]
fn criterion_6_isomorphism_soundness() {
    let t = fixtures::standard_triangle();
    let f = t.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..20 {
        let pair_start = Instant::now();
        // random unimodular map as a product of shears and sign flips
        let mut p = FieldMatrix::identity(&f, 2);
        for _ in 0..6 {
            let a = rng.random_range(-3i64..=3);
            let kind = rng.random_range(0u8..3);
            let e = match kind {
                0 => FieldMatrix::from_rows(
                    &f,
                    vec![
                        vec![f.from_int(1), f.from_int(a)],
                        vec![f.from_int(0), f.from_int(1)],
                    ],
                ),
                1 => FieldMatrix::from_rows(
                    &f,
                    vec![
                        vec![f.from_int(1), f.from_int(0)],
                        vec![f.from_int(a), f.from_int(1)],
                    ],
                ),
                _ => FieldMatrix::from_rows(
                    &f,
                    vec![
                        vec![f.from_int(0), f.from_int(1)],
                        vec![f.from_int(1), f.from_int(0)],
                    ],
                ),
            };
            p = p.mul(&e);
        }
        let c = vec![
            f.from_rational(q(rng.random_range(-20i64..=20), rng.random_range(1i64..=7))),
            f.from_rational(q(rng.random_range(-20i64..=20), rng.random_range(1i64..=7))),
        ];
        // transform at the data level: generators through p, offsets shifted
        let new_cols: Vec<Vec<FieldElement>> = (0..t.lattice().free_rank())
            .map(|j| p.mul_vec(&t.lattice().generator_matrix().column(j)))
            .collect();
        let lattice = Quasilattice::new(
            FieldMatrix::from_columns(&f, 2, &new_cols),
            t.lattice().torsion().to_vec(),
        )
        .unwrap();
        let facets: Vec<DecoratedFacet> = (0..t.facet_count())
            .map(|i| DecoratedFacet {
                marker: t.facets()[i].marker.clone(),
                offset: t.offset(i) + &dot_product(&c, &t.normal(i)),
            })
            .collect();
        let image = DecoratedPolytope::new(lattice, facets).unwrap();

        let w = are_isomorphic(&t, &image)
            .unwrap()
            .unwrap_or_else(|| panic!("trial {trial}: image must be isomorphic"));
        assert!(verify_witness(&t, &image, &w), "trial {trial}");
        assert!(
            pair_start.elapsed() < Duration::from_secs(5),
            "trial {trial} too slow"
        );
    }

    let pair_start = Instant::now();
    let t2 = fixtures::weighted_triangle();
    assert!(are_isomorphic(&t, &t2).unwrap().is_none());
    assert!(pair_start.elapsed() < Duration::from_secs(5));
    println!("PASS criterion 6: isomorphism soundness");
}

/// Criterion 7: on 200 random integer matrices (dims <= 5, entries <= 10),
/// the Smith decomposition is exact with unimodular transforms, and the
/// cokernel order matches brute-force coset enumeration whenever it is at
/// most 200.
#[test]
fn criterion_7_normal_form_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut enumerated = 0usize;
    for _ in 0..200 {
        let rows = rng.random_range(1usize..=5);
        let cols = rng.random_range(1usize..=5);
        let entries: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| rng.random_range(-10i64..=10)).collect())
            .collect();
        let a = IntMatrix::from_rows(&entries);
        let (s, u, v) = a.snf();
        assert_eq!(u.mul(&a).mul(&v), s);
        assert!(u.is_unimodular());
        assert!(v.is_unimodular());
        // diagonal, nonnegative, divisibility chain
        for r in 0..s.rows() {
            for c in 0..s.cols() {
                if r != c {
                    assert!(s.get(r, c).is_zero());
                }
            }
        }
        let diag: Vec<BigInt> = (0..rows.min(cols)).map(|i| s.get(i, i).clone()).collect();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                if !w[1].is_zero() {
                    assert!((&w[1] % &w[0]).is_zero());
                }
            } else {
                assert!(w[1].is_zero());
            }
        }

        let g = a.cokernel();
        if let Some(order) = g.order() {
            if order <= BigInt::from(200) {
                let expect = i64::try_from(order).unwrap();
                let got = coset_enumeration_order(&entries);
                assert_eq!(got, Some(expect), "matrix {entries:?}");
                enumerated += 1;
            }
        }
    }
    assert!(
        enumerated > 10,
        "too few finite cases enumerated: {enumerated}"
    );
    println!("  ({enumerated} cokernels cross-checked by coset enumeration)");
    report("criterion 7: normal form correctness", start, None);
}

/// Criterion 8: 1000 random field-element triples satisfy the field axioms
/// exactly, and the exact sign order is consistent with 64-bit-precision
/// rational approximations on 1000 random pairs.
#[test]
fn criterion_8_scalar_engine() {
    let start = Instant::now();
    let f = RealAlgebraicField::quadratic(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    let random_elem = |rng: &mut ChaCha8Rng| -> FieldElement {
        let c0 = q(rng.random_range(-20i64..=20), rng.random_range(1i64..=9));
        let c1 = q(rng.random_range(-20i64..=20), rng.random_range(1i64..=9));
        f.element(vec![c0, c1]).unwrap()
    };
    for _ in 0..1000 {
        let a = random_elem(&mut rng);
        let b = random_elem(&mut rng);
        let c = random_elem(&mut rng);
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a + &b, &b + &a);
        assert_eq!(&a * &b, &b * &a);
        assert!((&a - &a).is_zero());
        if !a.is_zero() {
            assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    // 64-bit-precision consistency: eps = 2^-53
    let eps = BigRational::new(BigInt::one(), BigInt::one() << 53);
    let two_eps = &eps + &eps;
    for _ in 0..1000 {
        let a = random_elem(&mut rng);
        let b = random_elem(&mut rng);
        let sign = (&a - &b).sign();
        let ra = a.approx(&eps);
        let rb = b.approx(&eps);
        match sign {
            1 => assert!(ra > &rb - &two_eps),
            -1 => assert!(ra < &rb + &two_eps),
            _ => assert!((&ra - &rb).abs() < two_eps),
        }
    }
    report("criterion 8: scalar engine", start, None);
}

/// Brute-force coset enumeration oracle for the order of `Z^rows / L` where
/// `L` is the column span: adjugate arithmetic over i128 against a
/// nonsingular square submatrix, then closure of the remaining columns.
/// Returns `None` when the quotient is infinite.
fn coset_enumeration_order(entries: &[Vec<i64>]) -> Option<i64> {
    let rows = entries.len();
    let cols = entries[0].len();
    if cols < rows {
        return None;
    }
    // find the nonsingular rows x rows submatrix with smallest |det|
    let mut best: Option<(Vec<usize>, i128)> = None;
    for subset in subsets(cols, rows) {
        let m: Vec<Vec<i128>> = (0..rows)
            .map(|r| subset.iter().map(|&c| entries[r][c] as i128).collect())
            .collect();
        let d = det_i128(&m).abs();
        if d != 0 && best.as_ref().is_none_or(|(_, bd)| d < *bd) {
            best = Some((subset, d));
        }
    }
    let (subset, d) = best?;
    let m: Vec<Vec<i128>> = (0..rows)
        .map(|r| subset.iter().map(|&c| entries[r][c] as i128).collect())
        .collect();
    let adj = adjugate_i128(&m);
    let canon = |v: &[i128]| -> Vec<i128> {
        (0..rows)
            .map(|i| {
                let mut acc: i128 = 0;
                for j in 0..rows {
                    acc += adj[i][j] * v[j];
                }
                acc.rem_euclid(d)
            })
            .collect()
    };
    // subgroup generated by the remaining columns inside Z^rows / L'
    let mut elements: std::collections::BTreeSet<Vec<i128>> =
        std::iter::once(vec![0; rows]).collect();
    let gens: Vec<Vec<i128>> = (0..cols)
        .filter(|c| !subset.contains(c))
        .map(|c| {
            let col: Vec<i128> = (0..rows).map(|r| entries[r][c] as i128).collect();
            canon(&col)
        })
        .collect();
    let mut frontier: Vec<Vec<i128>> = elements.iter().cloned().collect();
    while let Some(e) = frontier.pop() {
        for g in &gens {
            let sum: Vec<i128> = e
                .iter()
                .zip(g)
                .map(|(x, y)| (x + y).rem_euclid(d))
                .collect();
            if elements.insert(sum.clone()) {
                frontier.push(sum);
            }
        }
    }
    // |Z^rows / L| = |det| / |S| by Lagrange
    let s = elements.len() as i128;
    assert_eq!(d % s, 0);
    i64::try_from(d / s).ok()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..=(n - k) {
        for mut rest in subsets(n - first - 1, k - 1) {
            for r in &mut rest {
                *r += first + 1;
            }
            let mut s = vec![first];
            s.extend(rest);
            out.push(s);
        }
    }
    out
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0i128;
    for r in 0..n {
        if m[r][0] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let term = m[r][0] * det_i128(&minor);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// adj(M) with adj(M) * M = det(M) * I.
fn adjugate_i128(m: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let n = m.len();
    if n == 1 {
        return vec![vec![1]];
    }
    let mut adj = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i128>> = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != j)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != i)
                        .map(|(_, v)| *v)
                        .collect()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i][j] = sign * det_i128(&minor);
        }
    }
    adj
}
