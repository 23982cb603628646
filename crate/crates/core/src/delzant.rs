//! Compilation of the cut-construction data attached to a valid decorated
//! polytope: the facet-normal map `lambda: R^d -> R^n` (column `i` is the
//! `i`-th facet normal), a deterministic basis of its kernel, and the
//! level-set quadrics `sum_j v_j t_j = sum_j v_j L_j` in the substituted
//! variables `t_j >= 0`. A rejection sampler produces exact witnesses on the
//! level set, and a cross-module oracle re-derives the per-vertex lattices
//! independently.
//!
//! The `t_j` are scaled squared moduli of the ambient coordinates; the
//! scaling constant is absorbed into the substitution, so no transcendental
//! number ever enters the arithmetic and every check is exact.

use num::{BigInt, BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::decorated::DecoratedPolytope;
use crate::linalg::FieldMatrix;
use crate::polytope::dot_product;
use crate::quasilattice::expand_to_integer;
use crate::scalar::FieldElement;

#[derive(Debug, Error)]
pub enum DelzantError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("sampling failed repeatedly; the polytope interior looks degenerate")]
    EmptyInterior,
}

/// One linear relation among the `t_j`, induced by a kernel vector of the
/// facet-normal map.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadric {
    pub coeffs: Vec<FieldElement>,
    pub rhs: FieldElement,
}

/// Construction data: normals as columns, offsets, kernel basis, quadrics,
/// and a rational bounding box of the polytope for the sampler.
#[derive(Debug, Clone)]
pub struct DelzantData {
    lambda: FieldMatrix,
    offsets: Vec<FieldElement>,
    kernel_basis: Vec<Vec<FieldElement>>,
    quadrics: Vec<Quadric>,
    bbox: Vec<(BigRational, BigRational)>,
}

impl DelzantData {
    pub fn facet_count(&self) -> usize {
        self.lambda.cols()
    }

    pub fn dim(&self) -> usize {
        self.lambda.rows()
    }

    /// The facet-normal map as an `n x d` matrix (columns are normals).
    pub fn lambda(&self) -> &FieldMatrix {
        &self.lambda
    }

    pub fn offsets(&self) -> &[FieldElement] {
        &self.offsets
    }

    /// Reduced-echelon, pivot-normalized basis of `ker lambda` in `R^d`.
    pub fn kernel_basis(&self) -> &[Vec<FieldElement>] {
        &self.kernel_basis
    }

    pub fn quadrics(&self) -> &[Quadric] {
        &self.quadrics
    }

    pub fn bounding_box(&self) -> &[(BigRational, BigRational)] {
        &self.bbox
    }
}

/// One sampled point: rational moment-image coordinates `xi`, the induced
/// level-set coordinates `t_j = L_j - <xi, lambda_j>`, and the outcome of the
/// exact checks (quadrics, nonnegativity, reconstruction of `xi`).
#[derive(Debug, Clone)]
pub struct LevelSetSample {
    pub xi: Vec<BigRational>,
    pub t: Vec<FieldElement>,
    pub exact: bool,
}

/// One per-vertex comparison between the compiled lattice data and the
/// decorated module's face labels.
#[derive(Debug, Clone)]
pub struct VertexLatticeCheck {
    pub active_set: Vec<usize>,
    pub pass: bool,
}

/// Compiles the construction data of a valid decorated polytope.
pub fn compile(d: &DecoratedPolytope) -> Result<DelzantData, DelzantError> {
    let report = d.validate();
    if !report.is_valid() {
        return Err(DelzantError::InvalidInput(
            report
                .first_failure()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .unwrap_or_default(),
        ));
    }
    let field = d.field();
    let n = d.dim();
    let count = d.facet_count();

    let cols: Vec<Vec<FieldElement>> = (0..count).map(|i| d.normal(i)).collect();
    let lambda = FieldMatrix::from_columns(field, n, &cols);
    let offsets: Vec<FieldElement> = (0..count).map(|i| d.offset(i).clone()).collect();

    let kernel_basis = lambda.kernel_basis();
    let quadrics: Vec<Quadric> = kernel_basis
        .iter()
        .map(|v| {
            let rhs = dot_product(v, &offsets);
            Quadric {
                coeffs: v.clone(),
                rhs,
            }
        })
        .collect();

    // rational outer bounding box from the vertices
    let vertices = d.vertices().expect("validated");
    let eps = BigRational::new(BigInt::one(), BigInt::from(2048));
    let margin = BigRational::new(BigInt::one(), BigInt::from(1024));
    let mut bbox = Vec::with_capacity(n);
    for i in 0..n {
        let mut lo: Option<FieldElement> = None;
        let mut hi: Option<FieldElement> = None;
        for v in &vertices {
            let x = &v.point[i];
            if lo.as_ref().is_none_or(|l| x < l) {
                lo = Some(x.clone());
            }
            if hi.as_ref().is_none_or(|h| x > h) {
                hi = Some(x.clone());
            }
        }
        let lo = lo.unwrap().approx(&eps) - &margin;
        let hi = hi.unwrap().approx(&eps) + &margin;
        bbox.push((lo, hi));
    }

    Ok(DelzantData {
        lambda,
        offsets,
        kernel_basis,
        quadrics,
        bbox,
    })
}

/// Grid resolution for one sampled coordinate.
const SAMPLE_GRID: u64 = 1 << 20;
/// Rejection attempts allowed per requested sample.
const ATTEMPTS_PER_SAMPLE: usize = 1000;

/// Rejection-samples `count` rational points of the moment image and lifts
/// each to the level set, checking every quadric and the reconstruction of
/// `xi` exactly. Deterministic for a fixed seed.
pub fn sample_level_set(
    data: &DelzantData,
    count: usize,
    seed: u64,
) -> Result<Vec<LevelSetSample>, DelzantError> {
    let field = data.lambda.field();
    let n = data.dim();
    let d = data.facet_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let budget = count.saturating_mul(ATTEMPTS_PER_SAMPLE);
    while out.len() < count {
        if attempts >= budget {
            return Err(DelzantError::EmptyInterior);
        }
        attempts += 1;
        let xi: Vec<BigRational> = (0..n)
            .map(|i| {
                let (lo, hi) = &data.bbox[i];
                let k = rng.random_range(0..=SAMPLE_GRID);
                lo + (hi - lo) * BigRational::new(BigInt::from(k), BigInt::from(SAMPLE_GRID))
            })
            .collect();
        let xi_field: Vec<FieldElement> =
            xi.iter().map(|r| field.from_rational(r.clone())).collect();
        // accept iff the point lies in the polytope, exactly
        let mut t = Vec::with_capacity(d);
        let mut inside = true;
        for j in 0..d {
            let slack = &data.offsets[j] - &dot_product(&xi_field, &data.lambda.column(j));
            if slack.sign() < 0 {
                inside = false;
                break;
            }
            t.push(slack);
        }
        if !inside {
            continue;
        }
        let exact = check_sample(data, &xi_field, &t);
        out.push(LevelSetSample { xi, t, exact });
    }
    Ok(out)
}

/// Exact verification of one sample: all quadrics hold, all `t_j >= 0`, and
/// `xi` is recovered uniquely from `t`.
fn check_sample(data: &DelzantData, xi_field: &[FieldElement], t: &[FieldElement]) -> bool {
    for q in &data.quadrics {
        if (&dot_product(&q.coeffs, t) - &q.rhs).sign() != 0 {
            return false;
        }
    }
    if t.iter().any(|x| x.sign() < 0) {
        return false;
    }
    // <xi, lambda_j> = L_j - t_j must determine xi
    let rows: Vec<Vec<FieldElement>> = (0..data.facet_count())
        .map(|j| data.lambda.column(j))
        .collect();
    let rhs: Vec<FieldElement> = (0..data.facet_count())
        .map(|j| &data.offsets[j] - &t[j])
        .collect();
    let field = data.lambda.field();
    match FieldMatrix::from_rows(field, rows).solve(&rhs) {
        Some(recovered) => recovered == xi_field,
        None => false,
    }
}

/// For each vertex, re-derives the span of the active `lambda` columns from
/// the compiled data and checks it equals the image of the decorated
/// module's face label — the same object computed by two routes. Failures
/// indicate an implementation bug, not bad input.
pub fn verify_vertex_lattices(
    d: &DecoratedPolytope,
    data: &DelzantData,
) -> Result<Vec<VertexLatticeCheck>, DelzantError> {
    let field = d.field();
    let n = d.dim();
    let faces = d
        .face_lattice()
        .map_err(|e| DelzantError::InvalidInput(e.to_string()))?;
    let mut checks = Vec::new();
    for face in faces.iter().filter(|f| f.dim == 0) {
        // route 1: active columns of the compiled normal map
        let compiled: Vec<Vec<FieldElement>> = face
            .active_set
            .iter()
            .map(|&i| data.lambda.column(i))
            .collect();
        // route 2: the face label pushed through the quasilattice map
        let label = d.face_label(face);
        let labelled: Vec<Vec<FieldElement>> = (0..label.cols())
            .map(|j| d.lattice().apply(&label.column(j)))
            .collect();
        let pass = subgroup_eq(field, n, &compiled, &labelled);
        checks.push(VertexLatticeCheck {
            active_set: face.active_set.clone(),
            pass,
        });
    }
    Ok(checks)
}

/// Mutual integer-membership test for the subgroups generated by two lists
/// of vectors.
fn subgroup_eq(
    field: &std::sync::Arc<crate::scalar::RealAlgebraicField>,
    dim: usize,
    a: &[Vec<FieldElement>],
    b: &[Vec<FieldElement>],
) -> bool {
    let in_span = |gens: &[Vec<FieldElement>], target: &[FieldElement]| -> bool {
        let mat = FieldMatrix::from_columns(field, dim, gens);
        let (int_mat, rhs) = expand_to_integer(&mat, Some(target));
        int_mat.solve_integer(&rhs.unwrap()).particular.is_some()
    };
    b.iter().all(|v| in_span(a, v)) && a.iter().all(|v| in_span(b, v))
}
