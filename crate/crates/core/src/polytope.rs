//! Simple convex polytopes in H-representation over the scalar field.
//!
//! A polytope is the set `{ xi : <xi, normal_f> <= offset_f for all f }`.
//! Vertex enumeration is exhaustive over n-element facet subsets, which is
//! exact and detects simplicity violations directly; the intended scale is a
//! dozen facets or so. Degenerate inputs (empty, unbounded, non-simple,
//! redundant) are rejected with specific errors, never repaired.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::linalg::FieldMatrix;
use crate::scalar::{FieldElement, RealAlgebraicField};
use crate::util::combinations;

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("facet {0} has a zero normal vector")]
    ZeroNormal(usize),
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("polytope is not full-dimensional")]
    NotFullDimensional,
    #[error("not simple: facets {active:?} are all active at one point")]
    NotSimple { active: Vec<usize> },
    #[error("facet {0} is redundant (supports no vertex)")]
    Redundant(usize),
}

/// One half-space `<xi, normal> <= offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<FieldElement>,
    pub offset: FieldElement,
}

/// A vertex together with the facets active there.
#[derive(Debug, Clone)]
pub struct Vertex {
    pub point: Vec<FieldElement>,
    pub active_set: Vec<usize>,
}

/// A face of a simple polytope, identified by the full set of facets
/// containing it; `dim = n - |active_set|`. The empty active set is the
/// interior face. Faces here are closed; for simple polytopes the active
/// sets are in one-to-one correspondence with the relatively open faces, so
/// nothing is lost by indexing this way.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Face {
    pub active_set: Vec<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    field: Arc<RealAlgebraicField>,
    dim: usize,
    facets: Vec<Halfspace>,
}

/// Exact inner product of two field vectors.
pub fn dot_product(a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
    assert_eq!(a.len(), b.len());
    let mut acc = a[0].field().zero();
    for (x, y) in a.iter().zip(b) {
        acc = &acc + &(x * y);
    }
    acc
}

impl HPolytope {
    pub fn new(field: &Arc<RealAlgebraicField>, dim: usize, facets: Vec<Halfspace>) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        for h in &facets {
            assert_eq!(h.normal.len(), dim, "normal length mismatch");
        }
        HPolytope {
            field: Arc::clone(field),
            dim,
            facets,
        }
    }

    pub fn field(&self) -> &Arc<RealAlgebraicField> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn facet(&self, i: usize) -> &Halfspace {
        &self.facets[i]
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// Exact membership test.
    pub fn contains(&self, point: &[FieldElement]) -> bool {
        self.facets
            .iter()
            .all(|h| (&dot_product(point, &h.normal) - &h.offset).sign() <= 0)
    }

    /// Rejects a polytope with a nontrivial recession direction. Covers the
    /// lineality space (normals of deficient rank) and all candidate extreme
    /// rays, which are kernels of (n-1)-subsets of normals.
    fn check_bounded(&self) -> Result<(), PolytopeError> {
        let n = self.dim;
        let normal_rows: Vec<Vec<FieldElement>> =
            self.facets.iter().map(|h| h.normal.clone()).collect();
        let mat = FieldMatrix::from_rows(&self.field, normal_rows.clone());
        if mat.rank() < n {
            return Err(PolytopeError::Unbounded);
        }
        for subset in combinations(self.facets.len(), n - 1) {
            let rows: Vec<Vec<FieldElement>> =
                subset.iter().map(|&i| normal_rows[i].clone()).collect();
            let sub = if rows.is_empty() {
                FieldMatrix::zero(&self.field, 0, n)
            } else {
                FieldMatrix::from_rows(&self.field, rows)
            };
            let kernel = sub.kernel_basis();
            if kernel.len() != 1 {
                continue;
            }
            let y = &kernel[0];
            let neg_y: Vec<FieldElement> = y.iter().map(|v| -v).collect();
            for dir in [y.as_slice(), neg_y.as_slice()] {
                if self
                    .facets
                    .iter()
                    .all(|h| dot_product(dir, &h.normal).sign() <= 0)
                {
                    return Err(PolytopeError::Unbounded);
                }
            }
        }
        Ok(())
    }

    /// Enumerates all vertices with their active sets, verifying along the
    /// way that the polytope is bounded, nonempty, full-dimensional, simple,
    /// and irredundant. Results are sorted by active set.
    pub fn vertices(&self) -> Result<Vec<Vertex>, PolytopeError> {
        let n = self.dim;
        let d = self.facets.len();
        for (i, h) in self.facets.iter().enumerate() {
            if h.normal.iter().all(FieldElement::is_zero) {
                return Err(PolytopeError::ZeroNormal(i));
            }
        }
        self.check_bounded()?;

        let mut vertices: Vec<Vertex> = Vec::new();
        for subset in combinations(d, n) {
            let rows: Vec<Vec<FieldElement>> = subset
                .iter()
                .map(|&i| self.facets[i].normal.clone())
                .collect();
            let mat = FieldMatrix::from_rows(&self.field, rows);
            if mat.rank() < n {
                continue;
            }
            let rhs: Vec<FieldElement> = subset
                .iter()
                .map(|&i| self.facets[i].offset.clone())
                .collect();
            let point = mat.solve(&rhs).expect("full-rank square system");

            let mut active = Vec::new();
            let mut feasible = true;
            for (f, h) in self.facets.iter().enumerate() {
                let slack = &dot_product(&point, &h.normal) - &h.offset;
                match slack.sign() {
                    1 => {
                        feasible = false;
                        break;
                    }
                    0 => active.push(f),
                    _ => {}
                }
            }
            if !feasible {
                continue;
            }
            if active.len() > n {
                return Err(PolytopeError::NotSimple { active });
            }
            debug_assert_eq!(active, subset);
            if vertices.last().map(|v| v.active_set.as_slice()) != Some(active.as_slice()) {
                vertices.push(Vertex {
                    point,
                    active_set: active,
                });
            }
        }

        if vertices.is_empty() {
            return Err(PolytopeError::Empty);
        }

        // affine span of the vertex set must be everything
        if vertices.len() < n + 1 {
            return Err(PolytopeError::NotFullDimensional);
        }
        let base = &vertices[0].point;
        let diffs: Vec<Vec<FieldElement>> = vertices[1..]
            .iter()
            .map(|v| v.point.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        if FieldMatrix::from_rows(&self.field, diffs).rank() < n {
            return Err(PolytopeError::NotFullDimensional);
        }

        let mut seen = vec![false; d];
        for v in &vertices {
            for &f in &v.active_set {
                seen[f] = true;
            }
        }
        if let Some(f) = seen.iter().position(|s| !s) {
            return Err(PolytopeError::Redundant(f));
        }

        Ok(vertices)
    }

    /// The full face lattice: active sets of all faces, closed under
    /// intersection, including the interior (empty active set). Faces are
    /// sorted by (dimension, active set).
    pub fn face_lattice(&self) -> Result<Vec<Face>, PolytopeError> {
        let vertices = self.vertices()?;
        let mut sets: BTreeSet<Vec<usize>> =
            vertices.iter().map(|v| v.active_set.clone()).collect();
        loop {
            let mut new_sets = Vec::new();
            let all: Vec<&Vec<usize>> = sets.iter().collect();
            for i in 0..all.len() {
                for j in i + 1..all.len() {
                    let inter: Vec<usize> = all[i]
                        .iter()
                        .filter(|x| all[j].binary_search(x).is_ok())
                        .cloned()
                        .collect();
                    if !sets.contains(&inter) {
                        new_sets.push(inter);
                    }
                }
            }
            if new_sets.is_empty() {
                break;
            }
            sets.extend(new_sets);
        }
        let mut faces: Vec<Face> = sets
            .into_iter()
            .map(|active_set| Face {
                dim: self.dim - active_set.len(),
                active_set,
            })
            .collect();
        faces.sort_by(|a, b| (a.dim, &a.active_set).cmp(&(b.dim, &b.active_set)));
        Ok(faces)
    }

    /// Span of the active facet normals of `f` (for a simple polytope these
    /// are independent, so they are returned as the basis directly).
    pub fn ann(&self, face: &Face) -> Vec<Vec<FieldElement>> {
        face.active_set
            .iter()
            .map(|&i| self.facets[i].normal.clone())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::{BigInt, BigRational};

    fn rat_polytope(dim: usize, rows: &[(&[i64], i64)]) -> HPolytope {
        let f = RealAlgebraicField::rationals();
        let facets = rows
            .iter()
            .map(|(normal, offset)| Halfspace {
                normal: normal.iter().map(|&v| f.from_int(v)).collect(),
                offset: f.from_int(*offset),
            })
            .collect();
        HPolytope::new(&f, dim, facets)
    }

    fn triangle() -> HPolytope {
        rat_polytope(2, &[(&[-1, 0], 0), (&[0, -1], 0), (&[1, 1], 1)])
    }

    fn square() -> HPolytope {
        rat_polytope(
            2,
            &[(&[-1, 0], 0), (&[1, 0], 1), (&[0, -1], 0), (&[0, 1], 1)],
        )
    }

    #[test]
    fn triangle_vertices() {
        let t = triangle();
        let vs = t.vertices().unwrap();
        assert_eq!(vs.len(), 3);
        let f = t.field();
        let points: Vec<Vec<FieldElement>> = vs.iter().map(|v| v.point.clone()).collect();
        assert!(points.contains(&vec![f.from_int(0), f.from_int(0)]));
        assert!(points.contains(&vec![f.from_int(1), f.from_int(0)]));
        assert!(points.contains(&vec![f.from_int(0), f.from_int(1)]));
        for v in &vs {
            assert_eq!(v.active_set.len(), 2);
        }
    }

    #[test]
    fn square_vertices() {
        let s = square();
        let vs = s.vertices().unwrap();
        assert_eq!(vs.len(), 4);
        for v in &vs {
            assert_eq!(v.active_set.len(), 2);
        }
    }

    #[test]
    fn irrational_triangle_vertices() {
        let f = RealAlgebraicField::quadratic(2).unwrap();
        let r2 = f.generator();
        let t = HPolytope::new(
            &f,
            2,
            vec![
                Halfspace {
                    normal: vec![f.from_int(-1), f.zero()],
                    offset: f.zero(),
                },
                Halfspace {
                    normal: vec![f.zero(), f.from_int(-1)],
                    offset: f.zero(),
                },
                Halfspace {
                    normal: vec![f.one(), r2],
                    offset: f.one(),
                },
            ],
        );
        let vs = t.vertices().unwrap();
        assert_eq!(vs.len(), 3);
        let half = f.from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        let sqrt2_over_2 = &f.generator() * &half;
        let points: Vec<Vec<FieldElement>> = vs.iter().map(|v| v.point.clone()).collect();
        assert!(points.contains(&vec![f.zero(), f.zero()]));
        assert!(points.contains(&vec![f.one(), f.zero()]));
        assert!(points.contains(&vec![f.zero(), sqrt2_over_2]));
    }

    #[test]
    fn face_lattice_counts() {
        // triangle: 3 vertices + 3 edges + interior
        assert_eq!(triangle().face_lattice().unwrap().len(), 7);
        // square: 4 + 4 + 1
        assert_eq!(square().face_lattice().unwrap().len(), 9);
        // 3-simplex: 2^4 - 2 proper faces plus interior
        let simplex = rat_polytope(
            3,
            &[
                (&[-1, 0, 0], 0),
                (&[0, -1, 0], 0),
                (&[0, 0, -1], 0),
                (&[1, 1, 1], 1),
            ],
        );
        assert_eq!(simplex.face_lattice().unwrap().len(), (1 << 4) - 2 + 1);
    }

    #[test]
    fn ann_dimension_is_codimension() {
        for p in [triangle(), square()] {
            for face in p.face_lattice().unwrap() {
                let basis = p.ann(&face);
                assert_eq!(basis.len(), p.dim() - face.dim);
                if !basis.is_empty() {
                    let m = FieldMatrix::from_rows(p.field(), basis);
                    assert_eq!(m.rank(), p.dim() - face.dim);
                }
            }
        }
    }

    #[test]
    fn incidence_count_is_n_times_vertices() {
        for p in [triangle(), square()] {
            let vs = p.vertices().unwrap();
            let incidences: usize = vs.iter().map(|v| v.active_set.len()).sum();
            assert_eq!(incidences, p.dim() * vs.len());
        }
    }

    #[test]
    fn vertices_satisfy_all_inequalities_exactly() {
        for p in [triangle(), square()] {
            for v in p.vertices().unwrap() {
                assert!(p.contains(&v.point));
            }
        }
    }

    #[test]
    fn slab_is_unbounded() {
        let slab = rat_polytope(2, &[(&[-1, 0], 0), (&[1, 0], 1)]);
        assert!(matches!(slab.vertices(), Err(PolytopeError::Unbounded)));
        // a quadrant with a vertex is still unbounded
        let quadrant = rat_polytope(2, &[(&[-1, 0], 0), (&[0, -1], 0)]);
        assert!(matches!(quadrant.vertices(), Err(PolytopeError::Unbounded)));
    }

    #[test]
    fn empty_polytope_detected() {
        let empty = rat_polytope(1, &[(&[1], -1), (&[-1], -1)]);
        assert!(matches!(empty.vertices(), Err(PolytopeError::Empty)));
    }

    #[test]
    fn corner_cut_is_not_simple() {
        let bad = rat_polytope(
            2,
            &[
                (&[-1, 0], 0),
                (&[1, 0], 1),
                (&[0, -1], 0),
                (&[0, 1], 1),
                (&[1, 1], 2),
            ],
        );
        assert!(matches!(
            bad.vertices(),
            Err(PolytopeError::NotSimple { .. })
        ));
    }

    #[test]
    fn strictly_redundant_facet_detected() {
        let red = rat_polytope(
            2,
            &[
                (&[-1, 0], 0),
                (&[1, 0], 1),
                (&[0, -1], 0),
                (&[0, 1], 1),
                (&[1, 1], 5),
            ],
        );
        assert!(matches!(red.vertices(), Err(PolytopeError::Redundant(4))));
    }

    #[test]
    fn zero_normal_rejected() {
        let z = rat_polytope(2, &[(&[0, 0], 1), (&[0, -1], 0), (&[1, 1], 1)]);
        assert!(matches!(z.vertices(), Err(PolytopeError::ZeroNormal(0))));
    }

    #[test]
    fn segment_in_one_dimension() {
        let seg = rat_polytope(1, &[(&[-1], 0), (&[1], 1)]);
        let vs = seg.vertices().unwrap();
        assert_eq!(vs.len(), 2);
        let faces = seg.face_lattice().unwrap();
        assert_eq!(faces.len(), 3);
    }
}
