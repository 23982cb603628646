//! Decorated moment polytopes: a quasilattice together with one marker
//! `q_f` in the free part of `Q` per facet and an offset `L_f`, from which
//! the facet normal is derived as `lambda_f = gen * q_f`. The half-spaces
//! `<xi, lambda_f> <= L_f` cut out the underlying polytope.
//!
//! Because normals are always images of markers, the facet subgroup
//! `Lambda_f = Z * lambda_f` automatically sits inside the image of the
//! quasilattice; quasirationality reduces to `lambda_f != 0`.
//!
//! The marker is an oriented generator: only the subgroup `Z * lambda_f` is
//! classification data, but the deformation machinery needs the chosen
//! representative, so the oriented form is stored and the subgroup is read
//! off as its span regardless of sign. Facet-label independence at a face is
//! equivalent to condition-style freeness of the face label: for labels
//! generated by facet markers, a label of rank `s` with a basis that is also
//! an R-basis of the face's normal space is exactly an R-linearly
//! independent family of active normals.

use std::fmt;
use std::sync::Arc;

use num::{BigInt, Integer, One, Signed, Zero};
use thiserror::Error;

use crate::abelian::{FgAbelianGroup, IntMatrix};
use crate::linalg::FieldMatrix;
use crate::polytope::{Face, HPolytope, Halfspace, PolytopeError, Vertex};
use crate::quasilattice::{expand_to_integer, Quasilattice};
use crate::scalar::{FieldElement, RealAlgebraicField};

#[derive(Debug, Error)]
pub enum DecoratedError {
    #[error("facet {facet}: marker length {got} does not match the free rank {expected}")]
    MarkerLength {
        facet: usize,
        got: usize,
        expected: usize,
    },
    #[error("offset for facet {facet} lies in a different field")]
    FieldMismatch { facet: usize },
    #[error("the data is not over a lattice: {0}")]
    NotALattice(String),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// One decorated facet: the marker in `Z^m` and the offset.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedFacet {
    pub marker: Vec<BigInt>,
    pub offset: FieldElement,
}

/// The classification datum: quasilattice plus per-facet markers/offsets.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedPolytope {
    lattice: Quasilattice,
    facets: Vec<DecoratedFacet>,
}

/// Coarse isomorphism-type of the object the datum encodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    SmoothManifold,
    EffectiveOrbifold,
    IneffectiveOrbifold(FgAbelianGroup),
    Quasifold,
}

impl Classification {
    /// The bare variant name, without the isotropy payload.
    pub fn name(&self) -> &'static str {
        match self {
            Classification::SmoothManifold => "SmoothManifold",
            Classification::EffectiveOrbifold => "EffectiveOrbifold",
            Classification::IneffectiveOrbifold(_) => "IneffectiveOrbifold",
            Classification::Quasifold => "Quasifold",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::IneffectiveOrbifold(g) => {
                write!(f, "IneffectiveOrbifold(global isotropy {g})")
            }
            other => write!(f, "{}", other.name()),
        }
    }
}

/// One named validation check with its outcome.
#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// The outcome of [`DecoratedPolytope::validate`]: every executed check in
/// order. Checks that depend on a failed prerequisite are not run.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&ValidationCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(ValidationCheck {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if c.passed { "ok " } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        Ok(())
    }
}

impl DecoratedPolytope {
    pub fn new(lattice: Quasilattice, facets: Vec<DecoratedFacet>) -> Result<Self, DecoratedError> {
        let m = lattice.free_rank();
        for (i, f) in facets.iter().enumerate() {
            if f.marker.len() != m {
                return Err(DecoratedError::MarkerLength {
                    facet: i,
                    got: f.marker.len(),
                    expected: m,
                });
            }
            if !f.offset.field().same_field(lattice.field()) {
                return Err(DecoratedError::FieldMismatch { facet: i });
            }
        }
        Ok(DecoratedPolytope { lattice, facets })
    }

    pub fn field(&self) -> &Arc<RealAlgebraicField> {
        self.lattice.field()
    }

    pub fn lattice(&self) -> &Quasilattice {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.ambient_dim()
    }

    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn facets(&self) -> &[DecoratedFacet] {
        &self.facets
    }

    /// The derived facet normal `lambda_f = gen * marker_f`.
    pub fn normal(&self, facet: usize) -> Vec<FieldElement> {
        self.lattice.apply(&self.facets[facet].marker)
    }

    pub fn offset(&self, facet: usize) -> &FieldElement {
        &self.facets[facet].offset
    }

    /// The underlying H-polytope cut out by the derived normals.
    pub fn polytope(&self) -> HPolytope {
        let halfspaces = (0..self.facets.len())
            .map(|i| Halfspace {
                normal: self.normal(i),
                offset: self.facets[i].offset.clone(),
            })
            .collect();
        HPolytope::new(self.field(), self.dim(), halfspaces)
    }

    pub fn vertices(&self) -> Result<Vec<Vertex>, PolytopeError> {
        self.polytope().vertices()
    }

    pub fn face_lattice(&self) -> Result<Vec<Face>, PolytopeError> {
        self.polytope().face_lattice()
    }

    /// Runs every structural check and reports them in order. The data is a
    /// valid decorated polytope exactly when all checks pass.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();

        let zero_normals: Vec<usize> = (0..self.facets.len())
            .filter(|&i| self.normal(i).iter().all(FieldElement::is_zero))
            .collect();
        report.push(
            "quasirationality",
            zero_normals.is_empty(),
            if zero_normals.is_empty() {
                "every facet normal is a nonzero image of its marker".to_string()
            } else {
                format!("facets {zero_normals:?} have zero normals")
            },
        );
        if !zero_normals.is_empty() {
            return report;
        }

        let faces = match self.face_lattice() {
            Ok(faces) => {
                let vertices = faces.iter().filter(|f| f.dim == 0).count();
                report.push(
                    "polytope",
                    true,
                    format!(
                        "bounded, full-dimensional, simple, irredundant; {} facets, {} vertices",
                        self.facets.len(),
                        vertices
                    ),
                );
                faces
            }
            Err(e) => {
                report.push("polytope", false, e.to_string());
                return report;
            }
        };

        // Def-style condition 1: active markers at each face are independent
        // over the reals (their images over the field, equivalently).
        let mut dependent = Vec::new();
        for face in &faces {
            if face.active_set.is_empty() {
                continue;
            }
            let cols: Vec<Vec<FieldElement>> =
                face.active_set.iter().map(|&i| self.normal(i)).collect();
            let mat = FieldMatrix::from_columns(self.field(), self.dim(), &cols);
            if mat.rank() != face.active_set.len() {
                dependent.push(face.active_set.clone());
            }
        }
        report.push(
            "face-independence",
            dependent.is_empty(),
            if dependent.is_empty() {
                "active facet labels are linearly independent at every face".to_string()
            } else {
                format!("dependent labels at faces {dependent:?}")
            },
        );

        report.push(
            "markers-in-group",
            true,
            "markers are coordinates in the free part of Q by construction",
        );

        let mut deficient = Vec::new();
        for face in faces.iter().filter(|f| f.dim == 0) {
            if self.face_label(face).rank() != self.dim() {
                deficient.push(face.active_set.clone());
            }
        }
        report.push(
            "vertex-rank",
            deficient.is_empty(),
            if deficient.is_empty() {
                "every vertex label has full rank".to_string()
            } else {
                format!("vertex labels of deficient rank at {deficient:?}")
            },
        );

        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// Generators of the face label `Lambda_f` as a subgroup of `Z^m`:
    /// the markers of the active facets, as columns. The image under the
    /// quasilattice map is the geometric label.
    pub fn face_label(&self, face: &Face) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = face
            .active_set
            .iter()
            .map(|&i| self.facets[i].marker.clone())
            .collect();
        IntMatrix::from_columns(self.lattice.free_rank(), &cols)
    }

    /// The isotropy group of a face: `ker(map) + (image ∩ ann(f)) / Lambda_f`.
    /// Positive free rank signals genuine quasifold isotropy, pure torsion an
    /// orbifold point, and the trivial group a manifold point.
    pub fn face_isotropy(&self, face: &Face) -> FgAbelianGroup {
        let ann: Vec<Vec<FieldElement>> = face.active_set.iter().map(|&i| self.normal(i)).collect();
        // {q : gen*q in ann(f)}; active normals are independent for valid data
        let k_f = self
            .lattice
            .intersect_subspace(&ann)
            .expect("active facet normals must be independent");
        let kernel = self.lattice.integer_kernel_basis();

        // denominator generators: active markers plus the integer kernel
        let mut denominators: Vec<Vec<BigInt>> = face
            .active_set
            .iter()
            .map(|&i| self.facets[i].marker.clone())
            .collect();
        denominators.extend(kernel.columns());

        // express each denominator in the basis of K_f and take the cokernel
        let mut coeff_cols = Vec::with_capacity(denominators.len());
        for g in &denominators {
            let sol = k_f
                .solve_integer(g)
                .particular
                .expect("denominator generators lie inside K_f");
            coeff_cols.push(sol);
        }
        let quotient = IntMatrix::from_columns(k_f.cols(), &coeff_cols).cokernel();

        let global = FgAbelianGroup::new(kernel.cols(), self.lattice.torsion().to_vec());
        global.direct_sum(&quotient)
    }

    /// Positive facet labels for honest lattice data: the integer `k >= 1`
    /// with `lambda_f = k * (primitive outward normal)`. Requires a trivial
    /// kernel and image exactly `Z^n` in the given coordinates.
    pub fn lt_labels(&self) -> Result<Vec<BigInt>, DecoratedError> {
        if !self.lattice.kernel().is_trivial() {
            return Err(DecoratedError::NotALattice(
                "the structure map has a nontrivial kernel".into(),
            ));
        }
        if !self.lattice.is_discrete() {
            return Err(DecoratedError::NotALattice(
                "the image of the structure map is not discrete".into(),
            ));
        }
        let n = self.dim();
        let gen = self.lattice.generator_matrix();
        let mut int_cols: Vec<Vec<BigInt>> = Vec::with_capacity(gen.cols());
        for j in 0..gen.cols() {
            let mut col = Vec::with_capacity(n);
            for i in 0..n {
                match gen.get(i, j).as_integer() {
                    Some(v) => col.push(v),
                    None => {
                        return Err(DecoratedError::NotALattice(format!(
                            "generator {j} has a non-integer coordinate"
                        )))
                    }
                }
            }
            int_cols.push(col);
        }
        // column-lattice basis via the transpose row HNF must be the identity
        let g = IntMatrix::from_columns(n, &int_cols);
        let (h, _) = g.transpose().hnf();
        let mut basis_rows: Vec<Vec<BigInt>> = Vec::new();
        for r in 0..h.rows() {
            let row: Vec<BigInt> = (0..h.cols()).map(|c| h.get(r, c).clone()).collect();
            if row.iter().any(|v| !v.is_zero()) {
                basis_rows.push(row);
            }
        }
        let is_identity = basis_rows.len() == n
            && basis_rows.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
            });
        if !is_identity {
            return Err(DecoratedError::NotALattice(
                "the image lattice is not Z^n in the given coordinates".into(),
            ));
        }
        for i in 0..n {
            let e: Vec<FieldElement> = (0..n)
                .map(|k| {
                    if k == i {
                        self.field().one()
                    } else {
                        self.field().zero()
                    }
                })
                .collect();
            if self.lattice.contains(&e).is_none() {
                return Err(DecoratedError::NotALattice(format!(
                    "standard basis vector {i} is not in the image"
                )));
            }
        }

        let mut labels = Vec::with_capacity(self.facets.len());
        for i in 0..self.facets.len() {
            let lambda = self.normal(i);
            let mut content = BigInt::zero();
            for v in &lambda {
                let v = v.as_integer().expect("image in Z^n forces integer normals");
                content = content.gcd(&v);
            }
            if content.is_zero() {
                return Err(DecoratedError::NotALattice(format!(
                    "facet {i} has a zero normal"
                )));
            }
            labels.push(content.abs());
        }
        Ok(labels)
    }

    /// Classifies the datum. Requires the data to be valid (the polytope
    /// machinery will surface errors otherwise).
    pub fn classify(&self) -> Result<Classification, DecoratedError> {
        if !self.lattice.is_discrete() {
            return Ok(Classification::Quasifold);
        }
        let kernel = self.lattice.kernel();
        if !kernel.is_trivial() {
            return Ok(Classification::IneffectiveOrbifold(kernel));
        }
        // effective lattice case: smooth iff each vertex label generates the
        // whole image
        let faces = self.face_lattice()?;
        let gen = self.lattice.generator_matrix();
        for face in faces.iter().filter(|f| f.dim == 0) {
            let cols: Vec<Vec<FieldElement>> =
                face.active_set.iter().map(|&i| self.normal(i)).collect();
            let vertex_label = FieldMatrix::from_columns(self.field(), self.dim(), &cols);
            for j in 0..gen.cols() {
                let target = gen.column(j);
                let (a, b) = expand_to_integer(&vertex_label, Some(&target));
                if a.solve_integer(&b.unwrap()).particular.is_none() {
                    return Ok(Classification::EffectiveOrbifold);
                }
            }
        }
        Ok(Classification::SmoothManifold)
    }
}
