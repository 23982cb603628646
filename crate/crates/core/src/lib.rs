//! Exact computational toolkit for quasilattices and decorated moment polytopes.
//!
//! Everything in this crate works over a fixed real algebraic number field
//! `Q(alpha)`, with no floating point in any geometric or algebraic decision.
//! The main layers, bottom up:
//!
//! - [`scalar`]: arithmetic, exact sign, and rational approximation in `Q(alpha)`.
//! - [`abelian`]: integer matrices, Hermite/Smith normal forms, finitely
//!   generated abelian groups.
//! - [`quasilattice`]: homomorphisms `Q -> R^n` with spanning image —
//!   membership, kernel, discreteness, subspace intersection.
//! - [`polytope`]: simple convex polytopes in H-representation — exact vertex
//!   enumeration and the face lattice.
//! - [`decorated`]: polytopes decorated with a quasilattice and per-facet
//!   markers — validation, face isotropy groups, facet labels, classification.
//! - [`isomorphism`]: equivalence of decorated polytopes with explicit
//!   witnesses.
//! - [`deformation`]: one-parameter affine families, combinatorial-type
//!   validation, rationalization, and the orbifold endpoint pipeline.
//! - [`delzant`]: the cut-construction data (facet-normal map, kernel,
//!   level-set quadrics) and a deterministic sampling harness.
//!
//! [`fixtures`] provides the small standard examples used across the test
//! suite and the documentation.
//!
//! ```
//! use quasipoly::decorated::Classification;
//! use quasipoly::fixtures;
//!
//! let triangle = fixtures::standard_triangle();
//! assert!(triangle.validate().is_valid());
//! assert_eq!(triangle.classify().unwrap(), Classification::SmoothManifold);
//!
//! // nudging the third normal of the irrational triangle onto the lattice
//! let report = quasipoly::deformation::to_orbifold_pipeline(
//!     &fixtures::irrational_triangle(),
//! )
//! .unwrap();
//! assert_eq!(report.endpoint_global_isotropy.to_string(), "Z");
//! ```

// index loops mirror the matrix notation throughout
#![allow(clippy::needless_range_loop)]

pub mod abelian;
pub mod decorated;
pub mod deformation;
pub mod delzant;
pub mod fixtures;
pub mod isomorphism;
pub mod linalg;
pub mod polytope;
mod qpoly;
pub mod quasilattice;
pub mod scalar;
mod util;

pub use abelian::{FgAbelianGroup, IntMatrix};
pub use decorated::{Classification, DecoratedFacet, DecoratedPolytope, ValidationReport};
pub use deformation::DeformationFamily;
pub use delzant::DelzantData;
pub use isomorphism::IsoWitness;
pub use linalg::FieldMatrix;
pub use polytope::{Face, HPolytope};
pub use quasilattice::Quasilattice;
pub use scalar::{FieldElement, RealAlgebraicField};
