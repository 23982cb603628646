//! Small standard examples used across the test suite, the benchmarks, and
//! the documentation.

use num::BigInt;

use crate::decorated::{DecoratedFacet, DecoratedPolytope};
use crate::deformation::DeformationFamily;
use crate::linalg::FieldMatrix;
use crate::quasilattice::Quasilattice;
use crate::scalar::{FieldElement, RealAlgebraicField};

fn marker(coords: &[i64]) -> Vec<BigInt> {
    coords.iter().map(|&v| BigInt::from(v)).collect()
}

/// The standard right triangle with vertices (0,0), (1,0), (0,1) over the
/// standard lattice: normals (-1,0), (0,-1), (1,1), offsets 0, 0, 1. The
/// basic smooth example.
pub fn standard_triangle() -> DecoratedPolytope {
    let f = RealAlgebraicField::rationals();
    let lattice = Quasilattice::standard(&f, 2);
    DecoratedPolytope::new(
        lattice,
        vec![
            DecoratedFacet {
                marker: marker(&[-1, 0]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[0, -1]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[1, 1]),
                offset: f.one(),
            },
        ],
    )
    .unwrap()
}

/// The standard triangle with the hypotenuse marker doubled to (2,2): the
/// basic effective-orbifold example, with facet labels (1, 1, 2).
pub fn weighted_triangle() -> DecoratedPolytope {
    let f = RealAlgebraicField::rationals();
    let lattice = Quasilattice::standard(&f, 2);
    DecoratedPolytope::new(
        lattice,
        vec![
            DecoratedFacet {
                marker: marker(&[-1, 0]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[0, -1]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[2, 2]),
                offset: f.one(),
            },
        ],
    )
    .unwrap()
}

/// The unit square over the standard lattice.
pub fn unit_square() -> DecoratedPolytope {
    let f = RealAlgebraicField::rationals();
    let lattice = Quasilattice::standard(&f, 2);
    DecoratedPolytope::new(
        lattice,
        vec![
            DecoratedFacet {
                marker: marker(&[-1, 0]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[1, 0]),
                offset: f.one(),
            },
            DecoratedFacet {
                marker: marker(&[0, -1]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[0, 1]),
                offset: f.one(),
            },
        ],
    )
    .unwrap()
}

fn irrational_columns(third: (FieldElement, FieldElement)) -> Quasilattice {
    let f = third.0.field().clone();
    let cols = vec![
        vec![f.from_int(-1), f.zero()],
        vec![f.zero(), f.from_int(-1)],
        vec![third.0, third.1],
    ];
    Quasilattice::new(FieldMatrix::from_columns(&f, 2, &cols), vec![]).unwrap()
}

/// A right triangle over `Q(sqrt2)` whose third facet normal `(1, sqrt2)`
/// has irrational slope, with `Q = Z^3` mapping the standard generators to
/// the three normals. The basic quasifold example: the image of the
/// quasilattice is dense.
pub fn irrational_triangle() -> DecoratedPolytope {
    let f = RealAlgebraicField::quadratic(2).unwrap();
    let lattice = irrational_columns((f.one(), f.generator()));
    DecoratedPolytope::new(
        lattice,
        vec![
            DecoratedFacet {
                marker: marker(&[1, 0, 0]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[0, 1, 0]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[0, 0, 1]),
                offset: f.one(),
            },
        ],
    )
    .unwrap()
}

/// Like [`irrational_triangle`] but with the fully irrational third normal
/// `(sqrt2, 1 + sqrt2)`. Here every facet-membership condition expands to
/// two independent rational constraints, so all edge isotropies are trivial
/// while every vertex picks up isotropy of free rank one.
pub fn generic_irrational_triangle() -> DecoratedPolytope {
    let f = RealAlgebraicField::quadratic(2).unwrap();
    let r2 = f.generator();
    let lattice = irrational_columns((r2.clone(), &f.one() + &r2));
    DecoratedPolytope::new(
        lattice,
        vec![
            DecoratedFacet {
                marker: marker(&[1, 0, 0]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[0, 1, 0]),
                offset: f.zero(),
            },
            DecoratedFacet {
                marker: marker(&[0, 0, 1]),
                offset: f.one(),
            },
        ],
    )
    .unwrap()
}

/// The affine family nudging the irrational triangle's third normal from
/// `(1, sqrt2)` to the rational `(1, 1)`, with everything else constant. The
/// combinatorial type is a triangle for every parameter value.
pub fn irrational_deformation() -> DeformationFamily {
    let f = RealAlgebraicField::quadratic(2).unwrap();
    let start = irrational_columns((f.one(), f.generator()));
    let end = irrational_columns((f.one(), f.one()));
    DeformationFamily::new(
        start,
        end,
        vec![marker(&[1, 0, 0]), marker(&[0, 1, 0]), marker(&[0, 0, 1])],
        vec![
            (f.zero(), f.zero()),
            (f.zero(), f.zero()),
            (f.one(), f.one()),
        ],
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_fixtures_are_valid() {
        for d in [
            standard_triangle(),
            weighted_triangle(),
            unit_square(),
            irrational_triangle(),
        ] {
            let report = d.validate();
            assert!(report.is_valid(), "{report}");
        }
        irrational_deformation();
    }
}
