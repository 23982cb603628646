//! Quasilattices: homomorphisms `Q -> R^n` from a finitely generated abelian
//! group whose image spans `R^n`, presented by torsion invariants plus an
//! `n x m` generator matrix over the scalar field (column `i` is the image of
//! the `i`-th free generator).
//!
//! The image need not be discrete, which is the whole point: membership,
//! kernel, and subspace-intersection questions are resolved exactly by
//! expanding field-linear conditions over the rational basis of the field and
//! solving the resulting integer systems.

use num::{BigInt, BigRational};
use thiserror::Error;

use crate::abelian::{FgAbelianGroup, IntMatrix};
use crate::linalg::FieldMatrix;
use crate::scalar::FieldElement;

#[derive(Debug, Error)]
pub enum QuasilatticeError {
    #[error("generator columns do not span the ambient space (rank {rank} < {n})")]
    NotSpanning { rank: usize, n: usize },
    #[error("need at least as many generators as the ambient dimension (m = {m} < n = {n})")]
    TooFewGenerators { m: usize, n: usize },
    #[error("subspace basis is linearly dependent over the field")]
    DependentBasis,
}

/// The map `Q = torsion x Z^m -> R^n`. Torsion is annihilated by the map and
/// only contributes to kernels and isotropy groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Quasilattice {
    torsion: Vec<BigInt>,
    gen: FieldMatrix,
}

impl Quasilattice {
    /// Builds a quasilattice; the columns of `gen` must span `R^n` over the
    /// field and `m >= n` must hold. Torsion moduli are normalized into
    /// invariant-factor form.
    pub fn new(gen: FieldMatrix, torsion: Vec<BigInt>) -> Result<Self, QuasilatticeError> {
        let (n, m) = (gen.rows(), gen.cols());
        if m < n {
            return Err(QuasilatticeError::TooFewGenerators { m, n });
        }
        let rank = gen.rank();
        if rank < n {
            return Err(QuasilatticeError::NotSpanning { rank, n });
        }
        let torsion = FgAbelianGroup::new(0, torsion).torsion().to_vec();
        Ok(Quasilattice { torsion, gen })
    }

    /// The standard lattice `Z^n -> R^n`.
    pub fn standard(field: &std::sync::Arc<crate::scalar::RealAlgebraicField>, n: usize) -> Self {
        Quasilattice {
            torsion: Vec::new(),
            gen: FieldMatrix::identity(field, n),
        }
    }

    pub fn field(&self) -> &std::sync::Arc<crate::scalar::RealAlgebraicField> {
        self.gen.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.gen.rows()
    }

    /// Rank of the free part of `Q`.
    pub fn free_rank(&self) -> usize {
        self.gen.cols()
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn generator_matrix(&self) -> &FieldMatrix {
        &self.gen
    }

    /// Applies the map to an element of the free part: `q -> gen * q`.
    pub fn apply(&self, q: &[BigInt]) -> Vec<FieldElement> {
        assert_eq!(q.len(), self.free_rank(), "dimension mismatch");
        let field = self.field();
        (0..self.ambient_dim())
            .map(|i| {
                let mut acc = field.zero();
                for (j, qj) in q.iter().enumerate() {
                    acc = &acc
                        + &self
                            .gen
                            .get(i, j)
                            .scale_rat(&BigRational::from_integer(qj.clone()));
                }
                acc
            })
            .collect()
    }

    /// Membership with witness: some `q` with `gen * q = x`, or `None` when
    /// `x` is not in the image. Witnesses differ by the integer kernel.
    pub fn contains(&self, x: &[FieldElement]) -> Option<Vec<BigInt>> {
        assert_eq!(x.len(), self.ambient_dim(), "dimension mismatch");
        let (a, b) = expand_to_integer(&self.gen, Some(x));
        a.solve_integer(&b.unwrap()).particular
    }

    /// Basis (columns) of the integer kernel of the generator matrix.
    pub fn integer_kernel_basis(&self) -> IntMatrix {
        let (a, _) = expand_to_integer(&self.gen, None);
        a.kernel_basis()
    }

    /// The kernel of the map as an abstract group: torsion plus the integer
    /// kernel of the generator matrix.
    pub fn kernel(&self) -> FgAbelianGroup {
        FgAbelianGroup::new(self.integer_kernel_basis().cols(), self.torsion.clone())
    }

    /// Rank of the image as an abstract group.
    pub fn image_rank(&self) -> usize {
        self.free_rank() - self.integer_kernel_basis().cols()
    }

    /// The image is a lattice exactly when its abstract rank equals the
    /// ambient dimension.
    pub fn is_discrete(&self) -> bool {
        self.image_rank() == self.ambient_dim()
    }

    /// Generator matrix (columns in `Z^m`) of `{q : gen * q in span_R(W)}`.
    /// The image of this subgroup under the map is `image ∩ span(W)`.
    pub fn intersect_subspace(
        &self,
        w: &[Vec<FieldElement>],
    ) -> Result<IntMatrix, QuasilatticeError> {
        let field = self.field();
        let n = self.ambient_dim();
        let m = self.free_rank();
        for v in w {
            assert_eq!(v.len(), n, "dimension mismatch");
        }
        if w.is_empty() {
            return Ok(self.integer_kernel_basis());
        }
        let w_mat = FieldMatrix::from_rows(field, w.to_vec());
        if w_mat.rank() < w.len() {
            return Err(QuasilatticeError::DependentBasis);
        }
        // functionals vanishing on span(W); for field-coefficient data,
        // membership in the real span equals membership in the field span
        let annihilators = w_mat.kernel_basis();
        if annihilators.is_empty() {
            return Ok(IntMatrix::identity(m));
        }
        let mut rows = Vec::with_capacity(annihilators.len());
        for c in &annihilators {
            let row: Vec<FieldElement> = (0..m)
                .map(|j| {
                    let mut acc = field.zero();
                    for (i, ci) in c.iter().enumerate() {
                        acc = &acc + &(ci * self.gen.get(i, j));
                    }
                    acc
                })
                .collect();
            rows.push(row);
        }
        let constraints = FieldMatrix::from_rows(field, rows);
        let (a, _) = expand_to_integer(&constraints, None);
        Ok(a.kernel_basis())
    }
}

/// Expands a field-linear system `A q = b` (with `q` ranging over integers)
/// into an equivalent integer system: each field equation becomes `D`
/// rational equations via the coefficient basis, and each rational equation
/// is scaled by the lcm of its denominators.
pub(crate) fn expand_to_integer(
    a: &FieldMatrix,
    b: Option<&[FieldElement]>,
) -> (IntMatrix, Option<Vec<BigInt>>) {
    use num::Integer;
    let d = a.field().degree();
    let (rows, cols) = (a.rows(), a.cols());
    if let Some(b) = b {
        assert_eq!(b.len(), rows, "dimension mismatch");
    }
    let mut int_rows: Vec<Vec<BigInt>> = Vec::with_capacity(rows * d);
    let mut int_rhs: Vec<BigInt> = Vec::with_capacity(rows * d);
    for i in 0..rows {
        for k in 0..d {
            let mut rats: Vec<BigRational> =
                (0..cols).map(|j| a.get(i, j).coeffs()[k].clone()).collect();
            let rhs = b.map(|b| b[i].coeffs()[k].clone());
            let mut denom_lcm = BigInt::from(1);
            for r in rats.iter().chain(rhs.iter()) {
                denom_lcm = denom_lcm.lcm(r.denom());
            }
            let scale = BigRational::from_integer(denom_lcm);
            let row: Vec<BigInt> = rats.drain(..).map(|r| (r * &scale).to_integer()).collect();
            int_rows.push(row);
            if let Some(r) = rhs {
                int_rhs.push((r * &scale).to_integer());
            }
        }
    }
    (IntMatrix::from_bigint_rows(int_rows), b.map(|_| int_rhs))
}
