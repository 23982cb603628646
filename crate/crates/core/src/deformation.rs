//! One-parameter families of decorated polytopes.
//!
//! A family interpolates two quasilattices affinely, `gen(tau) =
//! (1-tau)*start + tau*end`, with fixed markers and affinely interpolated
//! offsets. Affine paths keep every evaluation exact at rational `tau`.
//!
//! Path validity is certified on a sampled grid. For families whose entries
//! are all rational, [`DeformationFamily::certify_rational`] additionally
//! checks, by Sturm root counting, that every vertex determinant and every
//! vertex-feasibility polynomial keeps a constant sign on `[0, 1]`, so no
//! sampled vertex degenerates anywhere along the path. Families with
//! irrational coefficients only get the sampled check.

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::abelian::{FgAbelianGroup, IntMatrix};
use crate::decorated::{Classification, DecoratedFacet, DecoratedPolytope};
use crate::linalg::FieldMatrix;
use crate::qpoly::{self, QPoly};
use crate::quasilattice::Quasilattice;
use crate::scalar::FieldElement;

/// Sample grid used by [`rationalize`] when certifying a candidate family.
pub const RATIONALIZE_SAMPLES: usize = 101;

/// Largest denominator bound tried by [`to_orbifold_pipeline`].
pub const MAX_DENOM_BOUND: u64 = 1 << 16;

#[derive(Debug, Error)]
pub enum DeformationError {
    #[error("family data mismatch: {0}")]
    Mismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("tau must lie in [0, 1]")]
    TauOutOfRange,
    #[error("need at least 2 samples")]
    BadSampleCount,
    #[error("family is invalid at tau = {tau}: {detail}")]
    InvalidAt { tau: BigRational, detail: String },
    #[error("combinatorial type changes at tau = {tau}")]
    CombinatorialChange { tau: BigRational },
    #[error("rounding with denominator bound {denom_bound} breaks the family: {detail}")]
    RoundingBreaksCombinatorics { denom_bound: u64, detail: String },
    #[error("rounded generators no longer span the ambient space")]
    NotFullRank,
    #[error("no denominator bound up to {max} produced a valid family")]
    DenomBoundExhausted { max: u64 },
    #[error("exact certification requires all-rational family data")]
    NotRational,
}

/// An affine one-parameter family of decorated polytopes with a constant
/// facet set and constant markers.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationFamily {
    start: Quasilattice,
    end: Quasilattice,
    markers: Vec<Vec<BigInt>>,
    offsets: Vec<(FieldElement, FieldElement)>,
}

/// Outcome of a sampled family validation.
#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub samples: usize,
    /// Vertex active sets, shared by every sampled polytope.
    pub vertex_sets: Vec<Vec<usize>>,
    pub start_classification: Classification,
    pub end_classification: Classification,
}

/// Outcome of the exact certificate for rational families.
#[derive(Debug, Clone)]
pub struct CertificateReport {
    pub certified: bool,
    pub vertex_determinants_checked: usize,
    pub feasibility_polynomials_checked: usize,
    pub detail: String,
}

/// Outcome of the orbifold endpoint pipeline.
#[derive(Debug)]
pub struct OrbifoldizationReport {
    pub denom_bound: u64,
    pub family: DeformationFamily,
    pub endpoint: DecoratedPolytope,
    pub endpoint_classification: Classification,
    pub endpoint_global_isotropy: FgAbelianGroup,
}

impl DeformationFamily {
    /// Builds a family; both endpoints must be valid decorated polytopes over
    /// the same field with identical torsion and free rank.
    pub fn new(
        start: Quasilattice,
        end: Quasilattice,
        markers: Vec<Vec<BigInt>>,
        offsets: Vec<(FieldElement, FieldElement)>,
    ) -> Result<Self, DeformationError> {
        if !start.field().same_field(end.field()) {
            return Err(DeformationError::Mismatch(
                "start and end lattices live over different fields".into(),
            ));
        }
        if start.ambient_dim() != end.ambient_dim()
            || start.free_rank() != end.free_rank()
            || start.torsion() != end.torsion()
        {
            return Err(DeformationError::Mismatch(
                "start and end lattices must share dimension, free rank, and torsion".into(),
            ));
        }
        if markers.len() != offsets.len() {
            return Err(DeformationError::Mismatch(format!(
                "{} markers but {} offset paths",
                markers.len(),
                offsets.len()
            )));
        }
        let family = DeformationFamily {
            start,
            end,
            markers,
            offsets,
        };
        for tau in [BigRational::zero(), BigRational::one()] {
            family.evaluate(&tau)?;
        }
        Ok(family)
    }

    pub fn start(&self) -> &Quasilattice {
        &self.start
    }

    pub fn end(&self) -> &Quasilattice {
        &self.end
    }

    pub fn markers(&self) -> &[Vec<BigInt>] {
        &self.markers
    }

    pub fn offsets(&self) -> &[(FieldElement, FieldElement)] {
        &self.offsets
    }

    pub fn facet_count(&self) -> usize {
        self.markers.len()
    }

    fn interpolated_lattice(&self, tau: &BigRational) -> Result<Quasilattice, DeformationError> {
        let field = self.start.field();
        let one_minus = BigRational::one() - tau;
        let n = self.start.ambient_dim();
        let m = self.start.free_rank();
        let mut gen = FieldMatrix::zero(field, n, m);
        for i in 0..n {
            for j in 0..m {
                let v = &self
                    .start
                    .generator_matrix()
                    .get(i, j)
                    .scale_rat(&one_minus)
                    + &self.end.generator_matrix().get(i, j).scale_rat(tau);
                gen.set(i, j, v);
            }
        }
        Quasilattice::new(gen, self.start.torsion().to_vec()).map_err(|e| {
            DeformationError::InvalidAt {
                tau: tau.clone(),
                detail: e.to_string(),
            }
        })
    }

    /// The decorated polytope at `tau`, without validation.
    pub(crate) fn evaluate_raw(
        &self,
        tau: &BigRational,
    ) -> Result<DecoratedPolytope, DeformationError> {
        let lattice = self.interpolated_lattice(tau)?;
        let one_minus = BigRational::one() - tau;
        let facets = self
            .markers
            .iter()
            .zip(&self.offsets)
            .map(|(marker, (a, b))| DecoratedFacet {
                marker: marker.clone(),
                offset: &a.scale_rat(&one_minus) + &b.scale_rat(tau),
            })
            .collect();
        DecoratedPolytope::new(lattice, facets).map_err(|e| DeformationError::InvalidAt {
            tau: tau.clone(),
            detail: e.to_string(),
        })
    }

    /// Evaluates and validates the family member at `tau` in `[0, 1]`.
    pub fn evaluate(&self, tau: &BigRational) -> Result<DecoratedPolytope, DeformationError> {
        if tau.is_negative() || tau > &BigRational::one() {
            return Err(DeformationError::TauOutOfRange);
        }
        let d = self.evaluate_raw(tau)?;
        let report = d.validate();
        if !report.is_valid() {
            return Err(DeformationError::InvalidAt {
                tau: tau.clone(),
                detail: report
                    .first_failure()
                    .map(|c| format!("{}: {}", c.name, c.detail))
                    .unwrap_or_default(),
            });
        }
        Ok(d)
    }

    /// Validates the family at `tau = k/(samples-1)`: every sample must be a
    /// valid decorated polytope and all samples must share one set of vertex
    /// active sets. Reports the first failing `tau`.
    pub fn validate_family(&self, samples: usize) -> Result<FamilyReport, DeformationError> {
        if samples < 2 {
            return Err(DeformationError::BadSampleCount);
        }
        let denom = BigInt::from(samples as u64 - 1);
        let mut reference: Option<Vec<Vec<usize>>> = None;
        let mut start_class = None;
        let mut end_class = None;
        for k in 0..samples {
            let tau = BigRational::new(BigInt::from(k as u64), denom.clone());
            let d = self.evaluate(&tau)?;
            let sets: Vec<Vec<usize>> = d
                .vertices()
                .expect("validated sample")
                .into_iter()
                .map(|v| v.active_set)
                .collect();
            match &reference {
                None => reference = Some(sets),
                Some(r) => {
                    if r != &sets {
                        return Err(DeformationError::CombinatorialChange { tau });
                    }
                }
            }
            if k == 0 {
                start_class = Some(d.classify().map_err(|e| DeformationError::InvalidAt {
                    tau: tau.clone(),
                    detail: e.to_string(),
                })?);
            }
            if k == samples - 1 {
                end_class = Some(d.classify().map_err(|e| DeformationError::InvalidAt {
                    tau: tau.clone(),
                    detail: e.to_string(),
                })?);
            }
        }
        Ok(FamilyReport {
            samples,
            vertex_sets: reference.unwrap(),
            start_classification: start_class.unwrap(),
            end_classification: end_class.unwrap(),
        })
    }

    fn entry_poly(&self, i: usize, j: usize) -> Result<QPoly, DeformationError> {
        let a = self
            .start
            .generator_matrix()
            .get(i, j)
            .as_rational()
            .ok_or(DeformationError::NotRational)?;
        let b = self
            .end
            .generator_matrix()
            .get(i, j)
            .as_rational()
            .ok_or(DeformationError::NotRational)?;
        Ok(qpoly::normalize(vec![a.clone(), b - a]))
    }

    fn offset_poly(&self, f: usize) -> Result<QPoly, DeformationError> {
        let a = self.offsets[f]
            .0
            .as_rational()
            .ok_or(DeformationError::NotRational)?;
        let b = self.offsets[f]
            .1
            .as_rational()
            .ok_or(DeformationError::NotRational)?;
        Ok(qpoly::normalize(vec![a.clone(), b - a]))
    }

    /// Exact no-degeneration certificate for all-rational families: for every
    /// vertex subset of the combinatorial type and every inactive facet, the
    /// vertex determinant and the feasibility polynomial have no root in
    /// `(0, 1)` and the correct sign at the endpoints. This proves that the
    /// sampled vertices persist nondegenerately across the whole interval.
    pub fn certify_rational(&self) -> Result<CertificateReport, DeformationError> {
        let n = self.start.ambient_dim();
        let d = self.facet_count();
        let m = self.start.free_rank();

        // normal path of facet f, coordinate i, as a polynomial in tau
        let mut normal_polys: Vec<Vec<QPoly>> = Vec::with_capacity(d);
        for marker in &self.markers {
            let mut coords = Vec::with_capacity(n);
            for i in 0..n {
                let mut acc: QPoly = Vec::new();
                for j in 0..m {
                    let scaled = qpoly::scale(
                        &self.entry_poly(i, j)?,
                        &BigRational::from_integer(marker[j].clone()),
                    );
                    acc = qpoly::add(&acc, &scaled);
                }
                coords.push(acc);
            }
            normal_polys.push(coords);
        }
        let offset_polys: Vec<QPoly> = (0..d)
            .map(|f| self.offset_poly(f))
            .collect::<Result<_, _>>()?;

        let start_datum = self.evaluate(&BigRational::zero())?;
        let vertices = start_datum.vertices().expect("validated");

        let zero = BigRational::zero();
        let one = BigRational::one();
        let mut dets = 0usize;
        let mut feas = 0usize;
        for v in &vertices {
            let sub: Vec<Vec<QPoly>> = v
                .active_set
                .iter()
                .map(|&f| normal_polys[f].clone())
                .collect();
            let det = poly_det(&sub);
            dets += 1;
            if !sign_constant_on_unit_interval(&det) {
                return Ok(CertificateReport {
                    certified: false,
                    vertex_determinants_checked: dets,
                    feasibility_polynomials_checked: feas,
                    detail: format!(
                        "vertex {:?} degenerates: its determinant has a root in (0, 1)",
                        v.active_set
                    ),
                });
            }
            // Cramer numerators for the vertex path
            let numerators: Vec<QPoly> = (0..n)
                .map(|col| {
                    let replaced: Vec<Vec<QPoly>> = v
                        .active_set
                        .iter()
                        .map(|&f| {
                            let mut row = normal_polys[f].clone();
                            row[col] = offset_polys[f].clone();
                            row
                        })
                        .collect();
                    poly_det(&replaced)
                })
                .collect();
            for g in 0..d {
                if v.active_set.contains(&g) {
                    continue;
                }
                // slack * det^2 = (sum_i num_i * lambda_{g,i} - L_g * det) * det
                let mut p: QPoly = Vec::new();
                for i in 0..n {
                    p = qpoly::add(&p, &qpoly::mul(&numerators[i], &normal_polys[g][i]));
                }
                p = qpoly::sub(&p, &qpoly::mul(&offset_polys[g], &det));
                let q = qpoly::mul(&p, &det);
                feas += 1;
                let q0 = qpoly::eval(&q, &zero);
                let q1 = qpoly::eval(&q, &one);
                if !q0.is_negative()
                    || !q1.is_negative()
                    || qpoly::count_roots_in(&q, &zero, &one) != 0
                {
                    return Ok(CertificateReport {
                        certified: false,
                        vertex_determinants_checked: dets,
                        feasibility_polynomials_checked: feas,
                        detail: format!(
                            "vertex {:?} meets facet {g} somewhere in (0, 1)",
                            v.active_set
                        ),
                    });
                }
            }
        }
        Ok(CertificateReport {
            certified: true,
            vertex_determinants_checked: dets,
            feasibility_polynomials_checked: feas,
            detail: "all vertex determinants and feasibility polynomials keep their sign on [0, 1]"
                .into(),
        })
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
fn poly_det(m: &[Vec<QPoly>]) -> QPoly {
    let n = m.len();
    if n == 0 {
        return vec![BigRational::one()];
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: QPoly = Vec::new();
    for (r, row) in m.iter().enumerate() {
        if qpoly::is_zero(&row[0]) {
            continue;
        }
        let minor: Vec<Vec<QPoly>> = m
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != r)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let term = qpoly::mul(&row[0], &poly_det(&minor));
        if r % 2 == 0 {
            acc = qpoly::add(&acc, &term);
        } else {
            acc = qpoly::sub(&acc, &term);
        }
    }
    acc
}

/// Nonzero at 0 and 1 with no roots strictly inside.
fn sign_constant_on_unit_interval(p: &QPoly) -> bool {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if qpoly::is_zero(p) || qpoly::eval(p, &zero).is_zero() || qpoly::eval(p, &one).is_zero() {
        return false;
    }
    qpoly::count_roots_in(p, &zero, &one) == 0
}

/// Nearest rational with denominator at most `bound`, by Stern-Brocot
/// descent with exact comparisons; ties resolve to the smaller value.
pub fn round_to_denominator(x: &FieldElement, bound: u64) -> BigRational {
    assert!(bound >= 1, "denominator bound must be positive");
    let field = x.field().clone();
    let floor = x.floor();
    let frac = x - &field.from_rational(BigRational::from_integer(floor.clone()));
    if frac.is_zero() {
        return BigRational::from_integer(floor);
    }
    let bound = BigInt::from(bound);
    // bracket frac in (l, r) = (0/1, 1/1)
    let (mut ln, mut ld) = (BigInt::zero(), BigInt::one());
    let (mut rn, mut rd) = (BigInt::one(), BigInt::one());
    loop {
        let mn = &ln + &rn;
        let md = &ld + &rd;
        if md > bound {
            break;
        }
        let mid = BigRational::new(mn.clone(), md.clone());
        match (&frac - &field.from_rational(mid.clone())).sign() {
            0 => return BigRational::from_integer(floor) + mid,
            1 => {
                ln = mn;
                ld = md;
            }
            _ => {
                rn = mn;
                rd = md;
            }
        }
    }
    let l = BigRational::new(ln, ld);
    let r = BigRational::new(rn, rd);
    // closer of the two brackets: sign of (frac - l) - (r - frac)
    let two_frac = frac.scale_rat(&BigRational::from_integer(BigInt::from(2)));
    let decider = &two_frac - &field.from_rational(&l + &r);
    let chosen = if decider.sign() > 0 { r } else { l };
    BigRational::from_integer(floor) + chosen
}

/// Rounds every generator entry and offset to the nearest rational with
/// denominator at most `denom_bound`, renormalizes the coordinates so the
/// rounded image lattice becomes exactly `Z^n`, and returns the affine
/// family from the input datum to that endpoint. The family must pass the
/// sampled validation; otherwise the bound is reported as insufficient.
pub fn rationalize(
    d: &DecoratedPolytope,
    denom_bound: u64,
) -> Result<DeformationFamily, DeformationError> {
    let report = d.validate();
    if !report.is_valid() {
        return Err(DeformationError::InvalidInput(
            report
                .first_failure()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .unwrap_or_default(),
        ));
    }
    let field = d.field();
    let n = d.dim();
    let m = d.lattice().free_rank();
    let gen = d.lattice().generator_matrix();

    let mut rounded = FieldMatrix::zero(field, n, m);
    for i in 0..n {
        for j in 0..m {
            rounded.set(
                i,
                j,
                field.from_rational(round_to_denominator(gen.get(i, j), denom_bound)),
            );
        }
    }
    if rounded.rank() < n {
        return Err(DeformationError::NotFullRank);
    }

    // integer model of the rounded columns: scale by the common denominator
    use num::Integer as _;
    let mut denom_lcm = BigInt::one();
    for i in 0..n {
        for j in 0..m {
            denom_lcm = denom_lcm.lcm(rounded.get(i, j).as_rational().unwrap().denom());
        }
    }
    let scale = BigRational::from_integer(denom_lcm.clone());
    let mut int_cols: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    for j in 0..m {
        int_cols.push(
            (0..n)
                .map(|i| (rounded.get(i, j).as_rational().unwrap() * &scale).to_integer())
                .collect(),
        );
    }
    // basis of the (discrete) column lattice, recovered through the row HNF
    // of the transpose; dividing by the scale gives a basis of the image
    let (h, _) = IntMatrix::from_columns(n, &int_cols).transpose().hnf();
    let mut basis_cols: Vec<Vec<FieldElement>> = Vec::new();
    for r in 0..h.rows() {
        let row: Vec<BigInt> = (0..h.cols()).map(|c| h.get(r, c).clone()).collect();
        if row.iter().any(|v| !v.is_zero()) {
            basis_cols.push(
                row.into_iter()
                    .map(|v| field.from_rational(BigRational::new(v, denom_lcm.clone())))
                    .collect(),
            );
        }
    }
    debug_assert_eq!(basis_cols.len(), n);
    let basis = FieldMatrix::from_columns(field, n, &basis_cols);
    let basis_inv = basis.inverse().expect("lattice basis is invertible");
    let new_gen = basis_inv.mul(&rounded);
    debug_assert!((0..n).all(|i| (0..m).all(|j| new_gen.get(i, j).as_integer().is_some())));

    let end_lattice = Quasilattice::new(new_gen, d.lattice().torsion().to_vec())
        .map_err(|_| DeformationError::NotFullRank)?;

    let markers: Vec<Vec<BigInt>> = d.facets().iter().map(|f| f.marker.clone()).collect();
    let offsets: Vec<(FieldElement, FieldElement)> = d
        .facets()
        .iter()
        .map(|f| {
            (
                f.offset.clone(),
                field.from_rational(round_to_denominator(&f.offset, denom_bound)),
            )
        })
        .collect();

    let family = DeformationFamily::new(d.lattice().clone(), end_lattice, markers, offsets)
        .map_err(|e| DeformationError::RoundingBreaksCombinatorics {
            denom_bound,
            detail: e.to_string(),
        })?;
    family.validate_family(RATIONALIZE_SAMPLES).map_err(|e| {
        DeformationError::RoundingBreaksCombinatorics {
            denom_bound,
            detail: e.to_string(),
        }
    })?;
    Ok(family)
}

/// Runs [`rationalize`] with denominator bounds escalating in powers of two
/// until the family validates, then classifies the (always discrete)
/// endpoint and reports its global isotropy.
pub fn to_orbifold_pipeline(
    d: &DecoratedPolytope,
) -> Result<OrbifoldizationReport, DeformationError> {
    let mut bound = 1u64;
    loop {
        match rationalize(d, bound) {
            Ok(family) => {
                let endpoint = family.evaluate(&BigRational::one())?;
                let classification = endpoint
                    .classify()
                    .map_err(|e| DeformationError::InvalidInput(e.to_string()))?;
                debug_assert!(!matches!(classification, Classification::Quasifold));
                let isotropy = endpoint.lattice().kernel();
                return Ok(OrbifoldizationReport {
                    denom_bound: bound,
                    family,
                    endpoint,
                    endpoint_classification: classification,
                    endpoint_global_isotropy: isotropy,
                });
            }
            Err(
                DeformationError::RoundingBreaksCombinatorics { .. }
                | DeformationError::NotFullRank,
            ) => {
                if bound >= MAX_DENOM_BOUND {
                    return Err(DeformationError::DenomBoundExhausted {
                        max: MAX_DENOM_BOUND,
                    });
                }
                bound *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}
