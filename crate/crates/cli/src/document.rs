//! The on-disk document format: a JSON object with a `field` section, a
//! `quasilattice` section, per-facet `marker`/`offset` entries, and an
//! optional `deformation` section. Rationals are `p/q` strings; field
//! elements are coefficient arrays of rationals; generator matrices are
//! lists of columns. Unknown keys are rejected and emission is canonical
//! (fixed key order, reduced `p/q` forms), so parse-emit round-trips are
//! the identity.

use std::sync::Arc;

use num::BigInt;
use serde::{Deserialize, Serialize};

use quasipoly::decorated::{DecoratedFacet, DecoratedPolytope};
use quasipoly::deformation::DeformationFamily;
use quasipoly::linalg::FieldMatrix;
use quasipoly::quasilattice::Quasilattice;
use quasipoly::scalar::{format_rational, parse_rational, FieldElement, RealAlgebraicField};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub field: FieldSection,
    pub quasilattice: LatticeSection,
    pub facets: Vec<FacetSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub min_poly: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_interval: Option<[String; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub torsion: Vec<u64>,
    /// Columns of the generator matrix; each column has `n` field elements.
    pub generators: Vec<Vec<Vec<String>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FacetSection {
    pub marker: Vec<i64>,
    pub offset: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DeformationSection {
    pub end_generators: Vec<Vec<Vec<String>>>,
    pub end_offsets: Vec<Vec<String>>,
}

pub fn parse_document(text: &str) -> Result<Document, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse(format!("document: {e}")))
}

pub fn emit_document(doc: &Document) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("serializable");
    out.push('\n');
    out
}

/// Builds the field and checks its invariants (semantic errors).
pub fn build_field(section: &FieldSection) -> Result<Arc<RealAlgebraicField>, CliError> {
    let coeffs: Vec<BigInt> = section.min_poly.iter().map(|&v| BigInt::from(v)).collect();
    let interval = match &section.root_interval {
        None => None,
        Some([lo, hi]) => Some((
            parse_rational(lo).map_err(|e| CliError::Parse(e.to_string()))?,
            parse_rational(hi).map_err(|e| CliError::Parse(e.to_string()))?,
        )),
    };
    RealAlgebraicField::new(coeffs, interval).map_err(|e| CliError::Semantic(e.to_string()))
}

fn build_element(
    field: &Arc<RealAlgebraicField>,
    coeffs: &[String],
) -> Result<FieldElement, CliError> {
    if coeffs.len() > field.degree() {
        return Err(CliError::Parse(format!(
            "field element has {} coefficients but the field has degree {}",
            coeffs.len(),
            field.degree()
        )));
    }
    let parsed = coeffs
        .iter()
        .map(|s| parse_rational(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Parse(e.to_string()))?;
    field
        .element(parsed)
        .map_err(|e| CliError::Parse(e.to_string()))
}

fn build_matrix(
    field: &Arc<RealAlgebraicField>,
    columns: &[Vec<Vec<String>>],
) -> Result<FieldMatrix, CliError> {
    if columns.is_empty() {
        return Err(CliError::Parse("generator list is empty".into()));
    }
    let n = columns[0].len();
    let mut cols = Vec::with_capacity(columns.len());
    for col in columns {
        if col.len() != n {
            return Err(CliError::Parse(
                "generator columns have inconsistent lengths".into(),
            ));
        }
        cols.push(
            col.iter()
                .map(|c| build_element(field, c))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    Ok(FieldMatrix::from_columns(field, n, &cols))
}

fn build_lattice(
    field: &Arc<RealAlgebraicField>,
    section: &LatticeSection,
) -> Result<Quasilattice, CliError> {
    let gen = build_matrix(field, &section.generators)?;
    let torsion = section.torsion.iter().map(|&v| BigInt::from(v)).collect();
    Quasilattice::new(gen, torsion).map_err(|e| CliError::Semantic(e.to_string()))
}

/// Converts the document into a decorated polytope, optionally embedding it
/// into a caller-supplied field (used to compare data across documents whose
/// fields differ only by a trivial extension).
pub fn to_decorated(
    doc: &Document,
    field_override: Option<&Arc<RealAlgebraicField>>,
) -> Result<DecoratedPolytope, CliError> {
    let field = match field_override {
        Some(f) => Arc::clone(f),
        None => build_field(&doc.field)?,
    };
    let lattice = build_lattice(&field, &doc.quasilattice)?;
    let mut facets = Vec::with_capacity(doc.facets.len());
    for f in &doc.facets {
        facets.push(DecoratedFacet {
            marker: f.marker.iter().map(|&v| BigInt::from(v)).collect(),
            offset: build_element(&field, &f.offset)?,
        });
    }
    DecoratedPolytope::new(lattice, facets).map_err(|e| CliError::Parse(e.to_string()))
}

/// Converts the document into a deformation family; requires the
/// `deformation` section.
pub fn to_family(doc: &Document) -> Result<DeformationFamily, CliError> {
    let section = doc.deformation.as_ref().ok_or_else(|| {
        CliError::Semantic("this command needs a document with a deformation section".into())
    })?;
    let field = build_field(&doc.field)?;
    let start = build_lattice(&field, &doc.quasilattice)?;
    let end = build_lattice(
        &field,
        &LatticeSection {
            torsion: doc.quasilattice.torsion.clone(),
            generators: section.end_generators.clone(),
        },
    )?;
    if section.end_offsets.len() != doc.facets.len() {
        return Err(CliError::Parse(format!(
            "{} end offsets for {} facets",
            section.end_offsets.len(),
            doc.facets.len()
        )));
    }
    let mut markers = Vec::with_capacity(doc.facets.len());
    let mut offsets = Vec::with_capacity(doc.facets.len());
    for (f, end_off) in doc.facets.iter().zip(&section.end_offsets) {
        markers.push(f.marker.iter().map(|&v| BigInt::from(v)).collect());
        offsets.push((
            build_element(&field, &f.offset)?,
            build_element(&field, end_off)?,
        ));
    }
    DeformationFamily::new(start, end, markers, offsets)
        .map_err(|e| CliError::Semantic(e.to_string()))
}

pub fn element_to_strings(e: &FieldElement) -> Vec<String> {
    e.coeffs().iter().map(format_rational).collect()
}

pub fn matrix_to_columns(m: &FieldMatrix) -> Vec<Vec<Vec<String>>> {
    (0..m.cols())
        .map(|j| {
            (0..m.rows())
                .map(|i| element_to_strings(m.get(i, j)))
                .collect()
        })
        .collect()
}

/// Renders a family back into a document (the start datum plus the
/// deformation section).
pub fn family_to_document(family: &DeformationFamily, field: &FieldSection) -> Document {
    let start = family.start();
    Document {
        field: field.clone(),
        quasilattice: LatticeSection {
            torsion: start
                .torsion()
                .iter()
                .map(|v| u64::try_from(v).expect("small torsion"))
                .collect(),
            generators: matrix_to_columns(start.generator_matrix()),
        },
        facets: family
            .markers()
            .iter()
            .zip(family.offsets())
            .map(|(marker, (a, _))| FacetSection {
                marker: marker
                    .iter()
                    .map(|v| i64::try_from(v).expect("small marker"))
                    .collect(),
                offset: element_to_strings(a),
            })
            .collect(),
        deformation: Some(DeformationSection {
            end_generators: matrix_to_columns(family.end().generator_matrix()),
            end_offsets: family
                .offsets()
                .iter()
                .map(|(_, b)| element_to_strings(b))
                .collect(),
        }),
    }
}
