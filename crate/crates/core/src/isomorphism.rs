//! Equivalence of decorated polytopes, with explicit witnesses.
//!
//! Two data are equivalent when some linear isomorphism `T` carries the
//! facet normals onto each other along a facet bijection compatible with the
//! face lattices, maps the quasilattice image onto the other image, the
//! kernels agree as abstract groups, and the offsets match up to a single
//! translation `c`. The search is exhaustive over face-lattice-compatible
//! facet bijections in lexicographic order, so the returned witness is the
//! deterministic minimum.
//!
//! Strict quasilattice isomorphism (plus the abstract kernel comparison) is
//! taken as the notion of equivalence of the underlying presentations. That
//! every equivalence of presented data is realized by such a strict map is
//! an assumption of this module, recorded here rather than proved. Both
//! inputs must live over the same scalar field.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::decorated::DecoratedPolytope;
use crate::linalg::FieldMatrix;
use crate::polytope::dot_product;
use crate::scalar::FieldElement;

/// Exhaustive-search cutoff; beyond this many facets the bijection space is
/// no longer desk scale.
pub const FACET_LIMIT: usize = 10;

#[derive(Debug, Error)]
pub enum IsoError {
    #[error("facet count {0} exceeds the search limit {FACET_LIMIT}")]
    FacetLimit(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// A verified equivalence: `t * lambda_f = lambda'_{sigma(f)}` for every
/// facet, `t` carries one quasilattice image onto the other, and
/// `L'_{sigma(f)} = L_f + <c, lambda_f>`.
#[derive(Debug, Clone)]
pub struct IsoWitness {
    pub t: FieldMatrix,
    pub c: Vec<FieldElement>,
    pub sigma: Vec<usize>,
    pub kernel_iso_note: String,
}

/// Decides equivalence and returns the first witness in deterministic order
/// (lexicographic over facet bijections), or `None`.
pub fn are_isomorphic(
    a: &DecoratedPolytope,
    b: &DecoratedPolytope,
) -> Result<Option<IsoWitness>, IsoError> {
    if !a.field().same_field(b.field()) {
        return Err(IsoError::InvalidInput(
            "both data must be presented over the same scalar field".into(),
        ));
    }
    for (name, d) in [("first", a), ("second", b)] {
        let report = d.validate();
        if !report.is_valid() {
            return Err(IsoError::InvalidInput(format!(
                "{name} datum is invalid: {}",
                report
                    .first_failure()
                    .map(|c| c.detail.clone())
                    .unwrap_or_default()
            )));
        }
    }
    if a.dim() != b.dim() || a.facet_count() != b.facet_count() {
        return Ok(None);
    }
    let d = a.facet_count();
    if d > FACET_LIMIT {
        return Err(IsoError::FacetLimit(d));
    }

    let verts_a: Vec<Vec<usize>> = a
        .vertices()
        .expect("validated")
        .into_iter()
        .map(|v| v.active_set)
        .collect();
    let verts_b: BTreeSet<Vec<usize>> = b
        .vertices()
        .expect("validated")
        .into_iter()
        .map(|v| v.active_set)
        .collect();
    if verts_a.len() != verts_b.len() {
        return Ok(None);
    }

    // per-facet vertex degrees must match under any candidate bijection
    let degree = |sets: &[Vec<usize>], f: usize| sets.iter().filter(|s| s.contains(&f)).count();
    let deg_a: Vec<usize> = (0..d).map(|f| degree(&verts_a, f)).collect();
    let verts_b_list: Vec<Vec<usize>> = verts_b.iter().cloned().collect();
    let deg_b: Vec<usize> = (0..d).map(|f| degree(&verts_b_list, f)).collect();

    let mut sigma = vec![usize::MAX; d];
    let mut used = vec![false; d];
    Ok(search(
        a, b, &verts_a, &verts_b, &deg_a, &deg_b, &mut sigma, &mut used, 0,
    ))
}

#[allow(clippy::too_many_arguments)]
fn search(
    a: &DecoratedPolytope,
    b: &DecoratedPolytope,
    verts_a: &[Vec<usize>],
    verts_b: &BTreeSet<Vec<usize>>,
    deg_a: &[usize],
    deg_b: &[usize],
    sigma: &mut Vec<usize>,
    used: &mut Vec<bool>,
    depth: usize,
) -> Option<IsoWitness> {
    let d = sigma.len();
    if depth == d {
        return try_witness(a, b, sigma);
    }
    for cand in 0..d {
        if used[cand] || deg_a[depth] != deg_b[cand] {
            continue;
        }
        sigma[depth] = cand;
        used[cand] = true;
        // every fully-assigned vertex set must map to a vertex set
        let ok = verts_a
            .iter()
            .filter(|s| s.iter().all(|&f| f <= depth))
            .all(|s| {
                let mut img: Vec<usize> = s.iter().map(|&f| sigma[f]).collect();
                img.sort_unstable();
                verts_b.contains(&img)
            });
        if ok {
            if let Some(w) = search(a, b, verts_a, verts_b, deg_a, deg_b, sigma, used, depth + 1) {
                return Some(w);
            }
        }
        used[cand] = false;
        sigma[depth] = usize::MAX;
    }
    None
}

/// Solves for `T` and `c` under a fixed facet bijection and verifies every
/// clause; `None` if any fails.
fn try_witness(
    a: &DecoratedPolytope,
    b: &DecoratedPolytope,
    sigma: &[usize],
) -> Option<IsoWitness> {
    let field = a.field();
    let n = a.dim();
    let base = a
        .vertices()
        .expect("validated")
        .into_iter()
        .next()
        .expect("nonempty polytope");

    // T lambda_i = lambda'_{sigma(i)} on the base vertex normals determines T
    let cols_a: Vec<Vec<FieldElement>> = base.active_set.iter().map(|&i| a.normal(i)).collect();
    let cols_b: Vec<Vec<FieldElement>> = base
        .active_set
        .iter()
        .map(|&i| b.normal(sigma[i]))
        .collect();
    let la = FieldMatrix::from_columns(field, n, &cols_a);
    let lb = FieldMatrix::from_columns(field, n, &cols_b);
    let t = lb.mul(&la.inverse()?);

    // T must carry every facet normal exactly (outward orientation matters)
    for f in 0..a.facet_count() {
        if t.mul_vec(&a.normal(f)) != b.normal(sigma[f]) {
            return None;
        }
    }

    // quasilattice images must correspond under T, both directions
    let t_inv = t.inverse()?;
    let gen_a = a.lattice().generator_matrix();
    for j in 0..gen_a.cols() {
        b.lattice().contains(&t.mul_vec(&gen_a.column(j)))?;
    }
    let gen_b = b.lattice().generator_matrix();
    for j in 0..gen_b.cols() {
        a.lattice().contains(&t_inv.mul_vec(&gen_b.column(j)))?;
    }

    // kernels agree as abstract groups
    let ker_a = a.lattice().kernel();
    let ker_b = b.lattice().kernel();
    if ker_a != ker_b {
        return None;
    }

    // one translation c explains every offset: L'_{sigma(f)} = L_f + <c, lambda_f>
    let rows: Vec<Vec<FieldElement>> = base.active_set.iter().map(|&i| a.normal(i)).collect();
    let rhs: Vec<FieldElement> = base
        .active_set
        .iter()
        .map(|&i| b.offset(sigma[i]) - a.offset(i))
        .collect();
    let c = FieldMatrix::from_rows(field, rows).solve(&rhs)?;
    for f in 0..a.facet_count() {
        let expected = a.offset(f) + &dot_product(&c, &a.normal(f));
        if &expected != b.offset(sigma[f]) {
            return None;
        }
    }

    Some(IsoWitness {
        t,
        c,
        sigma: sigma.to_vec(),
        kernel_iso_note: format!("both kernels are isomorphic to {ker_a}"),
    })
}

/// Re-verifies every clause of a claimed witness against the two data.
pub fn verify_witness(a: &DecoratedPolytope, b: &DecoratedPolytope, w: &IsoWitness) -> bool {
    if !a.field().same_field(b.field()) {
        return false;
    }
    if a.dim() != b.dim() || a.facet_count() != b.facet_count() || w.sigma.len() != a.facet_count()
    {
        return false;
    }
    // sigma is a bijection
    let mut seen = vec![false; w.sigma.len()];
    for &s in &w.sigma {
        if s >= seen.len() || seen[s] {
            return false;
        }
        seen[s] = true;
    }
    // sigma preserves the vertex structure
    let verts_b: BTreeSet<Vec<usize>> = match b.vertices() {
        Ok(v) => v.into_iter().map(|x| x.active_set).collect(),
        Err(_) => return false,
    };
    let verts_a = match a.vertices() {
        Ok(v) => v,
        Err(_) => return false,
    };
    if verts_a.len() != verts_b.len() {
        return false;
    }
    for v in &verts_a {
        let mut img: Vec<usize> = v.active_set.iter().map(|&f| w.sigma[f]).collect();
        img.sort_unstable();
        if !verts_b.contains(&img) {
            return false;
        }
    }
    // T is invertible and carries the normals with orientation
    let Some(t_inv) = w.t.inverse() else {
        return false;
    };
    for f in 0..a.facet_count() {
        if w.t.mul_vec(&a.normal(f)) != b.normal(w.sigma[f]) {
            return false;
        }
    }
    // lattice images correspond both ways
    let gen_a = a.lattice().generator_matrix();
    for j in 0..gen_a.cols() {
        if b.lattice()
            .contains(&w.t.mul_vec(&gen_a.column(j)))
            .is_none()
        {
            return false;
        }
    }
    let gen_b = b.lattice().generator_matrix();
    for j in 0..gen_b.cols() {
        if a.lattice()
            .contains(&t_inv.mul_vec(&gen_b.column(j)))
            .is_none()
        {
            return false;
        }
    }
    if a.lattice().kernel() != b.lattice().kernel() {
        return false;
    }
    // offsets
    for f in 0..a.facet_count() {
        let expected = a.offset(f) + &dot_product(&w.c, &a.normal(f));
        if &expected != b.offset(w.sigma[f]) {
            return false;
        }
    }
    true
}
