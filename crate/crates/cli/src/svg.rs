//! Static SVG rendering of 2-dimensional decorated polytopes and deformation
//! frame strips. Coordinates pass through rational approximation once, at
//! the very end; everything upstream is exact.

use num::BigRational;

use quasipoly::decorated::DecoratedPolytope;
use quasipoly::deformation::DeformationFamily;

use crate::CliError;

const FRAME: f64 = 320.0;
const PAD: f64 = 28.0;

struct Frame {
    label: String,
    vertices: Vec<(f64, f64)>,
    facet_labels: Vec<(f64, f64, String)>,
}

fn layout(d: &DecoratedPolytope, label: String) -> Result<Frame, CliError> {
    let vertices = d
        .vertices()
        .map_err(|e| CliError::Semantic(format!("cannot plot an invalid polytope: {e}")))?;
    let pts: Vec<(f64, f64)> = vertices
        .iter()
        .map(|v| (v.point[0].to_f64(), v.point[1].to_f64()))
        .collect();
    // order around the centroid for the polygon path
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / pts.len() as f64;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / pts.len() as f64;
    let mut ordered = pts.clone();
    ordered.sort_by(|a, b| {
        let aa = (a.1 - cy).atan2(a.0 - cx);
        let bb = (b.1 - cy).atan2(b.0 - cx);
        aa.partial_cmp(&bb).unwrap()
    });
    // each facet label sits at the midpoint of its edge
    let mut facet_labels = Vec::new();
    for f in 0..d.facet_count() {
        let on_facet: Vec<&(f64, f64)> = vertices
            .iter()
            .zip(&pts)
            .filter(|(v, _)| v.active_set.contains(&f))
            .map(|(_, p)| p)
            .collect();
        if on_facet.len() == 2 {
            facet_labels.push((
                (on_facet[0].0 + on_facet[1].0) / 2.0,
                (on_facet[0].1 + on_facet[1].1) / 2.0,
                format!("f{f}"),
            ));
        }
    }
    Ok(Frame {
        label,
        vertices: ordered,
        facet_labels,
    })
}

fn render(frames: &[Frame]) -> String {
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for f in frames {
        for &(x, y) in &f.vertices {
            lo_x = lo_x.min(x);
            hi_x = hi_x.max(x);
            lo_y = lo_y.min(y);
            hi_y = hi_y.max(y);
        }
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let scale = (FRAME - 2.0 * PAD) / span;
    let width = FRAME * frames.len() as f64;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{FRAME:.0}\" viewBox=\"0 0 {width:.0} {FRAME:.0}\">\n"
    ));
    for (k, f) in frames.iter().enumerate() {
        let offset = k as f64 * FRAME;
        let tx = |x: f64| offset + PAD + (x - lo_x) * scale;
        let ty = |y: f64| FRAME - PAD - (y - lo_y) * scale;
        out.push_str(&format!(
            "  <g id=\"frame{k}\">\n    <rect x=\"{:.1}\" y=\"0.5\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#ddd\"/>\n",
            offset + 0.5,
            FRAME - 1.0,
            FRAME - 1.0
        ));
        let path: Vec<String> = f
            .vertices
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", tx(x), ty(y)))
            .collect();
        out.push_str(&format!(
            "    <polygon points=\"{}\" fill=\"#dbe9f6\" stroke=\"#27507a\" stroke-width=\"1.5\"/>\n",
            path.join(" ")
        ));
        for &(x, y) in &f.vertices {
            out.push_str(&format!(
                "    <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"#27507a\"/>\n",
                tx(x),
                ty(y)
            ));
        }
        for (x, y, label) in &f.facet_labels {
            out.push_str(&format!(
                "    <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" fill=\"#555\">{}</text>\n",
                tx(*x) + 4.0,
                ty(*y) - 4.0,
                label
            ));
        }
        out.push_str(&format!(
            "    <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" fill=\"#222\">{}</text>\n  </g>\n",
            offset + 10.0,
            18.0,
            f.label
        ));
    }
    out.push_str("</svg>\n");
    out
}

pub fn plot_polytope(d: &DecoratedPolytope) -> Result<String, CliError> {
    if d.dim() != 2 {
        return Err(CliError::Semantic(format!(
            "plot supports 2-dimensional data only (this document has n = {})",
            d.dim()
        )));
    }
    Ok(render(&[layout(d, "polytope".to_string())?]))
}

pub fn plot_family(family: &DeformationFamily, frames: usize) -> Result<String, CliError> {
    if family.start().ambient_dim() != 2 {
        return Err(CliError::Semantic(format!(
            "plot supports 2-dimensional data only (this document has n = {})",
            family.start().ambient_dim()
        )));
    }
    let frames = frames.max(2);
    let mut laid_out = Vec::with_capacity(frames);
    for k in 0..frames {
        let tau = BigRational::new(
            num::BigInt::from(k as u64),
            num::BigInt::from(frames as u64 - 1),
        );
        let d = family
            .evaluate(&tau)
            .map_err(|e| CliError::Semantic(e.to_string()))?;
        laid_out.push(layout(&d, format!("tau = {}/{}", k, frames - 1))?);
    }
    Ok(render(&laid_out))
}
